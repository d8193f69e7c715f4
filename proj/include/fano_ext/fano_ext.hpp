#pragma once

#include "fano_ext/numerics.hpp"
#include "fano_ext/error_model.hpp"
#include "fano_ext/bounds.hpp"
#include "fano_ext/channel_oracle.hpp"
#include "fano_ext/sweep.hpp"
