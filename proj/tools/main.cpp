#include <iostream>

#include "fano_ext_cli.hpp"

int main(int argc, char** argv) {
    return fano_ext::cli::run(argc, argv, std::cout, std::cerr);
}
