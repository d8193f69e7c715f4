#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fano_ext {

/// Environment variable that caps worker threads.
inline constexpr const char* kThreadsEnvVar = "FANO_EXT_THREADS";

/// Worker count from FANO_EXT_THREADS, or 0 (meaning "hardware") when unset
/// or unparsable.
inline unsigned threads_from_env() {
    const char* raw = std::getenv(kThreadsEnvVar);
    if (raw == nullptr) {
        return 0;
    }
    try {
        const long v = std::stol(raw);
        return v > 0 ? static_cast<unsigned>(v) : 0U;
    } catch (const std::exception&) {
        return 0;
    }
}

namespace detail {

/// Runs task(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Tasks must write to disjoint outputs; the first exception
/// thrown by any task is rethrown on the calling thread.
template <typename Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    const auto workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        task(i);
                    } catch (...) {
                        const std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace detail
} // namespace fano_ext
