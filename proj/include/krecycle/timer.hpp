#ifndef KRECYCLE_TIMER_HPP
#define KRECYCLE_TIMER_HPP

#include <chrono>
#include <ctime>

namespace krecycle {

/// CPU time consumed by the calling thread, in seconds.
inline double thread_cpu_seconds() {
#if defined(CLOCK_THREAD_CPUTIME_ID)
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
#else
    return static_cast<double>(std::clock()) / CLOCKS_PER_SEC;
#endif
}

inline double wall_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

/// Accumulates thread CPU time between start() and stop().
class CpuStopwatch {
public:
    void start() { begin_ = thread_cpu_seconds(); }
    void stop() { total_ += thread_cpu_seconds() - begin_; }
    double seconds() const { return total_; }

private:
    double begin_ = 0;
    double total_ = 0;
};

} // namespace krecycle

#endif
