#pragma once

#include <chrono>
#include <csignal>
#include <ctime>

namespace tools {

/// Blocks SIGINT and SIGTERM in this thread and every thread started after it,
/// so that wait_for_signal() can pick them up synchronously.
inline sigset_t block_termination()
{
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    return set;
}

/// Returns true when a signal arrived, false when `limit` (if positive) ran out.
inline bool wait_for_signal(const sigset_t& set, std::chrono::milliseconds limit)
{
    if (limit.count() <= 0) {
        int sig = 0;
        sigwait(&set, &sig);
        return true;
    }
    timespec ts{static_cast<time_t>(limit.count() / 1000), static_cast<long>(limit.count() % 1000) * 1000000L};
    return sigtimedwait(&set, nullptr, &ts) > 0;
}

}  // namespace tools
