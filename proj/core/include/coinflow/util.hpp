#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace coinflow {

inline constexpr std::int64_t seconds_per_day = 86400;
inline constexpr std::int64_t default_horizon_seconds = 7 * seconds_per_day;

// "7d", "36h", "90m", "600s" or a bare number of seconds.
std::int64_t parse_duration(std::string_view text);
std::string format_duration(std::int64_t seconds);

// COINFLOW_THREADS if set and positive, otherwise hardware concurrency.
unsigned worker_count();

// Runs fn(i) for i in [0, n) over up to worker_count() threads. The first
// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace coinflow
