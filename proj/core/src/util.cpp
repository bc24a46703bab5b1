#include "coinflow/util.hpp"
#include "coinflow/error.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace coinflow {

std::int64_t parse_duration(std::string_view text)
{
    if (text.empty())
        throw error(errc::invalid_argument, "empty duration");
    std::int64_t unit = 1;
    std::string_view digits = text;
    switch (text.back()) {
    case 'd': unit = seconds_per_day; digits.remove_suffix(1); break;
    case 'h': unit = 3600; digits.remove_suffix(1); break;
    case 'm': unit = 60; digits.remove_suffix(1); break;
    case 's': digits.remove_suffix(1); break;
    default: break;
    }
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty() || value <= 0)
        throw error(errc::invalid_argument, "invalid duration '" + std::string(text) + "'");
    return value * unit;
}

std::string format_duration(std::int64_t seconds)
{
    if (seconds > 0 && seconds % seconds_per_day == 0)
        return std::to_string(seconds / seconds_per_day) + "d";
    if (seconds > 0 && seconds % 3600 == 0)
        return std::to_string(seconds / 3600) + "h";
    return std::to_string(seconds) + "s";
}

unsigned worker_count()
{
    if (const char *env = std::getenv("COINFLOW_THREADS")) {
        unsigned n = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec == std::errc{} && ptr == s.data() + s.size() && n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn)
{
    const std::size_t workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&] {
        for (;;) {
            if (failed.load(std::memory_order_relaxed))
                return;
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                failed = true;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t)
        pool.emplace_back(work);
    work();
    pool.clear();

    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace coinflow
