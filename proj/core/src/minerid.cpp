#include "coinflow/minerid.hpp"
#include "coinflow/error.hpp"

#include <algorithm>
#include <cmath>

namespace coinflow {

namespace {

// Marks which nodes of `self` also appear in `other`; both node lists are
// sorted, so a merge walk suffices.
std::vector<bool> shared_mask(const CirculationNetwork &self, const CirculationNetwork &other)
{
    std::vector<bool> shared(self.node_count(), false);
    std::size_t i = 0, j = 0;
    while (i < self.nodes.size() && j < other.nodes.size()) {
        const int c = self.nodes[i].compare(other.nodes[j]);
        if (c == 0) {
            shared[i] = true;
            ++i;
            ++j;
        } else if (c < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    return shared;
}

OverlapSide side_of(const CirculationNetwork &net, const std::vector<bool> &shared, std::uint64_t overlap)
{
    OverlapSide side;
    side.node_count = net.node_count();
    const std::size_t bins = net.node_count() == 0 ? 0 : static_cast<std::size_t>(net.max_distance()) + 1;
    side.nodes_at.assign(bins, 0);
    side.distinct_at.assign(bins, 0);
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        ++side.nodes_at[net.distance[i]];
        if (!shared[i])
            ++side.distinct_at[net.distance[i]];
    }
    side.ratio_at.resize(bins);
    for (std::size_t i = 0; i < bins; ++i)
        side.ratio_at[i] = side.nodes_at[i] == 0
                               ? 0.0
                               : static_cast<double>(side.distinct_at[i]) / static_cast<double>(side.nodes_at[i]);
    side.overlap_ratio = side.node_count == 0 ? 0.0
                                              : static_cast<double>(overlap) / static_cast<double>(side.node_count);
    return side;
}

double median(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

MinerSet extract(const CirculationNetwork &net, const std::vector<bool> &shared, const OverlapSide &side,
                 const MinerIdOptions &options, std::string label)
{
    MinerSet set;
    set.label = std::move(label);
    if (net.node_count() == 0)
        return set;
    set.cutoff = options.cutoff ? *options.cutoff : auto_cutoff(side.ratio_at, options.band, options.window);
    set.relay_prefix = options.skip_relay_prefix ? relay_prefix_length(side.nodes_at) : 0;
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        const auto d = net.distance[i];
        if (!shared[i] && d <= set.cutoff && d >= set.relay_prefix)
            set.addresses.push_back(net.nodes[i]);
    }
    return set;
}

} // namespace

OverlapProfile overlap_profile(const CirculationNetwork &a, const CirculationNetwork &b)
{
    const auto shared_a = shared_mask(a, b);
    const auto shared_b = shared_mask(b, a);
    OverlapProfile p;
    p.overlap_count = static_cast<std::uint64_t>(std::count(shared_a.begin(), shared_a.end(), true));
    p.a = side_of(a, shared_a, p.overlap_count);
    p.b = side_of(b, shared_b, p.overlap_count);
    return p;
}

PoolVerdict classify_pair(const OverlapProfile &profile, double threshold)
{
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw error(errc::invalid_argument, "same-pool threshold must be in (0, 1]");
    PoolVerdict v;
    v.threshold = threshold;
    v.overlap_ratio_min = std::min(profile.a.overlap_ratio, profile.b.overlap_ratio);
    v.relation = v.overlap_ratio_min >= threshold ? PoolRelation::same_pool : PoolRelation::different_pool;
    return v;
}

std::string_view to_string(PoolRelation relation) noexcept
{
    return relation == PoolRelation::same_pool ? "same-pool" : "different-pool";
}

std::vector<double> smooth_ratios(std::span<const double> ratios, std::size_t window)
{
    if (window == 0)
        throw error(errc::invalid_argument, "smoothing window must be positive");
    const std::size_t half = window / 2;
    std::vector<double> out(ratios.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(ratios.size() - 1, i + half);
        double sum = 0.0;
        for (std::size_t j = lo; j <= hi; ++j)
            sum += ratios[j];
        out[i] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::uint32_t auto_cutoff(std::span<const double> ratios, double band, std::size_t window)
{
    if (ratios.empty())
        return 0;
    const auto smoothed = smooth_ratios(ratios, window);
    // Upper half of the distance range, middle bin excluded.
    const std::size_t tail_begin = std::min(smoothed.size() - 1, (smoothed.size() + 1) / 2);
    const double tail_median = median({smoothed.begin() + static_cast<std::ptrdiff_t>(tail_begin), smoothed.end()});

    std::size_t best = 0;
    double best_gap = std::abs(smoothed[0] - tail_median);
    for (std::size_t i = 0; i < smoothed.size(); ++i) {
        const double gap = std::abs(smoothed[i] - tail_median);
        if (gap <= band)
            return static_cast<std::uint32_t>(i);
        if (gap < best_gap) {
            best_gap = gap;
            best = i;
        }
    }
    return static_cast<std::uint32_t>(best);
}

std::uint32_t relay_prefix_length(std::span<const std::uint64_t> nodes_at)
{
    std::uint32_t k = 0;
    while (k < nodes_at.size() && nodes_at[k] == 1)
        ++k;
    return k;
}

MinerIdResult identify_miners(const CirculationNetwork &a, const CirculationNetwork &b,
                              const MinerIdOptions &options)
{
    MinerIdResult result;
    result.profile = overlap_profile(a, b);
    result.verdict = classify_pair(result.profile, options.threshold);
    if (result.verdict.relation == PoolRelation::same_pool && !options.force)
        throw error(errc::same_pool_pair, "networks look like the same pool (min overlap " +
                                              std::to_string(result.verdict.overlap_ratio_min) + ")");
    const auto shared_a = shared_mask(a, b);
    const auto shared_b = shared_mask(b, a);
    result.a = extract(a, shared_a, result.profile.a, options, "a");
    result.b = extract(b, shared_b, result.profile.b, options, "b");
    return result;
}

} // namespace coinflow
