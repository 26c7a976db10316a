#include "nccut/nc_engine.hpp"

#include <algorithm>
#include <queue>

namespace nccut {

bool lex_leq(const NcKey& a, const NcKey& b) noexcept
{
    return a.first < b.first || (a.first == b.first && a.second <= b.second);
}

bool lex_lt(const NcKey& a, const NcKey& b) noexcept
{
    return lex_leq(a, b) && !(a == b);
}

PathStrength path_strength(std::span<const std::int32_t> path, const RegionGraph& graph)
{
    if (path.size() < 2)
        throw InvalidPath("a path needs at least two regions");
    double truth = 1.0;
    double indeterminacy = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const auto e = graph.edge(path[k], path[k + 1]);
        if (!e)
            throw InvalidPath("regions " + std::to_string(path[k]) + " and " +
                              std::to_string(path[k + 1]) + " are not adjacent");
        truth = std::min(truth, e->truth);
        indeterminacy = std::max(indeterminacy, e->indeterminacy);
    }
    return PathStrength{truth, indeterminacy, 1.0 - truth};
}

SeedSet::SeedSet(std::vector<std::int32_t> regions, std::size_t n_regions)
    : regions_(std::move(regions))
{
    if (regions_.empty())
        throw InvalidInput("seed set is empty");
    for (auto r : regions_)
        if (r < 0 || static_cast<std::size_t>(r) >= n_regions)
            throw InvalidInput("seed region " + std::to_string(r) + " out of range");
    std::sort(regions_.begin(), regions_.end());
    regions_.erase(std::unique(regions_.begin(), regions_.end()), regions_.end());
}

bool SeedSet::contains(std::int32_t r) const noexcept
{
    return std::binary_search(regions_.begin(), regions_.end(), r);
}

bool NcResult::reached(std::int32_t r) const noexcept
{
    const auto i = static_cast<std::size_t>(r);
    return is_seed(r) || forest.parent[i] != r;
}

namespace {

struct QueueEntry {
    NcKey key;
    std::int32_t region;
};

// max-heap on key; equal keys: smaller region index on top
struct EntryOrder {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const noexcept
    {
        if (a.key == b.key)
            return a.region > b.region;
        return lex_lt(a.key, b.key);
    }
};

} // namespace

NcResult compute_nc(const RegionGraph& graph, const SeedSet& seeds)
{
    const std::size_t n = graph.region_count();
    if (seeds.size() == 0)
        throw InvalidInput("seed set is empty");
    for (auto s : seeds.regions())
        if (static_cast<std::size_t>(s) >= n)
            throw InvalidInput("seed region out of range");

    NcResult out;
    out.seeds = seeds;
    out.values.assign(n, NcPair{0, 0});
    out.forest.parent.resize(n);
    out.forest.root.resize(n);
    for (std::size_t r = 0; r < n; ++r)
        out.forest.parent[r] = out.forest.root[r] = static_cast<std::int32_t>(r);

    std::priority_queue<QueueEntry, std::vector<QueueEntry>, EntryOrder> queue;
    std::vector<char> done(n, 0);
    for (auto s : seeds.regions()) {
        out.values[s] = NcPair{1.0, graph.self_indeterminacy(s)};
        queue.push(QueueEntry{NcKey::of(out.values[s]), s});
    }

    while (!queue.empty()) {
        const QueueEntry top = queue.top();
        queue.pop();
        const auto p = top.region;
        if (done[p] || !(top.key == NcKey::of(out.values[p])))
            continue; // stale
        done[p] = 1;
        const NcPair vp = out.values[p];
        for (const RegionEdge& e : graph.neighbors(p)) {
            const auto q = e.to;
            if (done[q] || seeds.contains(q))
                continue;
            const NcPair candidate{std::min(vp.truth, e.truth), std::max(vp.indeterminacy, e.indeterminacy)};
            if (lex_lt(NcKey::of(out.values[q]), NcKey::of(candidate))) {
                out.values[q] = candidate;
                out.forest.parent[q] = p;
                out.forest.root[q] = out.forest.root[p];
                queue.push(QueueEntry{NcKey::of(candidate), q});
            }
        }
    }
    return out;
}

std::vector<NcPair> brute_force_nc(const RegionGraph& graph, const SeedSet& seeds)
{
    const std::size_t n = graph.region_count();
    if (n > kBruteForceRegionLimit)
        throw InvalidInput("brute_force_nc is limited to " + std::to_string(kBruteForceRegionLimit) +
                           " regions");
    std::vector<NcPair> best(n, NcPair{0, 0});
    std::vector<char> found(n, 0);
    for (auto s : seeds.regions()) {
        best[s] = NcPair{1.0, graph.self_indeterminacy(s)};
        found[s] = 1;
    }

    std::vector<char> on_path(n, 0);
    // depth-first enumeration of simple paths; every prefix is itself a path
    auto visit = [&](auto&& self, std::int32_t u, double truth, double indeterminacy) -> void {
        for (const RegionEdge& e : graph.neighbors(u)) {
            const auto q = e.to;
            if (on_path[q] || seeds.contains(q))
                continue;
            const NcPair here{std::min(truth, e.truth), std::max(indeterminacy, e.indeterminacy)};
            if (here.truth > 0 && (!found[q] || lex_lt(NcKey::of(best[q]), NcKey::of(here)))) {
                best[q] = here;
                found[q] = 1;
            }
            on_path[q] = 1;
            self(self, q, here.truth, here.indeterminacy);
            on_path[q] = 0;
        }
    };
    for (auto s : seeds.regions()) {
        on_path[s] = 1;
        visit(visit, s, 1.0, graph.self_indeterminacy(s));
        on_path[s] = 0;
    }
    return best;
}

} // namespace nccut
