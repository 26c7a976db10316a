#include "nccut/forest_ops.hpp"

#include <algorithm>
#include <cmath>

namespace nccut {

std::vector<std::int32_t> forest_leaves(const NcForest& forest)
{
    const std::size_t n = forest.parent.size();
    std::vector<char> has_child(n, 0);
    for (std::size_t r = 0; r < n; ++r)
        if (forest.parent[r] != static_cast<std::int32_t>(r))
            has_child[static_cast<std::size_t>(forest.parent[r])] = 1;
    std::vector<std::int32_t> out;
    for (std::size_t r = 0; r < n; ++r)
        if (!has_child[r])
            out.push_back(static_cast<std::int32_t>(r));
    return out;
}

std::vector<double> region_background_density(const RegionMap& regions, const Gmm& bkg_model,
                                              DensityScale scale)
{
    std::vector<double> p(regions.region_count());
    for (std::size_t r = 0; r < p.size(); ++r) {
        const auto& m = regions.stats(r).mean_color;
        const Vec3 c{m[0], m[1], m[2]};
        p[r] = scale == DensityScale::Log ? bkg_model.log_density(c) : gmm_density(c, bkg_model);
    }
    if (scale != DensityScale::Literal && !p.empty()) {
        const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
        const double low = *lo;
        const double range = *hi - low;
        for (double& v : p)
            v = range > 0 ? 100.0 * (v - low) / range : 0.0;
    }
    return p;
}

CandidateSets candidate_regions(const NcResult& nc, const RegionGraph& graph, const RegionMap& regions,
                                const Gmm& bkg_model, const SeedSet& seeds, double delta_b,
                                double epsilon, DensityScale scale)
{
    const std::size_t n = nc.region_count();
    if (graph.region_count() != n || regions.region_count() != n)
        throw InvalidInput("region counts of NC result, graph and region map disagree");

    CandidateSets out;
    if (n == 0)
        return out;
    double sum_t = 0;
    for (const auto& v : nc.values)
        sum_t += v.truth;
    out.tau = sum_t / double(n);

    const std::vector<double> p = region_background_density(regions, bkg_model, scale);
    double sum_seed = 0;
    for (auto s : seeds.regions())
        sum_seed += p[static_cast<std::size_t>(s)];
    out.u_b = seeds.size() ? sum_seed / double(seeds.size()) : 0.0;

    std::vector<char> in_b(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        const double d = p[r] - out.u_b;
        if (std::exp(-d * d / (2 * delta_b * delta_b)) > epsilon) {
            in_b[r] = 1;
            out.b_set.push_back(static_cast<std::int32_t>(r));
        }
    }
    for (auto r : forest_leaves(nc.forest)) {
        if (!(nc.values[static_cast<std::size_t>(r)].truth < out.tau))
            continue;
        (in_b[static_cast<std::size_t>(r)] ? out.p_bkg : out.p_obj).push_back(r);
    }
    return out;
}

ModifiedForest update_forest(const NcResult& nc, const CandidateSets& cands, const RegionGraph& graph)
{
    const std::size_t n = nc.region_count();
    ModifiedForest out;
    out.npre = nc.forest.parent;
    out.nrt = nc.forest.root;
    out.aux.assign(n, {});

    for (auto r : cands.p_bkg) {
        out.npre[static_cast<std::size_t>(r)] = r;
        out.nrt[static_cast<std::size_t>(r)] = r;
    }

    std::vector<char> is_obj(n, 0);
    for (auto r : cands.p_obj)
        is_obj[static_cast<std::size_t>(r)] = 1;
    for (auto r : cands.p_obj) {
        for (const RegionEdge& e : graph.neighbors(r)) {
            const auto g = e.to;
            if (is_obj[static_cast<std::size_t>(g)] &&
                nc.forest.root[static_cast<std::size_t>(g)] == nc.forest.root[static_cast<std::size_t>(r)])
                out.aux[static_cast<std::size_t>(r)].push_back(g);
        }
    }
    // neighbors() is sorted, so each aux list already is
    return out;
}

} // namespace nccut
