#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nccut/imagegraph.hpp"

namespace nccut {

/// Truth and indeterminacy of connectedness. Falsity is always 1 - truth.
struct NcPair {
    double truth = 0;
    double indeterminacy = 0;

    double falsity() const noexcept { return 1.0 - truth; }
    friend bool operator==(const NcPair&, const NcPair&) = default;
};

/// Ordering key <T, 1 - I>.
struct NcKey {
    double first = 0;
    double second = 0;

    static NcKey of(const NcPair& p) noexcept { return {p.truth, 1.0 - p.indeterminacy}; }
    friend bool operator==(const NcKey&, const NcKey&) = default;
};

/// a <= b in the lexicographic order.
bool lex_leq(const NcKey& a, const NcKey& b) noexcept;
/// a <= b and a != b.
bool lex_lt(const NcKey& a, const NcKey& b) noexcept;

struct PathStrength {
    double truth = 0;
    double indeterminacy = 0;
    double falsity = 0;
};

/// Min mu_T / max mu_I over consecutive pairs of a region path (length >= 2).
/// Throws InvalidPath when two consecutive regions are not adjacent.
PathStrength path_strength(std::span<const std::int32_t> path, const RegionGraph& graph);

/// Sorted, de-duplicated, non-empty set of seed region indices.
class SeedSet {
public:
    SeedSet() = default;
    SeedSet(std::vector<std::int32_t> regions, std::size_t n_regions);

    const std::vector<std::int32_t>& regions() const noexcept { return regions_; }
    std::size_t size() const noexcept { return regions_.size(); }
    bool contains(std::int32_t r) const noexcept;

private:
    std::vector<std::int32_t> regions_;
};

struct NcForest {
    std::vector<std::int32_t> parent;
    std::vector<std::int32_t> root;
};

struct NcResult {
    std::vector<NcPair> values;
    NcForest forest;
    SeedSet seeds;

    std::size_t region_count() const noexcept { return values.size(); }
    bool is_seed(std::int32_t r) const noexcept { return seeds.contains(r); }
    /// True for seeds and for regions with a path to a seed.
    bool reached(std::int32_t r) const noexcept;
};

/// Best-path propagation from the seed regions: a max-priority queue over
/// <T, 1 - I> with lazy invalidation; equal keys pop lower region index first.
/// Seeds start at (1, self-indeterminacy) and are never relaxed.
NcResult compute_nc(const RegionGraph& graph, const SeedSet& seeds);

inline constexpr std::size_t kBruteForceRegionLimit = 12;

/// Test oracle: lexicographic maximum of <T, 1 - I> over every simple path that
/// starts at a seed and visits no other seed. Refuses graphs above
/// kBruteForceRegionLimit regions.
std::vector<NcPair> brute_force_nc(const RegionGraph& graph, const SeedSet& seeds);

} // namespace nccut
