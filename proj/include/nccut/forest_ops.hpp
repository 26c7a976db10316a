#pragma once

#include <cstdint>
#include <vector>

#include "nccut/config.hpp"
#include "nccut/gmm.hpp"
#include "nccut/imagegraph.hpp"
#include "nccut/nc_engine.hpp"

namespace nccut {

struct CandidateSets {
    std::vector<std::int32_t> p_obj; ///< low-T leaves unlike the background seeds
    std::vector<std::int32_t> p_bkg; ///< low-T leaves similar to the background seeds
    std::vector<std::int32_t> b_set; ///< every region similar to the background seeds
    double u_b = 0;                  ///< mean (scaled) background density over the seeds
    double tau = 0;                  ///< mean T over all regions
};

struct ModifiedForest {
    std::vector<std::int32_t> npre;
    std::vector<std::int32_t> nrt;
    /// Sorted auxiliary neighbors; symmetric.
    std::vector<std::vector<std::int32_t>> aux;
};

/// Regions that are no other region's parent.
std::vector<std::int32_t> forest_leaves(const NcForest& forest);

/// Per-region background density of the mean color, scaled per `scale`.
std::vector<double> region_background_density(const RegionMap& regions, const Gmm& bkg_model,
                                              DensityScale scale);

/// Splits the low-T leaves of the background forest into likely-object regions
/// and isolated background regions.
CandidateSets candidate_regions(const NcResult& nc, const RegionGraph& graph, const RegionMap& regions,
                                const Gmm& bkg_model, const SeedSet& seeds, double delta_b,
                                double epsilon, DensityScale scale = DensityScale::Log);

/// Detaches P^bkg regions from their trees and links adjacent P^obj regions
/// that share a root.
ModifiedForest update_forest(const NcResult& nc, const CandidateSets& cands, const RegionGraph& graph);

} // namespace nccut
