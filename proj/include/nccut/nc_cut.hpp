#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nccut/forest_ops.hpp"
#include "nccut/gmm.hpp"
#include "nccut/imagegraph.hpp"
#include "nccut/maxflow.hpp"
#include "nccut/nc_engine.hpp"

namespace nccut {

inline constexpr double kDefaultTruthClamp = 1e-6;
inline constexpr double kDefaultEta = 50.0;

/// exp(-mean(I)^2 / (2 delta_gamma^2)) over all regions.
double compute_gamma(const NcResult& nc, double delta_gamma);

struct RegionWeights {
    std::vector<double> to_object;     ///< w(r, 1) = -log T_r, cut when r is labeled 0
    std::vector<double> to_background; ///< w(r, 0) = -log(1 - T_r), cut when r is labeled 1
    /// Weight of the edge r -- npre_r (0 for roots).
    std::vector<double> parent_weight;
    std::vector<std::int32_t> npre;
    std::vector<std::vector<std::int32_t>> aux;
    double lambda = 0;

    /// n-link weight between regions r and t (lambda when r == t).
    double link(std::int32_t r, std::int32_t t) const;
};

RegionWeights region_weights(const NcResult& nc, const ModifiedForest& forest, double delta_nc,
                             double t_clamp = kDefaultTruthClamp);

/// 1 / (2 <|x_i - x_j|^2>) over 8-neighbor pairs; 0 for a constant image.
double beta_constant(const RgbImage& image);

/// Per-pixel forced labels: -1 free, 0 or 1 forced.
using HardConstraints = std::vector<std::int8_t>;

struct NetworkParams {
    double gamma = 1.0;
    double eta = kDefaultEta;
};

/// Pixel network for the combined appearance + connectedness energy. Unary
/// costs are shifted per pixel so the cheaper side is 0; the shifts go to
/// FlowNetwork::offset. Forced pixels get a t-link of twice the total
/// capacity against the other label.
FlowNetwork build_network(const RgbImage& image, const RegionMap& regions, const RegionWeights& rw,
                          const GmmPair& gmms, const NetworkParams& params,
                          std::span<const std::int8_t> forced = {});

} // namespace nccut
