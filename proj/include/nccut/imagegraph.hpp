#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "nccut/image.hpp"

namespace nccut {

inline constexpr int kDefaultWindowRadius = 2;
inline constexpr int kDefaultRegionCount = 500;
inline constexpr int kSlicoIterations = 10;

using Color = std::array<double, 3>;

/// Luma plane (0.299 r + 0.587 g + 0.114 b).
GrayImage gray_plane(const RgbImage& image);

/// 3x3 Sobel gradient magnitude of the luma plane, edge-replicated borders.
GrayImage sobel_magnitude(const RgbImage& image);

/// Population standard deviation of luma over a (2r+1)^2 window, edge-replicated borders.
GrayImage local_deviation(const RgbImage& image, int window_radius);

/// Per-pixel product of local deviation and Sobel magnitude, each first scaled to
/// [0, 1] by its image maximum (an all-zero factor stays zero).
GrayImage inhomogeneity_map(const RgbImage& image, int window_radius = kDefaultWindowRadius);

struct RegionStats {
    std::size_t pixel_count = 0;
    Color mean_color{};
    /// Mean of the inhomogeneity map over the region, in [0, 1].
    double inhomogeneity = 0;
};

/// Superpixel partition: a label in [0, N) per pixel plus per-region statistics.
class RegionMap {
public:
    RegionMap() = default;

    /// Builds the map from explicit labels. Every label in [0, N) must own a pixel.
    static RegionMap from_labels(const RgbImage& image, Grid<std::int32_t> labels,
                                 int window_radius = kDefaultWindowRadius);
    static RegionMap from_labels(const RgbImage& image, Grid<std::int32_t> labels,
                                 const GrayImage& inhomogeneity);

    int width() const noexcept { return labels_.width(); }
    int height() const noexcept { return labels_.height(); }
    std::size_t region_count() const noexcept { return stats_.size(); }
    std::size_t pixel_count() const noexcept { return labels_.size(); }

    const Grid<std::int32_t>& labels() const noexcept { return labels_; }
    std::int32_t label(std::size_t pixel) const noexcept { return labels_[pixel]; }
    std::int32_t label(int x, int y) const noexcept { return labels_.at(x, y); }
    const std::vector<RegionStats>& stats() const noexcept { return stats_; }
    const RegionStats& stats(std::size_t region) const { return stats_.at(region); }

private:
    Grid<std::int32_t> labels_;
    std::vector<RegionStats> stats_;
};

/// SLICO superpixels (compactness adapted per cluster) with grid-seeded centers,
/// a fixed number of refinement sweeps and orphan merging so every region is
/// 4-connected.
RegionMap slico(const RgbImage& image, int n_regions = kDefaultRegionCount);

struct RegionEdge {
    std::int32_t to = 0;
    double truth = 0;          ///< mu_T
    double indeterminacy = 0;  ///< mu_I
};

/// Region adjacency graph with truth (mu_T) and indeterminacy (mu_I) edge measures.
class RegionGraph {
public:
    RegionGraph() = default;
    explicit RegionGraph(std::size_t n_regions);

    std::size_t region_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept;

    /// Inserts or overwrites the symmetric edge p--q.
    void set_edge(std::int32_t p, std::int32_t q, double truth, double indeterminacy);
    void set_self_indeterminacy(std::int32_t p, double value);

    /// Neighbors of p sorted by region index.
    const std::vector<RegionEdge>& neighbors(std::int32_t p) const { return adjacency_.at(p); }
    std::optional<RegionEdge> edge(std::int32_t p, std::int32_t q) const;
    bool adjacent(std::int32_t p, std::int32_t q) const { return edge(p, q).has_value(); }
    double self_indeterminacy(std::int32_t p) const { return self_indeterminacy_.at(p); }

    /// Copy with every mu_I and self-indeterminacy forced to zero.
    RegionGraph without_indeterminacy() const;

private:
    std::vector<std::vector<RegionEdge>> adjacency_;
    std::vector<double> self_indeterminacy_;
};

/// exp(-|a-b|^2 / (2 delta_t^2)) over RGB.
double truth_measure(const Color& a, const Color& b, double delta_t);

/// Connects 4-adjacent regions; mu_T from mean colors, mu_I = max(h(p), h(q)).
RegionGraph build_region_graph(const RgbImage& image, const RegionMap& regions, double delta_t);

/// 16-bit label image (fails if there are more than 65536 regions).
Grid<std::uint16_t> label_image16(const RegionMap& regions);

} // namespace nccut
