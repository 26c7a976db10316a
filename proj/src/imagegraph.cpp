#include "nccut/imagegraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nccut {

namespace {

// Luma in exact integer units (x1000) so flat areas produce exactly zero
// deviation and gradient.
Grid<std::int64_t> luma_milli(const RgbImage& image)
{
    Grid<std::int64_t> out(image.width(), image.height());
    for (std::size_t i = 0; i < image.size(); ++i) {
        const Rgb& c = image[i];
        out[i] = 299 * std::int64_t{c.r} + 587 * std::int64_t{c.g} + 114 * std::int64_t{c.b};
    }
    return out;
}

int clamp_coord(int v, int hi) { return std::clamp(v, 0, hi - 1); }

void normalize_by_max(GrayImage& img)
{
    double peak = 0;
    for (double v : img)
        peak = std::max(peak, v);
    if (peak <= 0) {
        std::fill(img.begin(), img.end(), 0.0);
        return;
    }
    for (double& v : img)
        v /= peak;
}

} // namespace

GrayImage gray_plane(const RgbImage& image)
{
    GrayImage out(image.width(), image.height());
    for (std::size_t i = 0; i < image.size(); ++i)
        out[i] = luma(image[i]);
    return out;
}

GrayImage sobel_magnitude(const RgbImage& image)
{
    const auto lum = luma_milli(image);
    const int w = image.width();
    const int h = image.height();
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            auto px = [&](int dx, int dy) {
                return lum.at(clamp_coord(x + dx, w), clamp_coord(y + dy, h));
            };
            const std::int64_t gx = (px(1, -1) + 2 * px(1, 0) + px(1, 1)) -
                                    (px(-1, -1) + 2 * px(-1, 0) + px(-1, 1));
            const std::int64_t gy = (px(-1, 1) + 2 * px(0, 1) + px(1, 1)) -
                                    (px(-1, -1) + 2 * px(0, -1) + px(1, -1));
            out.at(x, y) = std::sqrt(static_cast<double>(gx * gx + gy * gy)) / 1000.0;
        }
    }
    return out;
}

GrayImage local_deviation(const RgbImage& image, int window_radius)
{
    if (window_radius < 1)
        throw InvalidInput("window radius must be >= 1");
    const auto lum = luma_milli(image);
    const int w = image.width();
    const int h = image.height();
    const std::int64_t n = static_cast<std::int64_t>(2 * window_radius + 1) * (2 * window_radius + 1);
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::int64_t sum = 0;
            // sum of squares can exceed 2^63 only for absurd radii; use long double there
            long double sum_sq = 0;
            for (int dy = -window_radius; dy <= window_radius; ++dy) {
                for (int dx = -window_radius; dx <= window_radius; ++dx) {
                    const std::int64_t v = lum.at(clamp_coord(x + dx, w), clamp_coord(y + dy, h));
                    sum += v;
                    sum_sq += static_cast<long double>(v) * static_cast<long double>(v);
                }
            }
            const long double num = static_cast<long double>(n) * sum_sq -
                                    static_cast<long double>(sum) * static_cast<long double>(sum);
            out.at(x, y) = num <= 0 ? 0.0
                                    : static_cast<double>(std::sqrt(num) / static_cast<long double>(n)) / 1000.0;
        }
    }
    return out;
}

GrayImage inhomogeneity_map(const RgbImage& image, int window_radius)
{
    GrayImage dev = local_deviation(image, window_radius);
    GrayImage grad = sobel_magnitude(image);
    normalize_by_max(dev);
    normalize_by_max(grad);
    for (std::size_t i = 0; i < dev.size(); ++i)
        dev[i] *= grad[i];
    return dev;
}

// ---------------------------------------------------------------------------
// RegionMap
// ---------------------------------------------------------------------------

RegionMap RegionMap::from_labels(const RgbImage& image, Grid<std::int32_t> labels, int window_radius)
{
    return from_labels(image, std::move(labels), inhomogeneity_map(image, window_radius));
}

RegionMap RegionMap::from_labels(const RgbImage& image, Grid<std::int32_t> labels,
                                 const GrayImage& inhomogeneity)
{
    if (labels.width() != image.width() || labels.height() != image.height() ||
        inhomogeneity.width() != image.width() || inhomogeneity.height() != image.height())
        throw InvalidInput("label map and image dimensions differ");

    std::int32_t max_label = -1;
    for (std::int32_t l : labels) {
        if (l < 0)
            throw InvalidInput("negative region label");
        max_label = std::max(max_label, l);
    }
    const auto n = static_cast<std::size_t>(max_label + 1);
    std::vector<std::array<std::int64_t, 3>> sums(n, {0, 0, 0});
    std::vector<double> h_sum(n, 0.0);
    std::vector<std::size_t> counts(n, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto l = static_cast<std::size_t>(labels[i]);
        const Rgb& c = image[i];
        sums[l][0] += c.r;
        sums[l][1] += c.g;
        sums[l][2] += c.b;
        h_sum[l] += inhomogeneity[i];
        ++counts[l];
    }

    RegionMap map;
    map.stats_.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (counts[r] == 0)
            throw InvalidInput("region " + std::to_string(r) + " owns no pixels");
        auto& s = map.stats_[r];
        s.pixel_count = counts[r];
        const auto cnt = static_cast<double>(counts[r]);
        s.mean_color = {sums[r][0] / cnt, sums[r][1] / cnt, sums[r][2] / cnt};
        s.inhomogeneity = std::clamp(h_sum[r] / cnt, 0.0, 1.0);
    }
    map.labels_ = std::move(labels);
    return map;
}

// ---------------------------------------------------------------------------
// RegionGraph
// ---------------------------------------------------------------------------

RegionGraph::RegionGraph(std::size_t n_regions)
    : adjacency_(n_regions), self_indeterminacy_(n_regions, 0.0)
{
}

std::size_t RegionGraph::edge_count() const noexcept
{
    std::size_t total = 0;
    for (const auto& adj : adjacency_)
        total += adj.size();
    return total / 2;
}

void RegionGraph::set_edge(std::int32_t p, std::int32_t q, double truth, double indeterminacy)
{
    const auto n = static_cast<std::int32_t>(adjacency_.size());
    if (p < 0 || q < 0 || p >= n || q >= n)
        throw InvalidInput("edge endpoint out of range");
    if (p == q)
        throw InvalidInput("self edges are not allowed; use set_self_indeterminacy");
    auto insert = [&](std::int32_t from, std::int32_t to) {
        auto& adj = adjacency_[from];
        auto it = std::lower_bound(adj.begin(), adj.end(), to,
                                   [](const RegionEdge& e, std::int32_t v) { return e.to < v; });
        if (it != adj.end() && it->to == to)
            *it = RegionEdge{to, truth, indeterminacy};
        else
            adj.insert(it, RegionEdge{to, truth, indeterminacy});
    };
    insert(p, q);
    insert(q, p);
}

void RegionGraph::set_self_indeterminacy(std::int32_t p, double value)
{
    self_indeterminacy_.at(static_cast<std::size_t>(p)) = value;
}

std::optional<RegionEdge> RegionGraph::edge(std::int32_t p, std::int32_t q) const
{
    const auto& adj = adjacency_.at(static_cast<std::size_t>(p));
    auto it = std::lower_bound(adj.begin(), adj.end(), q,
                               [](const RegionEdge& e, std::int32_t v) { return e.to < v; });
    if (it == adj.end() || it->to != q)
        return std::nullopt;
    return *it;
}

RegionGraph RegionGraph::without_indeterminacy() const
{
    RegionGraph copy = *this;
    for (auto& adj : copy.adjacency_)
        for (auto& e : adj)
            e.indeterminacy = 0;
    std::fill(copy.self_indeterminacy_.begin(), copy.self_indeterminacy_.end(), 0.0);
    return copy;
}

double truth_measure(const Color& a, const Color& b, double delta_t)
{
    double d2 = 0;
    for (int c = 0; c < 3; ++c)
        d2 += (a[c] - b[c]) * (a[c] - b[c]);
    return std::exp(-d2 / (2 * delta_t * delta_t));
}

RegionGraph build_region_graph(const RgbImage& image, const RegionMap& regions, double delta_t)
{
    if (regions.width() != image.width() || regions.height() != image.height())
        throw InvalidInput("region map does not match image");
    if (!(delta_t > 0))
        throw InvalidInput("delta_t must be positive");

    const int w = regions.width();
    const int h = regions.height();
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto a = regions.label(x, y);
            if (x + 1 < w && regions.label(x + 1, y) != a)
                pairs.emplace_back(std::minmax(a, regions.label(x + 1, y)));
            if (y + 1 < h && regions.label(x, y + 1) != a)
                pairs.emplace_back(std::minmax(a, regions.label(x, y + 1)));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    RegionGraph graph(regions.region_count());
    for (std::size_t r = 0; r < regions.region_count(); ++r)
        graph.set_self_indeterminacy(static_cast<std::int32_t>(r), regions.stats(r).inhomogeneity);
    for (auto [p, q] : pairs) {
        const auto& sp = regions.stats(static_cast<std::size_t>(p));
        const auto& sq = regions.stats(static_cast<std::size_t>(q));
        graph.set_edge(p, q, truth_measure(sp.mean_color, sq.mean_color, delta_t),
                       std::max(sp.inhomogeneity, sq.inhomogeneity));
    }
    return graph;
}

Grid<std::uint16_t> label_image16(const RegionMap& regions)
{
    if (regions.region_count() > 65536)
        throw InvalidInput("too many regions for a 16-bit label image");
    Grid<std::uint16_t> out(regions.width(), regions.height());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint16_t>(regions.label(i));
    return out;
}

} // namespace nccut
