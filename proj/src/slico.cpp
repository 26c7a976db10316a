#include "nccut/imagegraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nccut {

namespace {

struct Lab {
    double l = 0;
    double a = 0;
    double b = 0;
};

double srgb_to_linear(double c)
{
    c /= 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

Lab to_lab(const Rgb& px)
{
    const double r = srgb_to_linear(px.r);
    const double g = srgb_to_linear(px.g);
    const double b = srgb_to_linear(px.b);
    // D65 reference white
    const double x = (r * 0.4124564 + g * 0.3575761 + b * 0.1804375) / 0.950456;
    const double y = (r * 0.2126729 + g * 0.7151522 + b * 0.0721750);
    const double z = (r * 0.0193339 + g * 0.1191920 + b * 0.9503041) / 1.088754;
    auto f = [](double t) {
        constexpr double eps = 0.008856;
        constexpr double kappa = 903.3;
        return t > eps ? std::cbrt(t) : (kappa * t + 16.0) / 116.0;
    };
    const double fx = f(x);
    const double fy = f(y);
    const double fz = f(z);
    return Lab{116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

struct Center {
    Lab color;
    double x = 0;
    double y = 0;
};

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t v)
    {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }
    void attach(std::size_t child_root, std::size_t parent_root) { parent_[child_root] = parent_root; }

private:
    std::vector<std::size_t> parent_;
};

// Relabels so that every region is one 4-connected component. The largest
// component of each cluster is kept when it is big enough; every other
// component is absorbed into the largest adjacent kept group.
Grid<std::int32_t> enforce_connectivity(const Grid<std::int32_t>& clusters, std::size_t min_size)
{
    const int w = clusters.width();
    const int h = clusters.height();
    constexpr std::int32_t unset = -1;
    Grid<std::int32_t> comp(w, h, unset);
    std::vector<std::size_t> comp_size;
    std::vector<std::int32_t> comp_cluster;
    std::vector<int> queue;
    queue.reserve(clusters.size());
    const int dx[4] = {-1, 0, 1, 0};
    const int dy[4] = {0, -1, 0, 1};

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (comp.at(x, y) != unset)
                continue;
            const auto id = static_cast<std::int32_t>(comp_size.size());
            const auto cl = clusters.at(x, y);
            comp.at(x, y) = id;
            queue.clear();
            queue.push_back(static_cast<int>(comp.index(x, y)));
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const int cx = queue[head] % w;
                const int cy = queue[head] / w;
                for (int k = 0; k < 4; ++k) {
                    const int nx = cx + dx[k];
                    const int ny = cy + dy[k];
                    if (comp.contains(nx, ny) && comp.at(nx, ny) == unset && clusters.at(nx, ny) == cl) {
                        comp.at(nx, ny) = id;
                        queue.push_back(static_cast<int>(comp.index(nx, ny)));
                    }
                }
            }
            comp_size.push_back(queue.size());
            comp_cluster.push_back(cl);
        }
    }

    const std::size_t n_comp = comp_size.size();
    std::vector<std::vector<std::int32_t>> comp_adj(n_comp);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto a = comp.at(x, y);
            if (x + 1 < w && comp.at(x + 1, y) != a) {
                comp_adj[a].push_back(comp.at(x + 1, y));
                comp_adj[comp.at(x + 1, y)].push_back(a);
            }
            if (y + 1 < h && comp.at(x, y + 1) != a) {
                comp_adj[a].push_back(comp.at(x, y + 1));
                comp_adj[comp.at(x, y + 1)].push_back(a);
            }
        }
    }
    for (auto& adj : comp_adj) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }

    // largest component per cluster (first found on ties)
    std::int32_t max_cluster = 0;
    for (auto c : comp_cluster)
        max_cluster = std::max(max_cluster, c);
    std::vector<std::int32_t> main_comp(static_cast<std::size_t>(max_cluster) + 1, unset);
    for (std::size_t c = 0; c < n_comp; ++c) {
        auto& m = main_comp[static_cast<std::size_t>(comp_cluster[c])];
        if (m == unset || comp_size[c] > comp_size[static_cast<std::size_t>(m)])
            m = static_cast<std::int32_t>(c);
    }

    std::vector<char> kept(n_comp, 0);
    bool any_kept = false;
    for (auto m : main_comp) {
        if (m != unset && comp_size[static_cast<std::size_t>(m)] >= min_size) {
            kept[static_cast<std::size_t>(m)] = 1;
            any_kept = true;
        }
    }
    if (!any_kept) {
        auto largest = std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin();
        kept[static_cast<std::size_t>(largest)] = 1;
    }

    UnionFind groups(n_comp);
    std::vector<std::size_t> group_size = comp_size;
    std::vector<char> attached = kept;
    std::vector<std::size_t> pending;
    for (std::size_t c = 0; c < n_comp; ++c)
        if (!kept[c])
            pending.push_back(c);
    std::stable_sort(pending.begin(), pending.end(),
                     [&](std::size_t a, std::size_t b) { return comp_size[a] < comp_size[b]; });

    while (!pending.empty()) {
        std::vector<std::size_t> still_pending;
        for (std::size_t c : pending) {
            std::size_t best_root = n_comp;
            for (auto nb : comp_adj[c]) {
                const auto nbu = static_cast<std::size_t>(nb);
                if (!attached[nbu])
                    continue;
                const std::size_t root = groups.find(nbu);
                if (best_root == n_comp || group_size[root] > group_size[best_root] ||
                    (group_size[root] == group_size[best_root] && root < best_root))
                    best_root = root;
            }
            if (best_root == n_comp) {
                still_pending.push_back(c);
                continue;
            }
            groups.attach(c, best_root);
            group_size[best_root] += comp_size[c];
            attached[c] = 1;
        }
        if (still_pending.size() == pending.size())
            break; // unreachable for a connected pixel grid
        pending = std::move(still_pending);
    }

    Grid<std::int32_t> out(w, h, unset);
    std::vector<std::int32_t> final_label(n_comp, unset);
    std::int32_t next = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t root = groups.find(static_cast<std::size_t>(comp[i]));
        if (final_label[root] == unset)
            final_label[root] = next++;
        out[i] = final_label[root];
    }
    return out;
}

} // namespace

RegionMap slico(const RgbImage& image, int n_regions)
{
    const int w = image.width();
    const int h = image.height();
    const auto n_pixels = image.size();
    if (n_regions < 1 || static_cast<std::size_t>(n_regions) > n_pixels)
        throw InvalidInput("n_regions must be in [1, " + std::to_string(n_pixels) + "], got " +
                           std::to_string(n_regions));

    const GrayImage inhom = inhomogeneity_map(image, kDefaultWindowRadius);
    if (n_regions == 1)
        return RegionMap::from_labels(image, Grid<std::int32_t>(w, h, 0), inhom);

    // seed grid shaped to the image aspect ratio
    const int ny = std::clamp(static_cast<int>(std::lround(std::sqrt(double(n_regions) * h / w))), 1, h);
    const int nx = std::clamp(static_cast<int>(std::lround(double(n_regions) / ny)), 1, w);
    const double cell_w = double(w) / nx;
    const double cell_h = double(h) / ny;
    const double step = std::sqrt(double(n_pixels) / (double(nx) * ny));
    const int reach_x = static_cast<int>(std::ceil(std::max(step, cell_w)));
    const int reach_y = static_cast<int>(std::ceil(std::max(step, cell_h)));

    std::vector<Lab> lab(n_pixels);
    for (std::size_t i = 0; i < n_pixels; ++i)
        lab[i] = to_lab(image[i]);

    std::vector<Center> centers;
    centers.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int px = std::min(w - 1, static_cast<int>((i + 0.5) * cell_w));
            const int py = std::min(h - 1, static_cast<int>((j + 0.5) * cell_h));
            centers.push_back(Center{lab[image.index(px, py)], double(px), double(py)});
        }
    }
    const std::size_t k = centers.size();

    Grid<std::int32_t> clusters(w, h, 0);
    // initial assignment: nearest grid cell
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            clusters.at(x, y) = std::min(ny - 1, static_cast<int>(y / cell_h)) * nx +
                                std::min(nx - 1, static_cast<int>(x / cell_w));

    std::vector<double> max_color(k, 100.0);
    std::vector<double> dist(n_pixels);
    std::vector<double> color_dist(n_pixels);
    const double spatial_norm = step * step;

    for (int iter = 0; iter < kSlicoIterations; ++iter) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        for (std::size_t c = 0; c < k; ++c) {
            const Center& ctr = centers[c];
            const int x0 = std::max(0, static_cast<int>(ctr.x) - reach_x);
            const int x1 = std::min(w - 1, static_cast<int>(ctr.x) + reach_x);
            const int y0 = std::max(0, static_cast<int>(ctr.y) - reach_y);
            const int y1 = std::min(h - 1, static_cast<int>(ctr.y) + reach_y);
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    const std::size_t i = image.index(x, y);
                    const double dl = lab[i].l - ctr.color.l;
                    const double da = lab[i].a - ctr.color.a;
                    const double db = lab[i].b - ctr.color.b;
                    const double dc2 = dl * dl + da * da + db * db;
                    const double ddx = x - ctr.x;
                    const double ddy = y - ctr.y;
                    const double d = dc2 / max_color[c] + (ddx * ddx + ddy * ddy) / spatial_norm;
                    if (d < dist[i]) {
                        dist[i] = d;
                        clusters[i] = static_cast<std::int32_t>(c);
                        color_dist[i] = dc2;
                    }
                }
            }
        }

        std::fill(max_color.begin(), max_color.end(), 1.0);
        std::vector<Center> sums(k, Center{});
        std::vector<std::size_t> counts(k, 0);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t i = image.index(x, y);
                const auto c = static_cast<std::size_t>(clusters[i]);
                if (std::isfinite(dist[i]))
                    max_color[c] = std::max(max_color[c], color_dist[i]);
                sums[c].color.l += lab[i].l;
                sums[c].color.a += lab[i].a;
                sums[c].color.b += lab[i].b;
                sums[c].x += x;
                sums[c].y += y;
                ++counts[c];
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0)
                continue;
            const double n = double(counts[c]);
            centers[c] = Center{Lab{sums[c].color.l / n, sums[c].color.a / n, sums[c].color.b / n},
                                sums[c].x / n, sums[c].y / n};
        }
    }

    const std::size_t min_size = std::max<std::size_t>(1, n_pixels / k / 4);
    return RegionMap::from_labels(image, enforce_connectivity(clusters, min_size), inhom);
}

} // namespace nccut
