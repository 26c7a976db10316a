#include "nccut/nc_cut.hpp"

#include <algorithm>
#include <cmath>

namespace nccut {

double compute_gamma(const NcResult& nc, double delta_gamma)
{
    if (nc.values.empty())
        return 1.0;
    double sum = 0;
    for (const auto& v : nc.values)
        sum += v.indeterminacy;
    const double mean = sum / double(nc.values.size());
    return std::exp(-mean * mean / (2 * delta_gamma * delta_gamma));
}

double RegionWeights::link(std::int32_t r, std::int32_t t) const
{
    if (r == t)
        return lambda;
    const auto ru = static_cast<std::size_t>(r);
    const auto tu = static_cast<std::size_t>(t);
    if (npre[ru] == t)
        return parent_weight[ru];
    if (npre[tu] == r)
        return parent_weight[tu];
    if (std::binary_search(aux[ru].begin(), aux[ru].end(), t))
        return lambda;
    return 0.0;
}

RegionWeights region_weights(const NcResult& nc, const ModifiedForest& forest, double delta_nc, double t_clamp)
{
    const std::size_t n = nc.region_count();
    if (forest.npre.size() != n || forest.aux.size() != n)
        throw InvalidInput("forest does not match the NC result");
    RegionWeights rw;
    rw.to_object.resize(n);
    rw.to_background.resize(n);
    rw.parent_weight.assign(n, 0.0);
    rw.npre = forest.npre;
    rw.aux = forest.aux;

    double max_w = 0;
    for (std::size_t r = 0; r < n; ++r) {
        const double t = std::clamp(nc.values[r].truth, t_clamp, 1.0 - t_clamp);
        rw.to_object[r] = -std::log(t);
        rw.to_background[r] = -std::log(1.0 - t);
        max_w = std::max({max_w, rw.to_object[r], rw.to_background[r]});
    }
    rw.lambda = max_w + 1.0;
    for (std::size_t r = 0; r < n; ++r) {
        const auto p = forest.npre[r];
        if (p == static_cast<std::int32_t>(r))
            continue;
        const double d = nc.values[r].truth - nc.values[static_cast<std::size_t>(p)].truth;
        rw.parent_weight[r] = rw.lambda * std::exp(-d * d / (2 * delta_nc * delta_nc));
    }
    return rw;
}

namespace {

double color_dist2(const Rgb& a, const Rgb& b)
{
    const double dr = double(a.r) - b.r;
    const double dg = double(a.g) - b.g;
    const double db = double(a.b) - b.b;
    return dr * dr + dg * dg + db * db;
}

// Forward half of the 8-neighborhood: each unordered pair is visited once.
constexpr int kForward[4][2] = {{1, 0}, {-1, 1}, {0, 1}, {1, 1}};

} // namespace

double beta_constant(const RgbImage& image)
{
    if (image.size() < 2)
        throw InvalidInput("beta needs at least two pixels");
    double sum = 0;
    std::size_t pairs = 0;
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            for (const auto& d : kForward) {
                const int nx = x + d[0];
                const int ny = y + d[1];
                if (!image.contains(nx, ny))
                    continue;
                sum += color_dist2(image.at(x, y), image.at(nx, ny));
                ++pairs;
            }
        }
    }
    if (sum == 0)
        return 0.0;
    return 1.0 / (2.0 * sum / double(pairs));
}

FlowNetwork build_network(const RgbImage& image, const RegionMap& regions, const RegionWeights& rw,
                          const GmmPair& gmms, const NetworkParams& params, std::span<const std::int8_t> forced)
{
    const int w = image.width();
    const int h = image.height();
    if (regions.width() != w || regions.height() != h)
        throw InvalidInput("region map does not match the image");
    if (rw.to_object.size() != regions.region_count())
        throw InvalidInput("region weights do not match the region map");
    if (!forced.empty() && forced.size() != image.size())
        throw InvalidInput("hard constraints do not match the image");

    FlowNetwork net;
    net.resize(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        const auto r = static_cast<std::size_t>(regions.label(i));
        const Vec3 x = to_vec(image[i]);
        const double lp0 = gmms.background.log_density(x);
        const double lp1 = gmms.object.log_density(x);
        if (std::isnan(lp0) || std::isnan(lp1) || !std::isfinite(lp0) || !std::isfinite(lp1))
            throw NumericalError("mixture log-density is not finite");
        const double c0 = params.gamma * rw.to_object[r] - lp0;
        const double c1 = params.gamma * rw.to_background[r] - lp1;
        const double shift = std::min(c0, c1);
        net.cost0[i] = c0 - shift;
        net.cost1[i] = c1 - shift;
        net.offset += shift;
    }

    const double beta = beta_constant(image);
    net.links.reserve(image.size() * 4);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = image.index(x, y);
            for (const auto& d : kForward) {
                const int nx = x + d[0];
                const int ny = y + d[1];
                if (!image.contains(nx, ny))
                    continue;
                const std::size_t j = image.index(nx, ny);
                const double dist = (d[0] != 0 && d[1] != 0) ? std::sqrt(2.0) : 1.0;
                const double contrast = std::exp(-beta * color_dist2(image[i], image[j])) / dist;
                const double nc_part = rw.link(regions.label(i), regions.label(j));
                net.links.push_back(FlowNetwork::Link{static_cast<std::int32_t>(i), static_cast<std::int32_t>(j),
                                                      params.eta * (params.gamma * nc_part + contrast)});
            }
        }
    }

    if (!forced.empty()) {
        double total = 0;
        for (std::size_t i = 0; i < image.size(); ++i)
            total += net.cost0[i] + net.cost1[i];
        for (const auto& l : net.links)
            total += l.capacity;
        const double big = 2.0 * total + 1.0;
        for (std::size_t i = 0; i < image.size(); ++i) {
            if (forced[i] == 1)
                net.cost0[i] = big;
            else if (forced[i] == 0)
                net.cost1[i] = big;
        }
    }
    return net;
}

} // namespace nccut
