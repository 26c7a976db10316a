#include "nccut/gmm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace nccut {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double determinant(const Mat3& c)
{
    return c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) -
           c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0]) +
           c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0]);
}

Mat3 inverse(const Mat3& c, double det)
{
    Mat3 inv{};
    inv[0][0] = (c[1][1] * c[2][2] - c[1][2] * c[2][1]) / det;
    inv[0][1] = -(c[0][1] * c[2][2] - c[0][2] * c[2][1]) / det;
    inv[0][2] = (c[0][1] * c[1][2] - c[0][2] * c[1][1]) / det;
    inv[1][0] = -(c[1][0] * c[2][2] - c[1][2] * c[2][0]) / det;
    inv[1][1] = (c[0][0] * c[2][2] - c[0][2] * c[2][0]) / det;
    inv[1][2] = -(c[0][0] * c[1][2] - c[0][2] * c[1][0]) / det;
    inv[2][0] = (c[1][0] * c[2][1] - c[1][1] * c[2][0]) / det;
    inv[2][1] = -(c[0][0] * c[2][1] - c[0][1] * c[2][0]) / det;
    inv[2][2] = (c[0][0] * c[1][1] - c[0][1] * c[1][0]) / det;
    return inv;
}

Mat3 floor_covariance()
{
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        c[i][i] = kCovarianceFloor;
    return c;
}

double squared_distance(const Vec3& a, const Vec3& b)
{
    double d = 0;
    for (int i = 0; i < 3; ++i)
        d += (a[i] - b[i]) * (a[i] - b[i]);
    return d;
}

struct Accumulator {
    std::size_t count = 0;
    Vec3 sum{};
    Mat3 scatter{};
};

// Fits one side from per-pixel component indices. `fallback_means` fills empty
// components.
Gmm fit_side(const RgbImage& image, std::span<const std::uint8_t> labeling,
             const ComponentAssignment& assignment, std::uint8_t side, int k,
             const std::vector<Vec3>& fallback_means)
{
    std::vector<Accumulator> acc(static_cast<std::size_t>(k));
    std::size_t total = 0;
    for (std::size_t i = 0; i < image.size(); ++i) {
        if (labeling[i] != side)
            continue;
        const auto c = assignment[i];
        if (c < 0 || c >= k)
            throw InvalidInput("component index out of range");
        const Vec3 x = to_vec(image[i]);
        auto& a = acc[static_cast<std::size_t>(c)];
        ++a.count;
        for (int d = 0; d < 3; ++d)
            a.sum[d] += x[d];
        ++total;
    }
    if (total == 0)
        throw InvalidLabeling(side ? "no object pixels" : "no background pixels");

    std::vector<Vec3> means(static_cast<std::size_t>(k));
    for (std::size_t c = 0; c < acc.size(); ++c) {
        if (acc[c].count == 0) {
            means[c] = c < fallback_means.size() ? fallback_means[c] : Vec3{};
            continue;
        }
        for (int d = 0; d < 3; ++d)
            means[c][d] = acc[c].sum[d] / double(acc[c].count);
    }
    // second pass: centered scatter for accuracy
    for (std::size_t i = 0; i < image.size(); ++i) {
        if (labeling[i] != side)
            continue;
        const auto c = static_cast<std::size_t>(assignment[i]);
        const Vec3 x = to_vec(image[i]);
        Vec3 d{x[0] - means[c][0], x[1] - means[c][1], x[2] - means[c][2]};
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s)
                acc[c].scatter[r][s] += d[r] * d[s];
    }

    std::vector<GmmComponent> comps(static_cast<std::size_t>(k));
    for (std::size_t c = 0; c < acc.size(); ++c) {
        auto& comp = comps[c];
        comp.mean = means[c];
        comp.covariance = floor_covariance();
        if (acc[c].count == 0)
            continue;
        comp.weight = double(acc[c].count) / double(total);
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s)
                comp.covariance[r][s] += acc[c].scatter[r][s] / double(acc[c].count);
    }
    return Gmm(std::move(comps));
}

std::vector<Vec3> means_of(const Gmm& gmm)
{
    std::vector<Vec3> out;
    for (const auto& c : gmm.components())
        out.push_back(c.mean);
    return out;
}

double unit_uniform(std::mt19937_64& rng)
{
    return double(rng() >> 11) * 0x1.0p-53;
}

// k-means++ seeding followed by Lloyd iterations; returns centers and labels.
std::vector<Vec3> kmeans(const std::vector<Vec3>& points, int k, std::vector<std::int32_t>& labels)
{
    std::mt19937_64 rng(kKmeansSeed);
    std::vector<Vec3> centers;
    centers.push_back(points[rng() % points.size()]);
    std::vector<double> d2(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        d2[i] = squared_distance(points[i], centers[0]);
    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = 0;
        for (double v : d2)
            total += v;
        std::size_t pick = 0;
        if (total > 0) {
            const double u = unit_uniform(rng) * total;
            double run = 0;
            pick = points.size() - 1;
            for (std::size_t i = 0; i < points.size(); ++i) {
                run += d2[i];
                if (run > u) {
                    pick = i;
                    break;
                }
            }
        }
        centers.push_back(total > 0 ? points[pick] : centers.front());
        for (std::size_t i = 0; i < points.size(); ++i)
            d2[i] = std::min(d2[i], squared_distance(points[i], centers.back()));
    }

    labels.assign(points.size(), 0);
    for (int iter = 0; iter < kKmeansIterations; ++iter) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < centers.size(); ++c) {
                const double d = squared_distance(points[i], centers[c]);
                if (d < best) {
                    best = d;
                    labels[i] = static_cast<std::int32_t>(c);
                }
            }
        }
        std::vector<Vec3> sums(centers.size(), Vec3{});
        std::vector<std::size_t> counts(centers.size(), 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            auto& s = sums[static_cast<std::size_t>(labels[i])];
            for (int d = 0; d < 3; ++d)
                s[d] += points[i][d];
            ++counts[static_cast<std::size_t>(labels[i])];
        }
        for (std::size_t c = 0; c < centers.size(); ++c)
            if (counts[c] > 0)
                for (int d = 0; d < 3; ++d)
                    centers[c][d] = sums[c][d] / double(counts[c]);
    }
    return centers;
}

} // namespace

Vec3 to_vec(const Rgb& c) noexcept
{
    return Vec3{double(c.r), double(c.g), double(c.b)};
}

Gmm::Gmm(std::vector<GmmComponent> components) : components_(std::move(components))
{
    if (components_.empty())
        throw InvalidInput("a mixture needs at least one component");
    double total = 0;
    for (const auto& c : components_) {
        if (!(c.weight >= 0))
            throw InvalidInput("negative mixture weight");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw InvalidInput("mixture weights must sum to 1");

    cache_.resize(components_.size());
    for (std::size_t k = 0; k < components_.size(); ++k) {
        const auto& c = components_[k];
        const double det = determinant(c.covariance);
        if (!(det > 0) || !std::isfinite(det))
            throw NumericalError("covariance is not positive definite");
        cache_[k].inverse = inverse(c.covariance, det);
        cache_[k].log_norm = c.weight > 0 ? std::log(c.weight) - 1.5 * std::log(2 * std::numbers::pi) -
                                                0.5 * std::log(det)
                                          : kNegInf;
    }
}

double Gmm::component_log_density(std::size_t k, const Vec3& x) const
{
    const auto& c = components_.at(k);
    const auto& cache = cache_[k];
    if (cache.log_norm == kNegInf)
        return kNegInf;
    const Vec3 d{x[0] - c.mean[0], x[1] - c.mean[1], x[2] - c.mean[2]};
    double m = 0;
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s)
            m += d[r] * cache.inverse[r][s] * d[s];
    return cache.log_norm - 0.5 * m;
}

double Gmm::log_density(const Vec3& x) const
{
    double best = kNegInf;
    for (std::size_t k = 0; k < components_.size(); ++k)
        best = std::max(best, component_log_density(k, x));
    return best;
}

std::size_t Gmm::best_component(const Vec3& x) const
{
    std::size_t best_k = 0;
    double best = kNegInf;
    for (std::size_t k = 0; k < components_.size(); ++k) {
        const double v = component_log_density(k, x);
        if (v > best) {
            best = v;
            best_k = k;
        }
    }
    return best_k;
}

double gmm_density(const Vec3& x, const Gmm& gmm)
{
    return std::exp(gmm.log_density(x));
}

GmmPair fit_gmms(const RgbImage& image, std::span<const std::uint8_t> labeling,
                 const ComponentAssignment& assignment, int k, const GmmPair* fallback)
{
    if (labeling.size() != image.size() || assignment.size() != image.size())
        throw InvalidInput("labeling / assignment size does not match the image");
    if (k < 1)
        throw InvalidInput("component count must be >= 1");

    auto fit = [&](std::uint8_t side) -> Gmm {
        const Gmm* prev = fallback ? &fallback->side(side) : nullptr;
        try {
            return fit_side(image, labeling, assignment, side, k, prev ? means_of(*prev) : std::vector<Vec3>{});
        } catch (const InvalidLabeling&) {
            if (prev)
                return *prev;
            throw;
        }
    };
    GmmPair out;
    out.background = fit(0);
    out.object = fit(1);
    return out;
}

GmmInit init_gmms(const RgbImage& image, std::span<const std::uint8_t> labeling, int k)
{
    if (labeling.size() != image.size())
        throw InvalidInput("labeling size does not match the image");
    if (k < 1)
        throw InvalidInput("component count must be >= 1");

    GmmInit out;
    out.assignment.assign(image.size(), 0);
    std::vector<std::vector<Vec3>> centers(2);
    for (std::uint8_t side = 0; side < 2; ++side) {
        std::vector<Vec3> points;
        std::vector<std::size_t> where;
        for (std::size_t i = 0; i < image.size(); ++i) {
            if (labeling[i] == side) {
                points.push_back(to_vec(image[i]));
                where.push_back(i);
            }
        }
        if (points.empty())
            throw InvalidLabeling(side ? "initial labeling has no object pixels"
                                       : "initial labeling has no background pixels");
        std::vector<std::int32_t> labels;
        centers[side] = kmeans(points, k, labels);
        for (std::size_t j = 0; j < where.size(); ++j)
            out.assignment[where[j]] = labels[j];
    }
    out.gmms.background = fit_side(image, labeling, out.assignment, 0, k, centers[0]);
    out.gmms.object = fit_side(image, labeling, out.assignment, 1, k, centers[1]);
    return out;
}

ComponentAssignment assign_components(const RgbImage& image, std::span<const std::uint8_t> labeling,
                                      const GmmPair& gmms)
{
    if (labeling.size() != image.size())
        throw InvalidInput("labeling size does not match the image");
    ComponentAssignment out(image.size());
    for (std::size_t i = 0; i < image.size(); ++i)
        out[i] = static_cast<std::int32_t>(gmms.side(labeling[i]).best_component(to_vec(image[i])));
    return out;
}

} // namespace nccut
