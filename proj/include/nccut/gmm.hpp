#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nccut/image.hpp"

namespace nccut {

inline constexpr int kDefaultGmmComponents = 5;
inline constexpr double kCovarianceFloor = 0.01;
inline constexpr int kKmeansIterations = 10;
inline constexpr std::uint64_t kKmeansSeed = 0x5eed5eedULL;

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

struct GmmComponent {
    double weight = 0;
    Vec3 mean{};
    Mat3 covariance{};
};

/// Gaussian mixture over RGB. Weights sum to 1; every covariance carries the
/// regularization floor on its diagonal.
class Gmm {
public:
    Gmm() = default;
    explicit Gmm(std::vector<GmmComponent> components);

    std::size_t size() const noexcept { return components_.size(); }
    const std::vector<GmmComponent>& components() const noexcept { return components_; }
    const GmmComponent& component(std::size_t k) const { return components_.at(k); }

    /// log(weight_k * N(x; mean_k, cov_k)); -infinity for zero-weight components.
    double component_log_density(std::size_t k, const Vec3& x) const;
    /// log of max_k weight_k * N(x; mean_k, cov_k).
    double log_density(const Vec3& x) const;
    /// Index of the maximizing component (lowest index on ties).
    std::size_t best_component(const Vec3& x) const;

private:
    struct Cache {
        Mat3 inverse{};
        double log_norm = 0; // log weight - 1.5 log(2 pi) - 0.5 log det
    };
    std::vector<GmmComponent> components_;
    std::vector<Cache> cache_;
};

/// max over components of weight * N(x), the mixture score used by the unary term.
double gmm_density(const Vec3& x, const Gmm& gmm);

struct GmmPair {
    Gmm background; ///< label 0
    Gmm object;     ///< label 1

    const Gmm& side(std::uint8_t label) const noexcept { return label ? object : background; }
};

/// Per-pixel component index, interpreted on the pixel's current label side.
using ComponentAssignment = std::vector<std::int32_t>;

Vec3 to_vec(const Rgb& c) noexcept;

/// Exact per-component sample statistics (population covariance + floor).
/// Empty components get weight 0, floor covariance, and keep `fallback_means`
/// when provided.
GmmPair fit_gmms(const RgbImage& image, std::span<const std::uint8_t> labeling,
                 const ComponentAssignment& assignment, int k = kDefaultGmmComponents,
                 const GmmPair* fallback = nullptr);

struct GmmInit {
    GmmPair gmms;
    ComponentAssignment assignment;
};

/// k-means++ seeding (fixed seed) and Lloyd iterations per side, then fit_gmms.
GmmInit init_gmms(const RgbImage& image, std::span<const std::uint8_t> labeling,
                  int k = kDefaultGmmComponents);

ComponentAssignment assign_components(const RgbImage& image, std::span<const std::uint8_t> labeling,
                                      const GmmPair& gmms);

} // namespace nccut
