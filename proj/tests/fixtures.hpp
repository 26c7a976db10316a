#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "nccut/image.hpp"
#include "nccut/imagegraph.hpp"

namespace fixtures {

struct Fixture {
    std::string name;
    nccut::RgbImage image;
    nccut::Mask gt; ///< 1 = object
};

/// Uniform noise in [-amp, amp] from raw engine output, so values do not
/// depend on the standard library's distribution implementations.
class Noise {
public:
    explicit Noise(std::uint64_t seed) : rng_(seed) {}
    int operator()(int amp) { return amp == 0 ? 0 : static_cast<int>(rng_() % std::uint64_t(2 * amp + 1)) - amp; }
    double unit() { return double(rng_() >> 11) * 0x1.0p-53; }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Dark square on a light ground, no noise.
Fixture two_tone_square(int size = 120, int margin = 40);

/// Blue ellipse on a beige ground with blurred edges and noise.
Fixture noisy_ellipse();

/// Dark ring whose hole shows the ground color: the hole is background that is
/// cut off from every other background pixel. No blur. Radii 70 and 20,
/// centered on a `size` x `size` canvas.
Fixture ring_with_hole(int noise = 20, std::uint64_t seed = 7, int size = 200);

/// 3x3 grid of 20x20 blocks. Blocks 6, 7, 8 are dark; block 1 is light with a
/// zero-mean striped perturbation; the rest are clean light blocks.
struct NineRegion {
    nccut::RgbImage image;
    nccut::RegionMap regions;
    nccut::RegionGraph graph;
};
NineRegion nine_region_grid();

/// Random region graph with mu_T, mu_I in [0, 1]; edge density `p`.
nccut::RegionGraph random_graph(Noise& rng, int n, double p);

} // namespace fixtures
