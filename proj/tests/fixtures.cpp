#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace nccut;

namespace fixtures {

namespace {

std::uint8_t clamp8(double v)
{
    return static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
}

// separable Gaussian blur of a [0, 1] coverage map, edges replicated
std::vector<double> blur(const std::vector<double>& a, int w, int h, double sigma)
{
    const int k = static_cast<int>(std::ceil(3 * sigma));
    std::vector<double> ker(static_cast<std::size_t>(2 * k + 1));
    double sum = 0;
    for (int i = -k; i <= k; ++i)
        sum += ker[static_cast<std::size_t>(i + k)] = std::exp(-i * i / (2 * sigma * sigma));
    for (double& v : ker)
        v /= sum;
    std::vector<double> tmp(a.size()), out(a.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 0;
            for (int i = -k; i <= k; ++i)
                v += ker[static_cast<std::size_t>(i + k)] * a[static_cast<std::size_t>(y * w + std::clamp(x + i, 0, w - 1))];
            tmp[static_cast<std::size_t>(y * w + x)] = v;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = 0;
            for (int i = -k; i <= k; ++i)
                v += ker[static_cast<std::size_t>(i + k)] * tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1) * w + x)];
            out[static_cast<std::size_t>(y * w + x)] = v;
        }
    return out;
}

} // namespace

Fixture two_tone_square(int size, int margin)
{
    Fixture f{"two_tone_square", RgbImage(size, size, Rgb{210, 210, 210}), Mask(size, size, 0)};
    for (int y = margin; y < size - margin; ++y)
        for (int x = margin; x < size - margin; ++x) {
            f.image.at(x, y) = Rgb{40, 40, 40};
            f.gt.at(x, y) = 1;
        }
    return f;
}

Fixture noisy_ellipse()
{
    const int w = 160, h = 120;
    Fixture f{"noisy_ellipse", RgbImage(w, h), Mask(w, h, 0)};
    std::vector<double> cover(static_cast<std::size_t>(w * h));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double dx = (x + 0.5 - 80) / 45.0;
            const double dy = (y + 0.5 - 60) / 30.0;
            const bool in = dx * dx + dy * dy < 1.0;
            f.gt.at(x, y) = in;
            cover[static_cast<std::size_t>(y * w + x)] = in;
        }
    cover = blur(cover, w, h, 1.0);
    Noise noise(11);
    const double bg[3] = {200, 190, 170};
    const double fg[3] = {60, 90, 160};
    for (std::size_t i = 0; i < f.image.size(); ++i) {
        const double a = cover[i];
        auto c = [&](int k) { return clamp8(bg[k] + a * (fg[k] - bg[k]) + noise(12)); };
        f.image[i] = Rgb{c(0), c(1), c(2)};
    }
    return f;
}

Fixture ring_with_hole(int noise_amp, std::uint64_t seed, int size)
{
    const int w = size, h = size;
    const double mid = size / 2.0;
    Fixture f{"ring_with_hole", RgbImage(w, h), Mask(w, h, 0)};
    Noise noise(seed);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double d = std::hypot(x + 0.5 - mid, y + 0.5 - mid);
            const bool obj = d < 70 && d >= 20;
            f.gt.at(x, y) = obj;
            const double dark = obj ? 140 : 0;
            auto c = [&](double base) { return clamp8(base - dark + noise(noise_amp)); };
            f.image.at(x, y) = Rgb{c(190), c(200), c(210)};
        }
    return f;
}

NineRegion nine_region_grid()
{
    const int b = 20;
    RgbImage img(3 * b, 3 * b);
    Grid<std::int32_t> labels(3 * b, 3 * b);
    for (int y = 0; y < 3 * b; ++y)
        for (int x = 0; x < 3 * b; ++x) {
            const int r = (y / b) * 3 + x / b;
            labels.at(x, y) = r;
            if (r >= 6) {
                img.at(x, y) = Rgb{50, 50, 50};
            } else if (r == 1) {
                // +-50 stripes two pixels wide, visible to the gradient operator;
                // the block mean stays exactly at the light color
                const std::uint8_t v = ((x / 2) % 2) ? 250 : 150;
                img.at(x, y) = Rgb{v, v, v};
            } else {
                img.at(x, y) = Rgb{200, 200, 200};
            }
        }
    NineRegion out{img, RegionMap::from_labels(img, labels), {}};
    out.graph = build_region_graph(out.image, out.regions, 30.0);
    return out;
}

RegionGraph random_graph(Noise& rng, int n, double p)
{
    RegionGraph g(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
        g.set_self_indeterminacy(a, rng.unit());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (rng.unit() < p)
                g.set_edge(a, b, rng.unit(), rng.unit());
    return g;
}

} // namespace fixtures
