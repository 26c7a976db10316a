#include "nccut/export.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nccut {

namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c)
{
    if (c >= 'A' && c <= 'Z')
        return c - 'A';
    if (c >= 'a' && c <= 'z')
        return c - 'a' + 26;
    if (c >= '0' && c <= '9')
        return c - '0' + 52;
    if (c == '+')
        return 62;
    if (c == '/')
        return 63;
    return -1;
}

} // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes)
{
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        const std::uint32_t v = (std::uint32_t(bytes[i]) << 16) | (std::uint32_t(bytes[i + 1]) << 8) | bytes[i + 2];
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += kAlphabet[(v >> 6) & 63];
        out += kAlphabet[v & 63];
    }
    const std::size_t rest = bytes.size() - i;
    if (rest == 1) {
        const std::uint32_t v = std::uint32_t(bytes[i]) << 16;
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += "==";
    } else if (rest == 2) {
        const std::uint32_t v = (std::uint32_t(bytes[i]) << 16) | (std::uint32_t(bytes[i + 1]) << 8);
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += kAlphabet[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

Bytes base64_decode(std::string_view text)
{
    if (text.size() % 4 != 0)
        throw DecodeError("base64 length is not a multiple of 4");
    Bytes out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        const bool last = i + 4 == text.size();
        int v[4];
        int pad = 0;
        for (int k = 0; k < 4; ++k) {
            const char c = text[i + static_cast<std::size_t>(k)];
            if (c == '=' && last && k >= 2) {
                v[k] = 0;
                ++pad;
                continue;
            }
            if (pad > 0 || (v[k] = decode_char(c)) < 0)
                throw DecodeError("invalid base64 character");
        }
        const std::uint32_t n = (std::uint32_t(v[0]) << 18) | (std::uint32_t(v[1]) << 12) |
                                (std::uint32_t(v[2]) << 6) | std::uint32_t(v[3]);
        out.push_back(static_cast<std::uint8_t>(n >> 16));
        if (pad < 2)
            out.push_back(static_cast<std::uint8_t>(n >> 8));
        if (pad < 1)
            out.push_back(static_cast<std::uint8_t>(n));
    }
    return out;
}

RgbImage truth_map(const RegionMap& regions, const NcResult& nc)
{
    if (nc.region_count() != regions.region_count())
        throw InvalidInput("NC result does not match the region map");
    // piecewise-linear blue -> cyan -> yellow -> red
    static constexpr std::array<std::array<double, 3>, 4> stops = {{{0, 0, 255}, {0, 255, 255}, {255, 255, 0}, {255, 0, 0}}};
    std::vector<Rgb> lut(regions.region_count());
    for (std::size_t r = 0; r < lut.size(); ++r) {
        const double t = std::clamp(nc.values[r].truth, 0.0, 1.0) * 3.0;
        const auto k = std::min<std::size_t>(2, static_cast<std::size_t>(t));
        const double f = t - double(k);
        auto mix = [&](int c) {
            return static_cast<std::uint8_t>(std::lround(stops[k][c] + f * (stops[k + 1][c] - stops[k][c])));
        };
        lut[r] = Rgb{mix(0), mix(1), mix(2)};
    }
    RgbImage out(regions.width(), regions.height());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = lut[static_cast<std::size_t>(regions.label(i))];
    return out;
}

nlohmann::json region_boundaries(const RegionMap& regions)
{
    const auto& l = regions.labels();
    const int w = l.width();
    const int h = l.height();
    nlohmann::json out = nlohmann::json::array();
    // horizontal cracks between rows y-1 and y
    for (int y = 1; y < h; ++y) {
        int start = -1;
        for (int x = 0; x <= w; ++x) {
            const bool edge = x < w && l.at(x, y - 1) != l.at(x, y);
            if (edge && start < 0)
                start = x;
            if (!edge && start >= 0) {
                out.push_back({start, y, x, y});
                start = -1;
            }
        }
    }
    // vertical cracks between columns x-1 and x
    for (int x = 1; x < w; ++x) {
        int start = -1;
        for (int y = 0; y <= h; ++y) {
            const bool edge = y < h && l.at(x - 1, y) != l.at(x, y);
            if (edge && start < 0)
                start = y;
            if (!edge && start >= 0) {
                out.push_back({x, start, x, y});
                start = -1;
            }
        }
    }
    return out;
}

nlohmann::json region_info(const RegionMap& regions)
{
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t r = 0; r < regions.region_count(); ++r) {
        const auto& s = regions.stats(r);
        out.push_back({{"id", r},
                       {"pixels", s.pixel_count},
                       {"mean_color", {s.mean_color[0], s.mean_color[1], s.mean_color[2]}},
                       {"inhomogeneity", s.inhomogeneity}});
    }
    return out;
}

nlohmann::json superpixels_json(const RegionMap& regions)
{
    return {{"width", regions.width()},
            {"height", regions.height()},
            {"region_count", regions.region_count()},
            {"labels_png", base64_encode(encode_png(label_image16(regions)))},
            {"boundaries", region_boundaries(regions)},
            {"regions", region_info(regions)}};
}

nlohmann::json nc_json(const NcResult& nc)
{
    nlohmann::json regions = nlohmann::json::array();
    for (std::size_t r = 0; r < nc.region_count(); ++r) {
        regions.push_back({{"id", r},
                           {"truth", nc.values[r].truth},
                           {"indeterminacy", nc.values[r].indeterminacy},
                           {"parent", nc.forest.parent[r]},
                           {"root", nc.forest.root[r]}});
    }
    return {{"seeds", nc.seeds.regions()}, {"regions", regions}};
}

nlohmann::json candidates_json(const CandidateSets& cands, const ModifiedForest& forest)
{
    nlohmann::json aux = nlohmann::json::array();
    for (std::size_t r = 0; r < forest.aux.size(); ++r)
        for (auto g : forest.aux[r])
            if (static_cast<std::int32_t>(r) < g)
                aux.push_back({r, g});
    return {{"p_obj", cands.p_obj}, {"p_bkg", cands.p_bkg}, {"b_set", cands.b_set}, {"u_b", cands.u_b},
            {"tau", cands.tau},     {"npre", forest.npre},  {"nrt", forest.nrt},     {"aux_edges", aux}};
}

nlohmann::json trace_json(const SegmentResult& result, int max_iterations)
{
    nlohmann::json its = nlohmann::json::array();
    for (const auto& t : result.trace) {
        its.push_back({{"iteration", t.iteration},
                       {"changed_pixels", t.changed_pixels},
                       {"gamma", t.gamma},
                       {"energy", t.energy},
                       {"seed_regions", t.seed_count},
                       {"p_obj", t.p_obj},
                       {"p_bkg", t.p_bkg}});
    }
    const bool converged = !result.trace.empty() && result.trace.back().changed_pixels == 0;
    return {{"iterations", its}, {"converged", converged}, {"max_iterations", max_iterations}};
}

nlohmann::json segment_payload(const SegmentResult& result, int max_iterations)
{
    nlohmann::json gammas = nlohmann::json::array();
    for (const auto& t : result.trace)
        gammas.push_back(t.gamma);
    return {{"mask", base64_encode(encode_mask_png(result.mask))},
            {"width", result.mask.width()},
            {"height", result.mask.height()},
            {"iterations", result.trace.size()},
            {"gamma", gammas},
            {"trace", trace_json(result, max_iterations)}};
}

} // namespace nccut
