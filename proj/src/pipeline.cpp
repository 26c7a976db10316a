#include "nccut/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "nccut/maxflow.hpp"

namespace nccut {

namespace {

double orient(const Point& a, const Point& b, const Point& c)
{
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

int sign(double v)
{
    return (v > 0) - (v < 0);
}

bool on_segment(const Point& a, const Point& b, const Point& p)
{
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d)
{
    const int o1 = sign(orient(a, b, c));
    const int o2 = sign(orient(a, b, d));
    const int o3 = sign(orient(c, d, a));
    const int o4 = sign(orient(c, d, b));
    if (o1 != o2 && o3 != o4)
        return true;
    return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
           (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
}

void bresenham(int x0, int y0, int x1, int y1, auto&& visit)
{
    const int dx = std::abs(x1 - x0);
    const int dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1;
    const int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        visit(x0, y0);
        if (x0 == x1 && y0 == y1)
            break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

std::vector<double> outside_fraction(const RegionMap& regions, const Mask& roi_mask)
{
    std::vector<std::size_t> outside(regions.region_count(), 0);
    for (std::size_t i = 0; i < roi_mask.size(); ++i)
        if (!roi_mask[i])
            ++outside[static_cast<std::size_t>(regions.label(i))];
    std::vector<double> frac(outside.size());
    for (std::size_t r = 0; r < frac.size(); ++r)
        frac[r] = double(outside[r]) / double(regions.stats(r).pixel_count);
    return frac;
}

SeedSet current_seeds(const SegSession& s)
{
    const std::size_t n = s.regions.region_count();
    std::vector<std::size_t> zeros(n, 0);
    for (std::size_t i = 0; i < s.labeling.size(); ++i)
        if (!s.labeling[i])
            ++zeros[static_cast<std::size_t>(s.regions.label(i))];
    std::vector<char> seed(n, 0);
    for (auto r : s.outside_regions)
        seed[static_cast<std::size_t>(r)] = 1;
    for (std::size_t r = 0; r < n; ++r) {
        if (double(zeros[r]) > 0.8 * double(s.regions.stats(r).pixel_count))
            seed[r] = 1;
        if (s.region_constraint[r] == 0)
            seed[r] = 1;
    }
    std::vector<std::int32_t> out;
    for (std::size_t r = 0; r < n; ++r)
        if (seed[r] && s.region_constraint[r] != 1)
            out.push_back(static_cast<std::int32_t>(r));
    if (out.empty())
        out = s.outside_regions;
    return SeedSet(std::move(out), n);
}

} // namespace

void validate_polygon(const Polygon& polygon)
{
    const std::size_t n = polygon.size();
    if (n < 3)
        throw InvalidRoi("polygon needs at least 3 vertices, got " + std::to_string(n));
    for (const auto& p : polygon)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw InvalidRoi("polygon vertex is not finite");
    for (std::size_t i = 0; i < n; ++i)
        if (polygon[i] == polygon[(i + 1) % n])
            throw InvalidRoi("polygon has repeated consecutive vertices");
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = polygon[i];
        const Point& b = polygon[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1))
                continue; // shares a vertex
            if (segments_intersect(a, b, polygon[j], polygon[(j + 1) % n]))
                throw InvalidRoi("polygon is self-intersecting");
        }
    }
}

Mask rasterize_polygon(const Polygon& polygon, int width, int height)
{
    Mask mask(width, height, 0);
    const std::size_t n = polygon.size();
    std::vector<double> xs;
    for (int y = 0; y < height; ++y) {
        const double cy = y + 0.5;
        xs.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = polygon[i];
            const Point& b = polygon[(i + 1) % n];
            if ((a.y > cy) != (b.y > cy))
                xs.push_back(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            const int x0 = std::max(0, static_cast<int>(std::floor(xs[k] - 0.5)));
            const int x1 = std::min(width - 1, static_cast<int>(std::ceil(xs[k + 1] - 0.5)));
            for (int x = x0; x <= x1; ++x) {
                const double cx = x + 0.5;
                if (cx > xs[k] && cx < xs[k + 1])
                    mask.at(x, y) = 1;
            }
        }
    }
    return mask;
}

PreparedImage prepare_regions(RgbImage image, const Config& config)
{
    config.validate();
    PreparedImage out;
    const int n = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(config.n_regions), image.size()));
    out.regions = slico(image, n);
    out.graph = build_region_graph(image, out.regions, config.delta_t);
    out.image = std::move(image);
    return out;
}

SegSession init_session(RgbImage image, Polygon roi, const Config& config)
{
    validate_polygon(roi);
    return init_session(prepare_regions(std::move(image), config), std::move(roi), config);
}

SegSession init_session(PreparedImage prepared, Polygon roi, const Config& config)
{
    config.validate();
    validate_polygon(roi);
    SegSession s;
    s.config = config;
    s.image = std::move(prepared.image);
    s.regions = std::move(prepared.regions);
    s.graph = std::move(prepared.graph);
    s.roi = std::move(roi);
    s.roi_mask = rasterize_polygon(s.roi, s.image.width(), s.image.height());
    const auto inside = static_cast<std::size_t>(std::count(s.roi_mask.begin(), s.roi_mask.end(), 1));
    if (inside == 0)
        throw InvalidRoi("polygon covers no pixel center");
    if (inside == s.roi_mask.size())
        throw InvalidRoi("polygon covers every pixel");

    const auto frac = outside_fraction(s.regions, s.roi_mask);
    for (std::size_t r = 0; r < frac.size(); ++r)
        if (frac[r] > 0.5)
            s.outside_regions.push_back(static_cast<std::int32_t>(r));
    if (s.outside_regions.empty()) {
        // every region straddles the polygon: fall back to the most-outside ones
        const double best = *std::max_element(frac.begin(), frac.end());
        for (std::size_t r = 0; r < frac.size(); ++r)
            if (frac[r] == best)
                s.outside_regions.push_back(static_cast<std::int32_t>(r));
    }
    s.region_constraint.assign(s.regions.region_count(), -1);
    s.labeling = s.roi_mask;
    s.seeds = SeedSet(s.outside_regions, s.regions.region_count());

    auto init = init_gmms(s.image, s.labeling.data(), s.config.k_gmm);
    s.gmms = std::move(init.gmms);
    s.assignment = std::move(init.assignment);
    return s;
}

HardConstraints pixel_constraints(const SegSession& s)
{
    HardConstraints forced(s.image.size(), -1);
    for (std::size_t i = 0; i < forced.size(); ++i) {
        const auto c = s.region_constraint[static_cast<std::size_t>(s.regions.label(i))];
        if (c >= 0)
            forced[i] = c;
        else if (!s.roi_mask[i])
            forced[i] = 0;
    }
    return forced;
}

FlowNetwork current_network(const SegSession& s)
{
    const RegionWeights rw = region_weights(s.nc, s.forest, s.config.delta_nc, s.config.t_clamp);
    return build_network(s.image, s.regions, rw, s.gmms, NetworkParams{s.gamma, s.config.eta}, pixel_constraints(s));
}

IterationSummary run_iteration(SegSession& s)
{
    const Config& cfg = s.config;

    s.assignment = assign_components(s.image, s.labeling.data(), s.gmms);
    s.gmms = fit_gmms(s.image, s.labeling.data(), s.assignment, cfg.k_gmm, &s.gmms);

    s.seeds = current_seeds(s);

    s.nc = cfg.indeterminacy_enabled ? compute_nc(s.graph, s.seeds)
                                     : compute_nc(s.graph.without_indeterminacy(), s.seeds);

    s.candidates = candidate_regions(s.nc, s.graph, s.regions, s.gmms.background, s.seeds, cfg.delta_b,
                                     cfg.epsilon, cfg.density_scale);
    s.forest = update_forest(s.nc, s.candidates, s.graph);

    s.gamma = compute_gamma(s.nc, cfg.delta_gamma);
    const FlowNetwork net = current_network(s);

    CutResult cut = max_flow_min_cut(net);
    IterationSummary out;
    for (std::size_t i = 0; i < cut.labeling.size(); ++i)
        out.changed_pixels += cut.labeling[i] != s.labeling[i];
    s.labeling = Mask(s.image.width(), s.image.height(), std::move(cut.labeling));

    out.iteration = ++s.iteration;
    out.gamma = s.gamma;
    out.energy = cut.cut_value + net.offset;
    out.seed_count = s.seeds.size();
    out.p_obj = s.candidates.p_obj.size();
    out.p_bkg = s.candidates.p_bkg.size();
    return out;
}

SegmentResult segment(SegSession& s)
{
    SegmentResult out;
    s.iteration = 0;
    do {
        out.trace.push_back(run_iteration(s));
    } while (out.trace.back().changed_pixels != 0 && s.iteration < s.config.max_iterations);
    out.mask = s.labeling;
    s.segmented = true;
    s.last = out;
    return out;
}

SegmentResult apply_edit(SegSession& s, std::span<const Stroke> strokes)
{
    if (!s.segmented)
        throw InvalidInput("apply_edit needs a segmented session");
    const int w = s.image.width();
    const int h = s.image.height();
    // validate everything before touching the session
    for (const auto& stroke : strokes) {
        if (stroke.label > 1)
            throw InvalidInput("stroke label must be 0 or 1");
        for (const auto& p : stroke.path)
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0 || p.y < 0 || p.x >= w || p.y >= h)
                throw InvalidInput("stroke point outside the image");
    }
    bool touched = false;
    for (const auto& stroke : strokes) {
        const auto mark = [&](int x, int y) {
            s.region_constraint[static_cast<std::size_t>(s.regions.label(x, y))] = static_cast<std::int8_t>(stroke.label);
            touched = true;
        };
        for (std::size_t k = 0; k < stroke.path.size(); ++k) {
            const int x0 = static_cast<int>(std::floor(stroke.path[k].x));
            const int y0 = static_cast<int>(std::floor(stroke.path[k].y));
            if (k + 1 < stroke.path.size())
                bresenham(x0, y0, static_cast<int>(std::floor(stroke.path[k + 1].x)),
                          static_cast<int>(std::floor(stroke.path[k + 1].y)), mark);
            else
                mark(x0, y0);
        }
    }
    if (!touched)
        return s.last;
    return segment(s);
}

} // namespace nccut
