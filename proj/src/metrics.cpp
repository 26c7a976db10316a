#include "nccut/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "nccut/pipeline.hpp"
#include "nccut/png_io.hpp"
#include "nccut/roi_io.hpp"

namespace nccut {

namespace {

double pairs(double n)
{
    return n * (n - 1) / 2;
}

// Exact squared Euclidean distance transform (lower envelope of parabolas).
// Pixels without a target nearby keep a huge finite value.
constexpr double kFar = 1e20;

void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z)
{
    const int n = static_cast<int>(f.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto meet = [&](int q, int p) {
        return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p);
    };
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < n; ++q) {
        double s = meet(q, v[k]);
        while (s <= z[k]) {
            --k;
            s = meet(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q)
            ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

Grid<double> squared_distance_to(const Mask& targets)
{
    const int w = targets.width();
    const int h = targets.height();
    Grid<double> g(w, h, kFar);
    for (std::size_t i = 0; i < targets.size(); ++i)
        if (targets[i])
            g[i] = 0;
    const int m = std::max(w, h);
    std::vector<double> f(static_cast<std::size_t>(m)), d(static_cast<std::size_t>(m)), z(static_cast<std::size_t>(m) + 1);
    std::vector<int> v(static_cast<std::size_t>(m));
    f.resize(static_cast<std::size_t>(h));
    d.resize(static_cast<std::size_t>(h));
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y)
            f[static_cast<std::size_t>(y)] = g.at(x, y);
        edt_1d(f, d, v, z);
        for (int y = 0; y < h; ++y)
            g.at(x, y) = d[static_cast<std::size_t>(y)];
    }
    f.resize(static_cast<std::size_t>(w));
    d.resize(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x)
            f[static_cast<std::size_t>(x)] = g.at(x, y);
        edt_1d(f, d, v, z);
        for (int x = 0; x < w; ++x)
            g.at(x, y) = d[static_cast<std::size_t>(x)];
    }
    return g;
}

double mean_distance(const Mask& from, const Grid<double>& dist2)
{
    double sum = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < from.size(); ++i) {
        if (!from[i])
            continue;
        sum += std::sqrt(dist2[i]);
        ++count;
    }
    return count ? sum / double(count) : 0.0;
}

long long round_half_away(double v)
{
    return static_cast<long long>(std::round(v));
}

std::vector<std::filesystem::path> png_files(const std::filesystem::path& dir)
{
    std::vector<std::filesystem::path> out;
    if (!std::filesystem::is_directory(dir))
        return out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".png")
            out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

Mask boundary_pixels(const Mask& mask)
{
    const int w = mask.width();
    const int h = mask.height();
    Mask out(w, h, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const bool v = mask.at(x, y) != 0;
            if ((x > 0 && (mask.at(x - 1, y) != 0) != v) || (x + 1 < w && (mask.at(x + 1, y) != 0) != v) ||
                (y > 0 && (mask.at(x, y - 1) != 0) != v) || (y + 1 < h && (mask.at(x, y + 1) != 0) != v))
                out.at(x, y) = 1;
        }
    }
    return out;
}

MetricsReport compute_metrics(const Mask& pred, const Mask& gt, const Mask& roi)
{
    if (pred.width() != gt.width() || pred.height() != gt.height() || roi.width() != gt.width() ||
        roi.height() != gt.height())
        throw InvalidInput("masks differ in size");

    // confusion[p][g]
    double confusion[2][2] = {{0, 0}, {0, 0}};
    std::size_t roi_size = 0;
    std::size_t roi_wrong = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        const int p = pred[i] != 0;
        const int g = gt[i] != 0;
        confusion[p][g] += 1;
        if (roi[i]) {
            ++roi_size;
            roi_wrong += p != g;
        }
    }
    if (roi_size == 0)
        throw InvalidInput("ROI is empty");

    MetricsReport m;
    m.err_percent = 100.0 * double(roi_wrong) / double(roi_size);

    const double n = double(gt.size());
    const double pred_size[2] = {confusion[0][0] + confusion[0][1], confusion[1][0] + confusion[1][1]};
    const double gt_size[2] = {confusion[0][0] + confusion[1][0], confusion[0][1] + confusion[1][1]};
    double same_both = 0;
    for (auto& row : confusion)
        for (double c : row)
            same_both += pairs(c);
    const double same_pred = pairs(pred_size[0]) + pairs(pred_size[1]);
    const double same_gt = pairs(gt_size[0]) + pairs(gt_size[1]);
    const double total_pairs = pairs(n);
    m.rand_index = total_pairs > 0 ? 1.0 - (same_pred + same_gt - 2 * same_both) / total_pairs : 1.0;

    // local refinement errors summed per direction
    double e_pg = 0;
    double e_gp = 0;
    for (int p = 0; p < 2; ++p) {
        for (int g = 0; g < 2; ++g) {
            const double c = confusion[p][g];
            if (c == 0)
                continue;
            e_pg += c * (pred_size[p] - c) / pred_size[p];
            e_gp += c * (gt_size[g] - c) / gt_size[g];
        }
    }
    m.gce = std::min(e_pg, e_gp) / n;

    auto iou = [&](int cls) {
        const double tp = confusion[cls][cls];
        const double fp = confusion[cls][1 - cls];
        const double fn = confusion[1 - cls][cls];
        const double denom = tp + fp + fn;
        return denom > 0 ? tp / denom : 1.0;
    };
    m.iou_obj = iou(1);
    m.iou_bkg = iou(0);
    m.iou_avg = (m.iou_obj + m.iou_bkg) / 2;

    const Mask bp = boundary_pixels(pred);
    const Mask bg = boundary_pixels(gt);
    const bool bp_any = std::find(bp.begin(), bp.end(), 1) != bp.end();
    const bool bg_any = std::find(bg.begin(), bg.end(), 1) != bg.end();
    if (bp_any && bg_any) {
        m.bde = (mean_distance(bp, squared_distance_to(bg)) + mean_distance(bg, squared_distance_to(bp))) / 2;
    } else if (bp_any != bg_any) {
        m.bde = std::hypot(double(gt.width()), double(gt.height()));
    }
    return m;
}

PixelBox bounding_box(const Mask& mask)
{
    PixelBox b{mask.width(), mask.height(), -1, -1};
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.at(x, y))
                continue;
            b.x0 = std::min(b.x0, x);
            b.y0 = std::min(b.y0, y);
            b.x1 = std::max(b.x1, x);
            b.y1 = std::max(b.y1, y);
        }
    }
    if (b.x1 < 0)
        throw InvalidInput("mask has no object pixels");
    return b;
}

PixelBox loosen_box(const PixelBox& box, int width, int height, double alpha)
{
    if (!(alpha >= 0 && alpha <= 1))
        throw InvalidInput("looseness fraction must be in [0, 1]");
    PixelBox out;
    out.x0 = box.x0 - static_cast<int>(round_half_away(alpha * box.x0));
    out.y0 = box.y0 - static_cast<int>(round_half_away(alpha * box.y0));
    out.x1 = box.x1 + static_cast<int>(round_half_away(alpha * (width - 1 - box.x1)));
    out.y1 = box.y1 + static_cast<int>(round_half_away(alpha * (height - 1 - box.y1)));
    return out;
}

Polygon box_polygon(const PixelBox& b)
{
    return Polygon{{double(b.x0), double(b.y0)},
                   {double(b.x1 + 1), double(b.y0)},
                   {double(b.x1 + 1), double(b.y1 + 1)},
                   {double(b.x0), double(b.y1 + 1)}};
}

std::vector<LoosenessLevel> looseness_sweep(const Mask& gt, int levels)
{
    if (levels < 1)
        throw InvalidInput("levels must be >= 1");
    const PixelBox tight = bounding_box(gt);
    std::vector<LoosenessLevel> out;
    for (int k = 0; k <= levels; ++k) {
        const double alpha = double(k) / levels;
        const PixelBox b = loosen_box(tight, gt.width(), gt.height(), alpha);
        out.push_back(LoosenessLevel{alpha, double(b.area()) / double(tight.area()), b});
    }
    return out;
}

DatasetReport evaluate_dataset(const DatasetOptions& options)
{
    DatasetReport report;
    for (const auto& image_path : png_files(options.dataset / "images")) {
        DatasetRow row;
        row.name = image_path.stem().string();
        try {
            const auto gt_path = options.dataset / "gt" / image_path.filename();
            if (!std::filesystem::exists(gt_path))
                throw InvalidInput("missing ground truth " + gt_path.string());
            RgbImage image = load_image(image_path);
            const Mask gt = decode_mask_png(read_file(gt_path));
            if (gt.width() != image.width() || gt.height() != image.height())
                throw InvalidInput("ground truth size differs from the image");
            Polygon roi;
            if (options.roi_dir)
                roi = load_polygon(*options.roi_dir / (row.name + ".json"));
            else
                roi = box_polygon(loosen_box(bounding_box(gt), gt.width(), gt.height(), options.looseness_alpha));
            SegSession session = init_session(std::move(image), roi, options.config);
            const SegmentResult result = segment(session);
            row.metrics = compute_metrics(result.mask, gt, session.roi_mask);
            row.iterations = static_cast<int>(result.trace.size());
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }

    MetricsReport sum{0, 0, 0, 0, 0, 0, 0};
    for (const auto& r : report.rows) {
        if (!r.ok)
            continue;
        ++report.evaluated;
        sum.err_percent += r.metrics.err_percent;
        sum.rand_index += r.metrics.rand_index;
        sum.gce += r.metrics.gce;
        sum.bde += r.metrics.bde;
        sum.iou_obj += r.metrics.iou_obj;
        sum.iou_bkg += r.metrics.iou_bkg;
        sum.iou_avg += r.metrics.iou_avg;
    }
    if (report.evaluated) {
        const double k = double(report.evaluated);
        report.mean = MetricsReport{sum.err_percent / k, sum.rand_index / k, sum.gce / k, sum.bde / k,
                                    sum.iou_obj / k,     sum.iou_bkg / k,    sum.iou_avg / k};
    }
    return report;
}

namespace {

nlohmann::json metrics_json(const MetricsReport& m)
{
    return {{"err", m.err_percent}, {"ri", m.rand_index}, {"gce", m.gce},       {"bde", m.bde},
            {"iou_obj", m.iou_obj}, {"iou_bkg", m.iou_bkg}, {"iou_avg", m.iou_avg}};
}

} // namespace

std::string report_json(const DatasetReport& report)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json row = {{"name", r.name}, {"ok", r.ok}};
        if (r.ok) {
            row["metrics"] = metrics_json(r.metrics);
            row["iterations"] = r.iterations;
        } else {
            row["error"] = r.error;
        }
        rows.push_back(std::move(row));
    }
    nlohmann::json out = {{"images", rows}, {"evaluated", report.evaluated}};
    out["mean"] = report.evaluated ? metrics_json(report.mean) : nlohmann::json(nullptr);
    return out.dump(2) + "\n";
}

std::string report_csv(const DatasetReport& report)
{
    std::ostringstream out;
    out.precision(10);
    out << "name,ok,err,ri,gce,bde,iou_obj,iou_bkg,iou_avg,iterations,error\n";
    auto metrics = [&](const MetricsReport& m) {
        out << m.err_percent << ',' << m.rand_index << ',' << m.gce << ',' << m.bde << ',' << m.iou_obj << ','
            << m.iou_bkg << ',' << m.iou_avg;
    };
    for (const auto& r : report.rows) {
        out << r.name << ',' << (r.ok ? 1 : 0) << ',';
        if (r.ok) {
            metrics(r.metrics);
            out << ',' << r.iterations << ",\n";
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), '"', '\'');
            out << ",,,,,,,,\"" << msg << "\"\n";
        }
    }
    if (report.evaluated) {
        out << "MEAN," << report.evaluated << ',';
        metrics(report.mean);
        out << ",,\n";
    }
    return out.str();
}

} // namespace nccut
