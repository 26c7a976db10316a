#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nccut/config.hpp"
#include "nccut/image.hpp"

namespace nccut {

struct MetricsReport {
    double err_percent = 0; ///< wrong labels inside the ROI, in percent
    double rand_index = 1;
    double gce = 0;
    double bde = 0;         ///< pixels
    double iou_obj = 1;
    double iou_bkg = 1;
    double iou_avg = 1;
};

/// Compares a predicted mask against ground truth. ERR is restricted to the
/// ROI; every other metric uses the whole image.
MetricsReport compute_metrics(const Mask& pred, const Mask& gt, const Mask& roi);

/// Pixels with a 4-neighbor of a different label.
Mask boundary_pixels(const Mask& mask);

/// Inclusive pixel rectangle.
struct PixelBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    long long area() const noexcept { return (long long)(x1 - x0 + 1) * (y1 - y0 + 1); }
    friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

/// Tight bounding box of the nonzero pixels; throws on an empty mask.
PixelBox bounding_box(const Mask& mask);

/// Moves each side of `box` toward the image border by alpha times its margin
/// (rounded half away from zero).
PixelBox loosen_box(const PixelBox& box, int width, int height, double alpha);

/// Polygon whose strict interior holds exactly the pixel centers of `box`.
Polygon box_polygon(const PixelBox& box);

struct LoosenessLevel {
    double alpha = 0;
    double looseness = 1; ///< area ratio against the tight box
    PixelBox box;
};

/// alpha = 0 (the tight box) followed by alpha = 1/levels, ..., 1.
std::vector<LoosenessLevel> looseness_sweep(const Mask& gt, int levels);

struct DatasetRow {
    std::string name;
    bool ok = false;
    std::string error;
    MetricsReport metrics;
    int iterations = 0;
};

struct DatasetReport {
    std::vector<DatasetRow> rows;
    MetricsReport mean; ///< over successful rows
    std::size_t evaluated = 0;
};

struct DatasetOptions {
    /// Holds images/NAME.png and gt/NAME.png.
    std::filesystem::path dataset;
    /// ROI polygons as NAME.json; used when set.
    std::optional<std::filesystem::path> roi_dir;
    /// Otherwise rectangle ROIs from the ground-truth box loosened by this alpha.
    double looseness_alpha = 0;
    Config config;
};

DatasetReport evaluate_dataset(const DatasetOptions& options);

std::string report_json(const DatasetReport& report);
std::string report_csv(const DatasetReport& report);

} // namespace nccut
