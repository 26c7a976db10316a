#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nccut/config.hpp"
#include "nccut/forest_ops.hpp"
#include "nccut/gmm.hpp"
#include "nccut/imagegraph.hpp"
#include "nccut/maxflow.hpp"
#include "nccut/nc_cut.hpp"
#include "nccut/nc_engine.hpp"

namespace nccut {

/// Validates a polygon: >= 3 finite vertices and no self-intersection.
void validate_polygon(const Polygon& polygon);

/// 1 for pixels whose center lies strictly inside the polygon (even-odd rule).
Mask rasterize_polygon(const Polygon& polygon, int width, int height);

/// Image plus its superpixels and region graph; independent of the ROI.
struct PreparedImage {
    RgbImage image;
    RegionMap regions;
    RegionGraph graph;
};

PreparedImage prepare_regions(RgbImage image, const Config& config);

struct IterationSummary {
    int iteration = 0;
    std::size_t changed_pixels = 0;
    double gamma = 0;
    /// Energy of the new labeling (cut value plus the removed unary shifts).
    double energy = 0;
    std::size_t seed_count = 0;
    std::size_t p_obj = 0;
    std::size_t p_bkg = 0;
};

struct SegmentResult {
    Mask mask;
    std::vector<IterationSummary> trace;
};

struct SegSession {
    Config config;
    RgbImage image;
    Polygon roi;
    Mask roi_mask;
    RegionMap regions;
    RegionGraph graph;
    /// Regions with more than half their pixels outside the ROI.
    std::vector<std::int32_t> outside_regions;
    SeedSet seeds;
    Mask labeling;
    GmmPair gmms;
    ComponentAssignment assignment;
    NcResult nc;
    CandidateSets candidates;
    ModifiedForest forest;
    double gamma = 1.0;
    /// Iterations run by the current segment call.
    int iteration = 0;
    /// Per-region stroke label: -1 none, 0 background, 1 object.
    std::vector<std::int8_t> region_constraint;
    bool segmented = false;
    SegmentResult last;
};

SegSession init_session(RgbImage image, Polygon roi, const Config& config);
SegSession init_session(PreparedImage prepared, Polygon roi, const Config& config);

/// One pass of: refit appearance, update seeds, connectedness, candidate
/// pruning/linking, network construction and min-cut.
IterationSummary run_iteration(SegSession& session);

/// Iterates until the labeling stops changing or max_iterations is hit.
SegmentResult segment(SegSession& session);

struct Stroke {
    /// Pixel positions; consecutive points are joined by straight lines.
    std::vector<Point> path;
    std::uint8_t label = 0;
};

/// Constrains every region touched by a stroke to the stroke's label (later
/// strokes win) and re-segments. Requires a prior segment call.
SegmentResult apply_edit(SegSession& session, std::span<const Stroke> strokes);

/// Forced per-pixel labels used by the cut: outside the ROI -> 0, stroked
/// regions -> their stroke label.
HardConstraints pixel_constraints(const SegSession& session);

/// Network built from the session's current appearance models, connectedness
/// and forest; after an iteration this is the network that iteration cut.
FlowNetwork current_network(const SegSession& session);

} // namespace nccut
