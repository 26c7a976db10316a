#pragma once

#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nccut/pipeline.hpp"
#include "nccut/png_io.hpp"

namespace nccut {

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws DecodeError on malformed input.
Bytes base64_decode(std::string_view text);

/// Blue (T = 0) to red (T = 1) rendering of the per-region truth values.
RgbImage truth_map(const RegionMap& regions, const NcResult& nc);

/// Region boundaries as axis-aligned runs on the pixel-corner lattice:
/// [[x0, y0, x1, y1], ...].
nlohmann::json region_boundaries(const RegionMap& regions);

/// Region ids with pixel counts, mean colors and inhomogeneity.
nlohmann::json region_info(const RegionMap& regions);

/// Boundaries, region info and the 16-bit label image (base64 PNG).
nlohmann::json superpixels_json(const RegionMap& regions);

nlohmann::json nc_json(const NcResult& nc);
nlohmann::json candidates_json(const CandidateSets& cands, const ModifiedForest& forest);
nlohmann::json trace_json(const SegmentResult& result, int max_iterations);

/// Mask (base64 PNG), iteration count, gamma trace and full trace.
nlohmann::json segment_payload(const SegmentResult& result, int max_iterations);

} // namespace nccut
