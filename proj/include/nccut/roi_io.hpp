#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "nccut/image.hpp"

namespace nccut {

/// Parses {"polygon": [[x, y], ...]}. Throws InvalidRoi on malformed input.
Polygon parse_polygon_json(std::string_view text);
Polygon load_polygon(const std::filesystem::path& path);
std::string polygon_json(const Polygon& polygon);

} // namespace nccut
