#include "nccut/roi_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nccut {

Polygon parse_polygon_json(std::string_view text)
{
    const auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("polygon") || !doc["polygon"].is_array())
        throw InvalidRoi("expected {\"polygon\": [[x, y], ...]}");
    Polygon out;
    for (const auto& v : doc["polygon"]) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw InvalidRoi("polygon vertices must be [x, y] number pairs");
        out.push_back(Point{v[0].get<double>(), v[1].get<double>()});
    }
    return out;
}

Polygon load_polygon(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open ROI file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_polygon_json(ss.str());
}

std::string polygon_json(const Polygon& polygon)
{
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : polygon)
        pts.push_back({p.x, p.y});
    return nlohmann::json{{"polygon", pts}}.dump();
}

} // namespace nccut
