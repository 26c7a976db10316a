#include "nccut/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nccut/error.hpp"

namespace nccut {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value)
{
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw InvalidInput("config: bad value for " + std::string(key) + ": '" + std::string(value) + "'");
    return out;
}

bool parse_bool(std::string_view key, std::string_view value)
{
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    throw InvalidInput("config: bad boolean for " + std::string(key) + ": '" + std::string(value) + "'");
}

} // namespace

void Config::validate() const
{
    auto positive = [](const char* name, double v) {
        if (!(v > 0) || !std::isfinite(v))
            throw InvalidInput(std::string("config: ") + name + " must be positive");
    };
    positive("delta_t", delta_t);
    positive("delta_b", delta_b);
    positive("delta_gamma", delta_gamma);
    positive("epsilon", epsilon);
    positive("k_gmm", k_gmm);
    positive("eta", eta);
    positive("delta_nc", delta_nc);
    positive("n_regions", n_regions);
    positive("max_iterations", max_iterations);
    positive("t_clamp", t_clamp);
    if (!(epsilon < 1))
        throw InvalidInput("config: epsilon must be in (0, 1)");
    if (!(t_clamp < 0.5))
        throw InvalidInput("config: t_clamp must be in (0, 0.5)");
}

Config parse_config(std::string_view text, Config base)
{
    Config c = base;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw InvalidInput("config line " + std::to_string(line_no) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        if (key == "delta_t") c.delta_t = parse_number<double>(key, value);
        else if (key == "delta_b") c.delta_b = parse_number<double>(key, value);
        else if (key == "delta_gamma") c.delta_gamma = parse_number<double>(key, value);
        else if (key == "epsilon") c.epsilon = parse_number<double>(key, value);
        else if (key == "k_gmm") c.k_gmm = parse_number<int>(key, value);
        else if (key == "eta") c.eta = parse_number<double>(key, value);
        else if (key == "delta_nc") c.delta_nc = parse_number<double>(key, value);
        else if (key == "n_regions") c.n_regions = parse_number<int>(key, value);
        else if (key == "max_iterations") c.max_iterations = parse_number<int>(key, value);
        else if (key == "t_clamp") c.t_clamp = parse_number<double>(key, value);
        else if (key == "indeterminacy_enabled") c.indeterminacy_enabled = parse_bool(key, value);
        else if (key == "density_scale") c.density_scale = parse_density_scale(value);
        else
            throw InvalidInput("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    c.validate();
    return c;
}

DensityScale parse_density_scale(std::string_view text)
{
    if (text == "log")
        return DensityScale::Log;
    if (text == "linear")
        return DensityScale::Linear;
    if (text == "literal")
        return DensityScale::Literal;
    throw InvalidInput("density_scale must be log, linear or literal, got '" + std::string(text) + "'");
}

const char* density_scale_name(DensityScale scale) noexcept
{
    switch (scale) {
    case DensityScale::Log: return "log";
    case DensityScale::Linear: return "linear";
    case DensityScale::Literal: return "literal";
    }
    return "log";
}

Config load_config(const std::filesystem::path& path, Config base)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), base);
}

std::string format_config(const Config& c)
{
    std::ostringstream out;
    out.precision(17);
    out << "delta_t = " << c.delta_t << '\n'
        << "delta_b = " << c.delta_b << '\n'
        << "delta_gamma = " << c.delta_gamma << '\n'
        << "epsilon = " << c.epsilon << '\n'
        << "k_gmm = " << c.k_gmm << '\n'
        << "eta = " << c.eta << '\n'
        << "delta_nc = " << c.delta_nc << '\n'
        << "n_regions = " << c.n_regions << '\n'
        << "max_iterations = " << c.max_iterations << '\n'
        << "t_clamp = " << c.t_clamp << '\n'
        << "indeterminacy_enabled = " << (c.indeterminacy_enabled ? "true" : "false") << '\n'
        << "density_scale = " << density_scale_name(c.density_scale) << '\n';
    return out.str();
}

} // namespace nccut
