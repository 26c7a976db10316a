#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace nccut {

/// How background densities are scaled before the similarity test.
enum class DensityScale {
    Log,     ///< log p_bkg(m(r)) mapped linearly over all regions onto [0, 100]
    Linear,  ///< p_bkg(m(r)) mapped linearly over all regions onto [0, 100]
    Literal, ///< raw mixture density
};

/// "log", "linear" or "literal"; throws InvalidInput otherwise.
DensityScale parse_density_scale(std::string_view text);
const char* density_scale_name(DensityScale scale) noexcept;

struct Config {
    double delta_t = 30;          ///< color spread for mu_T
    double delta_b = 50;          ///< spread of the background-similarity test
    double delta_gamma = 0.025;   ///< spread of the indeterminacy weight gamma
    double epsilon = 0.5;         ///< background-similarity threshold
    int k_gmm = 5;
    double eta = 50;
    double delta_nc = 0.1;        ///< spread of the parent-edge weight
    int n_regions = 500;
    int max_iterations = 10;
    double t_clamp = 1e-6;
    bool indeterminacy_enabled = true;
    DensityScale density_scale = DensityScale::Log;

    /// Throws InvalidInput on out-of-range values.
    void validate() const;
};

/// Reads `key = value` lines; `#` starts a comment. Keys are the field names
/// above; unknown keys are an error. Starts from `base`.
Config parse_config(std::string_view text, Config base = {});
Config load_config(const std::filesystem::path& path, Config base = {});

/// Inverse of parse_config.
std::string format_config(const Config& config);

} // namespace nccut
