#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "wgt/geometry.hpp"
#include "wgt/phantoms.hpp"
#include "wgt/probes.hpp"

namespace wgt {

class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), field_path(path) {}
    std::string field_path;
};

// Validated run configuration; `raw` keeps the normalized document so that
// re-serialization is idempotent and hashable.
struct RunConfig {
    nlohmann::json raw;
    std::uint64_t hash = 0;

    CrossSection section;
    int nx = 32, ny = 32, nz = 64;
    double T = 4.5, r_support = 1.0;

    PhantomSpec q1, q2;
    ProbeDictionarySpec probes;

    int threads = 0;
    int workers = 2;
    bool sequential = false;
    int history_stride = 1;

    int recon_n = 96;
    bool apodize = true;
    bool deconvolve = false;

    std::vector<double> stability_scales{0.05, 0.1, 0.2, 0.4};
    int solve_probe_index = 0;

    std::string out_dir = "out";
    std::uint64_t seed = 1;

    WaveguideGrid build() const { return build_grid(section, nx, ny, nz, T, r_support); }
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
std::string canonical_dump(const nlohmann::json& j);
std::uint64_t fnv1a_hash(const std::string& s);

}  // namespace wgt
