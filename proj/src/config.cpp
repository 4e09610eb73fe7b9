#include "wgt/config.hpp"

#include <fstream>

namespace wgt {

namespace {

using nlohmann::json;

const json* find(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double want_num(const json& j, const std::string& path, const std::string& key, double dflt) {
    const json* v = find(j, key);
    if (!v) return dflt;
    if (!v->is_number()) throw ConfigError(path + "." + key, "expected a number");
    return v->get<double>();
}

int want_int(const json& j, const std::string& path, const std::string& key, int dflt) {
    const json* v = find(j, key);
    if (!v) return dflt;
    if (!v->is_number_integer()) throw ConfigError(path + "." + key, "expected an integer");
    return v->get<int>();
}

bool want_bool(const json& j, const std::string& path, const std::string& key, bool dflt) {
    const json* v = find(j, key);
    if (!v) return dflt;
    if (!v->is_boolean()) throw ConfigError(path + "." + key, "expected a boolean");
    return v->get<bool>();
}

std::string want_str(const json& j, const std::string& path, const std::string& key,
                     const std::string& dflt) {
    const json* v = find(j, key);
    if (!v) return dflt;
    if (!v->is_string()) throw ConfigError(path + "." + key, "expected a string");
    return v->get<std::string>();
}

PhantomSpec parse_phantom(const json& j, const std::string& path) {
    PhantomSpec s;
    s.family = want_str(j, path, "family", s.family);
    if (s.family != "zero" && s.family != "bump" && s.family != "ag" && s.family != "holder_bump")
        throw ConfigError(path + ".family", "unknown phantom family '" + s.family + "'");
    s.amplitude = want_num(j, path, "amplitude", s.amplitude);
    s.center.x = want_num(j, path, "center_x", s.center.x);
    s.center.y = want_num(j, path, "center_y", s.center.y);
    s.center_z = want_num(j, path, "center_z", s.center_z);
    s.width = want_num(j, path, "width", s.width);
    s.width_z = want_num(j, path, "width_z", s.width_z);
    s.alpha = want_num(j, path, "alpha", s.alpha);
    s.M = want_num(j, path, "M", s.M);
    s.r_support = want_num(j, path, "r_support", s.r_support);
    if (!(s.alpha > 0 && s.alpha < 1)) throw ConfigError(path + ".alpha", "alpha must lie in (0,1)");
    if (s.width <= 0) throw ConfigError(path + ".width", "width must be positive");
    return s;
}

}  // namespace

std::string canonical_dump(const nlohmann::json& j) { return j.dump(2); }

std::uint64_t fnv1a_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

RunConfig parse_config(const nlohmann::json& j) {
    RunConfig c;
    c.raw = j;
    c.hash = fnv1a_hash(canonical_dump(j));

    const json* g = find(j, "geometry");
    if (!g) throw ConfigError("geometry", "missing block");
    if (!g->is_object()) throw ConfigError("geometry", "expected an object");
    const std::string kind = want_str(*g, "geometry", "cross_section", "rectangle");
    if (kind == "rectangle") {
        c.section = CrossSection::make_rectangle(want_num(*g, "geometry", "side_x", 1.0),
                                                 want_num(*g, "geometry", "side_y", 1.0));
    } else if (kind == "disk") {
        c.section = CrossSection::make_disk(want_num(*g, "geometry", "radius", 0.5));
    } else {
        throw ConfigError("geometry.cross_section", "unknown kind '" + kind + "'");
    }
    c.nx = want_int(*g, "geometry", "nx", c.nx);
    c.ny = want_int(*g, "geometry", "ny", c.ny);
    c.nz = want_int(*g, "geometry", "nz", c.nz);
    c.T = want_num(*g, "geometry", "T", c.T);
    c.r_support = want_num(*g, "geometry", "r_support", c.r_support);
    if (c.nx < 4 || c.ny < 4 || c.nz < 4)
        throw ConfigError("geometry.nx", "grid counts must be at least 4");
    if (c.T <= c.section.diameter())
        throw ConfigError("geometry.T", "T must exceed the cross-section diameter");

    if (const json* p = find(j, "q1")) c.q1 = parse_phantom(*p, "q1");
    if (const json* p = find(j, "q2")) c.q2 = parse_phantom(*p, "q2");

    if (const json* p = find(j, "probes")) {
        c.probes.angles = want_int(*p, "probes", "angles", c.probes.angles);
        c.probes.offsets = want_int(*p, "probes", "offsets", c.probes.offsets);
        c.probes.slices = want_int(*p, "probes", "slices", c.probes.slices);
        c.probes.delta = want_num(*p, "probes", "delta", c.probes.delta);
        c.probes.rho = want_num(*p, "probes", "rho", c.probes.rho);
        if (const json* w = find(*p, "window_R"); w && !w->is_null())
            c.probes.window_R = w->get<double>();
        if (c.probes.angles < 1 || c.probes.offsets < 1 || c.probes.slices < 1)
            throw ConfigError("probes.angles", "probe counts must be at least 1");
        if (c.probes.delta <= 0) throw ConfigError("probes.delta", "delta must be positive");
        if (c.probes.rho <= 0) throw ConfigError("probes.rho", "rho must be positive");
    }

    if (const json* p = find(j, "solver")) {
        c.threads = want_int(*p, "solver", "threads", c.threads);
        c.workers = want_int(*p, "solver", "workers", c.workers);
        c.sequential = want_bool(*p, "solver", "sequential", c.sequential);
        c.history_stride = want_int(*p, "solver", "history_stride", c.history_stride);
    }
    if (const json* p = find(j, "reconstruct")) {
        c.recon_n = want_int(*p, "reconstruct", "recon_n", c.recon_n);
        c.apodize = want_bool(*p, "reconstruct", "apodize", c.apodize);
        c.deconvolve = want_bool(*p, "reconstruct", "deconvolve", c.deconvolve);
    }
    if (const json* p = find(j, "stability")) {
        if (const json* s = find(*p, "scales")) {
            if (!s->is_array() || s->size() < 1)
                throw ConfigError("stability.scales", "expected a nonempty array");
            c.stability_scales.clear();
            for (const auto& v : *s) c.stability_scales.push_back(v.get<double>());
        }
    }
    if (const json* p = find(j, "solve"))
        c.solve_probe_index = want_int(*p, "solve", "probe_index", c.solve_probe_index);
    if (const json* p = find(j, "output")) c.out_dir = want_str(*p, "output", "dir", c.out_dir);
    c.seed = static_cast<std::uint64_t>(want_num(j, "", "seed", 1));
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(path, std::string("parse error: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace wgt
