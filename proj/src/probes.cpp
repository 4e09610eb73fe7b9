#include "wgt/probes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wgt {

std::string GOProbe::id() const {
    std::ostringstream os;
    os << "a" << angle_index << "_o" << offset_index << "_s" << slice_index
       << (dir > 0 ? "_fwd" : "_bwd");
    if (sign < 0) os << "_conj";
    if (zero_line) os << "_zero";
    return os.str();
}

double l_norm_surrogate(const GOProbe& p, const BumpPair& bumps) {
    return p.rho * p.rho * bumps.h_H2_scaled(p.delta) * bumps.phi_H3_scaled(p.delta);
}

double delta_star(const WaveguideGrid& grid, std::optional<double> window_R) {
    double ds = grid.epsilon / 4.0;
    if (window_R) ds = std::min(ds, *window_R - grid.r_support);
    return ds;
}

std::optional<std::string> probe_violation_remainder(const WaveguideGrid& grid, const GOProbe& p) {
    if (std::abs(p.theta.norm() - 1.0) > 1e-12) return "theta is not a unit vector";
    if (p.rho <= 0) return "rho must be positive";
    if (!(p.delta > 0)) return "delta must be positive";
    const double dist = grid.section.dist_outside(p.y_prime);
    if (dist <= p.delta)
        return "bump support of radius delta intersects the section closure at t=0";
    if (dist + grid.section.diameter() + 2 * p.delta >= grid.T)
        return "moving bump cannot fully cross and exit before T";
    if (std::abs(p.y3) + p.delta >= grid.X_cap - 1.0)
        return "axial bump support too close to the caps";
    if (p.sign != 1 && p.sign != -1) return "sign must be +-1";
    return std::nullopt;
}

std::optional<std::string> probe_violation(const WaveguideGrid& grid, const GOProbe& p) {
    if (auto why = probe_violation_remainder(grid, p)) return why;
    const double ds = delta_star(grid, p.window_R);
    if (p.delta >= ds)
        return "delta " + std::to_string(p.delta) + " outside (0, delta*) with delta* = " +
               std::to_string(ds);
    if (p.window_R && std::abs(p.y3) + p.delta >= *p.window_R)
        return "axial support exceeds the window (-R, R)";
    return std::nullopt;
}

double probe_amplitude(const GOProbe& p, Vec2 x, double z, double t, const BumpPair& bumps) {
    const Vec2 moved = x + t * p.theta;
    return bumps.phi_scaled(moved, p.y_prime, p.delta) * bumps.h_scaled(z, p.y3, p.delta);
}

ProbeData make_probe_data(const WaveguideGrid& grid, const GOProbe& p, const BumpPair& bumps) {
    if (auto why = probe_violation(grid, p)) throw std::invalid_argument("invalid probe: " + *why);
    ProbeData out{LateralField(grid), LateralField(grid)};
    out.f.probe_id = p.id();
    out.u2_trace.probe_id = p.id() + "_adj";
    for (int n = 0; n < grid.nt; ++n) {
        const double t = grid.t_of(n);
        for (int b = 0; b < static_cast<int>(grid.n_boundary()); ++b) {
            const Vec2 xb = grid.xy_of(grid.boundary[b].ix, grid.boundary[b].iy);
            const double ph = p.phase(xb, t);
            const double c = std::cos(ph), s = std::sin(ph);
            for (int k = 0; k < grid.nz; ++k) {
                const double a = probe_amplitude(p, xb, grid.z_of(k), t, bumps);
                if (a == 0.0) continue;
                const std::size_t i = out.f.idx(n, b, k);
                out.f.re[i] = a * c;
                out.f.im[i] = a * s;
                out.u2_trace.re[i] = a * c;
                out.u2_trace.im[i] = -a * s;
            }
        }
    }
    return out;
}

std::vector<double> probe_angles(int n_angles) {
    std::vector<double> a(n_angles);
    for (int k = 0; k < n_angles; ++k) a[k] = std::numbers::pi * k / n_angles;
    return a;
}

std::vector<double> probe_offsets(const WaveguideGrid& grid, int n_offsets) {
    const double S = grid.section.circumradius() + grid.epsilon / 4.0;
    std::vector<double> s(n_offsets);
    const double ds = 2 * S / n_offsets;
    for (int j = 0; j < n_offsets; ++j) s[j] = -S + (j + 0.5) * ds;
    return s;
}

std::vector<double> probe_slices(const WaveguideGrid& grid, const ProbeDictionarySpec& spec) {
    double span = grid.r_support + 1.0;
    if (spec.window_R) span = std::min(span, *spec.window_R - spec.delta - grid.hz);
    return linspace(-span, span, spec.slices);
}

namespace {

// Distance to the section along the line s*perp + t*theta is convex for the
// convex sections here; locate its minimum by ternary search.
double line_min_dist(const CrossSection& cs, Vec2 foot, Vec2 theta, double* t_at_min) {
    double lo = -4 * cs.diameter() - 8, hi = 4 * cs.diameter() + 8;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        const double d1 = cs.dist_outside(foot + m1 * theta);
        const double d2 = cs.dist_outside(foot + m2 * theta);
        if (d1 <= d2)
            hi = m2;
        else
            lo = m1;
    }
    const double tm = 0.5 * (lo + hi);
    if (t_at_min) *t_at_min = tm;
    return cs.dist_outside(foot + tm * theta);
}

}  // namespace

std::vector<GOProbe> place_probes(const WaveguideGrid& grid, const ProbeDictionarySpec& spec) {
    if (spec.angles < 1 || spec.offsets < 1 || spec.slices < 1)
        throw std::invalid_argument("place_probes: counts must be >= 1");
    if (spec.window_R && *spec.window_R <= grid.r_support)
        throw std::invalid_argument("place_probes: window_R must exceed r_support");
    const double ds = delta_star(grid, spec.window_R);
    if (!(spec.delta > 0) || spec.delta >= ds)
        throw std::invalid_argument("place_probes: delta must lie in (0, delta*)");

    const auto angles = probe_angles(spec.angles);
    const auto offsets = probe_offsets(grid, spec.offsets);
    const auto slices = probe_slices(grid, spec);
    const double eps = grid.epsilon;

    std::vector<GOProbe> dict;
    dict.reserve(2 * angles.size() * offsets.size() * slices.size());
    for (int ai = 0; ai < static_cast<int>(angles.size()); ++ai) {
        const Vec2 theta{std::cos(angles[ai]), std::sin(angles[ai])};
        const Vec2 perp = theta.perp();
        for (int oi = 0; oi < static_cast<int>(offsets.size()); ++oi) {
            const Vec2 foot = offsets[oi] * perp;
            double t_min = 0;
            const double dmin = line_min_dist(grid.section, foot, theta, &t_min);
            const bool zero_line = dmin >= eps / 4.0;
            Vec2 center = foot;
            if (!zero_line) {
                // walk outward from the minimum on the +theta side until the
                // distance enters the middle of the band
                const double target = std::min(0.5 * eps, 0.5 * (dmin + 0.75 * eps));
                double lo = t_min, hi = t_min + 4 * grid.section.diameter() + 8;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (grid.section.dist_outside(foot + mid * theta) < target)
                        lo = mid;
                    else
                        hi = mid;
                }
                center = foot + 0.5 * (lo + hi) * theta;
            }
            for (int si = 0; si < static_cast<int>(slices.size()); ++si)
                for (const int dir : {+1, -1}) {
                    GOProbe p;
                    p.theta = dir > 0 ? theta : Vec2{-theta.x, -theta.y};
                    p.rho = spec.rho;
                    p.delta = spec.delta;
                    p.y_prime = center;
                    p.y3 = slices[si];
                    p.sign = +1;
                    p.window_R = spec.window_R;
                    p.dir = dir;
                    p.angle_index = ai;
                    p.offset_index = oi;
                    p.slice_index = si;
                    p.offset_s = offsets[oi];
                    p.zero_line = zero_line;
                    if (!zero_line)
                        if (auto why = probe_violation(grid, p))
                            throw std::runtime_error("place_probes produced an invalid probe (" +
                                                     p.id() + "): " + *why);
                    dict.push_back(p);
                }
        }
    }
    return dict;
}

}  // namespace wgt
