#pragma once

#include <string>
#include <vector>

#include "wgt/geometry.hpp"
#include "wgt/phantoms.hpp"
#include "wgt/probes.hpp"

namespace wgt {

// Reusable verification runs shared by the CLI `verify` subcommand and the
// acceptance suite. Each returns raw observables; thresholds live with the
// callers.

struct RellichCheck {
    double residual = 0;
    double residual_refined = 0;  // one refinement step (0 when skipped)
    double energy_drift = 0;
};
RellichCheck run_rellich_check(int n_cross, int n_axial, double T, bool with_refinement,
                               int threads);

struct SlopeSweep {
    std::vector<double> x;       // swept parameter
    std::vector<double> values;  // observable
    double slope = 0;            // log-log fit
};

struct GORemainderCheck {
    SlopeSweep psi;        // expected slope -1
    SlopeSweep grad_psi;   // expected slope 0
};
GORemainderCheck run_go_remainder_check(int n_cross, double hz_per_delta,
                                        const std::vector<double>& rhos, double delta, double T,
                                        int threads);

struct MollifierCheck {
    SlopeSweep l2;       // expected slope 0 on a rough phantom
    SlopeSweep h1;       // expected slope -1 on a rough phantom
    SlopeSweep rate;     // ||R_delta[q] - q||, expected slope >= alpha_tilde
    double alpha_tilde = 0.5;
};
MollifierCheck run_mollifier_check(double delta_star, double rough_alpha, double rate_alpha);

struct TomographyCheck {
    double chord_error = 0;          // disk sinogram vs 2 sqrt(a^2 - s^2), abs
    double chord_tolerance = 0;      // 2 h_xy of the image used
    double roundtrip_rel_l2 = 0;     // FBP roundtrip on a Gaussian, 180x256
    double ratio_max_50 = 0;         // l6i ratio over 50 phantoms
    double ratio_max_100 = 0;        // ... over 100 phantoms
    std::vector<double> roundtrip_by_angles;  // 45/90/180 monotonicity check
};
TomographyCheck run_tomography_check();

struct CorrelationCheck {
    std::vector<std::string> probe_ids;
    std::vector<SlopeSweep> per_probe;  // |estimate - oracle| vs rho, slope -1
    double worst_slope_low = 0;
    double worst_slope_high = 0;
};
CorrelationCheck run_correlation_check(const WaveguideGrid& grid, const PotentialField& q1,
                                       const PotentialField& q2, std::vector<GOProbe> probes,
                                       const std::vector<double>& rhos, int threads, int workers);

// Rough multi-scale phantom used by the mollifier sweeps: bounded, Hoelder of
// the requested order, oscillating down to the given finest scale.
std::function<double(Vec2, double)> rough_section_profile(double alpha, double finest_scale,
                                                          double extent, unsigned seed);

}  // namespace wgt
