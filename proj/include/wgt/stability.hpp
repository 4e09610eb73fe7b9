#pragma once

#include <string>
#include <vector>

#include "wgt/dn_map.hpp"
#include "wgt/fields.hpp"
#include "wgt/geometry.hpp"
#include "wgt/probes.hpp"

namespace wgt {

// Closed-form Hoelder stability exponent
//   kappa(alpha) = min(2a,1)*a / (3(2a+2)(min(4a,2)+21)).
double exponent_kappa(double alpha);

struct StabilitySchedule {
    double alpha = 0;
    double alpha_tilde = 0;  // min(alpha, 1/2)
    double mu = 0;           // 2a/(2a+2)
    double kappa = 0;
    double delta_star = 0;
    double gamma_star = 0;  // delta_star^(3(21+4*alpha_tilde)/2)

    double rho_of_gamma(double gamma) const;    // gamma^(-1/3)
    double delta_of_gamma(double gamma) const;  // gamma^(2/(3(21+4at)))
    // Fallback branch for gamma >= gamma_star: ||q|| <= 2M/gamma_star^kappa * gamma^kappa.
    double fallback_coefficient(double M) const;
};

StabilitySchedule make_schedule(double alpha, double delta_star);

struct StabilityPair {
    double scale = 0;       // family parameter s
    double gap_inf = 0;     // ||q1 - q2||_inf on the grid
    double gamma_hat = 0;
    double kappa = 0;
    double slack = 0;       // fitted_C * gamma_hat^kappa - gap_inf
    bool inequality_holds = false;
    std::string regime;     // "gamma<gamma*" or "gamma>=gamma*"
};

struct StabilityReport {
    std::vector<StabilityPair> pairs;
    double fitted_C = 0;
    double kappa = 0;
    bool gamma_monotone = false;
    bool all_hold = false;
};

struct StabilityParams {
    ProbeDictionarySpec probes;
    int solver_threads = 0;
    int workers = 1;
};

// gamma_hat per pair via dn_gap, then the smallest common C with
// gap_inf <= C * gamma_hat^kappa across the family.
StabilityReport stability_experiment(const WaveguideGrid& grid, const PotentialField& q1,
                                     const std::vector<PotentialField>& family,
                                     const std::vector<double>& scales,
                                     const StabilityParams& params);

}  // namespace wgt
