#include "wgt/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wgt {

double exponent_kappa(double alpha) {
    if (!(alpha > 0) || !(alpha < 1))
        throw std::invalid_argument("exponent_kappa: alpha must lie in (0,1)");
    return std::min(2 * alpha, 1.0) * alpha /
           (3.0 * (2 * alpha + 2) * (std::min(4 * alpha, 2.0) + 21.0));
}

double StabilitySchedule::rho_of_gamma(double gamma) const { return std::pow(gamma, -1.0 / 3.0); }

double StabilitySchedule::delta_of_gamma(double gamma) const {
    return std::pow(gamma, 2.0 / (3.0 * (21.0 + 4.0 * alpha_tilde)));
}

double StabilitySchedule::fallback_coefficient(double M) const {
    return 2.0 * M / std::pow(gamma_star, kappa);
}

StabilitySchedule make_schedule(double alpha, double delta_star) {
    if (!(alpha > 0) || !(alpha < 1))
        throw std::invalid_argument("make_schedule: alpha must lie in (0,1)");
    if (!(delta_star > 0)) throw std::invalid_argument("make_schedule: delta_star must be positive");
    StabilitySchedule s;
    s.alpha = alpha;
    s.alpha_tilde = std::min(alpha, 0.5);
    s.mu = 2 * alpha / (2 * alpha + 2);
    s.kappa = exponent_kappa(alpha);
    s.delta_star = delta_star;
    s.gamma_star = std::pow(delta_star, 3.0 * (21.0 + 4.0 * s.alpha_tilde) / 2.0);
    return s;
}

StabilityReport stability_experiment(const WaveguideGrid& grid, const PotentialField& q1,
                                     const std::vector<PotentialField>& family,
                                     const std::vector<double>& scales,
                                     const StabilityParams& params) {
    if (family.size() < 2)
        throw std::invalid_argument("stability_experiment: family must contain at least 2 potentials");
    if (family.size() != scales.size())
        throw std::invalid_argument("stability_experiment: scales must match the family");

    const auto probes = place_probes(grid, params.probes);
    const double kappa = exponent_kappa(q1.alpha);
    const auto schedule = make_schedule(q1.alpha, delta_star(grid, params.probes.window_R));

    StabilityReport rep;
    rep.kappa = kappa;
    rep.pairs.resize(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        DNGapOptions go;
        go.threads = params.solver_threads;
        go.workers = params.workers;
        go.window_R = params.probes.window_R;
        const DNGapEstimate est = dn_gap(grid, q1, family[i], probes, go);
        StabilityPair pr;
        pr.scale = scales[i];
        pr.gamma_hat = est.gamma_hat;
        pr.kappa = kappa;
        double gap = 0;
        for (std::size_t n = 0; n < q1.values.size(); ++n)
            gap = std::max(gap, std::abs(q1.values.data()[n] - family[i].values.data()[n]));
        pr.gap_inf = gap;
        pr.regime = est.gamma_hat < schedule.gamma_star ? "gamma<gamma*" : "gamma>=gamma*";
        rep.pairs[i] = pr;
    }

    // smallest common C with gap <= C * gamma^kappa
    double C = 0;
    for (const auto& p : rep.pairs)
        if (p.gamma_hat > 0) C = std::max(C, p.gap_inf / std::pow(p.gamma_hat, kappa));
    rep.fitted_C = C;
    rep.all_hold = true;
    for (auto& p : rep.pairs) {
        const double bound = C * std::pow(p.gamma_hat, kappa);
        p.slack = bound - p.gap_inf;
        p.inequality_holds = p.gamma_hat > 0 && p.gap_inf <= bound * (1 + 1e-12);
        rep.all_hold = rep.all_hold && p.inequality_holds;
    }
    rep.gamma_monotone = true;
    for (std::size_t i = 1; i < rep.pairs.size(); ++i)
        rep.gamma_monotone =
            rep.gamma_monotone && rep.pairs[i].gamma_hat > rep.pairs[i - 1].gamma_hat;
    return rep;
}

}  // namespace wgt
