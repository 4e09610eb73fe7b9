#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wgt/geometry.hpp"
#include "wgt/image.hpp"

namespace wgt {

// Potential q on the waveguide grid, member of the C_b^alpha ball of radius M,
// vanishing for |x3| > r_support. Phantoms keep their analytic form alongside
// the samples; quadratures prefer it when present.
struct PotentialField {
    Array3D<double> values;
    double alpha = 0.5;
    double M = 1.0;
    double r_support = 1.0;
    std::function<double(Vec2, double)> analytic;  // may be empty
    std::string family;

    double eval(Vec2 xy, double z) const;  // analytic if available, else trilinear
    double sup_norm() const;
};

PotentialField sample_potential(const WaveguideGrid& grid,
                                const std::function<double(Vec2, double)>& f, double alpha,
                                double M, double r_support);

// Checks ||q||_inf <= M, the axial support bound, and a sampled Hoelder bound.
// Returns an explanation for the first violated invariant, or nullopt.
std::optional<std::string> potential_violation(const WaveguideGrid& grid, const PotentialField& q,
                                               int holder_pairs = 2000);

// Complex field on the (t, boundary node, x3) lattice of the lateral boundary.
struct LateralField {
    int nt = 0, nb = 0, nz = 0;
    double dt = 0, hz = 0, z0 = 0;
    std::vector<double> arc_w;  // per boundary node
    std::vector<double> re, im;
    std::string probe_id;

    LateralField() = default;
    LateralField(const WaveguideGrid& g);

    std::size_t idx(int n, int b, int k) const {
        return (static_cast<std::size_t>(n) * nb + b) * nz + k;
    }
    double z_of(int k) const { return z0 + k * hz; }
    double l2_sigma() const;  // L^2(Sigma) with trapezoid-in-t and arclength weights
    LateralField& operator*=(double s);
    LateralField& axpy(double a, const LateralField& o);  // this += a*o
};

struct NormReport {
    double l2_sigma = 0;
    double l_norm_surrogate = 0;
    double l_norm_discrete = 0;
    double h_fractional = 0;
    double fractional_order = 0;
    bool t_weight_resolution_flag = false;  // first retained sample dominates
};

// Sampled Hoelder seminorm sup |q(x)-q(y)|/|x-y|^alpha over n_pairs seeded
// random grid pairs; a lower bound, nondecreasing in n_pairs.
double holder_seminorm(const WaveguideGrid& grid, const PotentialField& q, int n_pairs,
                       std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

// Exhaustive variant for small grids (test oracle).
double holder_seminorm_exact(const WaveguideGrid& grid, const PotentialField& q);

// Discrete surrogate of the paper-space norm of a lateral field:
// H^{3/2,3/2}(Sigma) by per-direction fractional norms plus the 1/t-weighted
// first-derivative quadrature that skips t=0.
double l_norm_discrete(const LateralField& f, NormReport* report = nullptr);

}  // namespace wgt
