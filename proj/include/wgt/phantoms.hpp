#pragma once

#include <string>

#include "wgt/fields.hpp"
#include "wgt/geometry.hpp"

namespace wgt {

// Analytic potential families:
//   zero         q = 0
//   bump         smooth compact product bump, peak `amplitude`
//   ag           g(x3) v(x', x3) with even decreasing g and 2r-periodic v
//   holder_bump  |x' - c|^alpha profile (exact Hoelder regularity) with a
//                smooth axial window
struct PhantomSpec {
    std::string family = "bump";
    double amplitude = 0.5;
    Vec2 center{0, 0};
    double center_z = 0;
    double width = 0.3;
    double width_z = 0.6;
    double alpha = 0.5;
    double M = 2.0;
    double r_support = 1.0;
};

PotentialField make_phantom(const WaveguideGrid& grid, const PhantomSpec& spec);

// q1 + s * p, sampled and with composed analytic evaluator.
PotentialField perturb_potential(const WaveguideGrid& grid, const PotentialField& q1,
                                 const PotentialField& p, double s);

}  // namespace wgt
