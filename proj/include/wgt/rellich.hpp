#pragma once

#include "wgt/geometry.hpp"
#include "wgt/solver.hpp"

namespace wgt {

// Relative residual |LHS - RHS| / (|LHS| + |RHS|) of the multiplier identity
//   int_Sigma |d_nu v|^2 = 2 int_Q (H grad v).grad v - int_Q div(gamma)|grad v|^2
//                        + 2 int_Omega v_t(T) gamma.grad v(T) + int_Q div(gamma) v_t^2
//                        - 2 int_Q F gamma.grad v
// for a q = 0, homogeneous-Dirichlet solve forced by F. The forcing term closes
// the identity for sourced runs (it vanishes for F = 0). The result must carry
// the trace, interior history, and final state. Returns 0 for v == 0.
double rellich_check(const WaveguideGrid& grid, const MultiplierField& mult,
                     const SolveResult& res, const InteriorSource* source = nullptr);

// Canonical smooth-pulse run used by the verification suites.
struct RellichRun {
    double residual = 0;
    double energy_drift = 0;  // relative, after source switch-off
};
RellichRun rellich_pulse_run(const WaveguideGrid& grid, const MultiplierField& mult,
                             int history_stride = 1, int threads = 0);

}  // namespace wgt
