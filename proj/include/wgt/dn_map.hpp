#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wgt/fields.hpp"
#include "wgt/geometry.hpp"
#include "wgt/probes.hpp"
#include "wgt/solver.hpp"

namespace wgt {

// Lambda_q f = Neumann trace of the forward solve.
LateralField dn_apply(const WaveguideGrid& grid, const PotentialField* q, const LateralField& f,
                      int threads = 0);

// Zeroes the trace outside |x3| < R; idempotent.
LateralField dn_window(const LateralField& trace, double R);
void dn_window_inplace(LateralField& trace, double R);

struct ProbeRatio {
    std::string probe_id;
    double trace_gap_l2 = 0;   // ||window(Lambda1 f - Lambda2 f)||_L2(Sigma)
    double denominator = 0;    // l_norm_surrogate by default
    double ratio = 0;
};

struct DNGapEstimate {
    double gamma_hat = 0;  // max of the per-probe ratios (lower bound status)
    std::vector<ProbeRatio> per_probe;
    std::string denominator_kind = "surrogate";
};

struct DNGapOptions {
    std::optional<double> window_R;
    bool discrete_denominator = false;  // switch to l_norm_discrete for reporting
    int threads = 0;                    // per-solve threads
    int workers = 1;                    // parallel probes
};

// Streaming gap estimate over the probe dictionary: per probe the windowed
// L2(Sigma) norm of the trace difference against the paper-space surrogate.
DNGapEstimate dn_gap(const WaveguideGrid& grid, const PotentialField& q1,
                     const PotentialField& q2, const std::vector<GOProbe>& probes,
                     const DNGapOptions& opt = {});

}  // namespace wgt
