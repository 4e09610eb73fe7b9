#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wgt/bumps.hpp"
#include "wgt/dn_map.hpp"
#include "wgt/fields.hpp"
#include "wgt/geometry.hpp"
#include "wgt/probes.hpp"
#include "wgt/xray.hpp"

namespace wgt {

enum class MollifyMode {
    fine,          // sub-delta tensor quadrature, analytic q when available
    grid_lattice,  // waveguide lattice sums (matches the pairing quadrature)
};

// R_delta[q](y', y3) = int Phi_delta^2(x',y') h_delta^2(x3,y3) q dx' dx3 on the
// requested slice centers, sampled over the given 2D target grid.
std::vector<Image2D> mollify_R(const WaveguideGrid& grid, const PotentialField& q, double delta,
                               const Image2D& target, const std::vector<double>& slices,
                               MollifyMode mode = MollifyMode::fine,
                               const BumpPair& bumps = standard_bumps());

// Cross-section-only mollification S_delta at a fixed slice.
Image2D mollify_S(const WaveguideGrid& grid, const PotentialField& q, double delta,
                  const Image2D& target, double y3, MollifyMode mode = MollifyMode::fine,
                  const BumpPair& bumps = standard_bumps());

struct CorrelationDatum {
    std::string probe_id;
    double value_re = 0, value_im = 0;  // boundary pairing
    double xray_estimate = 0;           // -Re(value)
    std::optional<double> oracle;       // direct-quadrature half-line X-ray
};

struct CorrelateOptions {
    bool with_oracle = false;
    int threads = 0;
};

// Boundary pairing int_Sigma ((Lambda_q2 - Lambda_q1) f) u2 dsigma dt with the
// analytic adjoint trace, streamed over solver steps.
CorrelationDatum correlate(const WaveguideGrid& grid, const PotentialField& q1,
                           const PotentialField& q2, const GOProbe& probe,
                           const CorrelateOptions& opt = {});

// Half-line X-ray of R_delta[q1-q2] matching the probe's travel direction,
// by direct quadrature of the analytic gap.
double correlation_oracle(const WaveguideGrid& grid, const PotentialField& q1,
                          const PotentialField& q2, const GOProbe& probe);

struct AssembleOptions {
    int threads = 0;   // per-solve
    int workers = 1;   // parallel probes
    bool with_oracle = false;
};

// Per-slice sinograms: datum(angle, offset, y3) = est(+theta) + est(-theta).
// Zero-line probes contribute exact zeros; a missing direction partner is an error.
std::vector<SliceSinogram> assemble_sinograms(const WaveguideGrid& grid, const PotentialField& q1,
                                              const PotentialField& q2,
                                              const std::vector<GOProbe>& probes,
                                              const AssembleOptions& opt = {});

struct ReconstructParams {
    ProbeDictionarySpec probes;
    int recon_n = 96;          // reconstruction grid points per axis
    bool apodize = true;
    bool deconvolve = false;   // diagnostic Wiener step, off by default
    double wiener_lambda = 1e-3;
    int threads = 0;
    int workers = 1;
};

struct ReconstructionResult {
    std::vector<double> slices;
    std::vector<SliceSinogram> sinograms;
    std::vector<Image2D> q_hat;        // per-slice reconstruction of R_delta[q1-q2]
    std::vector<Image2D> oracle;       // direct-quadrature R_delta[q1-q2]
    double linf_error_window = 0;      // vs oracle on omega x (-r, r), relative
    double l2_error = 0;               // vs oracle, all slices, relative
    std::vector<double> per_slice_linf;
    double oracle_linf = 0;
};

ReconstructionResult reconstruct_gap(const WaveguideGrid& grid, const PotentialField& q1,
                                     const PotentialField& q2, const ReconstructParams& params);

}  // namespace wgt
