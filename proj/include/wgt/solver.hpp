#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "wgt/bumps.hpp"
#include "wgt/fields.hpp"
#include "wgt/geometry.hpp"
#include "wgt/probes.hpp"

namespace wgt {

// Dirichlet data on the lateral boundary lattice, one (nb x nz) plane per step.
class BoundaryData {
  public:
    virtual ~BoundaryData() = default;
    virtual void fill(int n, double t, std::vector<double>& re, std::vector<double>& im) const = 0;
    virtual bool is_zero() const { return false; }
};

class ZeroBoundary final : public BoundaryData {
  public:
    void fill(int, double, std::vector<double>& re, std::vector<double>& im) const override;
    bool is_zero() const override { return true; }
};

class FieldBoundary final : public BoundaryData {
  public:
    explicit FieldBoundary(const LateralField& f) : f_(&f) {}
    void fill(int n, double t, std::vector<double>& re, std::vector<double>& im) const override;

  private:
    const LateralField* f_;
};

class ProbeBoundary final : public BoundaryData {
  public:
    ProbeBoundary(const WaveguideGrid& g, const GOProbe& p, const BumpPair& b = standard_bumps());
    void fill(int n, double t, std::vector<double>& re, std::vector<double>& im) const override;
    bool is_zero() const override { return zero_; }
    // the moving bump meets the boundary curve only in short windows
    bool active_at(double t) const;

  private:
    const WaveguideGrid* grid_;
    GOProbe probe_;
    const BumpPair* bumps_;
    bool zero_ = false;  // away-moving partner never touches the boundary
};

// Interior forcing; implementations add scale * S(t) into the update buffer
// (im may be null for real-only solves).
class InteriorSource {
  public:
    virtual ~InteriorSource() = default;
    virtual void add(int n, double t, double scale, const WaveguideGrid& g, double* re,
                     double* im) const = 0;
    virtual bool complex_valued() const { return false; }
};

// Separable pulse A(x) * s(t); the time profile must switch off eventually for
// the energy-conservation checks to make sense.
class PulseSource final : public InteriorSource {
  public:
    PulseSource(const WaveguideGrid& g, std::function<double(Vec2, double)> amplitude,
                std::function<double(double)> time_profile);
    void add(int n, double t, double scale, const WaveguideGrid& g, double* re,
             double* im) const override;
    double switch_off_time = 0;

  private:
    std::vector<double> amp_;
    std::function<double(double)> s_;
};

// Right-hand side of the remainder problem. The continuum source is
// e^{i sign rho (x'.theta + t)} H with
// H = -(theta_perp . D^2 Phi theta_perp) h - Phi h'' + q Phi h.
// In lattice_residual mode (the default for remainder runs) the source is the
// exact residual of the lattice ansatz under the discrete wave operator, so the
// solved field equals ansatz - discrete_solution to machine precision; it
// converges to the analytic H as the grid refines, and removes the
// sampling-noise floor that otherwise buries the 1/rho decay. The analytic mode
// evaluates H from the bump derivatives directly.
class GOSource final : public InteriorSource {
  public:
    enum class Mode { lattice_residual, analytic };
    GOSource(const WaveguideGrid& g, const GOProbe& p, const PotentialField* q,
             Mode mode = Mode::lattice_residual, const BumpPair& b = standard_bumps());
    void add(int n, double t, double scale, const WaveguideGrid& g, double* re,
             double* im) const override;
    bool complex_valued() const override { return true; }

  private:
    void add_analytic(double t, double scale, const WaveguideGrid& g, double* re,
                      double* im) const;
    void add_lattice(int n, double scale, const WaveguideGrid& g, double* re, double* im) const;
    GOProbe probe_;
    const PotentialField* q_;
    const BumpPair* bumps_;
    Mode mode_;
};

struct SolveOptions {
    bool complex_data = true;
    bool want_trace = false;       // materialize the Neumann trace
    bool want_energy = false;      // discrete leapfrog energy per half step
    bool want_final_state = false;
    int history_stride = 0;        // 0: no interior history
    bool accumulate_psi_norms = false;
    int threads = 0;               // 0: leave OpenMP alone
    // Streaming consumer of the per-step Neumann trace plane (nb*nz each).
    std::function<void(int n, double t, const double* re, const double* im)> trace_sink;
    // Streaming consumer of three consecutive real fields (u^{n-1}, u^n,
    // u^{n+1}); used by the identity quadratures that need du/dt at full rate.
    std::function<void(int n, double t, const double* up, const double* uc, const double* un)>
        tri_field_sink;
};

struct SolveResult {
    LateralField neumann_trace;
    std::vector<double> energy;                  // at half steps
    double psi_l2 = 0, grad_psi_l2 = 0;          // L2(Q) norms when requested
    std::vector<double> uT_re, uT_im, utT_re, utT_im;
    std::vector<std::vector<double>> history_re, history_im;
    int history_stride = 0;
    bool homogeneous_dirichlet = false;
    double trace_l2 = 0;  // streaming L2(Sigma) of the trace
};

class SolverError : public std::runtime_error {
  public:
    SolverError(const std::string& what, int step) : std::runtime_error(what), step(step) {}
    int step;
};

SolveResult solve_ibvp(const WaveguideGrid& grid, const PotentialField* q, const BoundaryData& f,
                       const InteriorSource* source, const SolveOptions& opt);

// Remainder decay observables of the probe ansatz (Lemma-style sweep input).
struct RemainderNorms {
    double psi_l2;
    double grad_psi_l2;
};
RemainderNorms go_remainder(const WaveguideGrid& grid, const PotentialField* q, const GOProbe& p,
                            int threads = 0);

}  // namespace wgt
