#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wgt/bumps.hpp"
#include "wgt/fields.hpp"
#include "wgt/geometry.hpp"

namespace wgt {

// Geometric-optics boundary datum
//   f(t,x',x3) = Phi_delta(x'+t*theta, y') h_delta(x3, y3) e^{i sign rho (x'.theta + t)}
// The moving bump crosses the section along -theta; the adjoint trace shares
// the amplitude and conjugates the phase. Lines are probed by a (theta, -theta)
// pair of separate probes (dir = +-1).
struct GOProbe {
    Vec2 theta{1, 0};
    double rho = 8;
    double delta = 0.1;
    Vec2 y_prime{0, 0};
    double y3 = 0;
    int sign = +1;  // phase branch e^{+-i rho(...)}
    std::optional<double> window_R;

    // assembly bookkeeping from place_probes
    int dir = +1;  // +1: canonical angle direction, -1: reversed partner
    int angle_index = -1;
    int offset_index = -1;
    int slice_index = -1;
    double offset_s = 0;
    bool zero_line = false;

    std::string id() const;
    double phase(Vec2 x, double t) const { return sign * rho * (x.dot(theta) + t); }
};

// Operator-norm denominator from the paper-space bound:
// rho^2 * ||h_delta||_{H^2(R)} * ||Phi_delta||_{H^3(R^2)}.
double l_norm_surrogate(const GOProbe& p, const BumpPair& bumps = standard_bumps());

// Validates a dictionary probe against the grid: unit direction,
// 0 < delta < delta*, bump support clear of the section at t=0, full crossing
// before T, axial support inside the truncated guide (and inside (-R,R) when
// windowed). Returns the violated condition, or nullopt.
std::optional<std::string> probe_violation(const WaveguideGrid& grid, const GOProbe& p);

// Remainder-lemma validation: the ansatz construction only needs the bump
// clear of the section at t=0, a full crossing before T, and the axial support
// inside the guide; the dictionary delta* cap does not apply.
std::optional<std::string> probe_violation_remainder(const WaveguideGrid& grid, const GOProbe& p);

// Dirichlet datum (sign as given) and the conjugate-phase adjoint trace
// (sign flipped), both restricted to the lateral boundary lattice.
struct ProbeData {
    LateralField f;
    LateralField u2_trace;
};
ProbeData make_probe_data(const WaveguideGrid& grid, const GOProbe& p,
                          const BumpPair& bumps = standard_bumps());

// Pointwise evaluation helpers used by the streaming solver paths.
double probe_amplitude(const GOProbe& p, Vec2 x, double z, double t,
                       const BumpPair& bumps = standard_bumps());

struct ProbeDictionarySpec {
    int angles = 8;
    int offsets = 8;
    int slices = 3;
    double delta = 0.1;
    double rho = 8;
    std::optional<double> window_R;
};

// Probe dictionary over (angle, offset, slice, +-theta). Offsets are laid out
// exactly on the sinogram bins of the matching SliceSinogram; centers are
// pushed along each line into the band eps/4 < dist(., omega) < 3*eps/4.
std::vector<GOProbe> place_probes(const WaveguideGrid& grid, const ProbeDictionarySpec& spec);

// Slice coordinates used by place_probes (uniform; [-r-1, r+1] unwindowed).
std::vector<double> probe_slices(const WaveguideGrid& grid, const ProbeDictionarySpec& spec);
std::vector<double> probe_offsets(const WaveguideGrid& grid, int n_offsets);
std::vector<double> probe_angles(int n_angles);

double delta_star(const WaveguideGrid& grid, std::optional<double> window_R);

}  // namespace wgt
