#pragma once

#include <vector>

#include "wgt/geometry.hpp"

namespace wgt {

// Polar lattice for the disk section: rings ir = 1..nr at r = ir*hr plus a
// center node, nphi angles, axial planes as in the Cartesian grid. The wave
// operator is the finite-volume Laplacian on this lattice, so the discrete
// energy pairing is conserved exactly.
struct PolarGrid {
    CrossSection section;
    int nr = 0, nphi = 0, nz = 0, nt = 0;
    double hr = 0, dphi = 0, hz = 0, dt = 0;
    double T = 0, X_cap = 0, r_support = 0, epsilon = 0;

    int plane_size() const { return 1 + nr * nphi; }  // center + rings
    std::size_t node_count() const { return static_cast<std::size_t>(plane_size()) * nz; }
    double r_of(int ir) const { return ir * hr; }
    double phi_of(int iphi) const { return iphi * dphi; }
    double z_of(int iz) const { return -X_cap + iz * hz; }
};

PolarGrid build_polar_grid(const CrossSection& disk, int nr, int nphi, int nz, double T,
                           double r_support);

struct DiskRunResult {
    std::vector<double> energy;     // conserved discrete energy per half step
    double rellich_lhs = 0;         // int_Sigma |d_r v|^2
    double rellich_rhs = 0;         // (2/a) int_Q (v_t^2 - v_z^2) + final-time term
    double residual() const;
    double energy_drift = 0;        // relative, after switch-off
};

// Homogeneous-Dirichlet solve driven by a smooth separable pulse, streaming the
// disk multiplier identity (gamma = x'/a) and the energy series.
DiskRunResult disk_rellich_energy_run(const PolarGrid& grid, double pulse_width,
                                      double switch_off);

}  // namespace wgt
