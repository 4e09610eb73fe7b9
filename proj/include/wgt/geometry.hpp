#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wgt/array.hpp"

namespace wgt {

enum class SectionKind { rectangle, disk };

// Bounded convex cross-section of the waveguide, origin strictly inside.
struct CrossSection {
    SectionKind kind = SectionKind::rectangle;
    double side_x = 1.0;  // rectangle sides
    double side_y = 1.0;
    double radius = 0.5;  // disk

    static CrossSection make_rectangle(double ax, double ay);
    static CrossSection make_disk(double r);

    double diameter() const;
    double circumradius() const;  // max distance of boundary from the origin
    // dist(p, omega): 0 inside the closure, Euclidean distance outside.
    double dist_outside(Vec2 p) const;
    // distance to the boundary curve, from either side
    double dist_boundary(Vec2 p) const;
    bool contains(Vec2 p) const;
    std::string describe() const;
};

enum class NodeKind : std::uint8_t { face_xlo, face_xhi, face_ylo, face_yhi, corner, ring };

struct BoundaryNode {
    int ix = 0, iy = 0;   // lattice indices in the cross-section
    Vec2 normal;          // outward unit normal (axial component is always 0)
    double arc_weight;    // trapezoid weight along the perimeter
    NodeKind kind = NodeKind::face_xlo;
};

// Discretized truncated waveguide omega x (-X_cap, X_cap).
// Cartesian lattice for the rectangle section; the polar disk grid lives in
// polar_solver and shares only CrossSection here.
struct WaveguideGrid {
    CrossSection section;
    int nx = 0, ny = 0, nz = 0, nt = 0;
    double hx = 0, hy = 0, hz = 0, dt = 0;
    double T = 0;
    double X_cap = 0;
    double r_support = 0;
    double epsilon = 0;  // band width for probe placement

    std::vector<BoundaryNode> boundary;  // lateral boundary, cross-section lattice
    Array2D<std::uint8_t> interior;      // 1 on strictly interior cross-section nodes

    double x_of(int ix) const { return -0.5 * section.side_x + ix * hx; }
    double y_of(int iy) const { return -0.5 * section.side_y + iy * hy; }
    double z_of(int iz) const { return -X_cap + iz * hz; }
    double t_of(int n) const { return n * dt; }
    Vec2 xy_of(int ix, int iy) const { return {x_of(ix), y_of(iy)}; }

    std::size_t n_boundary() const { return boundary.size(); }
    double h_min() const;
    double cfl_number() const;  // dt * sqrt(1/hx^2 + 1/hy^2 + 1/hz^2)
};

// Smooth vector field (gamma_1(x'), 0) with <gamma, nu> = 1 on the lateral
// boundary, plus its Jacobian and divergence sampled by centered differences.
struct MultiplierField {
    CrossSection section;
    Array2D<double> gx, gy;                // gamma_1 components on the cross lattice
    Array2D<double> hxx, hxy, hyx, hyy;    // Jacobian entries (axial row/column are 0)
    Array2D<double> div_gamma;

    Vec2 gamma_at(Vec2 p) const;  // analytic evaluation
};

// Builds the grid; dt is auto-selected from the CFL bound and T is honored
// exactly by rounding the step count up. Throws std::invalid_argument when
// T <= diam(section) or counts are not positive.
WaveguideGrid build_grid(const CrossSection& cs, int nx, int ny, int nz, double T, double r_support);

MultiplierField build_multiplier(const CrossSection& cs, const WaveguideGrid& grid);

double admissible_epsilon(const CrossSection& cs, double T);

}  // namespace wgt
