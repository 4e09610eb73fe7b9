#include "wgt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wgt {

CrossSection CrossSection::make_rectangle(double ax, double ay) {
    if (ax <= 0 || ay <= 0) throw std::invalid_argument("rectangle sides must be positive");
    CrossSection cs;
    cs.kind = SectionKind::rectangle;
    cs.side_x = ax;
    cs.side_y = ay;
    return cs;
}

CrossSection CrossSection::make_disk(double r) {
    if (r <= 0) throw std::invalid_argument("disk radius must be positive");
    CrossSection cs;
    cs.kind = SectionKind::disk;
    cs.radius = r;
    return cs;
}

double CrossSection::diameter() const {
    if (kind == SectionKind::rectangle) return std::hypot(side_x, side_y);
    return 2.0 * radius;
}

double CrossSection::circumradius() const {
    if (kind == SectionKind::rectangle) return 0.5 * std::hypot(side_x, side_y);
    return radius;
}

double CrossSection::dist_outside(Vec2 p) const {
    if (kind == SectionKind::disk) return std::max(0.0, p.norm() - radius);
    const double dx = std::max(std::abs(p.x) - 0.5 * side_x, 0.0);
    const double dy = std::max(std::abs(p.y) - 0.5 * side_y, 0.0);
    return std::hypot(dx, dy);
}

double CrossSection::dist_boundary(Vec2 p) const {
    if (kind == SectionKind::disk) return std::abs(p.norm() - radius);
    const double out = dist_outside(p);
    if (out > 0) return out;
    const double mx = 0.5 * side_x - std::abs(p.x);
    const double my = 0.5 * side_y - std::abs(p.y);
    return std::min(mx, my);
}

bool CrossSection::contains(Vec2 p) const {
    if (kind == SectionKind::disk) return p.norm() <= radius;
    return std::abs(p.x) <= 0.5 * side_x && std::abs(p.y) <= 0.5 * side_y;
}

std::string CrossSection::describe() const {
    if (kind == SectionKind::rectangle)
        return "rectangle " + std::to_string(side_x) + "x" + std::to_string(side_y);
    return "disk r=" + std::to_string(radius);
}

double admissible_epsilon(const CrossSection& cs, double T) {
    const double diam = cs.diameter();
    if (T <= diam) throw std::invalid_argument("T must exceed the cross-section diameter");
    return 0.5 * std::min(1.0, (T - diam) / 3.0);
}

double WaveguideGrid::h_min() const { return std::min({hx, hy, hz}); }

double WaveguideGrid::cfl_number() const {
    return dt * std::sqrt(1.0 / (hx * hx) + 1.0 / (hy * hy) + 1.0 / (hz * hz));
}

WaveguideGrid build_grid(const CrossSection& cs, int nx, int ny, int nz, double T, double r_support) {
    if (nx < 4 || ny < 4 || nz < 4) throw std::invalid_argument("grid counts must be at least 4");
    if (r_support < 0) throw std::invalid_argument("r_support must be nonnegative");
    const double diam = cs.diameter();
    if (T <= diam) throw std::invalid_argument("T must exceed the cross-section diameter (T > Diam)");
    if (cs.kind != SectionKind::rectangle)
        throw std::invalid_argument("build_grid: Cartesian lattice requires the rectangle section; use the polar disk grid");

    WaveguideGrid g;
    g.section = cs;
    g.nx = nx;
    g.ny = ny;
    g.nz = nz;
    g.T = T;
    g.r_support = r_support;
    g.X_cap = r_support + T + 2.0;
    g.epsilon = admissible_epsilon(cs, T);
    g.hx = cs.side_x / (nx - 1);
    g.hy = cs.side_y / (ny - 1);
    g.hz = 2.0 * g.X_cap / (nz - 1);

    // dt from the sufficient CFL bound, then rounded so (nt-1)*dt == T.
    const double dt_max = 0.9 * g.h_min() / std::sqrt(3.0);
    g.nt = static_cast<int>(std::ceil(T / dt_max)) + 1;
    g.dt = T / (g.nt - 1);
    if (g.cfl_number() > 1.0) throw std::invalid_argument("CFL violated after dt selection");

    g.interior = Array2D<std::uint8_t>(nx, ny, 0);
    for (int ix = 1; ix < nx - 1; ++ix)
        for (int iy = 1; iy < ny - 1; ++iy) g.interior(ix, iy) = 1;

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double wc = 0.5 * (g.hx + g.hy);
    auto push = [&](int ix, int iy, Vec2 nrm, double w, NodeKind k) {
        g.boundary.push_back({ix, iy, nrm, w, k});
    };
    // Counterclockwise perimeter walk; corners carry the two half-edge weights.
    push(0, 0, {-inv_sqrt2, -inv_sqrt2}, wc, NodeKind::corner);
    for (int ix = 1; ix < nx - 1; ++ix) push(ix, 0, {0, -1}, g.hx, NodeKind::face_ylo);
    push(nx - 1, 0, {inv_sqrt2, -inv_sqrt2}, wc, NodeKind::corner);
    for (int iy = 1; iy < ny - 1; ++iy) push(nx - 1, iy, {1, 0}, g.hy, NodeKind::face_xhi);
    push(nx - 1, ny - 1, {inv_sqrt2, inv_sqrt2}, wc, NodeKind::corner);
    for (int ix = nx - 2; ix >= 1; --ix) push(ix, ny - 1, {0, 1}, g.hx, NodeKind::face_yhi);
    push(0, ny - 1, {-inv_sqrt2, inv_sqrt2}, wc, NodeKind::corner);
    for (int iy = ny - 2; iy >= 1; --iy) push(0, iy, {-1, 0}, g.hy, NodeKind::face_xlo);
    return g;
}

namespace {

// gamma_1 is the component-wise distance-weighted blend of the opposing face
// normals: gamma_x = lambda*(+1) + (1-lambda)*(-1) with lambda the relative
// distance from the x- face. Linear, smooth, and <gamma, nu> = 1 exactly on
// the faces. On the disk the radial field x'/a plays the same role.
Vec2 gamma_rect(Vec2 p, const CrossSection& cs) {
    return {2.0 * p.x / cs.side_x, 2.0 * p.y / cs.side_y};
}

Vec2 gamma_disk(Vec2 p, const CrossSection& cs) { return {p.x / cs.radius, p.y / cs.radius}; }

}  // namespace

Vec2 MultiplierField::gamma_at(Vec2 p) const {
    return section.kind == SectionKind::rectangle ? gamma_rect(p, section) : gamma_disk(p, section);
}

MultiplierField build_multiplier(const CrossSection& cs, const WaveguideGrid& grid) {
    MultiplierField m;
    m.section = cs;
    const int nx = grid.nx, ny = grid.ny;
    m.gx = Array2D<double>(nx, ny);
    m.gy = Array2D<double>(nx, ny);
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
            const Vec2 gmm = m.gamma_at(grid.xy_of(ix, iy));
            m.gx(ix, iy) = gmm.x;
            m.gy(ix, iy) = gmm.y;
        }

    auto diff_x = [&](const Array2D<double>& f, int ix, int iy) {
        if (ix == 0) return (f(1, iy) - f(0, iy)) / grid.hx;
        if (ix == nx - 1) return (f(nx - 1, iy) - f(nx - 2, iy)) / grid.hx;
        return (f(ix + 1, iy) - f(ix - 1, iy)) / (2 * grid.hx);
    };
    auto diff_y = [&](const Array2D<double>& f, int ix, int iy) {
        if (iy == 0) return (f(ix, 1) - f(ix, 0)) / grid.hy;
        if (iy == ny - 1) return (f(ix, ny - 1) - f(ix, ny - 2)) / grid.hy;
        return (f(ix, iy + 1) - f(ix, iy - 1)) / (2 * grid.hy);
    };

    m.hxx = Array2D<double>(nx, ny);
    m.hxy = Array2D<double>(nx, ny);
    m.hyx = Array2D<double>(nx, ny);
    m.hyy = Array2D<double>(nx, ny);
    m.div_gamma = Array2D<double>(nx, ny);
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
            m.hxx(ix, iy) = diff_x(m.gx, ix, iy);
            m.hxy(ix, iy) = diff_y(m.gx, ix, iy);
            m.hyx(ix, iy) = diff_x(m.gy, ix, iy);
            m.hyy(ix, iy) = diff_y(m.gy, ix, iy);
            m.div_gamma(ix, iy) = m.hxx(ix, iy) + m.hyy(ix, iy);
        }
    return m;
}

}  // namespace wgt
