#include "wgt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wgt {

void ZeroBoundary::fill(int, double, std::vector<double>& re, std::vector<double>& im) const {
    std::fill(re.begin(), re.end(), 0.0);
    std::fill(im.begin(), im.end(), 0.0);
}

void FieldBoundary::fill(int n, double, std::vector<double>& re, std::vector<double>& im) const {
    const std::size_t plane = static_cast<std::size_t>(f_->nb) * f_->nz;
    std::memcpy(re.data(), f_->re.data() + n * plane, plane * sizeof(double));
    std::memcpy(im.data(), f_->im.data() + n * plane, plane * sizeof(double));
}

ProbeBoundary::ProbeBoundary(const WaveguideGrid& g, const GOProbe& p, const BumpPair& b)
    : grid_(&g), probe_(p), bumps_(&b) {
    if (auto why = probe_violation(g, p)) throw std::invalid_argument("invalid probe: " + *why);
    // The bump support travels along -theta. If the distance to the section
    // never drops below delta along the whole sweep, the datum vanishes
    // identically and the solve can be skipped.
    zero_ = true;
    const Vec2 travel{-p.theta.x, -p.theta.y};
    const int nsteps = 512;
    for (int i = 0; i <= nsteps; ++i) {
        const double t = g.T * i / nsteps;
        if (g.section.dist_outside(p.y_prime + t * travel) <= p.delta + g.hx + g.hy) {
            zero_ = false;
            break;
        }
    }
}

bool ProbeBoundary::active_at(double t) const {
    if (zero_) return false;
    const Vec2 c = probe_.y_prime - t * probe_.theta;  // support disk center
    return grid_->section.dist_boundary(c) <= probe_.delta;
}

void ProbeBoundary::fill(int n, double t, std::vector<double>& re, std::vector<double>& im) const {
    (void)n;
    std::fill(re.begin(), re.end(), 0.0);
    std::fill(im.begin(), im.end(), 0.0);
    if (zero_ || !active_at(t)) return;
    const auto& g = *grid_;
    const int nz = g.nz;
    const double zlo = probe_.y3 - probe_.delta, zhi = probe_.y3 + probe_.delta;
    int k0 = std::max(0, static_cast<int>(std::ceil((zlo + g.X_cap) / g.hz)));
    int k1 = std::min(nz - 1, static_cast<int>(std::floor((zhi + g.X_cap) / g.hz)));
    if (k0 > k1) return;
    const double d2 = probe_.delta * probe_.delta;
    for (int b = 0; b < static_cast<int>(g.n_boundary()); ++b) {
        const Vec2 xb = g.xy_of(g.boundary[b].ix, g.boundary[b].iy);
        const Vec2 moved = xb + t * probe_.theta - probe_.y_prime;
        if (moved.dot(moved) >= d2) continue;
        const double a2d = bumps_->phi_scaled(xb + t * probe_.theta, probe_.y_prime, probe_.delta);
        if (a2d == 0.0) continue;
        const double ph = probe_.phase(xb, t);
        const double cr = a2d * std::cos(ph), ci = a2d * std::sin(ph);
        for (int k = k0; k <= k1; ++k) {
            const double hz1 = bumps_->h_scaled(g.z_of(k), probe_.y3, probe_.delta);
            if (hz1 == 0.0) continue;
            re[static_cast<std::size_t>(b) * nz + k] = cr * hz1;
            im[static_cast<std::size_t>(b) * nz + k] = ci * hz1;
        }
    }
}

PulseSource::PulseSource(const WaveguideGrid& g, std::function<double(Vec2, double)> amplitude,
                         std::function<double(double)> time_profile)
    : s_(std::move(time_profile)) {
    amp_.assign(static_cast<std::size_t>(g.nx) * g.ny * g.nz, 0.0);
    for (int iz = 1; iz < g.nz - 1; ++iz)
        for (int iy = 1; iy < g.ny - 1; ++iy)
            for (int ix = 1; ix < g.nx - 1; ++ix)
                amp_[(static_cast<std::size_t>(iz) * g.ny + iy) * g.nx + ix] =
                    amplitude(g.xy_of(ix, iy), g.z_of(iz));
}

void PulseSource::add(int, double t, double scale, const WaveguideGrid&, double* re,
                      double*) const {
    const double st = s_(t);
    if (st == 0.0) return;
    const double c = scale * st;
    for (std::size_t i = 0; i < amp_.size(); ++i) re[i] += c * amp_[i];
}

GOSource::GOSource(const WaveguideGrid& g, const GOProbe& p, const PotentialField* q, Mode mode,
                   const BumpPair& b)
    : probe_(p), q_(q), bumps_(&b), mode_(mode) {
    if (auto why = probe_violation_remainder(g, p))
        throw std::invalid_argument("invalid probe: " + *why);
}

void GOSource::add(int n, double t, double scale, const WaveguideGrid& g, double* re,
                   double* im) const {
    if (mode_ == Mode::lattice_residual)
        add_lattice(n, scale, g, re, im);
    else
        add_analytic(t, scale, g, re, im);
}

void GOSource::add_lattice(int n, double scale, const WaveguideGrid& g, double* re,
                           double* im) const {
    // residual of the lattice ansatz A = Phi_d(x'+t theta) h_d(x3) e^{i s rho(x'.theta+t)}
    // under the leapfrog operator: (A^{n+1} - 2A^n + A^{n-1}) - dt^2 (Lap_h A^n - q A^n)
    const double dt = g.dt, dt2 = dt * dt;
    const double delta = probe_.delta;
    const double t_n = g.t_of(n);

    // support box covering the moving bump at t_{n-1}, t_n, t_{n+1}, padded for
    // the spatial stencil
    const double pad = delta + dt + 2 * std::max(g.hx, g.hy);
    const Vec2 c{probe_.y_prime.x - t_n * probe_.theta.x, probe_.y_prime.y - t_n * probe_.theta.y};
    const double x0 = -0.5 * g.section.side_x, y0 = -0.5 * g.section.side_y;
    int ix0 = std::max(1, static_cast<int>(std::ceil((c.x - pad - x0) / g.hx)));
    int ix1 = std::min(g.nx - 2, static_cast<int>(std::floor((c.x + pad - x0) / g.hx)));
    int iy0 = std::max(1, static_cast<int>(std::ceil((c.y - pad - y0) / g.hy)));
    int iy1 = std::min(g.ny - 2, static_cast<int>(std::floor((c.y + pad - y0) / g.hy)));
    if (ix0 > ix1 || iy0 > iy1) return;
    int k0 = std::max(1, static_cast<int>(std::ceil((probe_.y3 - delta + g.X_cap) / g.hz)) - 1);
    int k1 = std::min(g.nz - 2, static_cast<int>(std::floor((probe_.y3 + delta + g.X_cap) / g.hz)) + 1);
    if (k0 > k1) return;

    const int bx = ix1 - ix0 + 3, by = iy1 - iy0 + 3, bz = k1 - k0 + 3;  // 1-cell halo
    const auto bidx = [&](int i, int j, int k) {
        return (static_cast<std::size_t>(k) * by + j) * bx + i;
    };
    thread_local std::vector<double> a_re, a_im, ap_re, ap_im, an_re, an_im;
    const std::size_t bn = static_cast<std::size_t>(bx) * by * bz;
    for (auto* v : {&a_re, &a_im, &ap_re, &ap_im, &an_re, &an_im}) v->assign(bn, 0.0);

    auto fill_ansatz = [&](double t, std::vector<double>& vre, std::vector<double>& vim) {
        for (int j = 0; j < by; ++j)
            for (int i = 0; i < bx; ++i) {
                const Vec2 x = g.xy_of(ix0 - 1 + i, iy0 - 1 + j);
                const double amp2d = bumps_->phi_scaled(x + t * probe_.theta, probe_.y_prime, delta);
                if (amp2d == 0.0) continue;
                const double ph = probe_.phase(x, t);
                const double cr = amp2d * std::cos(ph), ci = amp2d * std::sin(ph);
                for (int k = 0; k < bz; ++k) {
                    const double hv = bumps_->h_scaled(g.z_of(k0 - 1 + k), probe_.y3, delta);
                    if (hv == 0.0) continue;
                    vre[bidx(i, j, k)] = cr * hv;
                    vim[bidx(i, j, k)] = ci * hv;
                }
            }
    };
    fill_ansatz(t_n, a_re, a_im);
    fill_ansatz(t_n - dt, ap_re, ap_im);
    fill_ansatz(t_n + dt, an_re, an_im);

    const double cx = 1.0 / (g.hx * g.hx), cy = 1.0 / (g.hy * g.hy), cz = 1.0 / (g.hz * g.hz);
    const double diag = -2.0 * (cx + cy + cz);
    const double f = scale / dt2;
    for (int k = 1; k + 1 < bz; ++k)
        for (int j = 1; j + 1 < by; ++j)
            for (int i = 1; i + 1 < bx; ++i) {
                const std::size_t b = bidx(i, j, k);
                const int gx = ix0 - 1 + i, gy = iy0 - 1 + j, gz = k0 - 1 + k;
                const double qv = q_ ? q_->values(gx, gy, gz) : 0.0;
                const double lap_re = diag * a_re[b] + cx * (a_re[b - 1] + a_re[b + 1]) +
                                      cy * (a_re[b - bx] + a_re[b + bx]) +
                                      cz * (a_re[b - static_cast<std::size_t>(bx) * by] +
                                            a_re[b + static_cast<std::size_t>(bx) * by]);
                const double lap_im = diag * a_im[b] + cx * (a_im[b - 1] + a_im[b + 1]) +
                                      cy * (a_im[b - bx] + a_im[b + bx]) +
                                      cz * (a_im[b - static_cast<std::size_t>(bx) * by] +
                                            a_im[b + static_cast<std::size_t>(bx) * by]);
                const double s_re =
                    (an_re[b] - 2 * a_re[b] + ap_re[b]) - dt2 * (lap_re - qv * a_re[b]);
                const double s_im =
                    (an_im[b] - 2 * a_im[b] + ap_im[b]) - dt2 * (lap_im - qv * a_im[b]);
                if (s_re == 0.0 && s_im == 0.0) continue;
                const std::size_t gi = (static_cast<std::size_t>(gz) * g.ny + gy) * g.nx + gx;
                re[gi] += f * s_re;
                if (im) im[gi] += f * s_im;
            }
}

void GOSource::add_analytic(double t, double scale, const WaveguideGrid& g, double* re,
                            double* im) const {
    const double delta = probe_.delta;
    const Vec2 c{probe_.y_prime.x - t * probe_.theta.x, probe_.y_prime.y - t * probe_.theta.y};
    const double x0 = -0.5 * g.section.side_x, y0 = -0.5 * g.section.side_y;
    int ix0 = std::max(1, static_cast<int>(std::ceil((c.x - delta - x0) / g.hx)));
    int ix1 = std::min(g.nx - 2, static_cast<int>(std::floor((c.x + delta - x0) / g.hx)));
    int iy0 = std::max(1, static_cast<int>(std::ceil((c.y - delta - y0) / g.hy)));
    int iy1 = std::min(g.ny - 2, static_cast<int>(std::floor((c.y + delta - y0) / g.hy)));
    if (ix0 > ix1 || iy0 > iy1) return;
    int k0 = std::max(1, static_cast<int>(std::ceil((probe_.y3 - delta + g.X_cap) / g.hz)));
    int k1 = std::min(g.nz - 2, static_cast<int>(std::floor((probe_.y3 + delta + g.X_cap) / g.hz)));
    if (k0 > k1) return;

    const Vec2 perp = probe_.theta.perp();
    const double inv_d = 1.0 / delta;
    for (int iy = iy0; iy <= iy1; ++iy)
        for (int ix = ix0; ix <= ix1; ++ix) {
            const Vec2 x = g.xy_of(ix, iy);
            const Vec2 u{(x.x + t * probe_.theta.x - probe_.y_prime.x) * inv_d,
                         (x.y + t * probe_.theta.y - probe_.y_prime.y) * inv_d};
            if (u.dot(u) >= 1.0) continue;
            const double phi = bumps_->phi(u) * inv_d;
            const double phi_pp = bumps_->phi_dir2(u, perp) * inv_d * inv_d * inv_d;
            const double ph = probe_.phase(x, t);
            const double cph = std::cos(ph), sph = std::sin(ph);
            for (int k = k0; k <= k1; ++k) {
                const double hv = bumps_->h_scaled(g.z_of(k), probe_.y3, delta);
                const double hdd = bumps_->h_scaled_d2(g.z_of(k), probe_.y3, delta);
                double Hval = -phi_pp * hv - phi * hdd;
                if (q_ != nullptr) Hval += q_->values(ix, iy, k) * phi * hv;
                if (Hval == 0.0) continue;
                const std::size_t i = (static_cast<std::size_t>(k) * g.ny + iy) * g.nx + ix;
                re[i] += scale * Hval * cph;
                if (im) im[i] += scale * Hval * sph;
            }
        }
}

namespace {

struct TraceStencil {
    std::size_t self;
    std::size_t ax, ax2;
    std::size_t ay, ay2;
    double cx, cy;
};

std::vector<TraceStencil> build_trace_stencils(const WaveguideGrid& g) {
    std::vector<TraceStencil> st(g.n_boundary());
    for (std::size_t b = 0; b < g.n_boundary(); ++b) {
        const auto& node = g.boundary[b];
        TraceStencil t{};
        t.self = static_cast<std::size_t>(node.iy) * g.nx + node.ix;
        t.cx = t.cy = 0;
        if (node.normal.x != 0) {
            const long in = node.normal.x > 0 ? -1 : 1;
            t.ax = t.self + in;
            t.ax2 = t.self + 2 * in;
            t.cx = std::abs(node.normal.x) / (2 * g.hx);
        }
        if (node.normal.y != 0) {
            const long in = (node.normal.y > 0 ? -1 : 1) * static_cast<long>(g.nx);
            t.ay = t.self + in;
            t.ay2 = t.self + 2 * in;
            t.cy = std::abs(node.normal.y) / (2 * g.hy);
        }
        st[b] = t;
    }
    return st;
}

void compute_trace_plane(const WaveguideGrid& g, const std::vector<TraceStencil>& st,
                         const double* u, double* plane) {
    const std::size_t sz = static_cast<std::size_t>(g.nx) * g.ny;
    const int nz = g.nz;
    for (std::size_t b = 0; b < st.size(); ++b) {
        const auto& s = st[b];
        double* out = plane + b * nz;
        for (int k = 0; k < nz; ++k) {
            const double* uz = u + k * sz;
            double v = 0;
            if (s.cx != 0) v += s.cx * (3 * uz[s.self] - 4 * uz[s.ax] + uz[s.ax2]);
            if (s.cy != 0) v += s.cy * (3 * uz[s.self] - 4 * uz[s.ay] + uz[s.ay2]);
            out[k] = v;
        }
    }
}

double dirichlet_form(const WaveguideGrid& g, const double* q, const double* u, const double* v) {
    const double vol = g.hx * g.hy * g.hz;
    const double wx = vol / (g.hx * g.hx), wy = vol / (g.hy * g.hy), wz = vol / (g.hz * g.hz);
    const std::size_t sy = g.nx, sz = static_cast<std::size_t>(g.nx) * g.ny;
    double acc = 0;
    for (int iz = 0; iz < g.nz; ++iz)
        for (int iy = 0; iy < g.ny; ++iy) {
            const std::size_t row = (static_cast<std::size_t>(iz) * g.ny + iy) * g.nx;
            for (int ix = 0; ix < g.nx; ++ix) {
                const std::size_t i = row + ix;
                if (ix + 1 < g.nx) acc += wx * (u[i + 1] - u[i]) * (v[i + 1] - v[i]);
                if (iy + 1 < g.ny) acc += wy * (u[i + sy] - u[i]) * (v[i + sy] - v[i]);
                if (iz + 1 < g.nz) acc += wz * (u[i + sz] - u[i]) * (v[i + sz] - v[i]);
                if (q != nullptr) acc += vol * q[i] * u[i] * v[i];
            }
        }
    return acc;
}

void step_kernel(const WaveguideGrid& g, const double* qv, double dt2, const double* up,
                 const double* uc, double* un, int nthreads) {
    const int nx = g.nx, ny = g.ny, nz = g.nz;
    const double cx = 1.0 / (g.hx * g.hx), cy = 1.0 / (g.hy * g.hy), cz = 1.0 / (g.hz * g.hz);
    const double diag = -2.0 * (cx + cy + cz);
    const std::size_t sy = nx, sz = static_cast<std::size_t>(nx) * ny;
#ifdef _OPENMP
#pragma omp parallel for num_threads(nthreads) schedule(static)
#endif
    for (int iz = 1; iz < nz - 1; ++iz) {
        for (int iy = 1; iy < ny - 1; ++iy) {
            const std::size_t row = (static_cast<std::size_t>(iz) * ny + iy) * nx;
            const double* qrow = qv ? qv + row : nullptr;
            for (int ix = 1; ix < nx - 1; ++ix) {
                const std::size_t i = row + ix;
                double lap = diag * uc[i] + cx * (uc[i - 1] + uc[i + 1]) +
                             cy * (uc[i - sy] + uc[i + sy]) + cz * (uc[i - sz] + uc[i + sz]);
                if (qrow) lap -= qrow[ix] * uc[i];
                un[i] = 2 * uc[i] - up[i] + dt2 * lap;
            }
        }
    }
#ifndef _OPENMP
    (void)nthreads;
#endif
}

}  // namespace

SolveResult solve_ibvp(const WaveguideGrid& grid, const PotentialField* q, const BoundaryData& f,
                       const InteriorSource* source, const SolveOptions& opt) {
    if (grid.cfl_number() > 1.0) throw SolverError("CFL violated", -1);
    const int nx = grid.nx, ny = grid.ny, nz = grid.nz, nt = grid.nt;
    const std::size_t N = static_cast<std::size_t>(nx) * ny * nz;
    const std::size_t sz = static_cast<std::size_t>(nx) * ny;
    const double dt = grid.dt, dt2 = dt * dt;
    const bool cplx = opt.complex_data;
    const double* qv = q ? q->values.data() : nullptr;

    int nthreads = 1;
#ifdef _OPENMP
    nthreads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#endif

    std::vector<double> bre(static_cast<std::size_t>(grid.n_boundary()) * nz), bim(bre.size());
    std::vector<double> bufs_re[3] = {std::vector<double>(N, 0.0), std::vector<double>(N, 0.0),
                                      std::vector<double>(N, 0.0)};
    std::vector<double> bufs_im[3];
    if (cplx)
        for (auto& b : bufs_im) b.assign(N, 0.0);
    double* up_re = bufs_re[0].data();
    double* uc_re = bufs_re[1].data();
    double* un_re = bufs_re[2].data();
    double* up_im = cplx ? bufs_im[0].data() : nullptr;
    double* uc_im = cplx ? bufs_im[1].data() : nullptr;
    double* un_im = cplx ? bufs_im[2].data() : nullptr;

    const auto stencils = build_trace_stencils(grid);
    const bool need_trace = opt.want_trace || static_cast<bool>(opt.trace_sink);
    std::vector<double> tr_re, tr_im;
    if (need_trace) {
        tr_re.assign(static_cast<std::size_t>(grid.n_boundary()) * nz, 0.0);
        tr_im.assign(tr_re.size(), 0.0);
    }

    SolveResult res;
    res.homogeneous_dirichlet = f.is_zero();
    if (opt.want_trace) res.neumann_trace = LateralField(grid);
    res.history_stride = opt.history_stride;

    std::vector<double> save3_re, save3_im;  // u^{nt-3} for the one-sided du/dt at T

    auto impose_boundary = [&](int n, double* ure, double* uim) {
        f.fill(n, grid.t_of(n), bre, bim);
        for (std::size_t b = 0; b < grid.n_boundary(); ++b) {
            const std::size_t self = static_cast<std::size_t>(grid.boundary[b].iy) * nx +
                                     grid.boundary[b].ix;
            for (int k = 0; k < nz; ++k) {
                ure[self + k * sz] = bre[b * nz + k];
                if (uim) uim[self + k * sz] = bim[b * nz + k];
            }
        }
        std::memset(ure, 0, sz * sizeof(double));
        std::memset(ure + (static_cast<std::size_t>(nz) - 1) * sz, 0, sz * sizeof(double));
        if (uim) {
            std::memset(uim, 0, sz * sizeof(double));
            std::memset(uim + (static_cast<std::size_t>(nz) - 1) * sz, 0, sz * sizeof(double));
        }
    };

    auto emit_step = [&](int n, const double* ure, const double* uim) {
        const double t = grid.t_of(n);
        const double wt = (n == 0 || n == nt - 1) ? 0.5 * dt : dt;
        if (need_trace) {
            compute_trace_plane(grid, stencils, ure, tr_re.data());
            if (uim)
                compute_trace_plane(grid, stencils, uim, tr_im.data());
            else
                std::fill(tr_im.begin(), tr_im.end(), 0.0);
            if (opt.want_trace) {
                auto& lf = res.neumann_trace;
                std::memcpy(lf.re.data() + lf.idx(n, 0, 0), tr_re.data(),
                            tr_re.size() * sizeof(double));
                std::memcpy(lf.im.data() + lf.idx(n, 0, 0), tr_im.data(),
                            tr_im.size() * sizeof(double));
            }
            if (opt.trace_sink) opt.trace_sink(n, t, tr_re.data(), tr_im.data());
            double plane = 0;
            for (std::size_t b = 0; b < grid.n_boundary(); ++b) {
                double zs = 0;
                for (int k = 0; k < nz; ++k) {
                    const double r = tr_re[b * nz + k], m = tr_im[b * nz + k];
                    zs += r * r + m * m;
                }
                plane += grid.boundary[b].arc_weight * zs;
            }
            res.trace_l2 += wt * plane * grid.hz;
        }
        if (opt.accumulate_psi_norms) {
            const double vol = grid.hx * grid.hy * grid.hz;
            double l2 = 0;
            for (std::size_t i = 0; i < N; ++i) {
                l2 += ure[i] * ure[i];
                if (uim) l2 += uim[i] * uim[i];
            }
            res.psi_l2 += wt * l2 * vol;
            double g2 = dirichlet_form(grid, nullptr, ure, ure);
            if (uim) g2 += dirichlet_form(grid, nullptr, uim, uim);
            res.grad_psi_l2 += wt * g2;
        }
        if (opt.history_stride > 0 && n % opt.history_stride == 0) {
            res.history_re.emplace_back(ure, ure + N);
            if (uim) res.history_im.emplace_back(uim, uim + N);
        }
        if (opt.want_final_state && n == nt - 3) {
            save3_re.assign(ure, ure + N);
            if (uim) save3_im.assign(uim, uim + N);
        }
    };

    // u^0 = 0 with boundary data imposed
    impose_boundary(0, uc_re, uc_im);
    emit_step(0, uc_re, uc_im);

    // u^1 from the zero initial state: u^1 = u^0 + dt^2/2 (Lap u^0 - q u^0 + S(0))
    std::memcpy(up_re, uc_re, N * sizeof(double));
    if (cplx) std::memcpy(up_im, uc_im, N * sizeof(double));
    step_kernel(grid, qv, 0.5 * dt2, up_re, uc_re, un_re, nthreads);
    if (cplx) step_kernel(grid, qv, 0.5 * dt2, up_im, uc_im, un_im, nthreads);
    if (source) source->add(0, 0.0, 0.5 * dt2, grid, un_re, un_im);
    impose_boundary(1, un_re, un_im);
    {
        double* t0 = up_re;
        up_re = uc_re;
        uc_re = un_re;
        un_re = t0;
        if (cplx) {
            double* t1 = up_im;
            up_im = uc_im;
            uc_im = un_im;
            un_im = t1;
        }
    }
    emit_step(1, uc_re, uc_im);

    const std::size_t center = (static_cast<std::size_t>(nz / 2) * ny + ny / 2) * nx + nx / 2;
    for (int n = 1; n + 1 < nt; ++n) {
        step_kernel(grid, qv, dt2, up_re, uc_re, un_re, nthreads);
        if (cplx) step_kernel(grid, qv, dt2, up_im, uc_im, un_im, nthreads);
        if (source) source->add(n, grid.t_of(n), dt2, grid, un_re, un_im);
        impose_boundary(n + 1, un_re, un_im);
        if (opt.want_energy) {
            const double vol = grid.hx * grid.hy * grid.hz;
            double kin = 0;
            for (std::size_t i = 0; i < N; ++i) {
                const double d = (un_re[i] - uc_re[i]) / dt;
                kin += d * d;
            }
            if (cplx)
                for (std::size_t i = 0; i < N; ++i) {
                    const double d = (un_im[i] - uc_im[i]) / dt;
                    kin += d * d;
                }
            double pot = dirichlet_form(grid, qv, un_re, uc_re);
            if (cplx) pot += dirichlet_form(grid, qv, un_im, uc_im);
            res.energy.push_back(0.5 * kin * vol + 0.5 * pot);
        }
        if (!std::isfinite(un_re[center]) || (n % 32 == 0 && !std::isfinite(un_re[sz + nx + 1])))
            throw SolverError("NaN detected in the field update", n + 1);
        if (opt.tri_field_sink) opt.tri_field_sink(n, grid.t_of(n), up_re, uc_re, un_re);
        double* t0 = up_re;
        up_re = uc_re;
        uc_re = un_re;
        un_re = t0;
        if (cplx) {
            double* t1 = up_im;
            up_im = uc_im;
            uc_im = un_im;
            un_im = t1;
        }
        emit_step(n + 1, uc_re, uc_im);
    }

    if (opt.want_final_state) {
        res.uT_re.assign(uc_re, uc_re + N);
        res.utT_re.resize(N);
        for (std::size_t i = 0; i < N; ++i)
            res.utT_re[i] = (3 * uc_re[i] - 4 * up_re[i] + save3_re[i]) / (2 * dt);
        if (cplx) {
            res.uT_im.assign(uc_im, uc_im + N);
            res.utT_im.resize(N);
            for (std::size_t i = 0; i < N; ++i)
                res.utT_im[i] = (3 * uc_im[i] - 4 * up_im[i] + save3_im[i]) / (2 * dt);
        }
    }
    res.trace_l2 = std::sqrt(res.trace_l2);
    res.psi_l2 = std::sqrt(res.psi_l2);
    res.grad_psi_l2 = std::sqrt(res.grad_psi_l2);
    return res;
}

RemainderNorms go_remainder(const WaveguideGrid& grid, const PotentialField* q, const GOProbe& p,
                            int threads) {
    GOSource src(grid, p, q);
    ZeroBoundary zb;
    SolveOptions opt;
    opt.complex_data = true;
    opt.accumulate_psi_norms = true;
    opt.threads = threads;
    const SolveResult r = solve_ibvp(grid, q, zb, &src, opt);
    return {r.psi_l2, r.grad_psi_l2};
}

}  // namespace wgt
