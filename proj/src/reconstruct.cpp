#include "wgt/reconstruct.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "wgt/fourier.hpp"
#include "wgt/solver.hpp"

namespace wgt {

namespace {

// trapezoid quadrature nodes of the squared 1D bump on [-1,1]
struct Quad1 {
    std::vector<double> v, w;
};
Quad1 bump_quad_1d(const BumpPair& bp, int n) {
    Quad1 q;
    q.v.resize(n + 1);
    q.w.resize(n + 1);
    const double h = 2.0 / n;
    for (int i = 0; i <= n; ++i) {
        q.v[i] = -1 + i * h;
        const double b = bp.h(q.v[i]);
        q.w[i] = b * b * h * ((i == 0 || i == n) ? 0.5 : 1.0);
    }
    return q;
}

struct Quad2 {
    std::vector<Vec2> u;
    std::vector<double> w;
};
Quad2 bump_quad_2d(const BumpPair& bp, int n) {
    Quad2 q;
    const double h = 2.0 / n;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const Vec2 u{-1 + i * h, -1 + j * h};
            if (u.dot(u) >= 1.0) continue;
            const double b = bp.phi(u);
            const double w = b * b * h * h * ((i == 0 || i == n) ? 0.5 : 1.0) *
                             ((j == 0 || j == n) ? 0.5 : 1.0);
            if (w != 0) {
                q.u.push_back(u);
                q.w.push_back(w);
            }
        }
    return q;
}

using Eval3 = std::function<double(Vec2, double)>;

Eval3 field_eval(const WaveguideGrid& grid, const PotentialField& q) {
    if (q.analytic) return q.analytic;
    // trilinear fallback from the grid samples
    return [&grid, &q](Vec2 xy, double z) -> double {
        const double fx = (xy.x + 0.5 * grid.section.side_x) / grid.hx;
        const double fy = (xy.y + 0.5 * grid.section.side_y) / grid.hy;
        const double fz = (z + grid.X_cap) / grid.hz;
        const int ix = static_cast<int>(std::floor(fx));
        const int iy = static_cast<int>(std::floor(fy));
        const int iz = static_cast<int>(std::floor(fz));
        if (ix < 0 || iy < 0 || iz < 0 || ix + 1 >= grid.nx || iy + 1 >= grid.ny ||
            iz + 1 >= grid.nz)
            return 0.0;
        const double ax = fx - ix, ay = fy - iy, az = fz - iz;
        double acc = 0;
        for (int dz = 0; dz < 2; ++dz)
            for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx)
                    acc += (dx ? ax : 1 - ax) * (dy ? ay : 1 - ay) * (dz ? az : 1 - az) *
                           q.values(ix + dx, iy + dy, iz + dz);
        return acc;
    };
}

Eval3 gap_eval(const WaveguideGrid& grid, const PotentialField& q1, const PotentialField& q2) {
    auto e1 = field_eval(grid, q1);
    auto e2 = field_eval(grid, q2);
    return [e1, e2](Vec2 xy, double z) { return e1(xy, z) - e2(xy, z); };
}

// Fine-mode slice mollification: G on an intermediate lattice, then the
// cross-section quadrature against phi^2.
Image2D mollify_slice_fine(const Eval3& q, double delta, const Image2D& target, double y3,
                           const BumpPair& bumps, bool axial_average) {
    const Quad1 q1 = bump_quad_1d(bumps, 48);
    const Quad2 q2 = bump_quad_2d(bumps, 40);

    const double hg = delta / 8.0;
    const Vec2 lo{target.origin.x - delta - hg, target.origin.y - delta - hg};
    const int n0 = static_cast<int>(std::ceil((target.point(target.n0() - 1, 0).x + delta + hg - lo.x) / hg)) + 2;
    const int n1 = static_cast<int>(std::ceil((target.point(0, target.n1() - 1).y + delta + hg - lo.y) / hg)) + 2;
    Image2D G(n0, n1, hg, lo);
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            const Vec2 p = G.point(i, j);
            double acc = 0;
            if (axial_average) {
                for (std::size_t m = 0; m < q1.v.size(); ++m)
                    if (q1.w[m] != 0) acc += q1.w[m] * q(p, y3 + delta * q1.v[m]);
            } else {
                acc = q(p, y3);
            }
            G.data(i, j) = acc;
        }

    Image2D out = target;
    for (int i = 0; i < out.n0(); ++i)
        for (int j = 0; j < out.n1(); ++j) {
            const Vec2 y = out.point(i, j);
            double acc = 0;
            for (std::size_t m = 0; m < q2.u.size(); ++m)
                acc += q2.w[m] * G.sample({y.x + delta * q2.u[m].x, y.y + delta * q2.u[m].y});
            out.data(i, j) = acc;
        }
    return out;
}

// Lattice-mode slice mollification: plain sums over the waveguide lattice,
// matching the quadrature the boundary pairing effectively applies.
Image2D mollify_slice_lattice(const WaveguideGrid& grid, const PotentialField& q, double delta,
                              const Image2D& target, double y3, const BumpPair& bumps,
                              bool axial_average) {
    // axial weights
    std::vector<double> wz(grid.nz, 0.0);
    if (axial_average) {
        for (int k = 0; k < grid.nz; ++k) {
            const double v = bumps.h_scaled(grid.z_of(k), y3, delta);
            wz[k] = v * v * grid.hz;
        }
    }
    // per-column axial average
    Array2D<double> Q1(grid.nx, grid.ny, 0.0);
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix) {
            double acc = 0;
            if (axial_average) {
                for (int k = 0; k < grid.nz; ++k)
                    if (wz[k] != 0) acc += wz[k] * q.values(ix, iy, k);
            } else {
                const int k = static_cast<int>(std::round((y3 + grid.X_cap) / grid.hz));
                acc = q.values(ix, iy, std::clamp(k, 0, grid.nz - 1));
            }
            Q1(ix, iy) = acc;
        }

    Image2D out = target;
    const double cell = grid.hx * grid.hy;
    for (int i = 0; i < out.n0(); ++i)
        for (int j = 0; j < out.n1(); ++j) {
            const Vec2 y = out.point(i, j);
            double acc = 0;
            const int ix0 = std::max(0, static_cast<int>(std::ceil((y.x - delta + 0.5 * grid.section.side_x) / grid.hx)));
            const int ix1 = std::min(grid.nx - 1, static_cast<int>(std::floor((y.x + delta + 0.5 * grid.section.side_x) / grid.hx)));
            const int iy0 = std::max(0, static_cast<int>(std::ceil((y.y - delta + 0.5 * grid.section.side_y) / grid.hy)));
            const int iy1 = std::min(grid.ny - 1, static_cast<int>(std::floor((y.y + delta + 0.5 * grid.section.side_y) / grid.hy)));
            for (int iy2 = iy0; iy2 <= iy1; ++iy2)
                for (int ix2 = ix0; ix2 <= ix1; ++ix2) {
                    const double p = bumps.phi_scaled(grid.xy_of(ix2, iy2), y, delta);
                    if (p != 0) acc += p * p * Q1(ix2, iy2) * cell;
                }
            out.data(i, j) = acc;
        }
    return out;
}

}  // namespace

std::vector<Image2D> mollify_R(const WaveguideGrid& grid, const PotentialField& q, double delta,
                               const Image2D& target, const std::vector<double>& slices,
                               MollifyMode mode, const BumpPair& bumps) {
    const double ds = grid.epsilon / 4.0;
    if (!(delta > 0) || delta >= ds)
        throw std::invalid_argument("mollify_R: delta must lie in (0, delta*)");
    std::vector<Image2D> out;
    out.reserve(slices.size());
    const Eval3 ev = field_eval(grid, q);
    for (const double y3 : slices) {
        if (mode == MollifyMode::fine)
            out.push_back(mollify_slice_fine(ev, delta, target, y3, bumps, true));
        else
            out.push_back(mollify_slice_lattice(grid, q, delta, target, y3, bumps, true));
    }
    return out;
}

Image2D mollify_S(const WaveguideGrid& grid, const PotentialField& q, double delta,
                  const Image2D& target, double y3, MollifyMode mode, const BumpPair& bumps) {
    const double ds = grid.epsilon / 4.0;
    if (!(delta > 0) || delta >= ds)
        throw std::invalid_argument("mollify_S: delta must lie in (0, delta*)");
    if (mode == MollifyMode::fine)
        return mollify_slice_fine(field_eval(grid, q), delta, target, y3, bumps, false);
    return mollify_slice_lattice(grid, q, delta, target, y3, bumps, false);
}

CorrelationDatum correlate(const WaveguideGrid& grid, const PotentialField& q1,
                           const PotentialField& q2, const GOProbe& probe,
                           const CorrelateOptions& opt) {
    CorrelationDatum d;
    d.probe_id = probe.id();
    ProbeBoundary bd(grid, probe);
    if (!bd.is_zero()) {
        GOProbe adj = probe;
        adj.sign = -probe.sign;
        ProbeBoundary u2(grid, adj);
        const int nz = grid.nz;
        const std::size_t plane = grid.n_boundary() * static_cast<std::size_t>(nz);
        std::vector<double> u2re(plane), u2im(plane);

        auto pair_with = [&](const PotentialField& q, double& out_re, double& out_im) {
            double acc_re = 0, acc_im = 0;
            SolveOptions so;
            so.complex_data = true;
            so.threads = opt.threads;
            so.trace_sink = [&](int n, double t, const double* tre, const double* tim) {
                if (!u2.active_at(t)) return;
                u2.fill(n, t, u2re, u2im);
                const double wt = (n == 0 || n == grid.nt - 1) ? 0.5 * grid.dt : grid.dt;
                double p_re = 0, p_im = 0;
                for (std::size_t b = 0; b < grid.n_boundary(); ++b) {
                    double zre = 0, zim = 0;
                    for (int k = 0; k < nz; ++k) {
                        const std::size_t i = b * nz + k;
                        if (u2re[i] == 0 && u2im[i] == 0) continue;
                        zre += tre[i] * u2re[i] - tim[i] * u2im[i];
                        zim += tre[i] * u2im[i] + tim[i] * u2re[i];
                    }
                    p_re += grid.boundary[b].arc_weight * zre;
                    p_im += grid.boundary[b].arc_weight * zim;
                }
                acc_re += wt * p_re * grid.hz;
                acc_im += wt * p_im * grid.hz;
            };
            solve_ibvp(grid, &q, bd, nullptr, so);
            out_re = acc_re;
            out_im = acc_im;
        };

        double p2r = 0, p2i = 0, p1r = 0, p1i = 0;
        pair_with(q2, p2r, p2i);
        pair_with(q1, p1r, p1i);
        d.value_re = p2r - p1r;
        d.value_im = p2i - p1i;
    }
    d.xray_estimate = -d.value_re;
    if (opt.with_oracle) d.oracle = correlation_oracle(grid, q1, q2, probe);
    return d;
}

double correlation_oracle(const WaveguideGrid& grid, const PotentialField& q1,
                          const PotentialField& q2, const GOProbe& probe) {
    const auto& bumps = standard_bumps();
    const double circ = grid.section.circumradius();
    const double ext = circ + probe.delta + 0.2;
    const int n = std::max(64, static_cast<int>(std::ceil(2 * ext / (probe.delta / 6))));
    Image2D target = Image2D::centered_square(n, ext);

    PotentialField gap;
    gap.analytic = gap_eval(grid, q1, q2);
    const Image2D R = mollify_slice_fine(gap.analytic, probe.delta, target, probe.y3, bumps, true);

    // half-line from y' along the bump travel direction -theta
    const double tmax = probe.y_prime.norm() + ext + 0.5;
    const double step = probe.delta / 8.0;
    const int ns = static_cast<int>(std::ceil(tmax / step));
    double acc = 0;
    for (int i = 0; i <= ns; ++i) {
        const double t = i * step;
        const double w = (i == 0 || i == ns) ? 0.5 : 1.0;
        acc += w * R.sample(probe.y_prime - t * probe.theta);
    }
    return acc * step;
}

std::vector<SliceSinogram> assemble_sinograms(const WaveguideGrid& grid, const PotentialField& q1,
                                              const PotentialField& q2,
                                              const std::vector<GOProbe>& probes,
                                              const AssembleOptions& opt) {
    if (probes.empty()) throw std::invalid_argument("assemble_sinograms: empty probe set");
    int n_ang = 0, n_off = 0, n_sl = 0;
    for (const auto& p : probes) {
        n_ang = std::max(n_ang, p.angle_index + 1);
        n_off = std::max(n_off, p.offset_index + 1);
        n_sl = std::max(n_sl, p.slice_index + 1);
    }
    // both direction partners must be present per (angle, offset, slice)
    std::map<std::tuple<int, int, int>, int> partner_count;
    for (const auto& p : probes) partner_count[{p.angle_index, p.offset_index, p.slice_index}]++;
    for (const auto& [key, cnt] : partner_count)
        if (cnt != 2)
            throw std::invalid_argument("assemble_sinograms: missing direction partner for a line");

    std::vector<double> angles(n_ang), offsets(n_off), slices(n_sl);
    for (const auto& p : probes) {
        angles[p.angle_index] = std::atan2(std::abs(p.theta.y), p.dir > 0 ? p.theta.x : -p.theta.x);
        offsets[p.offset_index] = p.offset_s;
        slices[p.slice_index] = p.y3;
    }

    std::vector<double> est(probes.size(), 0.0);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= probes.size()) return;
            if (probes[i].zero_line) continue;
            CorrelateOptions co;
            co.threads = opt.threads;
            est[i] = correlate(grid, q1, q2, probes[i], co).xray_estimate;
        }
    };
    const int workers = std::max(1, opt.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    std::vector<SliceSinogram> out(n_sl);
    for (int s = 0; s < n_sl; ++s) {
        out[s].y3 = slices[s];
        out[s].angles = angles;
        out[s].offsets = offsets;
        out[s].data = Array2D<double>(n_ang, n_off, 0.0);
    }
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const auto& p = probes[i];
        out[p.slice_index].data(p.angle_index, p.offset_index) += est[i];
    }
    return out;
}

namespace {

PotentialField potential_gap(const WaveguideGrid& grid, const PotentialField& q1,
                             const PotentialField& q2) {
    PotentialField gap;
    gap.alpha = q1.alpha;
    gap.M = q1.M + q2.M;
    gap.r_support = std::max(q1.r_support, q2.r_support);
    gap.analytic = gap_eval(grid, q1, q2);
    gap.values = Array3D<double>(grid.nx, grid.ny, grid.nz);
    for (int iz = 0; iz < grid.nz; ++iz)
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix)
                gap.values(ix, iy, iz) = q1.values(ix, iy, iz) - q2.values(ix, iy, iz);
    return gap;
}

void wiener_deconvolve(Image2D& img, double delta, double lambda, const BumpPair& bumps) {
    const int n0 = img.n0(), n1 = img.n1();
    int N = 1;
    while (N < 2 * std::max(n0, n1)) N *= 2;
    std::vector<std::complex<double>> a(static_cast<std::size_t>(N) * N, 0.0);
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) a[static_cast<std::size_t>(i) * N + j] = img.data(i, j);
    // kernel Phi_delta^2 sampled on the same lattice, wrapped around the origin
    std::vector<std::complex<double>> k(a.size(), 0.0);
    const int w = static_cast<int>(std::ceil(delta / img.h));
    for (int i = -w; i <= w; ++i)
        for (int j = -w; j <= w; ++j) {
            const double p = bumps.phi_scaled({i * img.h, j * img.h}, {0, 0}, delta);
            if (p == 0) continue;
            const int ii = (i + N) % N, jj = (j + N) % N;
            k[static_cast<std::size_t>(ii) * N + jj] = p * p * img.h * img.h;
        }
    // row-column FFTs
    auto fft2 = [&](std::vector<std::complex<double>>& v, bool inv) {
        std::vector<std::complex<double>> line(N);
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) line[j] = v[static_cast<std::size_t>(i) * N + j];
            fft(line, inv);
            for (int j = 0; j < N; ++j) v[static_cast<std::size_t>(i) * N + j] = line[j];
        }
        for (int j = 0; j < N; ++j) {
            for (int i = 0; i < N; ++i) line[i] = v[static_cast<std::size_t>(i) * N + j];
            fft(line, inv);
            for (int i = 0; i < N; ++i) v[static_cast<std::size_t>(i) * N + j] = line[i];
        }
    };
    fft2(a, false);
    fft2(k, false);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::complex<double> kk = k[i];
        a[i] = a[i] * std::conj(kk) / (std::norm(kk) + lambda);
    }
    fft2(a, true);
    const double scale = 1.0 / (static_cast<double>(N) * N);
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) img.data(i, j) = a[static_cast<std::size_t>(i) * N + j].real() * scale;
}

}  // namespace

ReconstructionResult reconstruct_gap(const WaveguideGrid& grid, const PotentialField& q1,
                                     const PotentialField& q2, const ReconstructParams& params) {
    ReconstructionResult res;
    const auto probes = place_probes(grid, params.probes);
    AssembleOptions ao;
    ao.threads = params.threads;
    ao.workers = params.workers;
    res.sinograms = assemble_sinograms(grid, q1, q2, probes, ao);
    for (const auto& s : res.sinograms) res.slices.push_back(s.y3);

    const double support_radius = grid.section.circumradius() + grid.epsilon / 4.0;
    const double ext = support_radius + params.probes.delta;
    Image2D target = Image2D::centered_square(params.recon_n, ext);

    FBPOptions fo;
    fo.apodize = params.apodize;
    fo.mask_support = true;
    fo.support_radius = support_radius;
    for (const auto& s : res.sinograms) {
        Image2D rec = fbp_invert(s, target, fo);
        if (params.deconvolve)
            wiener_deconvolve(rec, params.probes.delta, params.wiener_lambda, standard_bumps());
        res.q_hat.push_back(std::move(rec));
    }

    const PotentialField gap = potential_gap(grid, q1, q2);
    res.oracle = mollify_R(grid, gap, params.probes.delta, target, res.slices, MollifyMode::fine);

    // errors against the oracle: sup over omega x (-r, r), L2 over all slices
    double num_l2 = 0, den_l2 = 0;
    double window_err = 0, window_sup = 0;
    res.per_slice_linf.resize(res.slices.size(), 0.0);
    for (std::size_t s = 0; s < res.slices.size(); ++s) {
        double slice_err = 0;
        for (int i = 0; i < target.n0(); ++i)
            for (int j = 0; j < target.n1(); ++j) {
                const Vec2 p = target.point(i, j);
                const double d = res.q_hat[s].data(i, j) - res.oracle[s].data(i, j);
                num_l2 += d * d;
                den_l2 += res.oracle[s].data(i, j) * res.oracle[s].data(i, j);
                if (grid.section.dist_outside(p) > 0) continue;
                slice_err = std::max(slice_err, std::abs(d));
                if (std::abs(res.slices[s]) < grid.r_support) {
                    window_err = std::max(window_err, std::abs(d));
                    window_sup = std::max(window_sup, std::abs(res.oracle[s].data(i, j)));
                }
            }
        res.per_slice_linf[s] = slice_err;
    }
    res.l2_error = den_l2 > 0 ? std::sqrt(num_l2 / den_l2) : 0.0;
    res.linf_error_window = window_sup > 0 ? window_err / window_sup : 0.0;
    res.oracle_linf = window_sup;
    return res;
}

}  // namespace wgt
