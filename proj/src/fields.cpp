#include "wgt/fields.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "wgt/fourier.hpp"

namespace wgt {

double PotentialField::eval(Vec2 xy, double z) const {
    if (analytic) return analytic(xy, z);
    return 0.0;  // callers sample through grids; analytic phantoms always carry the closure
}

double PotentialField::sup_norm() const {
    double m = 0;
    const double* p = values.data();
    for (std::size_t i = 0; i < values.size(); ++i) m = std::max(m, std::abs(p[i]));
    return m;
}

PotentialField sample_potential(const WaveguideGrid& grid,
                                const std::function<double(Vec2, double)>& f, double alpha,
                                double M, double r_support) {
    PotentialField q;
    q.alpha = alpha;
    q.M = M;
    q.r_support = r_support;
    q.analytic = f;
    q.values = Array3D<double>(grid.nx, grid.ny, grid.nz);
    for (int iz = 0; iz < grid.nz; ++iz) {
        const double z = grid.z_of(iz);
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix)
                q.values(ix, iy, iz) = f(grid.xy_of(ix, iy), z);
    }
    return q;
}

std::optional<std::string> potential_violation(const WaveguideGrid& grid, const PotentialField& q,
                                               int holder_pairs) {
    const double sup = q.sup_norm();
    if (sup > q.M * (1 + 1e-12)) return "sup norm " + std::to_string(sup) + " exceeds M";
    for (int iz = 0; iz < grid.nz; ++iz) {
        if (std::abs(grid.z_of(iz)) <= q.r_support) continue;
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix)
                if (q.values(ix, iy, iz) != 0.0)
                    return "nonzero value at |x3| = " + std::to_string(std::abs(grid.z_of(iz))) +
                           " beyond r_support";
    }
    const double semi = holder_seminorm(grid, q, holder_pairs);
    if (semi > q.M * (1 + 1e-9))
        return "sampled Hoelder seminorm " + std::to_string(semi) + " exceeds M";
    return std::nullopt;
}

LateralField::LateralField(const WaveguideGrid& g)
    : nt(g.nt), nb(static_cast<int>(g.n_boundary())), nz(g.nz), dt(g.dt), hz(g.hz), z0(-g.X_cap) {
    arc_w.resize(nb);
    for (int b = 0; b < nb; ++b) arc_w[b] = g.boundary[b].arc_weight;
    re.assign(static_cast<std::size_t>(nt) * nb * nz, 0.0);
    im.assign(re.size(), 0.0);
}

double LateralField::l2_sigma() const {
    double acc = 0;
    for (int n = 0; n < nt; ++n) {
        const double wt = (n == 0 || n == nt - 1) ? 0.5 * dt : dt;
        double plane = 0;
        for (int b = 0; b < nb; ++b) {
            double zsum = 0;
            const std::size_t base = idx(n, b, 0);
            for (int k = 0; k < nz; ++k)
                zsum += re[base + k] * re[base + k] + im[base + k] * im[base + k];
            plane += arc_w[b] * zsum;
        }
        acc += wt * plane * hz;
    }
    return std::sqrt(acc);
}

LateralField& LateralField::operator*=(double s) {
    for (auto& v : re) v *= s;
    for (auto& v : im) v *= s;
    return *this;
}

LateralField& LateralField::axpy(double a, const LateralField& o) {
    for (std::size_t i = 0; i < re.size(); ++i) {
        re[i] += a * o.re[i];
        im[i] += a * o.im[i];
    }
    return *this;
}

double holder_seminorm(const WaveguideGrid& grid, const PotentialField& q, int n_pairs,
                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dx(0, grid.nx - 1), dy(0, grid.ny - 1), dz(0, grid.nz - 1);
    double best = 0;
    for (int p = 0; p < n_pairs; ++p) {
        const int ix = dx(rng), iy = dy(rng), iz = dz(rng);
        const int jx = dx(rng), jy = dy(rng), jz = dz(rng);
        if (ix == jx && iy == jy && iz == jz) continue;
        const double d = std::sqrt(std::pow((ix - jx) * grid.hx, 2) + std::pow((iy - jy) * grid.hy, 2) +
                                   std::pow((iz - jz) * grid.hz, 2));
        const double num = std::abs(q.values(ix, iy, iz) - q.values(jx, jy, jz));
        best = std::max(best, num / std::pow(d, q.alpha));
    }
    return best;
}

double holder_seminorm_exact(const WaveguideGrid& grid, const PotentialField& q) {
    double best = 0;
    const int nx = grid.nx, ny = grid.ny, nz = grid.nz;
    for (int a = 0; a < nx * ny * nz; ++a)
        for (int b = a + 1; b < nx * ny * nz; ++b) {
            const int ix = a % nx, iy = (a / nx) % ny, iz = a / (nx * ny);
            const int jx = b % nx, jy = (b / nx) % ny, jz = b / (nx * ny);
            const double d = std::sqrt(std::pow((ix - jx) * grid.hx, 2) +
                                       std::pow((iy - jy) * grid.hy, 2) +
                                       std::pow((iz - jz) * grid.hz, 2));
            const double num = std::abs(q.values(ix, iy, iz) - q.values(jx, jy, jz));
            best = std::max(best, num / std::pow(d, q.alpha));
        }
    return best;
}

double l_norm_discrete(const LateralField& f, NormReport* report) {
    const int nt = f.nt, nb = f.nb, nz = f.nz;
    const double dt = f.dt, hz = f.hz;

    // H^{3/2} in t, per (b,k) line
    double ht = 0;
    {
        std::vector<double> re(nt), im(nt);
        for (int b = 0; b < nb; ++b)
            for (int k = 0; k < nz; ++k) {
                bool nonzero = false;
                for (int n = 0; n < nt; ++n) {
                    re[n] = f.re[f.idx(n, b, k)];
                    im[n] = f.im[f.idx(n, b, k)];
                    nonzero = nonzero || re[n] != 0 || im[n] != 0;
                }
                if (!nonzero) continue;
                const double v = frac_sobolev_norm_1d(re, im, dt, 1.5);
                ht += f.arc_w[b] * hz * v * v;
            }
    }

    // H^{3/2} in x3, per (n,b) line
    double hzn = 0;
    {
        std::vector<double> re(nz), im(nz);
        for (int n = 0; n < nt; ++n) {
            const double wt = (n == 0 || n == nt - 1) ? 0.5 * dt : dt;
            for (int b = 0; b < nb; ++b) {
                bool nonzero = false;
                const std::size_t base = f.idx(n, b, 0);
                for (int k = 0; k < nz; ++k) {
                    re[k] = f.re[base + k];
                    im[k] = f.im[base + k];
                    nonzero = nonzero || re[k] != 0 || im[k] != 0;
                }
                if (!nonzero) continue;
                const double v = frac_sobolev_norm_1d(re, im, hz, 1.5);
                hzn += wt * f.arc_w[b] * v * v;
            }
        }
    }

    // H^{3/2} around the boundary curve (periodic), per (n,k) ring; uses the
    // mean arc spacing, exact for square sections.
    double htau = 0;
    {
        double mean_w = 0;
        for (int b = 0; b < nb; ++b) mean_w += f.arc_w[b];
        mean_w /= nb;
        std::vector<double> re(nb), im(nb);
        for (int n = 0; n < nt; ++n) {
            const double wt = (n == 0 || n == nt - 1) ? 0.5 * dt : dt;
            for (int k = 0; k < nz; ++k) {
                bool nonzero = false;
                for (int b = 0; b < nb; ++b) {
                    re[b] = f.re[f.idx(n, b, k)];
                    im[b] = f.im[f.idx(n, b, k)];
                    nonzero = nonzero || re[b] != 0 || im[b] != 0;
                }
                if (!nonzero) continue;
                const double v = frac_sobolev_norm_1d_periodic(re, im, mean_w, 1.5);
                htau += wt * hz * v * v;
            }
        }
    }

    // 1/t-weighted gradient quadrature, skipping t=0.
    double wsum = 0, first = 0;
    for (int n = 1; n < nt; ++n) {
        const double t = n * dt;
        const double wt = (n == nt - 1) ? 0.5 * dt : dt;
        double plane = 0;
        for (int b = 0; b < nb; ++b)
            for (int k = 0; k < nz; ++k) {
                auto val = [&](int nn, int bb, int kk, bool imag) {
                    const auto& v = imag ? f.im : f.re;
                    return v[f.idx(nn, bb, kk)];
                };
                double g2 = 0;
                for (int imag = 0; imag < 2; ++imag) {
                    const double dtf = n + 1 < nt ? (val(n + 1, b, k, imag) - val(n - 1, b, k, imag)) / (2 * dt)
                                                  : (val(n, b, k, imag) - val(n - 1, b, k, imag)) / dt;
                    const double dzf = (k + 1 < nz && k > 0)
                                           ? (val(n, b, k + 1, imag) - val(n, b, k - 1, imag)) / (2 * hz)
                                           : 0.0;
                    const int bp = (b + 1) % nb, bm = (b + nb - 1) % nb;
                    const double dtau = (val(n, bp, k, imag) - val(n, bm, k, imag)) / (2 * f.arc_w[b]);
                    g2 += dtf * dtf + dzf * dzf + dtau * dtau;
                }
                plane += f.arc_w[b] * hz * g2;
            }
        const double term = wt * plane / t;
        wsum += term;
        if (n == 1) first = term;
    }

    const double total2 = ht + hzn + htau + wsum;
    if (report) {
        report->l_norm_discrete = std::sqrt(total2);
        report->t_weight_resolution_flag = wsum > 0 && first > 0.5 * wsum;
        report->l2_sigma = f.l2_sigma();
    }
    return std::sqrt(total2);
}

}  // namespace wgt
