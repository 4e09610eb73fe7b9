#include "wgt/polar_solver.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wgt/bumps.hpp"

namespace wgt {

PolarGrid build_polar_grid(const CrossSection& disk, int nr, int nphi, int nz, double T,
                           double r_support) {
    if (disk.kind != SectionKind::disk)
        throw std::invalid_argument("build_polar_grid: disk section required");
    if (nr < 4 || nphi < 8 || nz < 4) throw std::invalid_argument("polar grid counts too small");
    const double diam = disk.diameter();
    if (T <= diam) throw std::invalid_argument("T must exceed the cross-section diameter");
    PolarGrid g;
    g.section = disk;
    g.nr = nr;
    g.nphi = nphi;
    g.nz = nz;
    g.T = T;
    g.r_support = r_support;
    g.X_cap = r_support + T + 2.0;
    g.epsilon = admissible_epsilon(disk, T);
    g.hr = disk.radius / nr;
    g.dphi = 2.0 * std::numbers::pi / nphi;
    g.hz = 2.0 * g.X_cap / (nz - 1);

    // Gershgorin bound on the finite-volume operator sets the step.
    const double a_center = 2.0 * (nphi * (0.5 * g.hr * g.dphi / g.hr) / (std::numbers::pi * 0.25 * g.hr * g.hr) +
                                   1.0 / (g.hz * g.hz));
    double a_ring = 0;
    for (int ir = 1; ir < nr; ++ir) {
        const double r = g.r_of(ir);
        const double m = r * g.hr * g.dphi;
        const double c = ((g.r_of(ir) + 0.5 * g.hr) * g.dphi + (g.r_of(ir) - 0.5 * g.hr) * g.dphi) / g.hr +
                         2.0 * g.hr / (r * g.dphi);
        a_ring = std::max(a_ring, 2.0 * (c / m + 1.0 / (g.hz * g.hz)));
    }
    const double lam = std::max(a_center, a_ring);
    const double dt_max = 0.9 * 2.0 / std::sqrt(lam);
    g.nt = static_cast<int>(std::ceil(T / dt_max)) + 1;
    g.dt = T / (g.nt - 1);
    return g;
}

double DiskRunResult::residual() const {
    const double d = std::abs(rellich_lhs) + std::abs(rellich_rhs);
    return d == 0 ? 0.0 : std::abs(rellich_lhs - rellich_rhs) / d;
}

DiskRunResult disk_rellich_energy_run(const PolarGrid& g, double pulse_width, double switch_off) {
    const auto& bp = standard_bumps();
    const double a = g.section.radius;
    const int P = g.plane_size();
    const std::size_t N = g.node_count();
    const int nr = g.nr, nphi = g.nphi, nz = g.nz;

    auto idx = [&](int ir, int iphi, int iz) -> std::size_t {
        return static_cast<std::size_t>(iz) * P + (ir == 0 ? 0 : 1 + (ir - 1) * nphi + iphi);
    };

    // node masses (per unit z) and spatial amplitude of the pulse
    std::vector<double> mass(P, 0.0);
    mass[0] = std::numbers::pi * 0.25 * g.hr * g.hr;
    for (int ir = 1; ir <= nr; ++ir)
        for (int j = 0; j < nphi; ++j)
            mass[1 + (ir - 1) * nphi + j] = g.r_of(ir) * g.hr * g.dphi * (ir == nr ? 0.5 : 1.0);

    const double tc = 0.5 * switch_off, tw = 0.5 * switch_off;
    const double wz = 0.5;
    std::vector<double> amp(N, 0.0);
    for (int iz = 1; iz < nz - 1; ++iz) {
        const double z = g.z_of(iz);
        if (std::abs(z / wz) >= 1) continue;
        const double az = bp.h(z / wz);
        for (int ir = 0; ir < nr; ++ir)
            for (int j = 0; j < (ir == 0 ? 1 : nphi); ++j) {
                const double rr = g.r_of(ir) / pulse_width;
                if (rr >= 1) continue;
                amp[idx(ir, j, iz)] = 40.0 * bp.phi({rr, 0.0}) * az;
            }
    }
    auto s_of_t = [&](double t) {
        const double u = (t - tc) / tw;
        return std::abs(u) < 1 ? bp.h(u) : 0.0;
    };

    std::vector<double> up(N, 0.0), uc(N, 0.0), un(N, 0.0);

    // finite-volume 2D operator application: out = sum_e c_e (u_nbr - u_i) / m_i
    auto apply_lap2d = [&](const std::vector<double>& u, int iz, std::vector<double>& out_plane) {
        const std::size_t base = static_cast<std::size_t>(iz) * P;
        // center
        {
            const double c_edge = 0.5 * g.dphi;  // r_{1/2} dphi / hr * hr ... = (hr/2) dphi / hr
            double s = 0;
            for (int j = 0; j < nphi; ++j) s += u[base + 1 + j] - u[base];
            out_plane[0] = c_edge * s / mass[0];
        }
        for (int ir = 1; ir < nr; ++ir) {
            const double r = g.r_of(ir);
            const double c_out = (r + 0.5 * g.hr) * g.dphi / g.hr;
            const double c_in = (r - 0.5 * g.hr) * g.dphi / g.hr;
            const double c_ang = g.hr / (r * g.dphi);
            const double invm = 1.0 / mass[1 + (ir - 1) * nphi];
            for (int j = 0; j < nphi; ++j) {
                const std::size_t i = base + 1 + (ir - 1) * nphi + j;
                const double inner = ir == 1 ? u[base] : u[base + 1 + (ir - 2) * nphi + j];
                const double outer = u[base + 1 + ir * nphi + j];  // ir+1 ring (boundary ring holds 0)
                const double left = u[base + 1 + (ir - 1) * nphi + (j + 1) % nphi];
                const double right = u[base + 1 + (ir - 1) * nphi + (j + nphi - 1) % nphi];
                out_plane[1 + (ir - 1) * nphi + j] =
                    (c_out * (outer - u[i]) + c_in * (inner - u[i]) + c_ang * (left + right - 2 * u[i])) *
                    invm;
            }
        }
        for (int j = 0; j < nphi; ++j) out_plane[1 + (nr - 1) * nphi + j] = 0.0;  // boundary ring
    };

    DiskRunResult res;
    const double dt = g.dt, dt2 = dt * dt;
    const double czz = 1.0 / (g.hz * g.hz);
    std::vector<double> lap_plane(P);

    auto step = [&](double dt2_eff, int n) {
        const double t = n * dt;
        const double st = s_of_t(t);
        for (int iz = 1; iz < nz - 1; ++iz) {
            apply_lap2d(uc, iz, lap_plane);
            const std::size_t b = static_cast<std::size_t>(iz) * P;
            for (int p = 0; p < P; ++p) {
                const std::size_t i = b + p;
                const double lap = lap_plane[p] + czz * (uc[i + P] - 2 * uc[i] + uc[i - P]);
                un[i] = 2 * uc[i] - up[i] + dt2_eff * (lap + st * amp[i]);
            }
            // keep the Dirichlet ring at zero
            for (int j = 0; j < nphi; ++j) un[b + 1 + (nr - 1) * nphi + j] = 0.0;
        }
        // axial caps stay zero
        for (int p = 0; p < P; ++p) {
            un[p] = 0.0;
            un[static_cast<std::size_t>(nz - 1) * P + p] = 0.0;
        }
    };

    auto dirichlet_form = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double acc = 0;
        for (int iz = 0; iz < nz; ++iz) {
            const std::size_t b = static_cast<std::size_t>(iz) * P;
            // center-to-ring-1 and radial edges
            for (int j = 0; j < nphi; ++j) {
                const double c = 0.5 * g.dphi;
                acc += c * (u[b + 1 + j] - u[b]) * (v[b + 1 + j] - v[b]) * g.hz;
            }
            for (int ir = 1; ir < nr; ++ir) {
                const double c_out = (g.r_of(ir) + 0.5 * g.hr) * g.dphi / g.hr;
                const double c_ang = g.hr / (g.r_of(ir) * g.dphi);
                for (int j = 0; j < nphi; ++j) {
                    const std::size_t i = b + 1 + (ir - 1) * nphi + j;
                    const std::size_t o = b + 1 + ir * nphi + j;
                    acc += c_out * (u[o] - u[i]) * (v[o] - v[i]) * g.hz;
                    const std::size_t l = b + 1 + (ir - 1) * nphi + (j + 1) % nphi;
                    acc += c_ang * (u[l] - u[i]) * (v[l] - v[i]) * g.hz;
                }
            }
            // axial edges
            if (iz + 1 < nz)
                for (int p = 0; p < P; ++p)
                    acc += mass[p] / g.hz * (u[b + P + p] - u[b + p]) * (v[b + P + p] - v[b + p]);
        }
        return acc;
    };

    // streaming accumulators for the multiplier identity
    double lhs = 0, rhs_t = 0;
    auto accumulate_identity = [&](int n) {
        // v_t centered from (un, up), v at uc; time weight dt (interior steps)
        const double wt = dt;
        const double st = s_of_t(n * dt);
        double acc_t = 0, acc_lhs = 0, acc_f = 0;
        for (int iz = 1; iz < nz - 1; ++iz) {
            const std::size_t b = static_cast<std::size_t>(iz) * P;
            for (int p = 0; p < P; ++p) {
                const std::size_t i = b + p;
                const double vt = (un[i] - up[i]) / (2 * dt);
                const double vz = (uc[i + P] - uc[i - P]) / (2 * g.hz);
                acc_t += mass[p] * g.hz * (vt * vt - vz * vz);
            }
            // forcing term -2 int F (r/a) v_r against the radial multiplier
            if (st != 0.0)
                for (int ir = 1; ir < nr; ++ir)
                    for (int j = 0; j < nphi; ++j) {
                        const std::size_t i = b + 1 + (ir - 1) * nphi + j;
                        if (amp[i] == 0.0) continue;
                        const double inner = ir == 1 ? uc[b] : uc[b + 1 + (ir - 2) * nphi + j];
                        const double outer = uc[b + 1 + ir * nphi + j];
                        const double vr = (outer - inner) / (2 * g.hr);
                        acc_f += mass[1 + (ir - 1) * nphi] * g.hz * st * amp[i] *
                                 (g.r_of(ir) / a) * vr;
                    }
            // boundary trace |d_r v|^2, one-sided with the ring at zero
            for (int j = 0; j < nphi; ++j) {
                const double u1 = uc[b + 1 + (nr - 2) * nphi + j];
                const double u2 = uc[b + 1 + (nr - 3) * nphi + j];
                const double dr = (-4 * u1 + u2) / (2 * g.hr);
                acc_lhs += dr * dr * a * g.dphi * g.hz;
            }
        }
        rhs_t += wt * ((2.0 / a) * acc_t - 2.0 * acc_f);
        lhs += wt * acc_lhs;
    };

    // first step
    step(0.5 * dt2, 0);
    std::swap(up, uc);
    std::swap(uc, un);

    std::vector<double> save3;
    for (int n = 1; n + 1 < g.nt; ++n) {
        step(dt2, n);
        // energy at the half step
        double kin = 0;
        for (std::size_t izp = 0; izp < N; ++izp) {
            const double d = (un[izp] - uc[izp]) / dt;
            kin += mass[izp % P] * g.hz * d * d;
        }
        res.energy.push_back(0.5 * kin + 0.5 * dirichlet_form(un, uc));
        accumulate_identity(n);
        std::swap(up, uc);
        std::swap(uc, un);
        if (n + 1 == g.nt - 3) save3 = uc;
        if (!std::isfinite(uc[idx(0, 0, nz / 2)]))
            throw std::runtime_error("polar solve diverged at step " + std::to_string(n));
    }

    // final-time term 2 int v_t(T) (r/a) d_r v(T), one-sided du/dt at T
    double fin = 0;
    for (int iz = 1; iz < nz - 1; ++iz) {
        const std::size_t b = static_cast<std::size_t>(iz) * P;
        for (int ir = 1; ir < nr; ++ir)
            for (int j = 0; j < nphi; ++j) {
                const std::size_t i = b + 1 + (ir - 1) * nphi + j;
                const double inner = ir == 1 ? uc[b] : uc[b + 1 + (ir - 2) * nphi + j];
                const double outer = uc[b + 1 + ir * nphi + j];
                const double vr = (outer - inner) / (2 * g.hr);
                const double vt = (3 * uc[i] - 4 * up[i] + save3[i]) / (2 * dt);
                fin += mass[1 + (ir - 1) * nphi] * g.hz * 2.0 * vt * (g.r_of(ir) / a) * vr;
            }
    }
    res.rellich_lhs = lhs;
    res.rellich_rhs = rhs_t + fin;

    // energy drift after switch-off
    const int n_off = static_cast<int>(std::ceil(switch_off / dt)) + 1;
    double emin = 0, emax = 0;
    bool first = true;
    for (int n = n_off; n < static_cast<int>(res.energy.size()); ++n) {
        if (first) {
            emin = emax = res.energy[n];
            first = false;
        }
        emin = std::min(emin, res.energy[n]);
        emax = std::max(emax, res.energy[n]);
    }
    res.energy_drift = first || emax == 0 ? 0.0 : (emax - emin) / emax;
    return res;
}

}  // namespace wgt
