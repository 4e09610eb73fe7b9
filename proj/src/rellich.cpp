#include "wgt/rellich.hpp"

#include <cmath>
#include <stdexcept>

#include "wgt/bumps.hpp"

namespace wgt {

namespace {

struct Gradient {
    double gx, gy, gz;
};

Gradient grad_at(const WaveguideGrid& g, const std::vector<double>& u, int ix, int iy, int iz) {
    const std::size_t sy = g.nx, sz = static_cast<std::size_t>(g.nx) * g.ny;
    const std::size_t i = (static_cast<std::size_t>(iz) * g.ny + iy) * g.nx + ix;
    auto d = [&](std::size_t stride, int pos, int n, double h) {
        if (pos > 0 && pos + 1 < n) return (u[i + stride] - u[i - stride]) / (2 * h);
        if (pos == 0) return (-3 * u[i] + 4 * u[i + stride] - u[i + 2 * stride]) / (2 * h);
        return (3 * u[i] - 4 * u[i - stride] + u[i - 2 * stride]) / (2 * h);
    };
    return {d(1, ix, g.nx, g.hx), d(sy, iy, g.ny, g.hy), d(sz, iz, g.nz, g.hz)};
}

double vol_weight(const WaveguideGrid& g, int ix, int iy, int iz) {
    double w = g.hx * g.hy * g.hz;
    if (ix == 0 || ix == g.nx - 1) w *= 0.5;
    if (iy == 0 || iy == g.ny - 1) w *= 0.5;
    if (iz == 0 || iz == g.nz - 1) w *= 0.5;
    return w;
}

}  // namespace

double rellich_check(const WaveguideGrid& grid, const MultiplierField& mult,
                     const SolveResult& res, const InteriorSource* source) {
    if (!res.homogeneous_dirichlet)
        throw std::invalid_argument("rellich_check: identity requires homogeneous Dirichlet data");
    if (res.history_stride <= 0 || res.history_re.empty())
        throw std::invalid_argument("rellich_check: solve must store interior history");
    if (res.uT_re.empty())
        throw std::invalid_argument("rellich_check: solve must store the final state");

    bool all_zero = true;
    for (const auto& snap : res.history_re)
        for (const double v : snap)
            if (v != 0.0) {
                all_zero = false;
                break;
            }
    if (all_zero) return 0.0;

    const double lhs = res.trace_l2 * res.trace_l2;

    const int J = static_cast<int>(res.history_re.size());
    const double dts = res.history_stride * grid.dt;  // snapshot spacing
    const std::size_t N = static_cast<std::size_t>(grid.nx) * grid.ny * grid.nz;
    std::vector<double> fbuf;
    double rhs_vol = 0;
    for (int j = 0; j < J; ++j) {
        const auto& u = res.history_re[j];
        const double wt = (j == 0 || j == J - 1) ? 0.5 * dts : dts;
        const double tj = j * dts;
        if (source != nullptr) {
            fbuf.assign(N, 0.0);
            source->add(j * res.history_stride, tj, 1.0, grid, fbuf.data(), nullptr);
        }
        double acc = 0;
        for (int iz = 0; iz < grid.nz; ++iz)
            for (int iy = 0; iy < grid.ny; ++iy)
                for (int ix = 0; ix < grid.nx; ++ix) {
                    const auto gr = grad_at(grid, u, ix, iy, iz);
                    const std::size_t i2 = (static_cast<std::size_t>(iz) * grid.ny + iy) * grid.nx + ix;
                    double vt = 0;
                    if (j > 0 && j + 1 < J)
                        vt = (res.history_re[j + 1][i2] - res.history_re[j - 1][i2]) / (2 * dts);
                    else if (j + 1 < J && j == 0)
                        vt = 0.0;  // zero initial velocity
                    else if (j == J - 1)
                        vt = (res.history_re[j][i2] - res.history_re[j - 1][i2]) / dts;
                    const double hxx = mult.hxx(ix, iy), hxy = mult.hxy(ix, iy),
                                 hyx = mult.hyx(ix, iy), hyy = mult.hyy(ix, iy);
                    const double divg = mult.div_gamma(ix, iy);
                    const double hterm =
                        hxx * gr.gx * gr.gx + (hxy + hyx) * gr.gx * gr.gy + hyy * gr.gy * gr.gy;
                    const double grad2 = gr.gx * gr.gx + gr.gy * gr.gy + gr.gz * gr.gz;
                    double term = 2 * hterm - divg * grad2 + divg * vt * vt;
                    if (source != nullptr) {
                        const double gdot = mult.gx(ix, iy) * gr.gx + mult.gy(ix, iy) * gr.gy;
                        term -= 2.0 * fbuf[i2] * gdot;
                    }
                    acc += vol_weight(grid, ix, iy, iz) * term;
                }
        rhs_vol += wt * acc;
    }

    // final-time term 2 int v_t(T) gamma . grad v(T)
    double rhs_final = 0;
    for (int iz = 0; iz < grid.nz; ++iz)
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix) {
                const auto gr = grad_at(grid, res.uT_re, ix, iy, iz);
                const std::size_t i2 = (static_cast<std::size_t>(iz) * grid.ny + iy) * grid.nx + ix;
                const double gdot = mult.gx(ix, iy) * gr.gx + mult.gy(ix, iy) * gr.gy;
                rhs_final += vol_weight(grid, ix, iy, iz) * 2.0 * res.utT_re[i2] * gdot;
            }

    const double rhs = rhs_vol + rhs_final;
    const double denom = std::abs(lhs) + std::abs(rhs);
    if (denom == 0) return 0.0;
    return std::abs(lhs - rhs) / denom;
}

RellichRun rellich_pulse_run(const WaveguideGrid& grid, const MultiplierField& mult,
                             int history_stride, int threads) {
    (void)history_stride;
    const auto& bp = standard_bumps();
    const double ws = 0.30 * std::min(grid.section.side_x, grid.section.side_y);
    const double wz = 0.5;
    const double tc = 0.22 * grid.T, tw = 0.18 * grid.T;
    auto amplitude = [&](Vec2 xy, double z) {
        const double rr = xy.norm() / ws;
        const double zz = z / wz;
        if (rr >= 1 || std::abs(zz) >= 1) return 0.0;
        return bp.phi({rr, 0.0}) * bp.h(zz) * 40.0;
    };
    auto time_profile = [&](double t) {
        const double u = (t - tc) / tw;
        return std::abs(u) < 1 ? bp.h(u) : 0.0;
    };
    PulseSource pulse(grid, amplitude, time_profile);

    const std::size_t N = static_cast<std::size_t>(grid.nx) * grid.ny * grid.nz;
    std::vector<double> amp(N, 0.0);
    for (int iz = 1; iz < grid.nz - 1; ++iz)
        for (int iy = 1; iy < grid.ny - 1; ++iy)
            for (int ix = 1; ix < grid.nx - 1; ++ix)
                amp[(static_cast<std::size_t>(iz) * grid.ny + iy) * grid.nx + ix] =
                    amplitude(grid.xy_of(ix, iy), grid.z_of(iz));

    // full-rate streaming quadrature of the volume terms
    double rhs_vol = 0;
    auto volume_integrand = [&](const std::vector<double>& u,
                                const std::function<double(std::size_t)>& vt_at, double st) {
        std::vector<double> partial(grid.nz, 0.0);
        for (int iz = 0; iz < grid.nz; ++iz) {
            double acc = 0;
            for (int iy = 0; iy < grid.ny; ++iy)
                for (int ix = 0; ix < grid.nx; ++ix) {
                    const auto gr = grad_at(grid, u, ix, iy, iz);
                    const std::size_t i = (static_cast<std::size_t>(iz) * grid.ny + iy) * grid.nx + ix;
                    const double vt = vt_at(i);
                    const double hxx = mult.hxx(ix, iy), hxy = mult.hxy(ix, iy),
                                 hyx = mult.hyx(ix, iy), hyy = mult.hyy(ix, iy);
                    const double divg = mult.div_gamma(ix, iy);
                    const double hterm =
                        hxx * gr.gx * gr.gx + (hxy + hyx) * gr.gx * gr.gy + hyy * gr.gy * gr.gy;
                    const double grad2 = gr.gx * gr.gx + gr.gy * gr.gy + gr.gz * gr.gz;
                    double term = 2 * hterm - divg * grad2 + divg * vt * vt;
                    if (st != 0.0 && amp[i] != 0.0) {
                        const double gdot = mult.gx(ix, iy) * gr.gx + mult.gy(ix, iy) * gr.gy;
                        term -= 2.0 * st * amp[i] * gdot;
                    }
                    acc += vol_weight(grid, ix, iy, iz) * term;
                }
            partial[iz] = acc;
        }
        double total = 0;
        for (const double p : partial) total += p;
        return total;
    };

    std::vector<double> ucopy(N);
    ZeroBoundary zb;
    SolveOptions opt;
    opt.complex_data = false;
    opt.want_trace = true;
    opt.want_energy = true;
    opt.want_final_state = true;
    opt.threads = threads;
    opt.tri_field_sink = [&](int, double t, const double* up, const double* uc,
                             const double* un) {
        ucopy.assign(uc, uc + N);
        const double inv2dt = 1.0 / (2 * grid.dt);
        rhs_vol += grid.dt * volume_integrand(
                                 ucopy, [&](std::size_t i) { return (un[i] - up[i]) * inv2dt; },
                                 time_profile(t));
    };
    const SolveResult res = solve_ibvp(grid, nullptr, zb, &pulse, opt);

    // closing endpoint at t = T (the pulse is off by then)
    rhs_vol += 0.5 * grid.dt *
               volume_integrand(res.uT_re, [&](std::size_t i) { return res.utT_re[i]; }, 0.0);

    // final-time term 2 int v_t(T) gamma . grad v(T)
    double rhs_final = 0;
    for (int iz = 0; iz < grid.nz; ++iz)
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix) {
                const auto gr = grad_at(grid, res.uT_re, ix, iy, iz);
                const std::size_t i = (static_cast<std::size_t>(iz) * grid.ny + iy) * grid.nx + ix;
                const double gdot = mult.gx(ix, iy) * gr.gx + mult.gy(ix, iy) * gr.gy;
                rhs_final += vol_weight(grid, ix, iy, iz) * 2.0 * res.utT_re[i] * gdot;
            }

    RellichRun out;
    const double lhs = res.trace_l2 * res.trace_l2;
    const double rhs = rhs_vol + rhs_final;
    out.residual = (std::abs(lhs) + std::abs(rhs)) == 0
                       ? 0.0
                       : std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs));

    // energy drift after the source support [tc-tw, tc+tw]
    const int n_off = static_cast<int>(std::ceil((tc + tw) / grid.dt)) + 1;
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
    out.energy_drift = first || emax == 0 ? 0.0 : (emax - emin) / emax;
    return out;
}

}  // namespace wgt
