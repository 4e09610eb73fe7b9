#include "wgt/checks.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "wgt/bumps.hpp"
#include "wgt/fourier.hpp"
#include "wgt/reconstruct.hpp"
#include "wgt/rellich.hpp"
#include "wgt/solver.hpp"
#include "wgt/xray.hpp"

namespace wgt {

namespace {

// stride that keeps the stored history under a fixed snapshot budget
int history_stride_for(int nt, int budget = 72) { return std::max(1, (nt + budget - 1) / budget); }

}  // namespace

RellichCheck run_rellich_check(int n_cross, int n_axial, double T, bool with_refinement,
                               int threads) {
    RellichCheck out;
    const auto cs = CrossSection::make_rectangle(1, 1);
    {
        const auto grid = build_grid(cs, n_cross, n_cross, n_axial, T, 0.6);
        const auto mult = build_multiplier(cs, grid);
        const auto run = rellich_pulse_run(grid, mult, history_stride_for(grid.nt), threads);
        out.residual = run.residual;
        out.energy_drift = run.energy_drift;
    }
    if (with_refinement) {
        const auto grid = build_grid(cs, 2 * n_cross, 2 * n_cross, 2 * n_axial, T, 0.6);
        const auto mult = build_multiplier(cs, grid);
        const auto run = rellich_pulse_run(grid, mult, history_stride_for(grid.nt), threads);
        out.residual_refined = run.residual;
    }
    return out;
}

GORemainderCheck run_go_remainder_check(int n_cross, double hz_per_delta,
                                        const std::vector<double>& rhos, double delta, double T,
                                        int threads) {
    const auto cs = CrossSection::make_rectangle(1, 1);
    const double r_support = 0.5;
    const double X = r_support + T + 2.0;
    const int nz = static_cast<int>(std::ceil(2 * X / (delta / hz_per_delta))) + 1;
    const auto grid = build_grid(cs, n_cross, n_cross, nz, T, r_support);

    PhantomSpec qs;
    qs.family = "bump";
    qs.amplitude = 0.4;
    qs.width = 0.3;
    qs.width_z = 0.4;
    qs.r_support = r_support;
    const PotentialField q = make_phantom(grid, qs);

    GOProbe p;
    p.theta = {1, 0};
    p.delta = delta;
    p.y_prime = {0.5 + delta + 0.25, 0.0};
    p.y3 = 0;

    GORemainderCheck out;
    out.psi.x = rhos;
    out.grad_psi.x = rhos;
    for (const double rho : rhos) {
        p.rho = rho;
        const RemainderNorms n = go_remainder(grid, &q, p, threads);
        out.psi.values.push_back(n.psi_l2);
        out.grad_psi.values.push_back(n.grad_psi_l2);
    }
    out.psi.slope = loglog_slope(out.psi.x, out.psi.values);
    out.grad_psi.slope = loglog_slope(out.grad_psi.x, out.grad_psi.values);
    return out;
}

std::function<double(Vec2, double)> rough_section_profile(double alpha, double finest_scale,
                                                          double extent, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> phase(0, 2 * std::numbers::pi);
    std::uniform_real_distribution<double> angle(0, std::numbers::pi);
    const double k0 = 2 * std::numbers::pi / extent;
    const int K = std::max(1, static_cast<int>(std::ceil(std::log2(2 * std::numbers::pi / (k0 * finest_scale)))));
    struct Mode {
        double kx, ky, ph, amp;
    };
    std::vector<Mode> modes;
    double norm = 0;
    for (int k = 0; k <= K; ++k) {
        const double freq = k0 * std::pow(2.0, k);
        const double amp = std::pow(2.0, -alpha * k);
        const double a = angle(rng);
        modes.push_back({freq * std::cos(a), freq * std::sin(a), phase(rng), amp});
        norm += amp;
    }
    const double inv = 1.0 / norm;
    return [modes, inv, extent](Vec2 xy, double z) {
        // smooth compact windows in both variables
        const auto& bp = standard_bumps();
        const double rw = xy.norm() / (0.45 * extent);
        if (rw >= 1 || std::abs(z) >= 1) return 0.0;
        double s = 0;
        for (const auto& m : modes) s += m.amp * std::cos(m.kx * xy.x + m.ky * xy.y + m.ph);
        return s * inv * (bp.phi({rw, 0}) / bp.phi({0, 0})) * (bp.h(z) / bp.h(0));
    };
}

MollifierCheck run_mollifier_check(double delta_star, double rough_alpha, double rate_alpha) {
    MollifierCheck out;
    const auto cs = CrossSection::make_rectangle(1, 1);
    const double T = cs.diameter() + 24.0 * delta_star;  // epsilon = 4 delta_star
    const auto grid = build_grid(cs, 16, 16, 16, T, 1.0);

    const std::vector<double> deltas{delta_star / 2, delta_star / 4, delta_star / 8};
    const double dmin = deltas.back();
    const double ext = cs.circumradius() + delta_star + 0.05;

    // L2 and H1 sweeps on the near-sharp rough profile
    {
        PotentialField q;
        q.alpha = rough_alpha;
        q.M = 2;
        q.r_support = 1.0;
        q.analytic = rough_section_profile(rough_alpha, dmin / 2, 2 * cs.circumradius(), 7u);
        const int n = static_cast<int>(std::ceil(2 * ext / (dmin / 10))) | 1;
        Image2D target = Image2D::centered_square(n, ext);
        out.l2.x = out.h1.x = deltas;
        for (const double d : deltas) {
            const auto imgs = mollify_R(grid, q, d, target, {0.0}, MollifyMode::fine);
            out.l2.values.push_back(imgs[0].l2_norm());
            out.h1.values.push_back(frac_sobolev_norm(imgs[0], 1.0));
        }
        out.l2.slope = loglog_slope(out.l2.x, out.l2.values);
        out.h1.slope = loglog_slope(out.h1.x, out.h1.values);
    }

    // approximation rate on the alpha = rate_alpha phantom
    {
        PotentialField q;
        q.alpha = rate_alpha;
        q.M = 2;
        q.r_support = 1.0;
        q.analytic = rough_section_profile(rate_alpha, dmin / 2, 2 * cs.circumradius(), 11u);
        const int n = static_cast<int>(std::ceil(2 * ext / (dmin / 10))) | 1;
        Image2D target = Image2D::centered_square(n, ext);
        const std::vector<double> slices{0.0, 0.25, -0.4};
        out.rate.x = deltas;
        for (const double d : deltas) {
            const auto imgs = mollify_R(grid, q, d, target, slices, MollifyMode::fine);
            double worst = 0;
            for (std::size_t s = 0; s < slices.size(); ++s) {
                double acc = 0;
                for (int i = 0; i < target.n0(); ++i)
                    for (int j = 0; j < target.n1(); ++j) {
                        const Vec2 p = target.point(i, j);
                        const double diff = imgs[s].data(i, j) - q.analytic(p, slices[s]);
                        acc += diff * diff;
                    }
                worst = std::max(worst, std::sqrt(acc) * target.h);
            }
            out.rate.values.push_back(worst);
        }
        out.rate.slope = loglog_slope(out.rate.x, out.rate.values);
        out.alpha_tilde = std::min(rate_alpha, 0.5);
    }
    return out;
}

TomographyCheck run_tomography_check() {
    TomographyCheck out;
    const int n = 256;
    const double ext = 0.5;
    const double a = 0.3;

    // disk indicator vs the exact chord length
    {
        Image2D img = Image2D::centered_square(n, ext);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                img.data(i, j) = img.point(i, j).norm() <= a ? 1.0 : 0.0;
        std::vector<double> angles{0.0, std::numbers::pi / 5, std::numbers::pi / 2, 2.2};
        std::vector<double> offsets;
        for (double s = -0.75 * a; s <= 0.7501 * a; s += a / 20) offsets.push_back(s);
        offsets.push_back(0.0);
        const auto sg = xray_forward(img, angles, offsets);
        double err = 0;
        for (std::size_t ai = 0; ai < angles.size(); ++ai)
            for (std::size_t oi = 0; oi < offsets.size(); ++oi) {
                const double s = offsets[oi];
                const double truth = 2 * std::sqrt(std::max(0.0, a * a - s * s));
                err = std::max(err, std::abs(sg.data(ai, oi) - truth));
            }
        out.chord_error = err;
        out.chord_tolerance = 2 * img.h;
    }

    // Gaussian roundtrip at 45/90/180 angles
    {
        Image2D img = Image2D::centered_square(n, ext);
        const double sx = 0.05, sy = -0.03, sig = 0.11;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Vec2 p = img.point(i, j);
                const double r2 = (p.x - sx) * (p.x - sx) + (p.y - sy) * (p.y - sy);
                img.data(i, j) = r2 < std::pow(4.5 * sig, 2) ? std::exp(-r2 / (2 * sig * sig)) : 0.0;
            }
        const double reach = ext * std::sqrt(2.0) + 0.02;
        std::vector<double> offsets(256);
        for (int j = 0; j < 256; ++j) offsets[j] = -reach + (j + 0.5) * (2 * reach / 256);
        for (const int n_ang : {45, 90, 180}) {
            std::vector<double> angles(n_ang);
            for (int k = 0; k < n_ang; ++k) angles[k] = std::numbers::pi * k / n_ang;
            const auto sg = xray_forward(img, angles, offsets);
            const Image2D rec = fbp_invert(sg, img, {});
            double num = 0, den = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double d = rec.data(i, j) - img.data(i, j);
                    num += d * d;
                    den += img.data(i, j) * img.data(i, j);
                }
            out.roundtrip_by_angles.push_back(std::sqrt(num / den));
        }
        out.roundtrip_rel_l2 = out.roundtrip_by_angles.back();
    }

    // l6i ratio sweep over random compact phantoms
    {
        std::mt19937 rng(123);
        std::uniform_real_distribution<double> U(-1, 1);
        auto ratio_of = [&](int count) {
            std::mt19937 local(123);
            std::uniform_real_distribution<double> UL(-1, 1);
            double worst = 0;
            const int np = 96;
            for (int c = 0; c < count; ++c) {
                Image2D img = Image2D::centered_square(np, ext);
                const int nb = 3 + static_cast<int>(3 * (UL(local) + 1));
                std::vector<double> cx(nb), cy(nb), w(nb), amp(nb);
                for (int b = 0; b < nb; ++b) {
                    cx[b] = 0.3 * UL(local);
                    cy[b] = 0.3 * UL(local);
                    w[b] = 0.05 + 0.08 * std::abs(UL(local));
                    amp[b] = UL(local);
                }
                for (int i = 0; i < np; ++i)
                    for (int j = 0; j < np; ++j) {
                        const Vec2 p = img.point(i, j);
                        double v = 0;
                        for (int b = 0; b < nb; ++b) {
                            const double r2 =
                                (p.x - cx[b]) * (p.x - cx[b]) + (p.y - cy[b]) * (p.y - cy[b]);
                            if (r2 < w[b] * w[b]) {
                                const double u = std::sqrt(r2) / w[b];
                                v += amp[b] * std::pow(1 - u * u, 3);
                            }
                        }
                        img.data(i, j) = v;
                    }
                const TomoCheck t = tomo_stability_check(img, 96, 192);
                if (t.rhs > 0) worst = std::max(worst, t.lhs / t.rhs);
            }
            return worst;
        };
        out.ratio_max_50 = ratio_of(50);
        out.ratio_max_100 = ratio_of(100);
        (void)rng;
        (void)U;
    }
    return out;
}

CorrelationCheck run_correlation_check(const WaveguideGrid& grid, const PotentialField& q1,
                                       const PotentialField& q2, std::vector<GOProbe> probes,
                                       const std::vector<double>& rhos, int threads, int workers) {
    CorrelationCheck out;
    out.per_probe.resize(probes.size());
    for (auto& sweep : out.per_probe) sweep.x = rhos;
    std::vector<double> oracles(probes.size());

    std::atomic<std::size_t> next{0};
    std::vector<std::vector<double>> errs(probes.size(), std::vector<double>(rhos.size(), 0.0));
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= probes.size() * rhos.size()) return;
            const std::size_t pi = i / rhos.size();
            const std::size_t ri = i % rhos.size();
            GOProbe p = probes[pi];
            p.rho = rhos[ri];
            CorrelateOptions co;
            co.threads = threads;
            const CorrelationDatum d = correlate(grid, q1, q2, p, co);
            if (ri == 0) oracles[pi] = correlation_oracle(grid, q1, q2, p);
            errs[pi][ri] = d.xray_estimate;
        }
    };
    const int W = std::max(1, workers);
    if (W == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < W; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    out.worst_slope_low = 1e9;
    out.worst_slope_high = -1e9;
    for (std::size_t pi = 0; pi < probes.size(); ++pi) {
        out.probe_ids.push_back(probes[pi].id());
        auto& sweep = out.per_probe[pi];
        for (std::size_t ri = 0; ri < rhos.size(); ++ri)
            sweep.values.push_back(std::abs(errs[pi][ri] - oracles[pi]));
        sweep.slope = loglog_slope(sweep.x, sweep.values);
        out.worst_slope_low = std::min(out.worst_slope_low, sweep.slope);
        out.worst_slope_high = std::max(out.worst_slope_high, sweep.slope);
    }
    return out;
}

}  // namespace wgt
