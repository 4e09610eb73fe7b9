#include "wgt/dn_map.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace wgt {

LateralField dn_apply(const WaveguideGrid& grid, const PotentialField* q, const LateralField& f,
                      int threads) {
    FieldBoundary bd(f);
    SolveOptions opt;
    opt.complex_data = true;
    opt.want_trace = true;
    opt.threads = threads;
    SolveResult res = solve_ibvp(grid, q, bd, nullptr, opt);
    res.neumann_trace.probe_id = f.probe_id;
    return std::move(res.neumann_trace);
}

void dn_window_inplace(LateralField& trace, double R) {
    if (R <= 0) throw std::invalid_argument("dn_window: R must be positive");
    for (int k = 0; k < trace.nz; ++k) {
        if (std::abs(trace.z_of(k)) < R) continue;
        for (int n = 0; n < trace.nt; ++n)
            for (int b = 0; b < trace.nb; ++b) {
                trace.re[trace.idx(n, b, k)] = 0;
                trace.im[trace.idx(n, b, k)] = 0;
            }
    }
}

LateralField dn_window(const LateralField& trace, double R) {
    LateralField out = trace;
    dn_window_inplace(out, R);
    return out;
}

namespace {

// || window(Lambda_q1 f - Lambda_q2 f) ||_{L2(Sigma)} for one probe, streaming
// the second solve against the materialized first trace.
double probe_trace_gap(const WaveguideGrid& grid, const PotentialField& q1,
                       const PotentialField& q2, const GOProbe& probe,
                       std::optional<double> window_R, int threads) {
    ProbeBoundary bd(grid, probe);
    if (bd.is_zero()) return 0.0;

    SolveOptions opt1;
    opt1.complex_data = true;
    opt1.want_trace = true;
    opt1.threads = threads;
    const SolveResult r1 = solve_ibvp(grid, &q1, bd, nullptr, opt1);
    const LateralField& t1 = r1.neumann_trace;

    const int nz = grid.nz;
    std::vector<char> zmask(nz, 1);
    if (window_R)
        for (int k = 0; k < nz; ++k) zmask[k] = std::abs(t1.z_of(k)) < *window_R ? 1 : 0;

    double acc = 0;
    SolveOptions opt2;
    opt2.complex_data = true;
    opt2.threads = threads;
    opt2.trace_sink = [&](int n, double, const double* tre, const double* tim) {
        const double wt = (n == 0 || n == grid.nt - 1) ? 0.5 * grid.dt : grid.dt;
        double plane = 0;
        for (std::size_t b = 0; b < grid.n_boundary(); ++b) {
            const std::size_t base = t1.idx(n, static_cast<int>(b), 0);
            double zs = 0;
            for (int k = 0; k < nz; ++k) {
                if (!zmask[k]) continue;
                const double dr = t1.re[base + k] - tre[b * nz + k];
                const double di = t1.im[base + k] - tim[b * nz + k];
                zs += dr * dr + di * di;
            }
            plane += grid.boundary[b].arc_weight * zs;
        }
        acc += wt * plane * grid.hz;
    };
    solve_ibvp(grid, &q2, bd, nullptr, opt2);
    return std::sqrt(acc);
}

}  // namespace

DNGapEstimate dn_gap(const WaveguideGrid& grid, const PotentialField& q1,
                     const PotentialField& q2, const std::vector<GOProbe>& probes,
                     const DNGapOptions& opt) {
    if (probes.empty()) throw std::invalid_argument("dn_gap: empty probe dictionary");
    DNGapEstimate est;
    est.denominator_kind = opt.discrete_denominator ? "discrete" : "surrogate";
    est.per_probe.resize(probes.size());

    const int workers = std::max(1, opt.workers);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= probes.size()) return;
            const GOProbe& p = probes[i];
            ProbeRatio r;
            r.probe_id = p.id();
            r.trace_gap_l2 =
                probe_trace_gap(grid, q1, q2, p, opt.window_R ? opt.window_R : p.window_R,
                                opt.threads);
            if (opt.discrete_denominator) {
                const ProbeData pd = make_probe_data(grid, p);
                r.denominator = l_norm_discrete(pd.f);
            } else {
                r.denominator = l_norm_surrogate(p);
            }
            r.ratio = r.denominator > 0 ? r.trace_gap_l2 / r.denominator : 0.0;
            est.per_probe[i] = r;
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (const auto& r : est.per_probe) est.gamma_hat = std::max(est.gamma_hat, r.ratio);
    return est;
}

}  // namespace wgt
