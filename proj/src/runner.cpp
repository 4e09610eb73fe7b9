#include "wgt/runner.hpp"

#include <filesystem>
#include <iostream>

#include "wgt/checks.hpp"
#include "wgt/dn_map.hpp"
#include "wgt/gridio.hpp"
#include "wgt/reconstruct.hpp"
#include "wgt/rellich.hpp"
#include "wgt/solver.hpp"
#include "wgt/stability.hpp"

namespace wgt {

namespace {

using nlohmann::json;

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

json config_stamp(const RunConfig& cfg) {
    json j;
    j["config_hash"] = cfg.hash;
    return j;
}

int effective_workers(const RunConfig& cfg) {
    if (cfg.sequential) return 1;
    if (const char* env = std::getenv("WGT_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return std::max(1, cfg.workers);
}

int cmd_solve(const RunConfig& cfg) {
    const auto grid = cfg.build();
    const auto q1 = make_phantom(grid, cfg.q1);
    const auto probes = place_probes(grid, cfg.probes);
    const int pi = cfg.solve_probe_index;
    if (pi < 0 || pi >= static_cast<int>(probes.size()))
        throw ConfigError("solve.probe_index", "outside the dictionary");
    const LateralField trace = [&] {
        ProbeBoundary bd(grid, probes[pi]);
        SolveOptions opt;
        opt.complex_data = true;
        opt.want_trace = true;
        opt.threads = cfg.sequential ? 1 : cfg.threads;
        return solve_ibvp(grid, &q1, bd, nullptr, opt).neumann_trace;
    }();
    ensure_dir(cfg.out_dir);
    write_grid_blob(cfg.out_dir + "/trace.bin", to_blob(trace, cfg.hash));
    json rep = config_stamp(cfg);
    rep["probe"] = probes[pi].id();
    rep["trace_l2_sigma"] = trace.l2_sigma();
    rep["nt"] = grid.nt;
    rep["dt"] = grid.dt;
    write_text_file(cfg.out_dir + "/solve.json", rep.dump(2) + "\n");
    return exit_ok;
}

int cmd_dn_gap(const RunConfig& cfg) {
    const auto grid = cfg.build();
    const auto q1 = make_phantom(grid, cfg.q1);
    const auto p = make_phantom(grid, cfg.q2);
    const auto q2 = perturb_potential(grid, q1, p, 1.0);
    const auto probes = place_probes(grid, cfg.probes);
    DNGapOptions opt;
    opt.threads = cfg.sequential ? 1 : cfg.threads;
    opt.workers = effective_workers(cfg);
    opt.window_R = cfg.probes.window_R;
    const DNGapEstimate est = dn_gap(grid, q1, q2, probes, opt);
    ensure_dir(cfg.out_dir);
    json rep = config_stamp(cfg);
    rep["gamma_hat"] = est.gamma_hat;
    rep["status"] = "lower bound over the probe dictionary";
    rep["denominator"] = est.denominator_kind;
    json rows = json::array();
    for (const auto& r : est.per_probe)
        rows.push_back({{"probe", r.probe_id},
                        {"trace_gap_l2", r.trace_gap_l2},
                        {"denominator", r.denominator},
                        {"ratio", r.ratio}});
    rep["per_probe"] = rows;
    write_text_file(cfg.out_dir + "/dn_gap.json", rep.dump(2) + "\n");
    return exit_ok;
}

int cmd_xray(const RunConfig& cfg) {
    const auto grid = cfg.build();
    const auto q1 = make_phantom(grid, cfg.q1);
    // section image of the phantom at z = 0
    const int n = cfg.recon_n;
    Image2D img = Image2D::centered_square(n, grid.section.circumradius() + 0.05);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Vec2 p = img.point(i, j);
            img.data(i, j) = grid.section.dist_outside(p) > 0 || !q1.analytic
                                 ? 0.0
                                 : q1.analytic(p, 0.0);
        }
    const auto angles = probe_angles(std::max(2, cfg.probes.angles));
    std::vector<double> offsets = probe_offsets(grid, std::max(2, cfg.probes.offsets));
    SliceSinogram sg = xray_forward(img, angles, offsets);
    sg.y3 = 0.0;
    const Image2D rec = fbp_invert(sg, img, {});
    double num = 0, den = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double d = rec.data(i, j) - img.data(i, j);
            num += d * d;
            den += img.data(i, j) * img.data(i, j);
        }
    ensure_dir(cfg.out_dir);
    write_sinogram_csv(cfg.out_dir + "/sinogram.csv", sg, cfg.hash);
    write_grid_blob(cfg.out_dir + "/recon.bin", to_blob(rec, cfg.hash));
    json rep = config_stamp(cfg);
    rep["roundtrip_rel_l2"] = den > 0 ? std::sqrt(num / den) : 0.0;
    const TomoCheck tc = tomo_stability_check(img);
    rep["tomo_lhs_hminus_half"] = tc.lhs;
    rep["tomo_rhs_l2_ts1"] = tc.rhs;
    write_text_file(cfg.out_dir + "/xray.json", rep.dump(2) + "\n");
    return exit_ok;
}

int cmd_reconstruct(const RunConfig& cfg) {
    const auto grid = cfg.build();
    const auto q1 = make_phantom(grid, cfg.q1);
    const auto p = make_phantom(grid, cfg.q2);
    const auto q2 = perturb_potential(grid, q1, p, 1.0);
    ReconstructParams params;
    params.probes = cfg.probes;
    params.recon_n = cfg.recon_n;
    params.apodize = cfg.apodize;
    params.deconvolve = cfg.deconvolve;
    params.threads = cfg.sequential ? 1 : cfg.threads;
    params.workers = effective_workers(cfg);
    const ReconstructionResult res = reconstruct_gap(grid, q1, q2, params);
    ensure_dir(cfg.out_dir);
    for (std::size_t s = 0; s < res.sinograms.size(); ++s)
        write_sinogram_csv(cfg.out_dir + "/sinogram_" + std::to_string(s) + ".csv",
                           res.sinograms[s], cfg.hash);
    for (std::size_t s = 0; s < res.q_hat.size(); ++s) {
        write_grid_blob(cfg.out_dir + "/q_hat_" + std::to_string(s) + ".bin",
                        to_blob(res.q_hat[s], cfg.hash));
        write_grid_blob(cfg.out_dir + "/oracle_" + std::to_string(s) + ".bin",
                        to_blob(res.oracle[s], cfg.hash));
    }
    json rep = config_stamp(cfg);
    rep["linf_error_window"] = res.linf_error_window;
    rep["l2_error"] = res.l2_error;
    rep["per_slice_linf"] = res.per_slice_linf;
    rep["slices"] = res.slices;
    rep["q_hat_is"] = "mollified gap R_delta[q1-q2]";
    write_text_file(cfg.out_dir + "/reconstruct.json", rep.dump(2) + "\n");
    return exit_ok;
}

int cmd_stability(const RunConfig& cfg) {
    const auto grid = cfg.build();
    const auto q1 = make_phantom(grid, cfg.q1);
    const auto p = make_phantom(grid, cfg.q2);
    std::vector<PotentialField> family;
    for (const double s : cfg.stability_scales) family.push_back(perturb_potential(grid, q1, p, s));
    StabilityParams params;
    params.probes = cfg.probes;
    params.solver_threads = cfg.sequential ? 1 : cfg.threads;
    params.workers = effective_workers(cfg);
    const StabilityReport rep = stability_experiment(grid, q1, family, cfg.stability_scales, params);
    ensure_dir(cfg.out_dir);
    json j = config_stamp(cfg);
    j["kappa"] = rep.kappa;
    j["fitted_C"] = rep.fitted_C;
    j["gamma_monotone"] = rep.gamma_monotone;
    j["all_hold"] = rep.all_hold;
    json rows = json::array();
    std::string csv = "s,gap_inf,gamma_hat,kappa,slack,inequality_holds,regime\n";
    for (const auto& pr : rep.pairs) {
        rows.push_back({{"s", pr.scale},
                        {"gap_inf", pr.gap_inf},
                        {"gamma_hat", pr.gamma_hat},
                        {"kappa", pr.kappa},
                        {"slack", pr.slack},
                        {"inequality_holds", pr.inequality_holds},
                        {"regime", pr.regime}});
        csv += std::to_string(pr.scale) + "," + std::to_string(pr.gap_inf) + "," +
               std::to_string(pr.gamma_hat) + "," + std::to_string(pr.kappa) + "," +
               std::to_string(pr.slack) + "," + (pr.inequality_holds ? "1" : "0") + "," +
               pr.regime + "\n";
    }
    j["pairs"] = rows;
    write_text_file(cfg.out_dir + "/stability.json", j.dump(2) + "\n");
    write_text_file(cfg.out_dir + "/stability.csv", csv);
    return exit_ok;
}

int cmd_verify(const RunConfig& cfg) {
    ensure_dir(cfg.out_dir);
    json rep = config_stamp(cfg);
    bool all_pass = true;
    auto record = [&](const std::string& name, bool pass, json detail) {
        detail["pass"] = pass;
        rep[name] = detail;
        all_pass = all_pass && pass;
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << "\n";
    };

    const int threads = cfg.sequential ? 1 : cfg.threads;
    {
        const auto rc = run_rellich_check(48, 96, 2.0, false, threads);
        record("rellich_identity", rc.residual <= 0.05,
               {{"residual", rc.residual}, {"threshold", 0.05}});
        record("energy_conservation", rc.energy_drift <= 1e-3,
               {{"drift", rc.energy_drift}, {"threshold", 1e-3}});
    }
    {
        const auto gc = run_go_remainder_check(40, 3.0, {4, 8, 16, 32}, 0.1, 4.5, threads);
        const bool pass = std::abs(gc.psi.slope + 1.0) <= 0.2 && std::abs(gc.grad_psi.slope) <= 0.3;
        record("go_remainder_decay", pass,
               {{"psi_slope", gc.psi.slope}, {"grad_slope", gc.grad_psi.slope}});
    }
    {
        const auto mc = run_mollifier_check(0.125, 0.1, 0.5);
        const bool pass = std::abs(mc.l2.slope) <= 0.1 && std::abs(mc.h1.slope + 1.0) <= 0.15 &&
                          mc.rate.slope >= mc.alpha_tilde - 0.1;
        record("mollifier_rates", pass,
               {{"l2_slope", mc.l2.slope},
                {"h1_slope", mc.h1.slope},
                {"rate_slope", mc.rate.slope}});
    }
    {
        const auto tc = run_tomography_check();
        const bool mono = tc.roundtrip_by_angles[0] > tc.roundtrip_by_angles[1] &&
                          tc.roundtrip_by_angles[1] > tc.roundtrip_by_angles[2];
        const bool pass = tc.chord_error <= tc.chord_tolerance && tc.roundtrip_rel_l2 <= 0.05 &&
                          mono && tc.ratio_max_100 <= 1.2 * tc.ratio_max_50;
        record("tomography", pass,
               {{"chord_error", tc.chord_error},
                {"chord_tolerance", tc.chord_tolerance},
                {"roundtrip_rel_l2", tc.roundtrip_rel_l2},
                {"ratio_max_50", tc.ratio_max_50},
                {"ratio_max_100", tc.ratio_max_100}});
    }
    write_text_file(cfg.out_dir + "/verify.json", rep.dump(2) + "\n");
    return all_pass ? exit_ok : exit_acceptance_miss;
}

}  // namespace

int run_subcommand(const std::string& cmd, const RunConfig& cfg) {
    try {
        if (cmd == "solve") return cmd_solve(cfg);
        if (cmd == "dn-gap") return cmd_dn_gap(cfg);
        if (cmd == "xray") return cmd_xray(cfg);
        if (cmd == "reconstruct") return cmd_reconstruct(cfg);
        if (cmd == "stability") return cmd_stability(cfg);
        if (cmd == "verify") return cmd_verify(cfg);
        std::cerr << "unknown subcommand: " << cmd << "\n";
        return exit_config;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const SolverError& e) {
        std::cerr << "solver error at step " << e.step << ": " << e.what() << "\n";
        return std::string(e.what()).find("CFL") != std::string::npos ? exit_cfl : exit_numeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_generic;
    }
}

}  // namespace wgt
