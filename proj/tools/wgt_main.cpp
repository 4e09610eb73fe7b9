#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wgt/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"waveguide potential tomography toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    bool sequential = false;

    const std::vector<std::string> names{"solve", "dn-gap", "xray", "reconstruct", "stability",
                                         "verify"};
    const std::vector<std::string> descs{
        "forward solve of one probe datum, writes the Neumann trace",
        "DN-gap estimate over the probe dictionary",
        "sinogram + filtered backprojection of the phantom section",
        "full DN-to-potential reconstruction pipeline",
        "Hoelder stability experiment over a scaled family",
        "invariant suite (identity, energy, remainder, mollifier, tomography)"};
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("-c,--config", config_path, "run configuration (json)")->required();
        sub->add_option("-o,--out", out_override, "override the output directory");
        sub->add_flag("--sequential", sequential, "bit-deterministic single-worker mode");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        wgt::RunConfig cfg = wgt::load_config(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (sequential) cfg.sequential = true;
        return wgt::run_subcommand(cmd, cfg);
    } catch (const wgt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return wgt::exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return wgt::exit_generic;
    }
}
