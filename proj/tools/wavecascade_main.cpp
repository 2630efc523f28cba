#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "wavecascade/runner.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace wavecascade;

namespace {

SolveConfig resolve_config(const std::string& config_path, const std::string& preset,
                           const std::vector<double>& k_override, int N_override) {
    SolveConfig cfg;
    if (!preset.empty()) {
        if (preset == "paper-example")
            cfg = paper_example_config();
        else if (preset == "paper-example-lossless")
            cfg = paper_example_lossless_config();
        else
            throw ConfigError("unknown preset: " + preset);
    } else if (!config_path.empty()) {
        cfg = load_config(config_path);
    } else {
        throw ConfigError("either --config or --preset is required");
    }
    if (!k_override.empty()) cfg.k_values = k_override;
    if (N_override > 0) cfg.N = static_cast<std::size_t>(N_override);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavecascade: modal scattering solver for 2-D waveguides"};
    app.require_subcommand(1);

    std::string config_path, preset, out_dir;
    std::vector<double> k_override;
    int N_override = -1, jobs = 0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--preset", preset,
                        "built-in configuration (paper-example, paper-example-lossless)");
        sub->add_option("--k", k_override, "override wavenumber list");
        sub->add_option("--N", N_override, "override truncation order");
        sub->add_option("--jobs", jobs, "worker threads (default: all cores)");
        sub->add_option("--out", out_dir, "output directory");
    };

    auto* solve = app.add_subcommand("solve", "frequency sweep -> sweep.csv");
    add_common(solve);
    auto* field = app.add_subcommand("field", "field maps at a single k");
    add_common(field);
    auto* validate = app.add_subcommand("validate", "RT/DtN and FD cross-checks");
    add_common(validate);

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#endif

    SolveConfig cfg;
    try {
        cfg = resolve_config(config_path, preset, k_override, N_override);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    try {
        std::filesystem::create_directories(cfg.out_dir);
        if (app.got_subcommand(solve)) {
            std::ofstream csv(cfg.out_dir + "/sweep.csv");
            cmd_solve(cfg, csv, std::cerr);
            std::cout << cfg.out_dir << "/sweep.csv\n";
        } else if (app.got_subcommand(field)) {
            if (cfg.k_values.size() != 1) {
                std::cerr << "config error: field requires exactly one k\n";
                return 1;
            }
            cmd_field(cfg, cfg.k_values[0], cfg.out_dir);
            std::cout << cfg.out_dir << "/modal.csv\n"
                      << cfg.out_dir << "/field2d.csv\n"
                      << cfg.out_dir << "/plot_field.gp\n";
        } else {
            std::ofstream csv(cfg.out_dir + "/validate.csv");
            cmd_validate(cfg, csv, std::cerr);
            std::cout << cfg.out_dir << "/validate.csv\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
