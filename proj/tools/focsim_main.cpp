#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "focsim/config.hpp"
#include "focsim/harness.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    bool fast = false;
    double thd_f1 = 0.0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, const std::string& default_out) {
    cmd->add_option("--config", opts.config_path, "JSON configuration file");
    cmd->add_option("--set", opts.overrides, "override a config key, e.g. control.i_q_limit=30");
    cmd->add_option("--out", opts.out_dir, "output directory")->default_val(default_out);
    cmd->add_flag("--fast", opts.fast, "coarse 5 us step for quick runs");
    cmd->add_option("--thd-f1", opts.thd_f1,
                    "fix the THD fundamental in Hz instead of deriving it from speed");
}

focsim::FileConfig resolve_config(const CommonOpts& opts) {
    const std::string* path = opts.config_path.empty() ? nullptr : &opts.config_path;
    focsim::FileConfig cfg = focsim::load_config(path, opts.overrides);
    if (opts.fast) {
        cfg.scenario.dt = 5e-6;
    }
    if (opts.thd_f1 > 0.0) {
        cfg.scenario.thd.f1_override_hz = opts.thd_f1;
    }
    return cfg;
}

int count_failed(const focsim::ComparisonReport& report) {
    int failed = 0;
    for (const auto& row : report.rows) {
        if (!row.ok) {
            std::cerr << "error: run " << row.modulator << " failed: " << row.error << "\n";
            ++failed;
        }
    }
    return failed;
}

void print_summary(const focsim::ComparisonReport& report) {
    for (const auto& row : report.rows) {
        std::printf("%-6s %s", row.modulator.c_str(), row.ok ? "ok    " : "failed");
        for (double thd : row.thd_per_window) {
            std::printf("  thd=%.2f%%", 100.0 * thd);
        }
        for (const auto& m : row.metrics) {
            if (m.rise_time) {
                std::printf("  rise=%.4gs", *m.rise_time);
            }
        }
        std::printf("\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PMSM vector-control simulator: four inverter switching techniques, "
                 "speed response and phase-current THD analysis"};
    app.require_subcommand(1);

    CommonOpts sim_opts, cmp_opts, im_opts;
    std::string sim_modulator = "svpwm";
    std::vector<std::string> cmp_modulators = {"hcc", "dpwm", "spwm", "svpwm"};

    CLI::App* sim = app.add_subcommand("simulate", "run one modulator through the scenario");
    add_common(sim, sim_opts, "out-simulate");
    sim->add_option("--modulator", sim_modulator, "hcc|spwm|dpwm|svpwm")->required();

    CLI::App* cmp = app.add_subcommand("compare", "run several modulators under one scenario");
    add_common(cmp, cmp_opts, "out-compare");
    cmp->add_option("--modulators", cmp_modulators, "modulators to compare")
        ->delimiter(',');

    CLI::App* imc = app.add_subcommand("imcurve", "induction-machine torque-slip table");
    add_common(imc, im_opts, "out-imcurve");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            const focsim::FileConfig cfg = resolve_config(sim_opts);
            const focsim::ModulatorConfig mod = focsim::make_modulator(cfg, sim_modulator);
            focsim::RunReport report = focsim::run_scenario(cfg.scenario, mod);
            for (const auto& w : report.warnings) {
                std::cerr << "warning: " << w << "\n";
            }
            const focsim::ComparisonReport wrapped =
                focsim::wrap_single_run(cfg.scenario, std::move(report));
            focsim::write_comparison_outputs(sim_opts.out_dir, wrapped);
            print_summary(wrapped);
            std::printf("wrote %s\n", sim_opts.out_dir.c_str());
            return 0;
        }
        if (cmp->parsed()) {
            const focsim::FileConfig cfg = resolve_config(cmp_opts);
            std::vector<focsim::ModulatorConfig> mods;
            mods.reserve(cmp_modulators.size());
            for (const auto& name : cmp_modulators) {
                mods.push_back(focsim::make_modulator(cfg, name));
            }
            const focsim::ComparisonReport report =
                focsim::compare_modulators(cfg.scenario, mods);
            focsim::write_comparison_outputs(cmp_opts.out_dir, report);
            print_summary(report);
            std::printf("wrote %s\n", cmp_opts.out_dir.c_str());
            return count_failed(report) == 0 ? 0 : 1;
        }
        if (imc->parsed()) {
            const focsim::FileConfig cfg = resolve_config(im_opts);
            const focsim::ImCurveConfig& ic = cfg.imcurve;
            if (ic.points < 1 || !(ic.s_min > 0.0) || !(ic.s_max <= 1.0) ||
                !(ic.s_min <= ic.s_max)) {
                throw focsim::ConfigError("imcurve: need 0 < s_min <= s_max <= 1 and points >= 1");
            }
            std::vector<double> grid;
            grid.reserve(static_cast<std::size_t>(ic.points));
            for (int i = 0; i < ic.points; ++i) {
                const double frac =
                    ic.points == 1 ? 0.0
                                   : static_cast<double>(i) / static_cast<double>(ic.points - 1);
                grid.push_back(ic.s_min + frac * (ic.s_max - ic.s_min));
            }
            const double omega_e = 2.0 * 3.14159265358979323846 * ic.f_hz;
            const auto rows = focsim::im_torque_slip_curve(ic.params, ic.v_s, omega_e, grid);
            std::filesystem::create_directories(im_opts.out_dir);
            focsim::write_csv(rows, im_opts.out_dir + "/imcurve.csv");
            std::ofstream echo(im_opts.out_dir + "/config_echo.json");
            echo << focsim::config_to_json_text(cfg) << "\n";
            std::printf("wrote %s/imcurve.csv (%zu rows)\n", im_opts.out_dir.c_str(),
                        rows.size());
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
