#pragma once

#include <string>
#include <vector>

#include "focsim/harness.hpp"

namespace focsim {

/// Inputs for the induction-machine torque-slip analysis.
struct ImCurveConfig {
    ImParams params{};
    double v_s = 230.0;   // phase voltage magnitude, volt
    double f_hz = 50.0;   // supply frequency
    int points = 100;
    double s_min = 0.01;
    double s_max = 1.0;
};

/// Everything a configuration file can address: the scenario plus the
/// per-method modulator parameters and the induction-curve inputs.
struct FileConfig {
    ScenarioSpec scenario;
    double f_cc_hz = 1000.0;  // current-loop bandwidth used when gains are derived
    double f_sc_hz = 50.0;    // speed-loop bandwidth
    bool explicit_gains = false;
    HysteresisConfig hysteresis{};
    DpwmConfig dpwm{};
    ImCurveConfig imcurve{};
};

/// The built-in defaults (stock drive cycle, default modulator parameters).
FileConfig default_config();

/// Loads a JSON config over the defaults; absent keys keep their default
/// values. `overrides` are dotted key=value pairs applied last (CLI --set
/// flags), e.g. "control.i_q_limit=30". Pass nullptr for defaults only.
FileConfig load_config(const std::string* file_path,
                       const std::vector<std::string>& overrides);

/// Builds the modulator for `name` (hcc|spwm|dpwm|svpwm) with the
/// file-configured per-method parameters.
ModulatorConfig make_modulator(const FileConfig& cfg, const std::string& name);

/// Fully resolved configuration as JSON text (gains included).
std::string config_to_json_text(const FileConfig& cfg);

/// Per-run configuration echo: resolved scenario plus the modulator and
/// its derived v_limit/control_period.
std::string resolved_run_config_json(const ScenarioSpec& spec, const ModulatorConfig& mod,
                                     double v_limit, double control_period);

/// Combines per-run echo documents into one JSON file.
void write_config_echoes(const std::string& path, const std::vector<std::string>& echoes);

}  // namespace focsim
