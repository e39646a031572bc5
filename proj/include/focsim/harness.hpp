#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "focsim/analysis.hpp"
#include "focsim/control.hpp"
#include "focsim/machines.hpp"
#include "focsim/modulation.hpp"
#include "focsim/sim_core.hpp"

namespace focsim {

/// Right-continuous step function: value_at(t) is the value of the last
/// point at or before t.
struct StepSchedule {
    std::vector<std::pair<double, double>> points;  // (time, value), time-sorted

    double value_at(double t) const;
    void validate(const char* what) const;
};

enum class ModulatorKind { Hcc, Spwm, Dpwm, Svpwm };

/// Tagged modulator choice plus its per-method parameters. The carrier
/// frequency of all carrier-based methods comes from the scenario's t_pwm.
struct ModulatorConfig {
    ModulatorKind kind = ModulatorKind::Svpwm;
    HysteresisConfig hysteresis;
    DpwmConfig dpwm;

    std::string name() const;
    static ModulatorConfig from_name(const std::string& name);
    void validate() const;
};

struct ThdSettings {
    double f1_override_hz = 0.0;  // 0 = derive f1 from measured rotor speed
    int n_harmonics = 200;
};

/// Full description of one closed-loop experiment.
struct ScenarioSpec {
    double duration = 2.0;  // seconds
    StepSchedule speed_schedule;             // (t, omega_ref rad/s)
    StepSchedule load_schedule;              // (t, T_L N m)
    std::vector<std::pair<double, int>> thd_windows;  // (t_end, n_cycles)
    SpmsmParams machine;
    double v_dc = 400.0;
    FocConfig control;
    double dt = 1e-6;
    double t_pwm = 100e-6;
    int trace_decimation = 100;
    ThdSettings thd;

    void validate() const;
};

/// Full-rate inverter gate record.
struct GateTrace {
    double dt = 0.0;
    std::vector<std::uint8_t> a;
    std::vector<std::uint8_t> b;
    std::vector<std::uint8_t> c;
};

struct RunTraces {
    TimeSeries i_a, i_b, i_c;                 // phase currents, full rate
    TimeSeries i_ref_a, i_ref_b, i_ref_c;     // current references (full rate for HCC,
                                              // control rate for carrier methods)
    TimeSeries omega_m;                       // decimated
    TimeSeries torque_e;                      // decimated
    TimeSeries v_d_ref, v_q_ref;              // decimated
    TimeSeries mod_ref_a, mod_ref_b, mod_ref_c;  // normalized modulator refs, control rate
    GateTrace gates;
};

struct RunReport {
    std::string modulator;
    std::vector<double> thd_per_window;  // fractions, one per thd window
    std::vector<double> thd_f1_hz;       // fundamental used per window
    std::vector<Spectrum> spectra;       // one per thd window
    std::vector<SpeedMetrics> metrics;   // one per speed_schedule step
    std::vector<std::string> warnings;
    RunTraces traces;
    std::string config_echo;             // fully resolved configuration, JSON text
};

/// Time-steps the cascaded FOC loop with the chosen switching technique
/// and collects traces, per-window THD and per-step speed metrics.
RunReport run_scenario(const ScenarioSpec& spec, const ModulatorConfig& modulator);

struct ComparisonRow {
    std::string modulator;
    bool ok = false;
    std::string error;
    std::vector<double> thd_per_window;
    std::vector<double> thd_f1_hz;
    std::vector<SpeedMetrics> metrics;
    int thd_rank = 0;  // 1 = lowest mean THD; 0 for failed rows
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    std::vector<std::optional<RunReport>> reports;  // aligned with rows; empty on failure
    std::vector<std::pair<double, int>> thd_windows;
    std::vector<double> speed_step_times;
};

/// One run per modulator under the identical spec; failed runs are
/// flagged in their row while the others stay intact. Runs are
/// independent and fan out to worker threads.
ComparisonReport compare_modulators(const ScenarioSpec& spec,
                                    const std::vector<ModulatorConfig>& modulators);

/// Wraps one finished run as a single-row report (the `simulate` output).
ComparisonReport wrap_single_run(const ScenarioSpec& spec, RunReport report);

/// The stock drive cycle: 2 s run, speed stepping 100 -> 300 rad/s at
/// 0.3 s, load stepping 5 -> 8 N m at 1 s, THD windows ending at 0.8 s
/// and 1.9 s.
ScenarioSpec default_scenario();

/// Default comparison order: hcc, dpwm, spwm, svpwm.
std::vector<ModulatorConfig> default_modulators();

/// report.csv content for a comparison (deterministic formatting).
std::string comparison_csv(const ComparisonReport& report);

/// Writes report.csv, per-modulator spectrum/speed/gates/refs CSVs and
/// config_echo.json into `dir` (created if missing).
void write_comparison_outputs(const std::string& dir, const ComparisonReport& report);

}  // namespace focsim
