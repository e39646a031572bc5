#include "focsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include "focsim/config.hpp"

namespace focsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt3 = 1.7320508075688772935274463415059;

}  // namespace

double StepSchedule::value_at(double t) const {
    double v = points.empty() ? 0.0 : points.front().second;
    for (const auto& p : points) {
        if (p.first <= t) {
            v = p.second;
        } else {
            break;
        }
    }
    return v;
}

void StepSchedule::validate(const char* what) const {
    if (points.empty()) {
        throw ConfigError(std::string(what) + ": schedule must not be empty");
    }
    if (points.front().first != 0.0) {
        throw ConfigError(std::string(what) + ": schedule must start at t = 0");
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].first > points[i - 1].first)) {
            throw ConfigError(std::string(what) + ": schedule times must be strictly increasing");
        }
    }
}

std::string ModulatorConfig::name() const {
    switch (kind) {
        case ModulatorKind::Hcc: return "hcc";
        case ModulatorKind::Spwm: return "spwm";
        case ModulatorKind::Dpwm: return "dpwm";
        case ModulatorKind::Svpwm: return "svpwm";
    }
    return "unknown";
}

ModulatorConfig ModulatorConfig::from_name(const std::string& name) {
    ModulatorConfig cfg;
    if (name == "hcc") {
        cfg.kind = ModulatorKind::Hcc;
    } else if (name == "spwm") {
        cfg.kind = ModulatorKind::Spwm;
    } else if (name == "dpwm") {
        cfg.kind = ModulatorKind::Dpwm;
    } else if (name == "svpwm") {
        cfg.kind = ModulatorKind::Svpwm;
    } else {
        throw ConfigError("unknown modulator '" + name + "' (expected hcc|spwm|dpwm|svpwm)");
    }
    return cfg;
}

void ModulatorConfig::validate() const {
    if (kind == ModulatorKind::Hcc) {
        hysteresis.validate();
    }
    if (!std::isfinite(dpwm.delta) || !std::isfinite(dpwm.phi)) {
        throw ConfigError("ModulatorConfig: dpwm angles must be finite");
    }
}

void ScenarioSpec::validate() const {
    if (duration < 0.0) throw ConfigError("ScenarioSpec: duration must be non-negative");
    machine.validate();
    control.validate();
    if (!(v_dc > 0.0)) throw ConfigError("ScenarioSpec: v_dc must be positive");
    SimClock::make(dt, t_pwm);
    if (trace_decimation < 1) throw ConfigError("ScenarioSpec: trace_decimation must be >= 1");
    speed_schedule.validate("speed_schedule");
    load_schedule.validate("load_schedule");
    const double last_sched =
        std::max(speed_schedule.points.back().first, load_schedule.points.back().first);
    if (duration < last_sched) {
        throw ConfigError("ScenarioSpec: duration must cover the last scheduled time");
    }
    for (const auto& w : thd_windows) {
        if (w.second < 1) throw ConfigError("ScenarioSpec: thd window needs n_cycles >= 1");
        if (w.first > duration) {
            throw ConfigError("ScenarioSpec: duration must cover the last thd window");
        }
    }
    if (thd.n_harmonics < 2) throw ConfigError("ScenarioSpec: thd.n_harmonics must be >= 2");
    if (thd.f1_override_hz < 0.0) throw ConfigError("ScenarioSpec: thd.f1_hz must be >= 0");
    if (control.control_period > 0.0) {
        const auto k = std::llround(control.control_period / dt);
        if (k < 1 || std::abs(static_cast<double>(k) * dt - control.control_period) >
                         1e-9 * control.control_period) {
            throw ConfigError("ScenarioSpec: control_period must be an integer multiple of dt");
        }
    }
}

namespace {

struct Recorder {
    TimeSeries series;
    explicit Recorder(std::string label, double dt, std::size_t reserve_n) {
        series.label = std::move(label);
        series.dt = dt;
        series.t0 = 0.0;
        series.samples.reserve(reserve_n);
    }
    void push(double v) { series.samples.push_back(v); }
};

SpeedMetrics metrics_for_step(const TimeSeries& omega, double ref_before, double ref_after,
                              double t_step, double t_next) {
    if (omega.samples.empty() || t_step >= omega.t_end()) {
        return SpeedMetrics{};
    }
    const double t_hi = std::min(t_next, omega.t_end());
    if (!(t_step < t_hi)) {
        return SpeedMetrics{};
    }
    const TimeSeries window = extract_window(omega, t_step, t_hi);
    return speed_metrics(window, ref_before, ref_after, t_step);
}

}  // namespace

RunReport run_scenario(const ScenarioSpec& spec, const ModulatorConfig& modulator) {
    spec.validate();
    modulator.validate();

    const double dt = spec.dt;
    const SimClock clock = SimClock::make(dt, spec.t_pwm);
    const auto n_steps = static_cast<std::size_t>(std::llround(spec.duration / dt));
    const std::size_t pwm_steps = clock.pwm_steps();
    const bool carrier_based = modulator.kind != ModulatorKind::Hcc;

    std::size_t control_steps;
    if (spec.control.control_period > 0.0) {
        control_steps = static_cast<std::size_t>(std::llround(spec.control.control_period / dt));
    } else {
        control_steps = carrier_based ? pwm_steps : 1;
    }
    const double control_dt = static_cast<double>(control_steps) * dt;

    FocConfig cfg = spec.control;
    cfg.control_period = control_dt;
    if (cfg.v_limit <= 0.0) {
        // Linear-range rule: zero-sequence-injecting methods reach
        // v_dc/sqrt(3), plain sinusoidal comparison only v_dc/2.
        cfg.v_limit = (modulator.kind == ModulatorKind::Svpwm ||
                       modulator.kind == ModulatorKind::Dpwm)
                          ? spec.v_dc / kSqrt3
                          : spec.v_dc / 2.0;
    }
    FocController foc(cfg, spec.machine);

    const double pp = static_cast<double>(spec.machine.pole_pairs);
    const double half_bus = spec.v_dc / 2.0;
    const CarrierConfig carrier_cfg{1.0 / spec.t_pwm};

    RunReport report;
    report.modulator = modulator.name();
    report.config_echo = resolved_run_config_json(spec, modulator, cfg.v_limit, control_dt);

    const auto decim = static_cast<std::size_t>(spec.trace_decimation);
    const std::size_t n_decim = (n_steps + decim - 1) / decim;
    const std::size_t n_ctrl = control_steps > 0 ? (n_steps + control_steps - 1) / control_steps : 0;

    Recorder rec_ia("ia", dt, n_steps), rec_ib("ib", dt, n_steps), rec_ic("ic", dt, n_steps);
    const double ref_dt = carrier_based ? control_dt : dt;
    const std::size_t ref_n = carrier_based ? n_ctrl : n_steps;
    Recorder rec_ira("ia_ref", ref_dt, ref_n), rec_irb("ib_ref", ref_dt, ref_n),
        rec_irc("ic_ref", ref_dt, ref_n);
    Recorder rec_w("omega_m", dt * static_cast<double>(decim), n_decim);
    Recorder rec_te("Te", dt * static_cast<double>(decim), n_decim);
    Recorder rec_vd("vd_ref", dt * static_cast<double>(decim), n_decim);
    Recorder rec_vq("vq_ref", dt * static_cast<double>(decim), n_decim);
    Recorder rec_ma("va_ref", control_dt, n_ctrl), rec_mb("vb_ref", control_dt, n_ctrl),
        rec_mc("vc_ref", control_dt, n_ctrl);
    GateTrace gates;
    gates.dt = dt;
    gates.a.reserve(n_steps);
    gates.b.reserve(n_steps);
    gates.c.reserve(n_steps);

    SpmsmState state;
    SwitchState sw_prev;
    AbcVector mod_refs{-1.0, -1.0, -1.0};
    AbcVector i_abc_ref{};
    DqVector v_dq_cmd{};

    double sum_id = 0.0, sum_iq = 0.0;
    std::size_t avg_count = 0;

    std::size_t overmod_consecutive = 0;
    std::size_t overmod_total = 0;
    bool overmod_warned = false;

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double omega_e = pp * state.omega_m;
        const double cth = std::cos(state.theta_e);
        const double sth = std::sin(state.theta_e);

        // Measured phase currents reconstructed from the dq state.
        const double i_alpha = cth * state.i_d - sth * state.i_q;
        const double i_beta = sth * state.i_d + cth * state.i_q;
        const AbcVector i_abc{i_alpha, -0.5 * i_alpha + kSqrt3Over2 * i_beta,
                              -0.5 * i_alpha - kSqrt3Over2 * i_beta};

        if (k % control_steps == 0) {
            const double omega_ref = spec.speed_schedule.value_at(t);
            const double i_q_ref = foc.speed_loop_step(omega_ref, state.omega_m, control_dt);

            DqVector i_meas{state.i_d, state.i_q};
            if (carrier_based && avg_count > 0) {
                i_meas = DqVector{sum_id / static_cast<double>(avg_count),
                                  sum_iq / static_cast<double>(avg_count)};
            }
            sum_id = sum_iq = 0.0;
            avg_count = 0;

            v_dq_cmd = foc.current_loop_step(DqVector{cfg.i_d_ref, i_q_ref}, i_meas, omega_e,
                                             control_dt);

            // Current reference in phase coordinates (drives HCC, recorded
            // for all methods).
            const double ir_alpha = cth * cfg.i_d_ref - sth * i_q_ref;
            const double ir_beta = sth * cfg.i_d_ref + cth * i_q_ref;
            i_abc_ref = AbcVector{ir_alpha, -0.5 * ir_alpha + kSqrt3Over2 * ir_beta,
                                  -0.5 * ir_alpha - kSqrt3Over2 * ir_beta};

            if (carrier_based) {
                const double v_alpha = cth * v_dq_cmd.d - sth * v_dq_cmd.q;
                const double v_beta = sth * v_dq_cmd.d + cth * v_dq_cmd.q;
                const AlphaBetaVector v_ab{v_alpha, v_beta, 0.0};

                bool overmod_this_period = false;
                if (modulator.kind == ModulatorKind::Svpwm) {
                    AlphaBetaVector v = v_ab;
                    SvpwmTimes times;
                    try {
                        times = svpwm_times(v, spec.v_dc, spec.t_pwm, svpwm_sector(v));
                    } catch (const OverModulationError& e) {
                        overmod_this_period = true;
                        const double shrink = e.rescale * (1.0 - 1e-12);
                        v.alpha *= shrink;
                        v.beta *= shrink;
                        times = svpwm_times(v, spec.v_dc, spec.t_pwm, svpwm_sector(v));
                    }
                    const PhaseDuties d = svpwm_duties(times);
                    mod_refs = AbcVector{2.0 * d.a - 1.0, 2.0 * d.b - 1.0, 2.0 * d.c - 1.0};
                } else {
                    const AbcVector v_abc_ref = inverse_clarke(v_ab);
                    mod_refs = AbcVector{v_abc_ref.a / half_bus, v_abc_ref.b / half_bus,
                                         v_abc_ref.c / half_bus};
                    if (modulator.kind == ModulatorKind::Dpwm) {
                        const double omega_t = std::atan2(v_beta, v_alpha);
                        mod_refs = dpwm_modified_refs(mod_refs, omega_t, modulator.dpwm);
                    }
                }

                if (overmod_this_period) {
                    ++overmod_total;
                    ++overmod_consecutive;
                    if (!overmod_warned &&
                        static_cast<double>(overmod_consecutive) * control_dt > 10e-3) {
                        std::ostringstream msg;
                        msg << "over-modulation sustained > 10 ms around t = " << t << " s";
                        report.warnings.push_back(msg.str());
                        overmod_warned = true;
                    }
                } else {
                    overmod_consecutive = 0;
                    overmod_warned = false;
                }

                rec_ma.push(mod_refs.a);
                rec_mb.push(mod_refs.b);
                rec_mc.push(mod_refs.c);
                rec_ira.push(i_abc_ref.a);
                rec_irb.push(i_abc_ref.b);
                rec_irc.push(i_abc_ref.c);
            }
        }

        SwitchState sw;
        if (carrier_based) {
            sw = spwm_step(mod_refs, triangular_carrier(t, carrier_cfg));
        } else {
            sw = hysteresis_step(i_abc_ref, i_abc, modulator.hysteresis.band, sw_prev);
            rec_ira.push(i_abc_ref.a);
            rec_irb.push(i_abc_ref.b);
            rec_irc.push(i_abc_ref.c);
        }
        sw_prev = sw;

        rec_ia.push(i_abc.a);
        rec_ib.push(i_abc.b);
        rec_ic.push(i_abc.c);
        gates.a.push_back(sw.a ? 1 : 0);
        gates.b.push_back(sw.b ? 1 : 0);
        gates.c.push_back(sw.c ? 1 : 0);
        if (k % decim == 0) {
            rec_w.push(state.omega_m);
            rec_te.push(spmsm_torque(DqVector{state.i_d, state.i_q}, spec.machine));
            rec_vd.push(v_dq_cmd.d);
            rec_vq.push(v_dq_cmd.q);
        }

        // Plant update: inverter voltage and load torque held over the step.
        const AbcVector v_abc = vsi_phase_voltages(sw, spec.v_dc);
        const double v_alpha = kClarkeGain * (v_abc.a - 0.5 * v_abc.b - 0.5 * v_abc.c);
        const double v_beta = kClarkeGain * kSqrt3Over2 * (v_abc.b - v_abc.c);
        const DqVector v_dq_plant{cth * v_alpha + sth * v_beta, -sth * v_alpha + cth * v_beta};
        const double t_load = spec.load_schedule.value_at(t);

        const auto deriv = [&](const std::array<double, 4>& x) {
            const SpmsmState s{x[0], x[1], x[2], x[3]};
            const SpmsmRates r = spmsm_derivatives(s, v_dq_plant, t_load, spec.machine);
            return std::array<double, 4>{r.i_d, r.i_q, r.omega_m, r.theta_e};
        };

        std::array<double, 4> x{state.i_d, state.i_q, state.omega_m, state.theta_e};
        try {
            x = rk4_step(deriv, x, dt);
        } catch (const DivergedError& e) {
            static const char* names[] = {"i_d", "i_q", "omega_m", "theta_e"};
            std::ostringstream msg;
            msg << "simulation diverged at t = " << t << " s in "
                << (e.component < 4 ? names[e.component] : "state") << "; last state: i_d = "
                << state.i_d << ", i_q = " << state.i_q << ", omega_m = " << state.omega_m
                << ", theta_e = " << state.theta_e;
            throw DivergedError(msg.str(), e.component, t);
        }
        state.i_d = x[0];
        state.i_q = x[1];
        state.omega_m = x[2];
        state.theta_e = std::fmod(x[3], 2.0 * kPi);
        if (state.theta_e < 0.0) {
            state.theta_e += 2.0 * kPi;
        }

        sum_id += state.i_d;
        sum_iq += state.i_q;
        ++avg_count;
    }

    report.traces.i_a = std::move(rec_ia.series);
    report.traces.i_b = std::move(rec_ib.series);
    report.traces.i_c = std::move(rec_ic.series);
    report.traces.i_ref_a = std::move(rec_ira.series);
    report.traces.i_ref_b = std::move(rec_irb.series);
    report.traces.i_ref_c = std::move(rec_irc.series);
    report.traces.omega_m = std::move(rec_w.series);
    report.traces.torque_e = std::move(rec_te.series);
    report.traces.v_d_ref = std::move(rec_vd.series);
    report.traces.v_q_ref = std::move(rec_vq.series);
    report.traces.mod_ref_a = std::move(rec_ma.series);
    report.traces.mod_ref_b = std::move(rec_mb.series);
    report.traces.mod_ref_c = std::move(rec_mc.series);
    report.traces.gates = std::move(gates);

    // Speed metrics, one entry per scheduled step.
    for (std::size_t i = 0; i < spec.speed_schedule.points.size(); ++i) {
        const double t_step = spec.speed_schedule.points[i].first;
        const double ref_after = spec.speed_schedule.points[i].second;
        const double ref_before = i == 0 ? 0.0 : spec.speed_schedule.points[i - 1].second;
        const double t_next = (i + 1 < spec.speed_schedule.points.size())
                                  ? spec.speed_schedule.points[i + 1].first
                                  : spec.duration;
        if (ref_after == ref_before) {
            report.metrics.push_back(SpeedMetrics{});
            continue;
        }
        report.metrics.push_back(
            metrics_for_step(report.traces.omega_m, ref_before, ref_after, t_step, t_next));
    }

    // Per-window THD on phase a.
    for (const auto& [t_end, n_cycles] : spec.thd_windows) {
        double f1;
        if (spec.thd.f1_override_hz > 0.0) {
            f1 = spec.thd.f1_override_hz;
        } else {
            // Mean speed over the approach to the window end sets the
            // electrical fundamental.
            const double t_lo = std::max(report.traces.omega_m.t0, t_end - 0.05);
            const TimeSeries w = extract_window(report.traces.omega_m, t_lo, t_end);
            double acc = 0.0;
            for (double v : w.samples) acc += v;
            const double mean_speed = acc / static_cast<double>(w.samples.size());
            f1 = fundamental_frequency(std::max(0.0, mean_speed), spec.machine.pole_pairs);
            if (!(f1 > 0.0)) {
                throw DomainError("run_scenario: rotor at standstill, cannot derive the THD "
                                  "fundamental; set thd.f1_hz explicitly");
            }
        }
        const auto n = std::llround(static_cast<double>(n_cycles) / (f1 * dt));
        if (n < 2) {
            throw RangeError("run_scenario: thd window too short");
        }
        const double t_start = t_end - static_cast<double>(n) * dt;
        const TimeSeries window = extract_window(report.traces.i_a, t_start, t_end);
        const double f1_exact = static_cast<double>(n_cycles) /
                                (static_cast<double>(window.samples.size()) * window.dt);
        Spectrum spectrum = dft(window);
        report.thd_per_window.push_back(thd(spectrum, f1_exact, spec.thd.n_harmonics));
        report.thd_f1_hz.push_back(f1_exact);
        report.spectra.push_back(std::move(spectrum));
    }

    return report;
}

namespace {

ComparisonRow row_from_report(const RunReport& r) {
    ComparisonRow row;
    row.modulator = r.modulator;
    row.ok = true;
    row.thd_per_window = r.thd_per_window;
    row.thd_f1_hz = r.thd_f1_hz;
    row.metrics = r.metrics;
    return row;
}

void assign_thd_ranks(std::vector<ComparisonRow>& rows) {
    std::vector<std::size_t> ok_idx;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].ok) ok_idx.push_back(i);
    }
    std::stable_sort(ok_idx.begin(), ok_idx.end(), [&rows](std::size_t a, std::size_t b) {
        const auto mean = [&rows](std::size_t i) {
            const auto& v = rows[i].thd_per_window;
            if (v.empty()) return std::numeric_limits<double>::max();
            double acc = 0.0;
            for (double x : v) acc += x;
            return acc / static_cast<double>(v.size());
        };
        return mean(a) < mean(b);
    });
    int rank = 1;
    for (std::size_t i : ok_idx) {
        rows[i].thd_rank = rank++;
    }
}

}  // namespace

ComparisonReport compare_modulators(const ScenarioSpec& spec,
                                    const std::vector<ModulatorConfig>& modulators) {
    if (modulators.size() < 2) {
        throw ConfigError("compare_modulators: need at least 2 modulators");
    }
    spec.validate();

    ComparisonReport out;
    out.thd_windows = spec.thd_windows;
    for (const auto& p : spec.speed_schedule.points) {
        out.speed_step_times.push_back(p.first);
    }

    std::vector<std::future<RunReport>> futures;
    futures.reserve(modulators.size());
    for (const auto& mod : modulators) {
        futures.push_back(std::async(std::launch::async,
                                     [&spec, mod]() { return run_scenario(spec, mod); }));
    }

    for (std::size_t i = 0; i < modulators.size(); ++i) {
        try {
            RunReport r = futures[i].get();
            out.rows.push_back(row_from_report(r));
            out.reports.emplace_back(std::move(r));
        } catch (const std::exception& e) {
            ComparisonRow row;
            row.modulator = modulators[i].name();
            row.ok = false;
            row.error = e.what();
            out.rows.push_back(std::move(row));
            out.reports.emplace_back(std::nullopt);
        }
    }
    assign_thd_ranks(out.rows);
    return out;
}

ComparisonReport wrap_single_run(const ScenarioSpec& spec, RunReport report) {
    ComparisonReport out;
    out.thd_windows = spec.thd_windows;
    for (const auto& p : spec.speed_schedule.points) {
        out.speed_step_times.push_back(p.first);
    }
    out.rows.push_back(row_from_report(report));
    out.reports.emplace_back(std::move(report));
    assign_thd_ranks(out.rows);
    return out;
}

ScenarioSpec default_scenario() {
    ScenarioSpec spec;
    spec.duration = 2.0;
    spec.speed_schedule.points = {{0.0, 100.0}, {0.3, 300.0}};
    spec.load_schedule.points = {{0.0, 5.0}, {1.0, 8.0}};
    spec.thd_windows = {{0.8, 10}, {1.9, 10}};
    spec.machine = SpmsmParams{};  // table constants are the defaults
    spec.v_dc = 400.0;
    const FocConfig gains = compute_default_gains(spec.machine, 1000.0, 50.0, spec.t_pwm);
    spec.control.speed_pi = gains.speed_pi;
    spec.control.id_pi = gains.id_pi;
    spec.control.iq_pi = gains.iq_pi;
    spec.control.i_d_ref = 0.0;
    spec.control.i_q_limit = 20.0;
    spec.control.decoupling_enabled = true;
    spec.dt = 1e-6;
    spec.t_pwm = 100e-6;
    spec.trace_decimation = 100;
    return spec;
}

std::vector<ModulatorConfig> default_modulators() {
    std::vector<ModulatorConfig> mods(4);
    mods[0].kind = ModulatorKind::Hcc;
    mods[1].kind = ModulatorKind::Dpwm;
    mods[2].kind = ModulatorKind::Spwm;
    mods[3].kind = ModulatorKind::Svpwm;
    return mods;
}

namespace {

std::string fmt_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt_num(*v) : std::string();
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string comparison_csv(const ComparisonReport& report) {
    std::ostringstream out;
    out << "modulator,status,thd_rank";
    for (const auto& w : report.thd_windows) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), ",thd_pct_t%.6g,f1_hz_t%.6g", w.first, w.first);
        out << buf;
    }
    for (double t : report.speed_step_times) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), ",rise_s_t%.6g,settle_s_t%.6g,overshoot_t%.6g,sse_t%.6g",
                      t, t, t, t);
        out << buf;
    }
    out << ",error\n";

    for (const auto& row : report.rows) {
        out << row.modulator << ',' << (row.ok ? "ok" : "failed") << ','
            << (row.thd_rank > 0 ? std::to_string(row.thd_rank) : std::string());
        for (std::size_t w = 0; w < report.thd_windows.size(); ++w) {
            out << ',';
            if (row.ok && w < row.thd_per_window.size()) {
                out << fmt_num(100.0 * row.thd_per_window[w]);
            }
            out << ',';
            if (row.ok && w < row.thd_f1_hz.size()) {
                out << fmt_num(row.thd_f1_hz[w]);
            }
        }
        for (std::size_t s = 0; s < report.speed_step_times.size(); ++s) {
            const SpeedMetrics m = (row.ok && s < row.metrics.size()) ? row.metrics[s]
                                                                      : SpeedMetrics{};
            out << ',' << fmt_opt(m.rise_time) << ',' << fmt_opt(m.settling_time) << ','
                << fmt_opt(m.overshoot) << ',' << fmt_opt(m.steady_state_error);
        }
        out << ',' << (row.error.empty() ? std::string() : csv_quote(row.error)) << "\n";
    }
    return out.str();
}

namespace {

void write_gates_csv(const GateTrace& gates, double t_max, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw SimError("cannot open " + path + " for writing");
    f << "t,sa,sb,sc\n";
    char buf[64];
    const auto n = std::min<std::size_t>(
        gates.a.size(), gates.dt > 0.0
                            ? static_cast<std::size_t>(std::llround(t_max / gates.dt))
                            : 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%d,%d,%d\n",
                      static_cast<double>(i) * gates.dt, gates.a[i], gates.b[i], gates.c[i]);
        f << buf;
    }
}

void write_refs_csv(const TimeSeries& a, const TimeSeries& b, const TimeSeries& c, double t_max,
                    const std::string& header, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw SimError("cannot open " + path + " for writing");
    f << header << "\n";
    char buf[128];
    std::size_t n = a.samples.size();
    if (a.dt > 0.0) {
        n = std::min(n, static_cast<std::size_t>(std::llround(t_max / a.dt)));
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.9g,%.9g,%.9g\n", a.time_at(i), a.samples[i],
                      b.samples[i], c.samples[i]);
        f << buf;
    }
}

}  // namespace

void write_comparison_outputs(const std::string& dir, const ComparisonReport& report) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream f(dir + "/report.csv");
        if (!f) throw SimError("cannot open " + dir + "/report.csv for writing");
        f << comparison_csv(report);
    }

    std::vector<std::string> echoes;
    for (std::size_t i = 0; i < report.reports.size(); ++i) {
        if (!report.reports[i]) continue;
        const RunReport& r = *report.reports[i];
        const std::string tag = r.modulator;
        if (!r.spectra.empty()) {
            write_csv(r.spectra.back(), dir + "/spectrum_" + tag + ".csv");
        }
        write_csv(r.traces.omega_m, dir + "/speed_" + tag + ".csv");
        write_gates_csv(r.traces.gates, 5e-3, dir + "/gates_" + tag + ".csv");
        if (r.modulator == "hcc") {
            write_refs_csv(r.traces.i_ref_a, r.traces.i_ref_b, r.traces.i_ref_c, 5e-3,
                           "t,ia_ref,ib_ref,ic_ref", dir + "/refs_" + tag + ".csv");
        } else {
            write_refs_csv(r.traces.mod_ref_a, r.traces.mod_ref_b, r.traces.mod_ref_c, 5e-3,
                           "t,va_ref,vb_ref,vc_ref", dir + "/refs_" + tag + ".csv");
        }
        echoes.push_back(r.config_echo);
    }
    write_config_echoes(dir + "/config_echo.json", echoes);
}

}  // namespace focsim
