#include "focsim/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace focsim {

namespace {

using nlohmann::json;

json default_config_json() {
    return json{
        {"duration", 2.0},
        {"speed_schedule", json::array({json::array({0.0, 100.0}), json::array({0.3, 300.0})})},
        {"load_schedule", json::array({json::array({0.0, 5.0}), json::array({1.0, 8.0})})},
        {"thd_windows", json::array({json::array({0.8, 10}), json::array({1.9, 10})})},
        {"machine",
         {{"r_s", 0.675},
          {"L", 0.000835},
          {"pole_pairs", 4},
          {"lambda_m", 0.11},
          {"J", 0.01},
          {"B", 0.001}}},
        {"inverter", {{"v_dc", 400.0}}},
        {"control",
         {{"i_d_ref", 0.0},
          {"i_q_limit", 20.0},
          {"f_cc_hz", 1000.0},
          {"f_sc_hz", 50.0},
          {"decoupling", true},
          {"v_limit", 0.0},
          {"control_period", 0.0}}},
        {"sim", {{"dt", 1e-6}, {"t_pwm", 1e-4}, {"trace_decimation", 100}}},
        {"modulators",
         {{"hysteresis", {{"band", 3.5}}}, {"dpwm", {{"delta", 0.0}, {"phi", 0.0}}}}},
        {"thd", {{"f1_hz", 0.0}, {"n_harmonics", 200}}},
        {"induction",
         {{"R", 1.0},
          {"R_r", 0.6},
          {"L_ls", 0.004},
          {"L_lr", 0.004},
          {"L_m", 0.12},
          {"pole_pairs", 2},
          {"V_s", 230.0},
          {"f_hz", 50.0},
          {"points", 100},
          {"s_min", 0.01},
          {"s_max", 1.0}}},
    };
}

json parse_scalar(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception&) {
        return json(text);  // bare string value
    }
}

void apply_override(json& doc, const std::string& entry) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set expects key.path=value, got '" + entry + "'");
    }
    std::string path = "/" + entry.substr(0, eq);
    for (auto& c : path) {
        if (c == '.') c = '/';
    }
    try {
        doc[json::json_pointer(path)] = parse_scalar(entry.substr(eq + 1));
    } catch (const json::exception& e) {
        throw ConfigError("--set '" + entry + "': " + e.what());
    }
}

StepSchedule schedule_from_json(const json& arr, const char* what) {
    StepSchedule s;
    if (!arr.is_array()) {
        throw ConfigError(std::string(what) + " must be an array of [t, value] pairs");
    }
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2) {
            throw ConfigError(std::string(what) + " entries must be [t, value] pairs");
        }
        s.points.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return s;
}

FileConfig build_config(const json& doc) {
    FileConfig cfg;
    ScenarioSpec& spec = cfg.scenario;
    try {
        spec.duration = doc.at("duration").get<double>();
        spec.speed_schedule = schedule_from_json(doc.at("speed_schedule"), "speed_schedule");
        spec.load_schedule = schedule_from_json(doc.at("load_schedule"), "load_schedule");
        spec.thd_windows.clear();
        for (const auto& w : doc.at("thd_windows")) {
            if (!w.is_array() || w.size() != 2) {
                throw ConfigError("thd_windows entries must be [t_end, n_cycles] pairs");
            }
            spec.thd_windows.emplace_back(w[0].get<double>(), w[1].get<int>());
        }

        const json& m = doc.at("machine");
        spec.machine.r_s = m.at("r_s").get<double>();
        spec.machine.L = m.at("L").get<double>();
        spec.machine.pole_pairs = m.at("pole_pairs").get<int>();
        spec.machine.lambda_m = m.at("lambda_m").get<double>();
        spec.machine.J = m.at("J").get<double>();
        spec.machine.B = m.at("B").get<double>();

        spec.v_dc = doc.at("inverter").at("v_dc").get<double>();

        const json& sim = doc.at("sim");
        spec.dt = sim.at("dt").get<double>();
        spec.t_pwm = sim.at("t_pwm").get<double>();
        spec.trace_decimation = sim.at("trace_decimation").get<int>();

        const json& c = doc.at("control");
        spec.control.i_d_ref = c.at("i_d_ref").get<double>();
        spec.control.i_q_limit = c.at("i_q_limit").get<double>();
        spec.control.decoupling_enabled = c.at("decoupling").get<bool>();
        spec.control.v_limit = c.at("v_limit").get<double>();
        spec.control.control_period = c.at("control_period").get<double>();
        cfg.f_cc_hz = c.at("f_cc_hz").get<double>();
        cfg.f_sc_hz = c.at("f_sc_hz").get<double>();
        cfg.explicit_gains = c.contains("speed_pi") || c.contains("id_pi") || c.contains("iq_pi");
        if (cfg.explicit_gains) {
            const auto gains = [&c](const char* key) {
                const json& g = c.at(key);
                return PiGains{g.at("k_p").get<double>(), g.at("k_i").get<double>()};
            };
            spec.control.speed_pi = gains("speed_pi");
            spec.control.id_pi = gains("id_pi");
            spec.control.iq_pi = gains("iq_pi");
        } else {
            const FocConfig derived =
                compute_default_gains(spec.machine, cfg.f_cc_hz, cfg.f_sc_hz, spec.t_pwm);
            spec.control.speed_pi = derived.speed_pi;
            spec.control.id_pi = derived.id_pi;
            spec.control.iq_pi = derived.iq_pi;
        }

        const json& thd = doc.at("thd");
        spec.thd.f1_override_hz = thd.at("f1_hz").get<double>();
        spec.thd.n_harmonics = thd.at("n_harmonics").get<int>();

        const json& mods = doc.at("modulators");
        cfg.hysteresis.band = mods.at("hysteresis").at("band").get<double>();
        cfg.dpwm.delta = mods.at("dpwm").at("delta").get<double>();
        cfg.dpwm.phi = mods.at("dpwm").at("phi").get<double>();

        const json& im = doc.at("induction");
        cfg.imcurve.params.R = im.at("R").get<double>();
        cfg.imcurve.params.R_r = im.at("R_r").get<double>();
        cfg.imcurve.params.L_ls = im.at("L_ls").get<double>();
        cfg.imcurve.params.L_lr = im.at("L_lr").get<double>();
        cfg.imcurve.params.L_m = im.at("L_m").get<double>();
        cfg.imcurve.params.pole_pairs = im.at("pole_pairs").get<int>();
        cfg.imcurve.v_s = im.at("V_s").get<double>();
        cfg.imcurve.f_hz = im.at("f_hz").get<double>();
        cfg.imcurve.points = im.at("points").get<int>();
        cfg.imcurve.s_min = im.at("s_min").get<double>();
        cfg.imcurve.s_max = im.at("s_max").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

json scenario_to_json(const ScenarioSpec& spec) {
    json sched_speed = json::array();
    for (const auto& p : spec.speed_schedule.points) {
        sched_speed.push_back(json::array({p.first, p.second}));
    }
    json sched_load = json::array();
    for (const auto& p : spec.load_schedule.points) {
        sched_load.push_back(json::array({p.first, p.second}));
    }
    json windows = json::array();
    for (const auto& w : spec.thd_windows) {
        windows.push_back(json::array({w.first, w.second}));
    }
    return json{
        {"duration", spec.duration},
        {"speed_schedule", sched_speed},
        {"load_schedule", sched_load},
        {"thd_windows", windows},
        {"machine",
         {{"r_s", spec.machine.r_s},
          {"L", spec.machine.L},
          {"pole_pairs", spec.machine.pole_pairs},
          {"lambda_m", spec.machine.lambda_m},
          {"J", spec.machine.J},
          {"B", spec.machine.B}}},
        {"inverter", {{"v_dc", spec.v_dc}}},
        {"control",
         {{"i_d_ref", spec.control.i_d_ref},
          {"i_q_limit", spec.control.i_q_limit},
          {"decoupling", spec.control.decoupling_enabled},
          {"v_limit", spec.control.v_limit},
          {"control_period", spec.control.control_period},
          {"speed_pi", {{"k_p", spec.control.speed_pi.k_p}, {"k_i", spec.control.speed_pi.k_i}}},
          {"id_pi", {{"k_p", spec.control.id_pi.k_p}, {"k_i", spec.control.id_pi.k_i}}},
          {"iq_pi", {{"k_p", spec.control.iq_pi.k_p}, {"k_i", spec.control.iq_pi.k_i}}}}},
        {"sim",
         {{"dt", spec.dt}, {"t_pwm", spec.t_pwm}, {"trace_decimation", spec.trace_decimation}}},
        {"thd", {{"f1_hz", spec.thd.f1_override_hz}, {"n_harmonics", spec.thd.n_harmonics}}},
    };
}

json modulator_to_json(const ModulatorConfig& mod) {
    json j{{"kind", mod.name()}};
    if (mod.kind == ModulatorKind::Hcc) {
        j["hysteresis"] = {{"band", mod.hysteresis.band}};
    }
    if (mod.kind == ModulatorKind::Dpwm) {
        j["dpwm"] = {{"delta", mod.dpwm.delta}, {"phi", mod.dpwm.phi}};
    }
    return j;
}

}  // namespace

FileConfig default_config() { return build_config(default_config_json()); }

FileConfig load_config(const std::string* file_path, const std::vector<std::string>& overrides) {
    json doc = default_config_json();
    if (file_path != nullptr) {
        std::ifstream f(*file_path);
        if (!f) {
            throw ConfigError("cannot open config file " + *file_path);
        }
        json user;
        try {
            user = json::parse(f);
        } catch (const json::exception& e) {
            throw ConfigError("config " + *file_path + ": " + e.what());
        }
        doc.merge_patch(user);
    }
    for (const auto& entry : overrides) {
        apply_override(doc, entry);
    }
    return build_config(doc);
}

ModulatorConfig make_modulator(const FileConfig& cfg, const std::string& name) {
    ModulatorConfig mod = ModulatorConfig::from_name(name);
    mod.hysteresis = cfg.hysteresis;
    mod.dpwm = cfg.dpwm;
    return mod;
}

std::string config_to_json_text(const FileConfig& cfg) {
    json doc = scenario_to_json(cfg.scenario);
    doc["control"]["f_cc_hz"] = cfg.f_cc_hz;
    doc["control"]["f_sc_hz"] = cfg.f_sc_hz;
    doc["control"]["gains_derived_from_bandwidths"] = !cfg.explicit_gains;
    doc["modulators"] = {{"hysteresis", {{"band", cfg.hysteresis.band}}},
                         {"dpwm", {{"delta", cfg.dpwm.delta}, {"phi", cfg.dpwm.phi}}}};
    doc["induction"] = {{"R", cfg.imcurve.params.R},
                        {"R_r", cfg.imcurve.params.R_r},
                        {"L_ls", cfg.imcurve.params.L_ls},
                        {"L_lr", cfg.imcurve.params.L_lr},
                        {"L_m", cfg.imcurve.params.L_m},
                        {"pole_pairs", cfg.imcurve.params.pole_pairs},
                        {"V_s", cfg.imcurve.v_s},
                        {"f_hz", cfg.imcurve.f_hz},
                        {"points", cfg.imcurve.points},
                        {"s_min", cfg.imcurve.s_min},
                        {"s_max", cfg.imcurve.s_max}};
    return doc.dump(2);
}

std::string resolved_run_config_json(const ScenarioSpec& spec, const ModulatorConfig& mod,
                                     double v_limit, double control_period) {
    json doc = scenario_to_json(spec);
    json m = modulator_to_json(mod);
    m["v_limit"] = v_limit;
    m["control_period"] = control_period;
    doc["modulator"] = m;
    return doc.dump(2);
}

void write_config_echoes(const std::string& path, const std::vector<std::string>& echoes) {
    json runs = json::array();
    for (const auto& e : echoes) {
        runs.push_back(json::parse(e));
    }
    std::ofstream f(path);
    if (!f) {
        throw SimError("cannot open " + path + " for writing");
    }
    f << json{{"runs", runs}}.dump(2) << "\n";
}

}  // namespace focsim
