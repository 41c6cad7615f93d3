#include "epr/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "epr/phasematch.hpp"

namespace epr {

namespace {

using Json = nlohmann::ordered_json;

void require_keys(const Json& obj, const std::vector<std::string>& known,
                  const std::string& where, std::vector<std::string>& issues) {
    for (const auto& item : obj.items()) {
        bool found = false;
        for (const auto& k : known) {
            if (item.key() == k) {
                found = true;
                break;
            }
        }
        if (!found) {
            issues.push_back(where + ": unknown field '" + item.key() + "'");
        }
    }
}

SourceConfig parse_source(const Json& j, const std::string& where,
                          std::vector<std::string>& issues) {
    SourceConfig s;
    require_keys(j, {"r", "pump_mw", "gain_per_sqrt_mw", "angle", "blocked"},
                 where, issues);
    if (j.contains("r")) s.r = j.at("r").get<double>();
    if (j.contains("pump_mw")) s.pump_mw = j.at("pump_mw").get<double>();
    if (j.contains("gain_per_sqrt_mw")) {
        s.gain_per_sqrt_mw = j.at("gain_per_sqrt_mw").get<double>();
    }
    if (j.contains("angle")) s.angle = j.at("angle").get<double>();
    if (j.contains("blocked")) s.blocked = j.at("blocked").get<bool>();
    return s;
}

DetectorModel parse_detector(const Json& j, const std::string& where,
                             std::vector<std::string>& issues) {
    DetectorModel d;
    require_keys(j,
                 {"quantum_efficiency", "lo_power_mw", "clearance_db",
                  "bandwidth_hz", "reference_lo_power_mw"},
                 where, issues);
    if (j.contains("quantum_efficiency")) {
        d.quantum_efficiency = j.at("quantum_efficiency").get<double>();
    }
    if (j.contains("lo_power_mw")) d.lo_power_mw = j.at("lo_power_mw").get<double>();
    if (j.contains("clearance_db")) d.clearance_db = j.at("clearance_db").get<double>();
    if (j.contains("bandwidth_hz")) d.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    if (j.contains("reference_lo_power_mw")) {
        d.reference_lo_power_mw = j.at("reference_lo_power_mw").get<double>();
    }
    return d;
}

Json source_to_json(const SourceConfig& s) {
    Json j = Json::object();
    if (s.r) j["r"] = *s.r;
    if (s.pump_mw) j["pump_mw"] = *s.pump_mw;
    if (s.gain_per_sqrt_mw) j["gain_per_sqrt_mw"] = *s.gain_per_sqrt_mw;
    j["angle"] = s.angle;
    j["blocked"] = s.blocked;
    return j;
}

Json detector_to_json(const DetectorModel& d) {
    Json j = Json::object();
    j["quantum_efficiency"] = d.quantum_efficiency;
    j["lo_power_mw"] = d.lo_power_mw;
    j["clearance_db"] = d.clearance_db;
    j["bandwidth_hz"] = d.bandwidth_hz;
    j["reference_lo_power_mw"] = d.reference_lo_power_mw;
    return j;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const std::exception& e) {
        throw ValidationError({std::string("JSON parse error: ") + e.what()});
    }
    std::vector<std::string> issues;
    require_keys(j,
                 {"sources", "hbs", "path_losses", "detectors", "analyzer",
                  "flags", "mc", "waveguide", "output"},
                 "config", issues);

    ScenarioConfig cfg;
    try {
        if (j.contains("sources")) {
            int i = 0;
            for (const auto& js : j.at("sources")) {
                cfg.sources.push_back(parse_source(
                    js, "sources[" + std::to_string(i) + "]", issues));
                ++i;
            }
        }
        if (j.contains("hbs")) {
            const auto& h = j.at("hbs");
            require_keys(h, {"transmittance", "relative_phase"}, "hbs", issues);
            if (h.contains("transmittance")) {
                cfg.hbs.transmittance = h.at("transmittance").get<double>();
            }
            if (h.contains("relative_phase")) {
                cfg.hbs.relative_phase = h.at("relative_phase").get<double>();
            }
        }
        if (j.contains("path_losses")) {
            const auto& p = j.at("path_losses");
            require_keys(p, {"a", "b"}, "path_losses", issues);
            if (p.contains("a")) {
                cfg.path_loss_a = p.at("a").get<std::vector<double>>();
            }
            if (p.contains("b")) {
                cfg.path_loss_b = p.at("b").get<std::vector<double>>();
            }
        }
        if (j.contains("detectors")) {
            int i = 0;
            for (const auto& jd : j.at("detectors")) {
                cfg.detectors.push_back(parse_detector(
                    jd, "detectors[" + std::to_string(i) + "]", issues));
                ++i;
            }
        }
        if (j.contains("analyzer")) {
            const auto& a = j.at("analyzer");
            require_keys(a,
                         {"start_hz", "stop_hz", "rbw_hz", "vbw_hz",
                          "n_averages", "seed", "jitter"},
                         "analyzer", issues);
            if (a.contains("start_hz")) cfg.analyzer.start_hz = a.at("start_hz").get<double>();
            if (a.contains("stop_hz")) cfg.analyzer.stop_hz = a.at("stop_hz").get<double>();
            if (a.contains("rbw_hz")) {
                cfg.analyzer.rbw_hz = a.at("rbw_hz").get<std::vector<double>>();
            }
            if (a.contains("vbw_hz")) cfg.analyzer.vbw_hz = a.at("vbw_hz").get<double>();
            if (a.contains("n_averages")) cfg.analyzer.n_averages = a.at("n_averages").get<int>();
            if (a.contains("seed")) cfg.analyzer.seed = a.at("seed").get<std::uint64_t>();
            if (a.contains("jitter")) cfg.analyzer.jitter = a.at("jitter").get<double>();
        }
        if (j.contains("flags")) {
            const auto& f = j.at("flags");
            require_keys(f, {"subtract_dark", "normalize", "run_mc", "lo_drift"},
                         "flags", issues);
            if (f.contains("subtract_dark")) cfg.flags.subtract_dark = f.at("subtract_dark").get<bool>();
            if (f.contains("normalize")) cfg.flags.normalize = f.at("normalize").get<bool>();
            if (f.contains("run_mc")) cfg.flags.run_mc = f.at("run_mc").get<bool>();
            if (f.contains("lo_drift")) cfg.flags.lo_drift = f.at("lo_drift").get<bool>();
        }
        if (j.contains("mc")) {
            const auto& m = j.at("mc");
            require_keys(m, {"n_samples"}, "mc", issues);
            if (m.contains("n_samples")) cfg.mc.n_samples = m.at("n_samples").get<long>();
        }
        if (j.contains("waveguide") && !j.at("waveguide").is_null()) {
            const auto& w = j.at("waveguide");
            require_keys(w,
                         {"length_m", "temperature_k", "pump_wavelength_m",
                          "degenerate_wavelength_m", "span_m", "n_points",
                          "poling_period_m"},
                         "waveguide", issues);
            WaveguideConfig wg;
            if (w.contains("length_m")) wg.length_m = w.at("length_m").get<double>();
            if (w.contains("temperature_k")) wg.temperature_k = w.at("temperature_k").get<double>();
            if (w.contains("pump_wavelength_m")) wg.pump_wavelength_m = w.at("pump_wavelength_m").get<double>();
            if (w.contains("degenerate_wavelength_m")) {
                wg.degenerate_wavelength_m = w.at("degenerate_wavelength_m").get<double>();
            }
            if (w.contains("span_m")) wg.span_m = w.at("span_m").get<double>();
            if (w.contains("n_points")) wg.n_points = w.at("n_points").get<int>();
            if (w.contains("poling_period_m") && !w.at("poling_period_m").is_null()) {
                wg.poling_period_m = w.at("poling_period_m").get<double>();
            }
            cfg.waveguide = wg;
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            require_keys(o, {"dir"}, "output", issues);
            if (o.contains("dir")) cfg.output_dir = o.at("dir").get<std::string>();
        }
    } catch (const Json::exception& e) {
        issues.push_back(std::string("JSON type error: ") + e.what());
    }

    auto more = validate_scenario(cfg);
    issues.insert(issues.end(), more.begin(), more.end());
    if (!issues.empty()) {
        throw ValidationError(std::move(issues));
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError({"cannot open config file: " + path});
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    Json j = Json::object();
    j["sources"] = Json::array();
    for (const auto& s : cfg.sources) j["sources"].push_back(source_to_json(s));
    j["hbs"] = {{"transmittance", cfg.hbs.transmittance},
                {"relative_phase", cfg.hbs.relative_phase}};
    j["path_losses"] = {{"a", cfg.path_loss_a}, {"b", cfg.path_loss_b}};
    j["detectors"] = Json::array();
    for (const auto& d : cfg.detectors) j["detectors"].push_back(detector_to_json(d));
    j["analyzer"] = {{"start_hz", cfg.analyzer.start_hz},
                     {"stop_hz", cfg.analyzer.stop_hz},
                     {"rbw_hz", cfg.analyzer.rbw_hz},
                     {"vbw_hz", cfg.analyzer.vbw_hz},
                     {"n_averages", cfg.analyzer.n_averages},
                     {"seed", cfg.analyzer.seed},
                     {"jitter", cfg.analyzer.jitter}};
    j["flags"] = {{"subtract_dark", cfg.flags.subtract_dark},
                  {"normalize", cfg.flags.normalize},
                  {"run_mc", cfg.flags.run_mc},
                  {"lo_drift", cfg.flags.lo_drift}};
    j["mc"] = {{"n_samples", cfg.mc.n_samples}};
    if (cfg.waveguide) {
        Json w = Json::object();
        w["length_m"] = cfg.waveguide->length_m;
        w["temperature_k"] = cfg.waveguide->temperature_k;
        w["pump_wavelength_m"] = cfg.waveguide->pump_wavelength_m;
        w["degenerate_wavelength_m"] = cfg.waveguide->degenerate_wavelength_m;
        w["span_m"] = cfg.waveguide->span_m;
        w["n_points"] = cfg.waveguide->n_points;
        if (cfg.waveguide->poling_period_m) {
            w["poling_period_m"] = *cfg.waveguide->poling_period_m;
        }
        j["waveguide"] = w;
    }
    j["output"] = {{"dir", cfg.output_dir}};
    return j.dump(2) + "\n";
}

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
    std::vector<std::string> issues;
    auto bad = [&](const std::string& msg) { issues.push_back(msg); };

    if (cfg.sources.size() != 2) {
        bad("sources: exactly two entries required, got " +
            std::to_string(cfg.sources.size()));
    }
    for (std::size_t i = 0; i < cfg.sources.size(); ++i) {
        const auto& s = cfg.sources[i];
        const std::string where = "sources[" + std::to_string(i) + "]";
        const bool pump_form = s.pump_mw.has_value() || s.gain_per_sqrt_mw.has_value();
        if (s.r.has_value() == pump_form) {
            bad(where + ": specify either r or pump_mw + gain_per_sqrt_mw");
        }
        if (pump_form && s.pump_mw.has_value() != s.gain_per_sqrt_mw.has_value()) {
            bad(where + ": pump_mw and gain_per_sqrt_mw must appear together");
        }
        if (s.r && !(*s.r >= 0.0 && *s.r <= kMaxSqueezing)) {
            bad(where + ".r: must be in [0, " + std::to_string(kMaxSqueezing) +
                "], got " + std::to_string(*s.r));
        }
        if (s.pump_mw && !(*s.pump_mw >= 0.0)) {
            bad(where + ".pump_mw: must be >= 0, got " + std::to_string(*s.pump_mw));
        }
        if (s.gain_per_sqrt_mw && !(*s.gain_per_sqrt_mw > 0.0)) {
            bad(where + ".gain_per_sqrt_mw: must be > 0, got " +
                std::to_string(*s.gain_per_sqrt_mw));
        }
        if (!std::isfinite(s.angle)) bad(where + ".angle: must be finite");
    }
    if (!(cfg.hbs.transmittance >= 0.0 && cfg.hbs.transmittance <= 1.0)) {
        bad("hbs.transmittance: must be in [0, 1], got " +
            std::to_string(cfg.hbs.transmittance));
    }
    if (!std::isfinite(cfg.hbs.relative_phase)) {
        bad("hbs.relative_phase: must be finite");
    }
    auto check_path = [&](const std::vector<double>& path, const char* name) {
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (!(path[i] >= 0.0 && path[i] <= 1.0)) {
                bad(std::string("path_losses.") + name + "[" +
                    std::to_string(i) + "]: transmittance must be in [0, 1], "
                    "got " + std::to_string(path[i]));
            }
        }
    };
    check_path(cfg.path_loss_a, "a");
    check_path(cfg.path_loss_b, "b");

    if (cfg.detectors.size() != 2) {
        bad("detectors: exactly two entries required, got " +
            std::to_string(cfg.detectors.size()));
    }
    for (std::size_t i = 0; i < cfg.detectors.size(); ++i) {
        const auto& d = cfg.detectors[i];
        const std::string where = "detectors[" + std::to_string(i) + "]";
        if (!(d.quantum_efficiency >= 0.0 && d.quantum_efficiency <= 1.0)) {
            bad(where + ".quantum_efficiency: must be in [0, 1], got " +
                std::to_string(d.quantum_efficiency));
        }
        if (!(d.lo_power_mw > 0.0)) bad(where + ".lo_power_mw: must be > 0");
        if (!(d.reference_lo_power_mw > 0.0)) {
            bad(where + ".reference_lo_power_mw: must be > 0");
        }
        if (!(d.bandwidth_hz > 0.0)) bad(where + ".bandwidth_hz: must be > 0");
        if (!std::isfinite(d.clearance_db)) {
            bad(where + ".clearance_db: must be finite");
        }
    }

    const auto& a = cfg.analyzer;
    if (!(a.start_hz >= 0.0)) bad("analyzer.start_hz: must be >= 0");
    if (!(a.stop_hz > a.start_hz)) {
        bad("analyzer.stop_hz: must exceed start_hz");
    }
    if (a.rbw_hz.empty()) bad("analyzer.rbw_hz: at least one RBW required");
    for (std::size_t i = 0; i < a.rbw_hz.size(); ++i) {
        if (!(a.rbw_hz[i] > 0.0)) {
            bad("analyzer.rbw_hz[" + std::to_string(i) + "]: must be > 0");
        } else if (a.rbw_hz[i] > a.stop_hz - a.start_hz) {
            bad("analyzer.rbw_hz[" + std::to_string(i) +
                "]: exceeds the span width");
        }
    }
    if (!(a.vbw_hz > 0.0)) bad("analyzer.vbw_hz: must be > 0");
    if (a.n_averages < 1) bad("analyzer.n_averages: must be >= 1");
    if (!(a.jitter >= 0.0)) bad("analyzer.jitter: must be >= 0");

    if (cfg.mc.n_samples < 2) bad("mc.n_samples: must be >= 2");

    if (cfg.waveguide) {
        const auto& w = *cfg.waveguide;
        if (!(w.length_m > 0.0)) bad("waveguide.length_m: must be > 0");
        if (!(w.temperature_k >= kMinTemperatureK &&
              w.temperature_k <= kMaxTemperatureK)) {
            bad("waveguide.temperature_k: must be in [273, 473]");
        }
        if (!(w.pump_wavelength_m > 0.0)) {
            bad("waveguide.pump_wavelength_m: must be > 0");
        }
        if (!(w.degenerate_wavelength_m > w.pump_wavelength_m)) {
            bad("waveguide.degenerate_wavelength_m: must exceed the pump "
                "wavelength");
        }
        if (!(w.span_m > 0.0)) bad("waveguide.span_m: must be > 0");
        if (w.n_points < 101) bad("waveguide.n_points: must be >= 101");
        if (w.poling_period_m && !(*w.poling_period_m > 0.0)) {
            bad("waveguide.poling_period_m: must be > 0");
        }
    }
    if (cfg.output_dir.empty()) bad("output.dir: must not be empty");
    return issues;
}

double source_squeezing_r(const SourceConfig& source) {
    if (source.r) return *source.r;
    if (source.pump_mw && source.gain_per_sqrt_mw) {
        return pump_to_squeezing(*source.pump_mw, *source.gain_per_sqrt_mw).r;
    }
    throw InvalidArgument("source: neither r nor pump mapping configured");
}

GaussianState build_output_state(const ScenarioConfig& cfg,
                                 bool include_detector_qe) {
    if (cfg.sources.size() != 2 || cfg.detectors.size() != 2) {
        throw InvalidArgument("build_output_state: config must carry two "
                              "sources and two detectors");
    }
    GaussianState state = GaussianState::vacuum(2);
    for (int i = 0; i < 2; ++i) {
        const auto& src = cfg.sources[i];
        if (src.blocked) continue;
        const double r = source_squeezing_r(src);
        if (r > 0.0) {
            state = apply_squeezer(state, i, SqueezerSpec(r, src.angle));
        }
    }
    if (cfg.hbs.relative_phase != 0.0) {
        state = apply_phase_shift(state, 1, cfg.hbs.relative_phase);
    }
    state = apply_beamsplitter(state, 0, 1,
                               BeamSplitterSpec(cfg.hbs.transmittance));
    for (double eta : cfg.path_loss_a) {
        state = apply_loss(state, 0, LossChannel(eta));
    }
    for (double eta : cfg.path_loss_b) {
        state = apply_loss(state, 1, LossChannel(eta));
    }
    if (include_detector_qe) {
        state = apply_loss(state, 0,
                           LossChannel(cfg.detectors[0].quantum_efficiency));
        state = apply_loss(state, 1,
                           LossChannel(cfg.detectors[1].quantum_efficiency));
    }
    return state;
}

}  // namespace epr
