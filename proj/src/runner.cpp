#include "epr/runner.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "epr/criterion.hpp"
#include "epr/detection.hpp"
#include "epr/mc_oracle.hpp"
#include "epr/phasematch.hpp"
#include "epr/rng.hpp"
#include "epr/trace_io.hpp"

namespace epr {

namespace {

// Stream ids for everything that draws randomness, so that adding a trace
// never reshuffles the others.
enum StreamId : std::uint64_t {
    kStreamVacuum = 1,
    kStreamSqueezed = 2,
    kStreamAntiSqueezed = 3,
    kStreamDark = 4,
    kStreamMeasX = 5,
    kStreamVacX = 6,
    kStreamMeasP = 7,
    kStreamVacP = 8,
    kStreamLoDrift = 9,
    kStreamMc = 10,
};

std::uint64_t trace_seed(const ScenarioConfig& cfg, std::uint64_t stream,
                         std::uint64_t salt = 0) {
    return Rng(cfg.analyzer.seed).stream(stream + 100 * salt).next_u64();
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ValidationError({"output directory not writable: " +
                               dir.string() + " (" + ec.message() + ")"});
    }
}

void check_valid(const ScenarioConfig& cfg) {
    auto issues = validate_scenario(cfg);
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// Optional slow LO drift, a single per-trace gain factor within +-0.1 dB.
double lo_drift_factor(const ScenarioConfig& cfg, std::uint64_t salt) {
    if (!cfg.flags.lo_drift) return 1.0;
    Rng rng(trace_seed(cfg, kStreamLoDrift, salt));
    const double db = 0.2 * rng.next_uniform() - 0.1;
    return to_linear(db);
}

SpectrumTrace sweep(const ScenarioConfig& cfg, double rbw,
                    const std::function<double(double)>& model,
                    std::uint64_t stream, std::uint64_t salt) {
    return spectrum_analyzer_trace(model, cfg.analyzer.start_hz,
                                   cfg.analyzer.stop_hz, rbw,
                                   cfg.analyzer.vbw_hz,
                                   cfg.analyzer.n_averages,
                                   trace_seed(cfg, stream, salt),
                                   cfg.analyzer.jitter);
}

double mean_db(const SpectrumTrace& t) {
    double sum = 0.0;
    for (double v : t.power_db) sum += v;
    return sum / static_cast<double>(t.power_db.size());
}

std::string rbw_tag(double rbw_hz) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", rbw_hz);
    std::string tag = buf;
    for (auto& c : tag) {
        if (c == '.') c = 'p';
        if (c == '+') c = '_';
    }
    return "rbw" + tag;
}

}  // namespace

void RunSummary::add(const std::string& key, double value) {
    add(key, fmt(value));
}

std::string RunSummary::text() const {
    std::string out;
    for (const auto& [k, v] : entries) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

std::string RunSummary::get(const std::string& key) const {
    for (const auto& [k, v] : entries) {
        if (k == key) return v;
    }
    return {};
}

RunSummary run_squeeze_spectrum(const ScenarioConfig& cfg,
                                const std::filesystem::path& out_dir) {
    check_valid(cfg);
    const int n_blocked = (cfg.sources[0].blocked ? 1 : 0) +
                          (cfg.sources[1].blocked ? 1 : 0);
    if (n_blocked != 1) {
        throw ValidationError({"sources: squeeze-spectrum needs exactly one "
                               "unblocked source, got " +
                               std::to_string(2 - n_blocked)});
    }
    ensure_dir(out_dir);

    // Alice's detector sees HBS output mode 0; the LO is locked to the
    // principal quadratures, so the squeezed/anti-squeezed traces follow the
    // eigenvalues of the mode-0 covariance block.
    const GaussianState state = build_output_state(cfg, false);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(
        state.cov().topLeftCorner<2, 2>());
    const double v_squeezed = es.eigenvalues().minCoeff() / kVacuumVariance;
    const double v_anti = es.eigenvalues().maxCoeff() / kVacuumVariance;

    const DetectorModel& det = cfg.detectors[0];
    // Each trace is recorded at a different time, so the optional LO drift
    // draws one gain factor per trace; dark noise carries no LO and stays
    // put.
    auto raw_model = [&](double v_norm, std::uint64_t drift_salt) {
        const double drift = lo_drift_factor(cfg, drift_salt);
        return std::function<double(double)>([&det, v_norm, drift](double f) {
            const MeasuredPower p = measured_relative_power(v_norm, det, f);
            return p.signal_power * drift + p.dark_power;
        });
    };
    auto dark_model = std::function<double(double)>([&det](double f) {
        return measured_relative_power(1.0, det, f).dark_power;
    });

    const double rbw = cfg.analyzer.rbw_hz.front();
    const SpectrumTrace raw_vac =
        sweep(cfg, rbw, raw_model(1.0, 10), kStreamVacuum, 0);
    const SpectrumTrace raw_sq =
        sweep(cfg, rbw, raw_model(v_squeezed, 11), kStreamSqueezed, 0);
    const SpectrumTrace raw_anti =
        sweep(cfg, rbw, raw_model(v_anti, 12), kStreamAntiSqueezed, 0);
    const SpectrumTrace raw_dark = sweep(cfg, rbw, dark_model, kStreamDark, 0);

    write_text_atomic(out_dir / "raw_vacuum.csv", trace_csv(raw_vac));
    write_text_atomic(out_dir / "raw_squeezed.csv", trace_csv(raw_sq));
    write_text_atomic(out_dir / "raw_antisqueezed.csv", trace_csv(raw_anti));
    write_text_atomic(out_dir / "raw_dark.csv", trace_csv(raw_dark));

    RunSummary summary;
    summary.add("scenario", std::string("squeeze-spectrum"));
    summary.add("unblocked_source", cfg.sources[0].blocked ? 1.0 : 0.0);
    summary.add("true_squeezed_variance_rel_vacuum", v_squeezed);
    summary.add("true_antisqueezed_variance_rel_vacuum", v_anti);

    if (cfg.flags.normalize || cfg.flags.subtract_dark) {
        SpectrumTrace norm_sq, norm_anti;
        if (cfg.flags.subtract_dark) {
            norm_sq = subtract_dark_noise(raw_sq, raw_vac, raw_dark);
            norm_anti = subtract_dark_noise(raw_anti, raw_vac, raw_dark);
        } else {
            // Vacuum normalization only, detector noise left in.
            norm_sq = raw_sq;
            norm_anti = raw_anti;
            for (std::size_t i = 0; i < raw_vac.power_db.size(); ++i) {
                norm_sq.power_db[i] -= raw_vac.power_db[i];
                norm_anti.power_db[i] -= raw_vac.power_db[i];
            }
            norm_sq.normalized = norm_anti.normalized = true;
        }
        write_text_atomic(out_dir / "normalized_squeezed.csv", trace_csv(norm_sq));
        write_text_atomic(out_dir / "normalized_antisqueezed.csv", trace_csv(norm_anti));

        const double squeezing_db = mean_db(norm_sq);
        const double anti_db = mean_db(norm_anti);
        summary.add("squeezing_db", squeezing_db);
        summary.add("antisqueezing_db", anti_db);

        // Undoing the splitter loss gives the level a direct measurement
        // would have seen; the unblocked source reaches Alice with
        // efficiency T (source 0) or 1 - T (source 1).
        const double eta_direct = cfg.sources[0].blocked
                                      ? 1.0 - cfg.hbs.transmittance
                                      : cfg.hbs.transmittance;
        if (eta_direct > 0.0) {
            summary.add("inferred_direct_squeezing_db",
                        infer_direct_squeezing(squeezing_db, eta_direct));
        }
    }
    write_text_atomic(out_dir / "summary.txt", summary.text());
    return summary;
}

RunSummary run_epr_spectrum(const ScenarioConfig& cfg,
                            const std::filesystem::path& out_dir) {
    check_valid(cfg);
    if (cfg.sources[0].blocked || cfg.sources[1].blocked) {
        throw ValidationError({"sources: epr-spectrum needs both sources "
                               "unblocked"});
    }
    ensure_dir(out_dir);

    const GaussianState state = build_output_state(cfg, true);
    const Eigen::MatrixXd& v = state.cov();
    const double qxx_a = v(0, 0) / kVacuumVariance;
    const double qxx_b = v(2, 2) / kVacuumVariance;
    const double qxx_ab = v(0, 2) / kVacuumVariance;
    const double qpp_a = v(1, 1) / kVacuumVariance;
    const double qpp_b = v(3, 3) / kVacuumVariance;
    const double qpp_ab = v(1, 3) / kVacuumVariance;

    const DetectorModel& da = cfg.detectors[0];
    const DetectorModel& db = cfg.detectors[1];
    const double drift_a = lo_drift_factor(cfg, 1);
    const double drift_b = lo_drift_factor(cfg, 2);
    const double gain_a = drift_a * da.lo_power_mw / da.reference_lo_power_mw;
    const double gain_b = drift_b * db.lo_power_mw / db.reference_lo_power_mw;
    const double dark = to_linear(-da.clearance_db) + to_linear(-db.clearance_db);

    // Continuous power models of the electronically combined photocurrents.
    auto combo = [&](double va, double vb, double vab, double sign) {
        return std::function<double(double)>([=, &da, &db](double f) {
            const double wa2 = gain_a * lowpass_power_response(f, da.bandwidth_hz);
            const double wb2 = gain_b * lowpass_power_response(f, db.bandwidth_hz);
            return wa2 * va + wb2 * vb +
                   sign * 2.0 * std::sqrt(wa2 * wb2) * vab + dark;
        });
    };
    const auto meas_x = combo(qxx_a, qxx_b, qxx_ab, -1.0);
    const auto meas_p = combo(qpp_a, qpp_b, qpp_ab, +1.0);
    const auto vac_combo = combo(1.0, 1.0, 0.0, 0.0);
    const auto dark_model = std::function<double(double)>(
        [dark](double) { return dark; });

    const EprResult state_epr = delta_epr(state, 0, 1);

    RunSummary summary;
    summary.add("scenario", std::string("epr-spectrum"));
    summary.add("delta_epr_state", state_epr.delta_epr);
    summary.add("entangled_state", state_epr.entangled ? "true" : "false");

    for (std::size_t ri = 0; ri < cfg.analyzer.rbw_hz.size(); ++ri) {
        const double rbw = cfg.analyzer.rbw_hz[ri];
        const auto t_meas_x = sweep(cfg, rbw, meas_x, kStreamMeasX, ri);
        const auto t_vac_x = sweep(cfg, rbw, vac_combo, kStreamVacX, ri);
        const auto t_meas_p = sweep(cfg, rbw, meas_p, kStreamMeasP, ri);
        const auto t_vac_p = sweep(cfg, rbw, vac_combo, kStreamVacP, ri);
        const auto t_dark = sweep(cfg, rbw, dark_model, kStreamDark, ri);

        const std::size_t n = t_meas_x.frequency_hz.size();
        std::vector<FrequencyEpr> raw(n), sub(n);
        const auto sub_x = subtract_dark_noise(t_meas_x, t_vac_x, t_dark);
        const auto sub_p = subtract_dark_noise(t_meas_p, t_vac_p, t_dark);
        for (std::size_t i = 0; i < n; ++i) {
            const double f = t_meas_x.frequency_hz[i];
            const double raw_vx = to_linear(t_meas_x.power_db[i]) /
                                  to_linear(t_vac_x.power_db[i]);
            const double raw_vp = to_linear(t_meas_p.power_db[i]) /
                                  to_linear(t_vac_p.power_db[i]);
            raw[i].frequency_hz = f;
            raw[i].epr.var_x_minus = raw_vx / 2.0;
            raw[i].epr.var_p_plus = raw_vp / 2.0;
            raw[i].epr.delta_epr = (raw_vx + raw_vp) / 2.0;
            raw[i].epr.entangled = raw[i].epr.delta_epr < 1.0;

            const double sub_vx = to_linear(sub_x.power_db[i]);
            const double sub_vp = to_linear(sub_p.power_db[i]);
            sub[i].frequency_hz = f;
            sub[i].epr.var_x_minus = sub_vx / 2.0;
            sub[i].epr.var_p_plus = sub_vp / 2.0;
            sub[i].epr.delta_epr = (sub_vx + sub_vp) / 2.0;
            sub[i].epr.entangled = sub[i].epr.delta_epr < 1.0;
        }

        const std::string tag = rbw_tag(rbw);
        write_text_atomic(out_dir / ("epr_raw_" + tag + ".csv"), epr_csv(raw));
        write_text_atomic(out_dir / ("epr_subtracted_" + tag + ".csv"),
                          epr_csv(sub));

        auto minmax = [](const std::vector<FrequencyEpr>& pts) {
            double lo = pts.front().epr.delta_epr, hi = lo;
            for (const auto& p : pts) {
                lo = std::min(lo, p.epr.delta_epr);
                hi = std::max(hi, p.epr.delta_epr);
            }
            return std::pair<double, double>{lo, hi};
        };
        const auto [raw_lo, raw_hi] = minmax(raw);
        const auto [sub_lo, sub_hi] = minmax(sub);
        summary.add(tag + "_raw_delta_epr_min", raw_lo);
        summary.add(tag + "_raw_delta_epr_max", raw_hi);
        summary.add(tag + "_subtracted_delta_epr_min", sub_lo);
        summary.add(tag + "_subtracted_delta_epr_max", sub_hi);
        summary.add(tag + "_subtracted_delta_epr_mean", [&] {
            double s = 0.0;
            for (const auto& p : sub) s += p.epr.delta_epr;
            return s / static_cast<double>(sub.size());
        }());
        const bool verdict = cfg.flags.subtract_dark ? sub_hi < 1.0 : raw_hi < 1.0;
        summary.add(tag + "_entangled", verdict ? "true" : "false");
    }
    write_text_atomic(out_dir / "summary.txt", summary.text());
    return summary;
}

RunSummary run_phasematch(const ScenarioConfig& cfg,
                          const std::filesystem::path& out_dir) {
    check_valid(cfg);
    if (!cfg.waveguide) {
        throw ValidationError({"waveguide: block required for phasematch"});
    }
    ensure_dir(out_dir);
    const WaveguideConfig& w = *cfg.waveguide;

    QpmWaveguide wg;
    wg.length_m = w.length_m;
    wg.temperature_k = w.temperature_k;
    wg.poling_period_m =
        w.poling_period_m
            ? *w.poling_period_m
            : qpm_period(w.pump_wavelength_m, w.degenerate_wavelength_m,
                         w.temperature_k);

    const PmCurve curve =
        pm_curve(wg, w.pump_wavelength_m, w.span_m, w.n_points);
    write_text_atomic(out_dir / "pm_curve.csv", pm_curve_csv(curve));

    RunSummary summary;
    summary.add("scenario", std::string("phasematch"));
    summary.add("length_m", wg.length_m);
    summary.add("temperature_k", wg.temperature_k);
    summary.add("poling_period_m", wg.poling_period_m);
    summary.add("fwhm_wavelength_nm", curve.fwhm_wavelength_m * 1e9);
    summary.add("fwhm_frequency_thz", curve.fwhm_frequency_hz / 1e12);
    summary.add("fwhm_frequency_converted_thz",
                curve.fwhm_frequency_converted_hz / 1e12);
    write_text_atomic(out_dir / "summary.txt", summary.text());
    return summary;
}

ValidateReport run_validate(const ScenarioConfig& cfg,
                            const std::optional<ScenarioConfig>& mc_config,
                            const std::filesystem::path& out_dir,
                            const std::optional<std::filesystem::path>&
                                sample_dump_path) {
    check_valid(cfg);
    if (!cfg.flags.run_mc) {
        throw ValidationError({"flags.run_mc: validate requires run_mc = true"});
    }
    const ScenarioConfig& mc_cfg = mc_config ? *mc_config : cfg;
    if (mc_config) check_valid(mc_cfg);
    ensure_dir(out_dir);

    const GaussianState analytic_state = build_output_state(cfg, true);
    const EprResult analytic = delta_epr(analytic_state, 0, 1);

    const GaussianState mc_state = build_output_state(mc_cfg, true);
    const SampleBatch batch = sample_state(
        mc_state, mc_cfg.mc.n_samples,
        Rng(mc_cfg.analyzer.seed).stream(kStreamMc).next_u64());
    if (sample_dump_path) {
        write_sample_dump(*sample_dump_path, batch);
    }
    const EprEstimate est = estimate_delta_epr(batch, 0, 1);

    struct Quantity {
        const char* name;
        double analytic;
        double mc;
    };
    // The per-quadrature standard error is bounded by the combined one, so
    // one scale serves all three comparisons.
    const Quantity quantities[] = {
        {"var_x_minus", analytic.var_x_minus, est.var_x_minus},
        {"var_p_plus", analytic.var_p_plus, est.var_p_plus},
        {"delta_epr", analytic.delta_epr, est.estimate},
    };

    RunSummary summary;
    summary.add("scenario", std::string("validate"));
    summary.add("n_samples", static_cast<double>(batch.n_samples));
    summary.add("std_error", est.std_error);
    bool pass = true;
    for (const auto& q : quantities) {
        const double delta = std::abs(q.mc - q.analytic);
        const bool ok = delta <= 4.0 * est.std_error;
        pass = pass && ok;
        summary.add(std::string(q.name) + "_analytic", q.analytic);
        summary.add(std::string(q.name) + "_mc", q.mc);
        summary.add(std::string(q.name) + "_delta", delta);
        summary.add(std::string(q.name) + "_pass", ok ? "true" : "false");
    }
    summary.add("result", pass ? "PASS" : "FAIL");
    write_text_atomic(out_dir / "validate_report.txt", summary.text());
    return {pass, summary};
}

}  // namespace epr
