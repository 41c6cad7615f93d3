#include "epr/criterion.hpp"

#include <cmath>
#include <string>

#include "epr/detection.hpp"

namespace epr {

EprResult delta_epr(const GaussianState& state, int mode_a, int mode_b) {
    if (mode_a == mode_b) {
        throw InvalidArgument("delta_epr: modes must be distinct");
    }
    const Eigen::Index dim = state.mean().size();
    if (mode_a < 0 || mode_b < 0 || 2 * mode_a >= dim || 2 * mode_b >= dim) {
        throw InvalidArgument("delta_epr: mode out of range");
    }
    Eigen::VectorXd cx = Eigen::VectorXd::Zero(dim);
    cx(2 * mode_a) = 1.0;
    cx(2 * mode_b) = -1.0;
    Eigen::VectorXd cp = Eigen::VectorXd::Zero(dim);
    cp(2 * mode_a + 1) = 1.0;
    cp(2 * mode_b + 1) = 1.0;

    EprResult out;
    out.var_x_minus = state.quadrature_variance(cx);
    out.var_p_plus = state.quadrature_variance(cp);
    // Two vacua give 1/2 + 1/2 = 1, so the raw sum already sits on the
    // unity threshold; this is the single normalization point of the
    // artifact.
    out.delta_epr = out.var_x_minus + out.var_p_plus;
    out.entangled = out.delta_epr < 1.0;
    return out;
}

double infer_direct_squeezing(double measured_relative_noise_db, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw InvalidArgument("infer_direct_squeezing: eta must be in (0, 1]");
    }
    const double v = to_linear(measured_relative_noise_db);
    const double floor = 1.0 - eta;
    if (v <= floor) {
        throw NumericalError(
            "infer_direct_squeezing: measured level " +
            std::to_string(measured_relative_noise_db) +
            " dB is at or below the loss floor " + std::to_string(floor) +
            " (linear) for eta = " + std::to_string(eta) +
            "; no physical input reproduces it");
    }
    return to_db((v - floor) / eta);
}

std::vector<FrequencyEpr> epr_spectrum(const ScenarioConfig& cfg,
                                       const std::vector<double>& frequencies_hz) {
    return epr_spectrum(cfg, frequencies_hz,
                        cfg.flags.subtract_dark ? DarkTreatment::kSubtracted
                                                : DarkTreatment::kRaw);
}

std::vector<FrequencyEpr> epr_spectrum(const ScenarioConfig& cfg,
                                       const std::vector<double>& frequencies_hz,
                                       DarkTreatment treatment) {
    if (frequencies_hz.empty()) {
        throw InvalidArgument("epr_spectrum: frequency list is empty");
    }
    for (std::size_t i = 0; i < frequencies_hz.size(); ++i) {
        if (!(frequencies_hz[i] > 0.0)) {
            throw InvalidArgument("epr_spectrum: frequencies must be positive");
        }
        if (i > 0 && frequencies_hz[i] <= frequencies_hz[i - 1]) {
            throw InvalidArgument("epr_spectrum: frequencies must be sorted "
                                  "and strictly increasing");
        }
    }
    if (cfg.detectors.size() != 2) {
        throw InvalidArgument("epr_spectrum: config must carry two detectors");
    }

    // Quantum efficiencies act on the propagating beams as loss channels;
    // everything downstream is electronics.
    const GaussianState state = build_output_state(cfg, true);
    const Eigen::MatrixXd& v = state.cov();
    const double vac = kVacuumVariance;
    // Normalized covariances, vacuum diagonal = 1.
    const double qxx_a = v(0, 0) / vac, qxx_b = v(2, 2) / vac;
    const double qxx_ab = v(0, 2) / vac;
    const double qpp_a = v(1, 1) / vac, qpp_b = v(3, 3) / vac;
    const double qpp_ab = v(1, 3) / vac;

    const DetectorModel& da = cfg.detectors[0];
    const DetectorModel& db = cfg.detectors[1];
    const double gain_a = da.lo_power_mw / da.reference_lo_power_mw;
    const double gain_b = db.lo_power_mw / db.reference_lo_power_mw;
    const double dark = to_linear(-da.clearance_db) + to_linear(-db.clearance_db);

    std::vector<FrequencyEpr> out;
    out.reserve(frequencies_hz.size());
    for (double f : frequencies_hz) {
        const double wa2 = gain_a * lowpass_power_response(f, da.bandwidth_hz);
        const double wb2 = gain_b * lowpass_power_response(f, db.bandwidth_hz);
        const double cross = 2.0 * std::sqrt(wa2 * wb2);
        const double vac_power = wa2 + wb2 + dark;

        const double meas_x =
            wa2 * qxx_a + wb2 * qxx_b - cross * qxx_ab + dark;
        const double meas_p =
            wa2 * qpp_a + wb2 * qpp_b + cross * qpp_ab + dark;

        double vx, vp;  // vacuum-normalized combination variances
        if (treatment == DarkTreatment::kRaw) {
            vx = meas_x / vac_power;
            vp = meas_p / vac_power;
        } else {
            vx = (meas_x - dark) / (vac_power - dark);
            vp = (meas_p - dark) / (vac_power - dark);
        }

        FrequencyEpr point;
        point.frequency_hz = f;
        point.epr.var_x_minus = vx / 2.0;
        point.epr.var_p_plus = vp / 2.0;
        point.epr.delta_epr = (vx + vp) / 2.0;
        point.epr.entangled = point.epr.delta_epr < 1.0;
        out.push_back(point);
    }
    return out;
}

}  // namespace epr
