#include "epr/detection.hpp"

#include <cmath>
#include <string>

#include "epr/rng.hpp"

namespace epr {

double to_db(double linear) {
    return 10.0 * std::log10(linear);
}

double to_linear(double db) {
    return std::pow(10.0, db / 10.0);
}

double lowpass_power_response(double frequency_hz, double cutoff_hz) {
    const double x = frequency_hz / cutoff_hz;
    return 1.0 / (1.0 + x * x);
}

namespace {

void check_detector(const DetectorModel& d) {
    if (!(d.quantum_efficiency >= 0.0 && d.quantum_efficiency <= 1.0)) {
        throw InvalidArgument("DetectorModel: quantum efficiency must be in "
                              "[0, 1]");
    }
    if (!(d.bandwidth_hz > 0.0)) {
        throw InvalidArgument("DetectorModel: bandwidth must be > 0");
    }
    if (!std::isfinite(d.clearance_db)) {
        throw InvalidArgument("DetectorModel: clearance must be finite");
    }
    if (!(d.lo_power_mw > 0.0) || !(d.reference_lo_power_mw > 0.0)) {
        throw InvalidArgument("DetectorModel: LO powers must be > 0");
    }
}

}  // namespace

MeasuredPower measured_relative_power(double true_variance_normalized,
                                      const DetectorModel& detector,
                                      double frequency_hz) {
    check_detector(detector);
    if (!(true_variance_normalized >= 0.0)) {
        throw InvalidArgument("measured_relative_power: variance must be "
                              ">= 0, got " +
                              std::to_string(true_variance_normalized));
    }
    if (!(frequency_hz >= 0.0)) {
        throw InvalidArgument("measured_relative_power: frequency must be "
                              ">= 0");
    }
    const double eta = detector.quantum_efficiency;
    const double optical = eta * true_variance_normalized + (1.0 - eta);
    const double gain = detector.lo_power_mw / detector.reference_lo_power_mw;
    MeasuredPower out;
    out.signal_power = optical *
                       lowpass_power_response(frequency_hz,
                                              detector.bandwidth_hz) *
                       gain;
    out.dark_power = to_linear(-detector.clearance_db);
    return out;
}

SpectrumTrace subtract_dark_noise(const SpectrumTrace& meas,
                                  const SpectrumTrace& vacuum,
                                  const SpectrumTrace& dark) {
    const std::size_t n = meas.frequency_hz.size();
    auto grids_match = [&](const SpectrumTrace& a, const SpectrumTrace& b) {
        return a.frequency_hz == b.frequency_hz && a.rbw_hz == b.rbw_hz &&
               a.vbw_hz == b.vbw_hz;
    };
    if (n == 0 || n != meas.power_db.size() ||
        vacuum.power_db.size() != n || dark.power_db.size() != n) {
        throw InvalidArgument("subtract_dark_noise: malformed trace");
    }
    if (!grids_match(meas, vacuum) || !grids_match(meas, dark)) {
        throw InvalidArgument("subtract_dark_noise: traces must share "
                              "frequency grid, RBW and VBW");
    }

    SpectrumTrace out;
    out.frequency_hz = meas.frequency_hz;
    out.power_db.resize(n);
    out.rbw_hz = meas.rbw_hz;
    out.vbw_hz = meas.vbw_hz;
    out.n_averages = meas.n_averages;
    out.normalized = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double p_meas = to_linear(meas.power_db[i]);
        const double p_vac = to_linear(vacuum.power_db[i]);
        const double p_dark = to_linear(dark.power_db[i]);
        const double denom = p_vac - p_dark;
        if (denom <= 0.0) {
            throw NumericalError(
                "subtract_dark_noise: degenerate calibration at bin " +
                std::to_string(i) + " (f = " +
                std::to_string(meas.frequency_hz[i]) +
                " Hz): vacuum power does not exceed dark power");
        }
        const double num = p_meas - p_dark;
        if (num <= 0.0) {
            out.power_db[i] = kNormalizedFloorDb;
            out.floor_clamped = true;
        } else {
            out.power_db[i] =
                std::max(to_db(num / denom), kNormalizedFloorDb);
        }
    }
    return out;
}

SpectrumTrace spectrum_analyzer_trace(
    const std::function<double(double)>& power_model, double span_lo_hz,
    double span_hi_hz, double rbw_hz, double vbw_hz, int n_averages,
    std::uint64_t noise_seed, double jitter_sigma) {
    if (!(rbw_hz > 0.0) || !(vbw_hz > 0.0)) {
        throw InvalidArgument("spectrum_analyzer_trace: RBW and VBW must be "
                              "> 0");
    }
    if (!(span_hi_hz > span_lo_hz)) {
        throw InvalidArgument("spectrum_analyzer_trace: span must have "
                              "positive width");
    }
    if (rbw_hz > span_hi_hz - span_lo_hz) {
        throw InvalidArgument("spectrum_analyzer_trace: RBW exceeds span "
                              "width");
    }
    if (n_averages < 1) {
        throw InvalidArgument("spectrum_analyzer_trace: n_averages must be "
                              ">= 1");
    }
    if (!(jitter_sigma >= 0.0)) {
        throw InvalidArgument("spectrum_analyzer_trace: jitter must be >= 0");
    }

    const std::size_t n_bins = static_cast<std::size_t>(
        std::floor((span_hi_hz - span_lo_hz) / rbw_hz + 1e-9));

    // Video filtering averages roughly rbw/vbw independent fluctuations per
    // bin; trace averaging divides the variance by n_averages on top.
    const double smoothing = std::min(1.0, vbw_hz / rbw_hz);
    const double sigma =
        jitter_sigma * std::sqrt(smoothing / static_cast<double>(n_averages));

    const Rng seed_root(noise_seed);

    SpectrumTrace trace;
    trace.frequency_hz.resize(n_bins);
    trace.power_db.resize(n_bins);
    trace.rbw_hz = rbw_hz;
    trace.vbw_hz = vbw_hz;
    trace.n_averages = n_averages;
    trace.normalized = false;

    constexpr int kPanels = 256;  // midpoint rule across the RBW window
    for (std::size_t k = 0; k < n_bins; ++k) {
        const double center = span_lo_hz + (static_cast<double>(k) + 0.5) * rbw_hz;
        double mean_power = 0.0;
        for (int j = 0; j < kPanels; ++j) {
            const double f = center + rbw_hz * ((j + 0.5) / kPanels - 0.5);
            mean_power += power_model(f);
        }
        mean_power /= kPanels;

        // Mean-one lognormal so averaged traces converge to the model.
        Rng bin_rng = seed_root.stream(k);
        const double jitter =
            std::exp(sigma * bin_rng.next_normal() - 0.5 * sigma * sigma);
        trace.frequency_hz[k] = center;
        trace.power_db[k] = to_db(std::max(mean_power * jitter, 1e-300));
    }
    return trace;
}

}  // namespace epr
