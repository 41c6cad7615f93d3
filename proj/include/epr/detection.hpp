// Homodyne detector and spectrum analyzer model: quantum efficiency,
// LO-power-scaled shot noise, flat electronic dark noise, first-order
// detector rolloff, RBW window integration, video/trace averaging jitter and
// the vacuum-normalization / dark-subtraction arithmetic.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "epr/errors.hpp"

namespace epr {

struct DetectorModel {
    double quantum_efficiency = 1.0;
    double lo_power_mw = 3.5;
    // Shot noise above dark noise, in dB, at the reference LO power and low
    // frequency.
    double clearance_db = 10.0;
    // First-order low-pass cutoff of the detector electronics.
    double bandwidth_hz = 30e6;
    double reference_lo_power_mw = 3.5;

    bool operator==(const DetectorModel&) const = default;
};

double to_db(double linear);
double to_linear(double db);

// |H(f)|^2 of a first-order low-pass with the given cutoff.
double lowpass_power_response(double frequency_hz, double cutoff_hz);

struct MeasuredPower {
    double signal_power = 0.0;  // optical part, vacuum at reference LO = 1
    double dark_power = 0.0;    // electronic noise, frequency-flat
};

// Linear noise powers seen by the analyzer for a quadrature of normalized
// variance V (vacuum = 1): signal = [eta V + (1 - eta)] |H(f)|^2 lo/lo_ref,
// dark = 10^(-clearance/10).
MeasuredPower measured_relative_power(double true_variance_normalized,
                                      const DetectorModel& detector,
                                      double frequency_hz);

struct SpectrumTrace {
    std::vector<double> frequency_hz;
    std::vector<double> power_db;
    double rbw_hz = 0.0;
    double vbw_hz = 0.0;
    int n_averages = 1;
    bool normalized = false;
    // Set when any bin of a normalized trace hit the dB floor.
    bool floor_clamped = false;
};

// Floor for normalized traces whose numerator vanished after subtraction.
inline constexpr double kNormalizedFloorDb = -60.0;

// Relative jitter of a single un-averaged, un-smoothed sweep bin.
inline constexpr double kDefaultTraceJitter = 0.1;

// (meas - dark) / (vac - dark) per bin, in dB, vacuum level at 0 dB.
// All three traces must share grid, RBW and VBW.
SpectrumTrace subtract_dark_noise(const SpectrumTrace& meas,
                                  const SpectrumTrace& vacuum,
                                  const SpectrumTrace& dark);

// Emulated analyzer sweep: bins at RBW spacing across the span, each bin the
// mean of the continuous power model over its RBW window (rectangular
// window), with multiplicative lognormal jitter whose variance shrinks with
// trace averaging and with VBW smoothing. Deterministic per seed.
SpectrumTrace spectrum_analyzer_trace(
    const std::function<double(double)>& power_model, double span_lo_hz,
    double span_hi_hz, double rbw_hz, double vbw_hz, int n_averages,
    std::uint64_t noise_seed, double jitter_sigma = kDefaultTraceJitter);

}  // namespace epr
