// Inseparability sum Delta_EPR = Var(x_A - x_B) + Var(p_A + p_B) with the
// unity threshold (two vacua give exactly 1 in hbar = 1/2 units), plus the
// loss-inversion arithmetic that recovers a direct squeezing level from a
// measurement taken behind a known loss.
#pragma once

#include <vector>

#include "epr/gaussian.hpp"
#include "epr/scenario.hpp"

namespace epr {

struct EprResult {
    double var_x_minus = 0.0;  // Var(x_a - x_b); two vacua give 1/2
    double var_p_plus = 0.0;   // Var(p_a + p_b); two vacua give 1/2
    double delta_epr = 0.0;    // sum of the two; < 1 certifies entanglement
    bool entangled = false;    // strict inequality: exactly 1 is separable
};

EprResult delta_epr(const GaussianState& state, int mode_a, int mode_b);

// Inverts one loss channel on a vacuum-normalized noise measurement:
// V_direct = (V - (1 - eta)) / eta, both sides in dB. Rejects measurements
// below the loss floor 1 - eta as unphysical.
double infer_direct_squeezing(double measured_relative_noise_db, double eta);

enum class DarkTreatment {
    kRaw,         // measured / vacuum, detector noise left in
    kSubtracted,  // (measured - dark) / (vacuum - dark)
};

struct FrequencyEpr {
    double frequency_hz = 0.0;
    EprResult epr;
};

// Delta_EPR per frequency through the detection chain: per-arm detector
// rolloff and LO gain weight the quadrature covariances, electronic dark
// noise of both detectors adds to the combined measurement, and the chosen
// dark treatment mirrors the raw / noise-compensated pair of curves.
std::vector<FrequencyEpr> epr_spectrum(const ScenarioConfig& config,
                                       const std::vector<double>& frequencies_hz,
                                       DarkTreatment treatment);

// Treatment taken from the config's subtract_dark flag.
std::vector<FrequencyEpr> epr_spectrum(const ScenarioConfig& config,
                                       const std::vector<double>& frequencies_hz);

}  // namespace epr
