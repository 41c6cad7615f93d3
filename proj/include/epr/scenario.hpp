// Declarative experiment configuration: two squeezed-vacuum sources, the
// combining beam splitter, per-path losses, two homodyne detectors and the
// analyzer settings. JSON on disk; parse -> serialize -> parse is the
// identity on every field.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epr/detection.hpp"
#include "epr/gaussian.hpp"

namespace epr {

struct SourceConfig {
    // Either a squeezing parameter directly, or a coupled pump power plus
    // gain coefficient (r = gain * sqrt(power)). Exactly one of the two.
    std::optional<double> r;
    std::optional<double> pump_mw;
    std::optional<double> gain_per_sqrt_mw;
    double angle = 0.0;
    bool blocked = false;

    bool operator==(const SourceConfig&) const = default;
};

struct HbsConfig {
    double transmittance = 0.5;
    // Phase shift applied to the second source before combining; pi/2 turns
    // two equally squeezed inputs into the entangling configuration.
    double relative_phase = 1.5707963267948966;

    bool operator==(const HbsConfig&) const = default;
};

struct AnalyzerConfig {
    double start_hz = 1e6;
    double stop_hz = 30e6;
    std::vector<double> rbw_hz = {100e3};
    double vbw_hz = 100.0;
    int n_averages = 10;
    std::uint64_t seed = 1;
    double jitter = kDefaultTraceJitter;

    bool operator==(const AnalyzerConfig&) const = default;
};

struct FlagsConfig {
    bool subtract_dark = true;
    bool normalize = true;
    bool run_mc = false;
    bool lo_drift = false;

    bool operator==(const FlagsConfig&) const = default;
};

struct McConfig {
    long n_samples = 100000;

    bool operator==(const McConfig&) const = default;
};

struct WaveguideConfig {
    double length_m = 0.012;
    double temperature_k = 298.15;
    double pump_wavelength_m = 473e-9;
    double degenerate_wavelength_m = 946e-9;
    double span_m = 120e-9;
    int n_points = 2001;
    // Solved from the QPM condition when absent.
    std::optional<double> poling_period_m;

    bool operator==(const WaveguideConfig&) const = default;
};

struct ScenarioConfig {
    std::vector<SourceConfig> sources;      // exactly two
    HbsConfig hbs;
    std::vector<double> path_loss_a;        // transmittances after the HBS
    std::vector<double> path_loss_b;
    std::vector<DetectorModel> detectors;   // exactly two
    AnalyzerConfig analyzer;
    FlagsConfig flags;
    McConfig mc;
    std::optional<WaveguideConfig> waveguide;
    std::string output_dir = "out";

    bool operator==(const ScenarioConfig&) const = default;
};

// Throws ValidationError (with one message per problem) on bad input.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);
std::string serialize_scenario(const ScenarioConfig& config);

// All problems found, empty when the config is valid.
std::vector<std::string> validate_scenario(const ScenarioConfig& config);

// Squeezing parameter of a source, resolving the pump mapping if used.
double source_squeezing_r(const SourceConfig& source);

// Output state of the optical chain: squeezers, relative phase, beam
// splitter, then per-path losses. Mode 0 feeds detector A, mode 1 detector
// B. Detector quantum efficiencies fold in as extra loss channels when
// requested.
GaussianState build_output_state(const ScenarioConfig& config,
                                 bool include_detector_qe);

}  // namespace epr
