// Scenario execution behind the CLI subcommands. Each run validates its
// config, computes the requested traces and writes CSVs plus a line-oriented
// "key = value" summary into the output directory.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "epr/scenario.hpp"

namespace epr {

struct RunSummary {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(const std::string& key, const std::string& value) {
        entries.emplace_back(key, value);
    }
    void add(const std::string& key, double value);
    std::string text() const;
    // First value for a key, empty when absent.
    std::string get(const std::string& key) const;
};

// Single-source squeezing measurement: raw vacuum / squeezed / anti-squeezed
// / dark traces plus the vacuum-normalized, dark-subtracted pair.
RunSummary run_squeeze_spectrum(const ScenarioConfig& config,
                                const std::filesystem::path& out_dir);

// Inseparability spectra, raw and dark-subtracted, one pair of CSVs per
// configured RBW.
RunSummary run_epr_spectrum(const ScenarioConfig& config,
                            const std::filesystem::path& out_dir);

// Phase-matching curve and bandwidth summary for the configured waveguide.
RunSummary run_phasematch(const ScenarioConfig& config,
                          const std::filesystem::path& out_dir);

// Analytic pipeline against the Monte-Carlo oracle; quantities disagree when
// they differ by more than 4 standard errors. The oracle may run from a
// different config to expose inconsistencies.
struct ValidateReport {
    bool pass = false;
    RunSummary summary;
};
ValidateReport run_validate(const ScenarioConfig& config,
                            const std::optional<ScenarioConfig>& mc_config,
                            const std::filesystem::path& out_dir,
                            const std::optional<std::filesystem::path>&
                                sample_dump_path = std::nullopt);

}  // namespace epr
