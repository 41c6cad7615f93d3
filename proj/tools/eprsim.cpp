// eprsim: scenario runner for the EPR-beam simulator.
//
// Subcommands: squeeze-spectrum, epr-spectrum, phasematch, infer, validate.
// Exit codes: 0 success, 2 validation error, 3 numerical/oracle failure.
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "epr/criterion.hpp"
#include "epr/errors.hpp"
#include "epr/runner.hpp"
#include "epr/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct GlobalOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
};

epr::ScenarioConfig load(const GlobalOptions& opts) {
    if (opts.config_path.empty()) {
        throw epr::ValidationError({"--config is required for this subcommand"});
    }
    epr::ScenarioConfig cfg = epr::load_scenario(opts.config_path);
    if (opts.seed) cfg.analyzer.seed = *opts.seed;
    return cfg;
}

std::filesystem::path out_dir(const GlobalOptions& opts,
                              const epr::ScenarioConfig& cfg) {
    return opts.out_dir.empty() ? std::filesystem::path(cfg.output_dir)
                                : std::filesystem::path(opts.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian quantum-optics simulator: squeezed vacua, EPR "
                 "beams, homodyne spectra and PPLN phase matching"};
    app.require_subcommand(1);
    // Lets --config/--out/--seed appear after the subcommand name.
    app.fallthrough();

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "Scenario config (JSON)");
    app.add_option("--out", opts.out_dir,
                   "Output directory (overrides the config)");
    app.add_option("--seed", opts.seed, "Seed override (u64)");

    auto* sq = app.add_subcommand(
        "squeeze-spectrum",
        "Single-source squeezing traces, raw and vacuum-normalized");
    auto* ep = app.add_subcommand(
        "epr-spectrum", "Inseparability spectra per configured RBW");
    auto* pm = app.add_subcommand(
        "phasematch", "QPM gain curve and bandwidth of the waveguide");

    auto* infer = app.add_subcommand(
        "infer", "Direct squeezing level from a measurement behind a loss");
    double measured_db = 0.0;
    double eta = 1.0;
    infer->add_option("--measured-db", measured_db,
                      "Measured noise relative to vacuum, dB")
        ->required();
    infer->add_option("--eta", eta, "Power transmittance of the loss, (0, 1]")
        ->required();

    auto* val = app.add_subcommand(
        "validate", "Analytic pipeline against the Monte-Carlo oracle");
    std::string mc_config_path;
    std::string dump_path;
    val->add_option("--mc-config", mc_config_path,
                    "Alternate config for the oracle side");
    val->add_option("--dump-samples", dump_path,
                    "Write the raw quadrature samples (binary)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help travels this path with code 0; real parse problems are
        // validation errors.
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (sq->parsed()) {
            const auto cfg = load(opts);
            const auto summary = epr::run_squeeze_spectrum(cfg, out_dir(opts, cfg));
            std::cout << summary.text();
            return kExitOk;
        }
        if (ep->parsed()) {
            const auto cfg = load(opts);
            const auto summary = epr::run_epr_spectrum(cfg, out_dir(opts, cfg));
            std::cout << summary.text();
            return kExitOk;
        }
        if (pm->parsed()) {
            const auto cfg = load(opts);
            const auto summary = epr::run_phasematch(cfg, out_dir(opts, cfg));
            std::cout << summary.text();
            return kExitOk;
        }
        if (infer->parsed()) {
            const double direct = epr::infer_direct_squeezing(measured_db, eta);
            std::printf("direct_squeezing_db = %.10g\n", direct);
            return kExitOk;
        }
        if (val->parsed()) {
            const auto cfg = load(opts);
            std::optional<epr::ScenarioConfig> mc_cfg;
            if (!mc_config_path.empty()) {
                mc_cfg = epr::load_scenario(mc_config_path);
                if (opts.seed) mc_cfg->analyzer.seed = *opts.seed;
            }
            std::optional<std::filesystem::path> dump;
            if (!dump_path.empty()) dump = dump_path;
            const auto report =
                epr::run_validate(cfg, mc_cfg, out_dir(opts, cfg), dump);
            std::cout << report.summary.text();
            return report.pass ? kExitOk : kExitNumerical;
        }
    } catch (const epr::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const epr::InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitValidation;
    } catch (const epr::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
