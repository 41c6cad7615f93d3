#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "epr/criterion.hpp"
#include "epr/mc_oracle.hpp"
#include "epr/scenario.hpp"
#include "epr/trace_io.hpp"

using namespace epr;

namespace {

std::string preset(const char* name) {
    return std::string(PRESETS_DIR) + "/" + name;
}

std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::path(TEST_OUT_DIR) / "scenario";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("shipped presets parse and validate") {
    const ScenarioConfig fig2 = load_scenario(preset("paper-fig2.json"));
    CHECK(fig2.sources[1].blocked);
    CHECK(fig2.detectors[0].quantum_efficiency == 0.994);
    CHECK(fig2.analyzer.rbw_hz.size() == 1);

    const ScenarioConfig fig3 = load_scenario(preset("paper-fig3.json"));
    CHECK(fig3.sources[0].r.value() ==
          doctest::Approx(0.1928312404059923).epsilon(1e-15));
    CHECK(fig3.path_loss_a == std::vector<double>{0.8836});
    CHECK(fig3.path_loss_b == std::vector<double>{0.7396});
    CHECK(fig3.analyzer.rbw_hz == std::vector<double>{100e3, 5e6});

    const ScenarioConfig lossless = load_scenario(preset("lossless.json"));
    CHECK(lossless.flags.run_mc);
    CHECK(lossless.path_loss_a.empty());

    const ScenarioConfig pm = load_scenario(preset("phasematch-12mm.json"));
    REQUIRE(pm.waveguide.has_value());
    CHECK(pm.waveguide->length_m == 0.012);
    CHECK_FALSE(pm.waveguide->poling_period_m.has_value());
}

TEST_CASE("parse -> serialize -> parse is the identity") {
    for (const char* name : {"paper-fig2.json", "paper-fig3.json",
                             "lossless.json", "phasematch-12mm.json"}) {
        const ScenarioConfig first = load_scenario(preset(name));
        const std::string text = serialize_scenario(first);
        const ScenarioConfig second = parse_scenario(text);
        CHECK(first == second);
        // And the serialized form itself is stable.
        CHECK(serialize_scenario(second) == text);
    }
}

TEST_CASE("pump-powered source resolves through the square-root map") {
    ScenarioConfig cfg = load_scenario(preset("lossless.json"));
    cfg.sources[0].r.reset();
    cfg.sources[0].pump_mw = 30.0;
    cfg.sources[0].gain_per_sqrt_mw = 0.1928312404059923 / std::sqrt(30.0);
    CHECK(validate_scenario(cfg).empty());
    CHECK(source_squeezing_r(cfg.sources[0]) ==
          doctest::Approx(0.1928312404059923).epsilon(1e-12));

    const std::string text = serialize_scenario(cfg);
    CHECK(parse_scenario(text) == cfg);
}

TEST_CASE("validation reports every violated field") {
    ScenarioConfig cfg = load_scenario(preset("paper-fig3.json"));
    cfg.hbs.transmittance = 1.5;
    cfg.detectors[1].quantum_efficiency = -0.2;
    cfg.analyzer.rbw_hz = {0.0};
    cfg.path_loss_a = {2.0};
    const auto issues = validate_scenario(cfg);
    REQUIRE(issues.size() == 4);
    auto has = [&](const std::string& needle) {
        for (const auto& s : issues) {
            if (s.find(needle) != std::string::npos) return true;
        }
        return false;
    };
    CHECK(has("hbs.transmittance"));
    CHECK(has("detectors[1].quantum_efficiency"));
    CHECK(has("analyzer.rbw_hz[0]"));
    CHECK(has("path_losses.a[0]"));
}

TEST_CASE("parse rejects malformed and unknown input") {
    CHECK_THROWS_AS(parse_scenario("{ not json"), ValidationError);

    ScenarioConfig cfg = load_scenario(preset("lossless.json"));
    std::string text = serialize_scenario(cfg);
    text.replace(text.find("\"hbs\""), 5, "\"hbz\"");
    CHECK_THROWS_AS(parse_scenario(text), ValidationError);
    try {
        parse_scenario(text);
    } catch (const ValidationError& e) {
        REQUIRE_FALSE(e.issues().empty());
        CHECK(e.issues()[0].find("hbz") != std::string::npos);
    }
}

TEST_CASE("source form is exclusive") {
    ScenarioConfig cfg = load_scenario(preset("lossless.json"));

    SUBCASE("both forms at once") {
        cfg.sources[0].pump_mw = 30.0;
        cfg.sources[0].gain_per_sqrt_mw = 0.03;
        CHECK_FALSE(validate_scenario(cfg).empty());
    }
    SUBCASE("neither form") {
        cfg.sources[0].r.reset();
        CHECK_FALSE(validate_scenario(cfg).empty());
    }
    SUBCASE("pump without gain") {
        cfg.sources[0].r.reset();
        cfg.sources[0].pump_mw = 30.0;
        CHECK_FALSE(validate_scenario(cfg).empty());
    }
}

TEST_CASE("output state construction") {
    ScenarioConfig cfg = load_scenario(preset("lossless.json"));

    SUBCASE("lossless entangled pair") {
        const GaussianState s = build_output_state(cfg, true);
        CHECK(delta_epr(s, 0, 1).delta_epr ==
              doctest::Approx(0.68).epsilon(1e-12));
    }

    SUBCASE("blocking one source leaves a squeezed beam plus vacuum") {
        cfg.sources[1].blocked = true;
        const GaussianState s = build_output_state(cfg, false);
        // Mode 0 sees half the squeezing: 0.5 * 0.68 + 0.5 of vacuum.
        CHECK(s.cov()(1, 1) == doctest::Approx(0.21).epsilon(1e-12));
    }

    SUBCASE("detector efficiency folds in as loss") {
        cfg.detectors[0].quantum_efficiency = 0.5;
        cfg.detectors[1].quantum_efficiency = 0.5;
        const GaussianState s = build_output_state(cfg, true);
        CHECK(delta_epr(s, 0, 1).delta_epr ==
              doctest::Approx(0.5 * 0.68 + 0.5).epsilon(1e-12));
    }
}

TEST_CASE("trace CSV format is exact") {
    SpectrumTrace t;
    t.frequency_hz = {1e6, 2e6};
    t.power_db = {-0.5, 0.25};
    t.rbw_hz = 100e3;
    t.vbw_hz = 100.0;
    t.n_averages = 10;
    t.normalized = true;
    CHECK(trace_csv(t) ==
          "frequency_hz,power_db,rbw_hz,vbw_hz,n_averages,normalized\n"
          "1000000,-0.5,100000,100,10,1\n"
          "2000000,0.25,100000,100,10,1\n");
}

TEST_CASE("epr CSV format is exact") {
    std::vector<FrequencyEpr> pts(1);
    pts[0].frequency_hz = 1e6;
    pts[0].epr.delta_epr = 0.75;
    pts[0].epr.var_x_minus = 0.375;
    pts[0].epr.var_p_plus = 0.375;
    pts[0].epr.entangled = true;
    CHECK(epr_csv(pts) ==
          "frequency_hz,delta_epr,var_x_minus,var_p_plus,entangled\n"
          "1000000,0.75,0.375,0.375,1\n");
}

TEST_CASE("atomic text write leaves no temp file") {
    const auto dir = scratch_dir();
    const auto path = dir / "atomic.txt";
    write_text_atomic(path, "hello\n");
    CHECK(std::filesystem::exists(path));
    CHECK_FALSE(std::filesystem::exists(dir / "atomic.txt.tmp"));
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "hello");
}

TEST_CASE("sample dump round trip") {
    const auto dir = scratch_dir();
    const auto path = dir / "samples.bin";
    const SampleBatch batch =
        sample_state(GaussianState::vacuum(2), 100, 55);
    write_sample_dump(path, batch);

    const SampleBatch back = read_sample_dump(path);
    CHECK(back.n_modes == 2);
    CHECK(back.n_samples == 100);
    CHECK(back.samples == batch.samples);

    // Header is magic + sizes, 16 bytes, then 100 * 4 doubles.
    CHECK(std::filesystem::file_size(path) == 16 + 100 * 4 * 8);

    std::ofstream truncated(dir / "short.bin", std::ios::binary);
    truncated << "EPRMC001";
    truncated.close();
    CHECK_THROWS_AS(read_sample_dump(dir / "short.bin"), InvalidArgument);
}
