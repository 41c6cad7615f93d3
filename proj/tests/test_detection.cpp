#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "epr/detection.hpp"

using namespace epr;

namespace {

DetectorModel ideal_detector() {
    DetectorModel d;
    d.quantum_efficiency = 1.0;
    d.lo_power_mw = 3.5;
    d.reference_lo_power_mw = 3.5;
    d.clearance_db = 10.0;
    d.bandwidth_hz = 30e6;
    return d;
}

SpectrumTrace noiseless_sweep(const std::function<double(double)>& model,
                              double lo, double hi, double rbw) {
    return spectrum_analyzer_trace(model, lo, hi, rbw, rbw, 1, 0,
                                   /*jitter_sigma=*/0.0);
}

double sample_std(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST_CASE("dB round trip") {
    for (int i = -60; i <= 60; ++i) {
        const double db = static_cast<double>(i);
        CHECK(to_db(to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
    }
}

TEST_CASE("measured relative power") {
    const DetectorModel det = ideal_detector();

    SUBCASE("vacuum at reference LO and DC reads 1") {
        const MeasuredPower p = measured_relative_power(1.0, det, 0.0);
        CHECK(p.signal_power == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.dark_power == doctest::Approx(0.1).epsilon(1e-14));
    }

    SUBCASE("-3 dB at the cutoff frequency") {
        const MeasuredPower p = measured_relative_power(1.0, det, 30e6);
        CHECK(p.signal_power == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("squeezed input through a real photodiode") {
        DetectorModel d = det;
        d.quantum_efficiency = 0.994;
        const double f = 1e6;
        const MeasuredPower meas = measured_relative_power(0.84, d, f);
        const MeasuredPower vac = measured_relative_power(1.0, d, f);
        const double optical = 0.994 * 0.84 + 0.006;  // 0.84096
        CHECK(meas.signal_power ==
              doctest::Approx(optical * lowpass_power_response(f, 30e6))
                  .epsilon(1e-12));
        // Relative to vacuum at the same frequency: about -0.75 dB.
        CHECK(to_db(meas.signal_power / vac.signal_power) ==
              doctest::Approx(-0.7522466079235084).epsilon(1e-10));
    }

    SUBCASE("shot noise scales with LO power, dark noise does not") {
        DetectorModel d = det;
        d.lo_power_mw = 7.0;
        const MeasuredPower p = measured_relative_power(1.0, d, 0.0);
        CHECK(p.signal_power == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(p.dark_power == doctest::Approx(0.1).epsilon(1e-14));
    }

    SUBCASE("clearance degrades by exactly the rolloff") {
        for (double f : {1e6, 5e6, 15e6, 30e6}) {
            const MeasuredPower p0 = measured_relative_power(1.0, det, 0.0);
            const MeasuredPower pf = measured_relative_power(1.0, det, f);
            CHECK(pf.signal_power / p0.signal_power ==
                  doctest::Approx(lowpass_power_response(f, det.bandwidth_hz))
                      .epsilon(1e-12));
            CHECK(pf.dark_power == p0.dark_power);
        }
    }

    SUBCASE("argument checks") {
        CHECK_THROWS_AS(measured_relative_power(-0.1, det, 0.0),
                        InvalidArgument);
        CHECK_THROWS_AS(measured_relative_power(1.0, det, -1.0),
                        InvalidArgument);
        DetectorModel bad = det;
        bad.quantum_efficiency = 1.5;
        CHECK_THROWS_AS(measured_relative_power(1.0, bad, 0.0),
                        InvalidArgument);
    }
}

TEST_CASE("dark-noise subtraction") {
    const DetectorModel det = ideal_detector();
    auto meas_model = [&](double v) {
        return std::function<double(double)>([&det, v](double f) {
            const MeasuredPower p = measured_relative_power(v, det, f);
            return p.signal_power + p.dark_power;
        });
    };
    const auto dark_model = std::function<double(double)>([&det](double f) {
        return measured_relative_power(1.0, det, f).dark_power;
    });

    const double lo = 1e6, hi = 30e6, rbw = 100e3;
    const SpectrumTrace vac = noiseless_sweep(meas_model(1.0), lo, hi, rbw);
    const SpectrumTrace dark = noiseless_sweep(dark_model, lo, hi, rbw);

    SUBCASE("measuring the vacuum gives 0 dB flat") {
        const SpectrumTrace out = subtract_dark_noise(vac, vac, dark);
        CHECK(out.normalized);
        for (double db : out.power_db) {
            CHECK(db == doctest::Approx(0.0).epsilon(1e-12));
        }
    }

    SUBCASE("recovers the -0.76 dB squeezed level") {
        const SpectrumTrace meas = noiseless_sweep(meas_model(0.84), lo, hi, rbw);
        const SpectrumTrace out = subtract_dark_noise(meas, vac, dark);
        for (double db : out.power_db) {
            CHECK(db == doctest::Approx(-0.7572071393811836).epsilon(1e-9));
            CHECK(std::abs(db - (-0.76)) < 0.01);
        }
        CHECK_FALSE(out.floor_clamped);
    }

    SUBCASE("measuring only dark noise clamps at the floor") {
        const SpectrumTrace out = subtract_dark_noise(dark, vac, dark);
        CHECK(out.floor_clamped);
        for (double db : out.power_db) CHECK(db == kNormalizedFloorDb);
    }

    SUBCASE("exact inverse of adding dark power") {
        for (double v : {0.1, 0.5, 1.0, 2.0, 10.0}) {
            for (double clearance : {3.0, 10.0, 20.0}) {
                DetectorModel d = det;
                d.clearance_db = clearance;
                auto m = std::function<double(double)>([&d, v](double f) {
                    const MeasuredPower p = measured_relative_power(v, d, f);
                    return p.signal_power + p.dark_power;
                });
                auto mv = std::function<double(double)>([&d](double f) {
                    const MeasuredPower p = measured_relative_power(1.0, d, f);
                    return p.signal_power + p.dark_power;
                });
                auto md = std::function<double(double)>([&d](double f) {
                    return measured_relative_power(1.0, d, f).dark_power;
                });
                const SpectrumTrace out = subtract_dark_noise(
                    noiseless_sweep(m, lo, hi, rbw),
                    noiseless_sweep(mv, lo, hi, rbw),
                    noiseless_sweep(md, lo, hi, rbw));
                for (double db : out.power_db) {
                    CHECK(std::abs(to_linear(db) - v) < 1e-9);
                }
            }
        }
    }

    SUBCASE("grid mismatch is rejected") {
        SpectrumTrace other = vac;
        other.frequency_hz[0] += 1.0;
        CHECK_THROWS_AS(subtract_dark_noise(vac, other, dark),
                        InvalidArgument);
        SpectrumTrace wrong_rbw = vac;
        wrong_rbw.rbw_hz *= 2.0;
        CHECK_THROWS_AS(subtract_dark_noise(wrong_rbw, vac, dark),
                        InvalidArgument);
    }

    SUBCASE("vacuum below dark is a degenerate calibration") {
        SpectrumTrace hot_dark = dark;
        for (auto& db : hot_dark.power_db) db = +3.0;
        CHECK_THROWS_AS(subtract_dark_noise(vac, vac, hot_dark),
                        NumericalError);
        try {
            subtract_dark_noise(vac, vac, hot_dark);
        } catch (const NumericalError& e) {
            CHECK(std::string(e.what()).find("bin 0") != std::string::npos);
        }
    }
}

TEST_CASE("spectrum analyzer trace") {
    const auto flat = std::function<double(double)>([](double) { return 2.0; });

    SUBCASE("flat model, zero jitter reproduces the level exactly") {
        const SpectrumTrace t = noiseless_sweep(flat, 0.0, 10e6, 100e3);
        CHECK(t.frequency_hz.size() == 100);
        CHECK(t.frequency_hz.front() == doctest::Approx(50e3));
        for (double db : t.power_db) {
            CHECK(db == doctest::Approx(to_db(2.0)).epsilon(1e-12));
        }
    }

    SUBCASE("averaging reduces the jitter") {
        const auto t1 = spectrum_analyzer_trace(flat, 0.0, 20e6, 100e3, 100e3,
                                                1, 42, 0.5);
        const auto t10 = spectrum_analyzer_trace(flat, 0.0, 20e6, 100e3, 100e3,
                                                 10, 42, 0.5);
        CHECK(sample_std(t10.power_db) < sample_std(t1.power_db));
    }

    SUBCASE("same seed, same trace") {
        const auto a = spectrum_analyzer_trace(flat, 0.0, 20e6, 100e3, 1e3,
                                               10, 7, 0.3);
        const auto b = spectrum_analyzer_trace(flat, 0.0, 20e6, 100e3, 1e3,
                                               10, 7, 0.3);
        CHECK(a.power_db == b.power_db);
    }

    SUBCASE("narrow and broad RBW agree on a flat spectrum") {
        const auto narrow = spectrum_analyzer_trace(flat, 1e6, 30e6, 100e3,
                                                    100.0, 10, 11, 0.1);
        const auto broad = spectrum_analyzer_trace(flat, 1e6, 30e6, 5e6,
                                                   100.0, 10, 12, 0.1);
        double mean_n = 0.0, mean_b = 0.0;
        for (double db : narrow.power_db) mean_n += db;
        for (double db : broad.power_db) mean_b += db;
        mean_n /= static_cast<double>(narrow.power_db.size());
        mean_b /= static_cast<double>(broad.power_db.size());
        CHECK(std::abs(mean_n - mean_b) < 0.02);
    }

    SUBCASE("a step inside the window averages between the levels") {
        const double f0 = 3.2;
        const auto step = std::function<double(double)>(
            [f0](double f) { return f < f0 ? 1.0 : 2.0; });
        const SpectrumTrace t = noiseless_sweep(step, 0.0, 10.0, 1.0);
        // Bin centered at 3.5 covers [3, 4]; 20% below the step.
        const double v = to_linear(t.power_db[3]);
        CHECK(v > 1.0);
        CHECK(v < 2.0);
        CHECK(v == doctest::Approx(1.8).epsilon(0.01));
    }

    SUBCASE("averaged traces converge to the model") {
        const double sigma0 = 0.5;
        const int n_avg = 1000;
        const auto t = spectrum_analyzer_trace(flat, 0.0, 5e6, 100e3, 100e3,
                                               n_avg, 90210, sigma0);
        const double sigma_eff = sigma0 / std::sqrt(n_avg);
        const double pred_std =
            2.0 * std::sqrt(std::exp(sigma_eff * sigma_eff) - 1.0);
        for (double db : t.power_db) {
            CHECK(std::abs(to_linear(db) - 2.0) < 3.0 * pred_std);
        }
    }

    SUBCASE("argument checks") {
        CHECK_THROWS_AS(noiseless_sweep(flat, 1e6, 1e6, 1e3), InvalidArgument);
        CHECK_THROWS_AS(noiseless_sweep(flat, 0.0, 1e6, 2e6), InvalidArgument);
        CHECK_THROWS_AS(
            spectrum_analyzer_trace(flat, 0.0, 1e6, 0.0, 1e3, 1, 0, 0.0),
            InvalidArgument);
        CHECK_THROWS_AS(
            spectrum_analyzer_trace(flat, 0.0, 1e6, 1e3, 0.0, 1, 0, 0.0),
            InvalidArgument);
        CHECK_THROWS_AS(
            spectrum_analyzer_trace(flat, 0.0, 1e6, 1e3, 1e3, 0, 0, 0.0),
            InvalidArgument);
    }
}
