#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epr/phasematch.hpp"

using namespace epr;

namespace {

constexpr double kRoomK = 298.15;  // 25 C

// Independent published fit for the same index (Zelmon, Small and Jundt,
// J. Opt. Soc. Am. B 14, 3319 (1997), n_e at room temperature); used as a
// table-lookup oracle against the default set.
double zelmon_ne(double wavelength_m) {
    const double l2 = wavelength_m * 1e6 * wavelength_m * 1e6;
    return std::sqrt(2.9804 * l2 / (l2 - 0.02047) +
                     0.5981 * l2 / (l2 - 0.0666) +
                     8.9543 * l2 / (l2 - 416.08) + 1.0);
}

QpmWaveguide make_waveguide(double length_m = 0.012,
                            double temperature_k = kRoomK) {
    QpmWaveguide wg;
    wg.length_m = length_m;
    wg.temperature_k = temperature_k;
    wg.poling_period_m = qpm_period(473e-9, 946e-9, temperature_k);
    return wg;
}

}  // namespace

TEST_CASE("refractive index values and dispersion") {
    // Frozen values of the default fit at 25 C, computed independently.
    CHECK(refractive_index(946e-9, kRoomK) ==
          doctest::Approx(2.1629413818694707).epsilon(1e-12));
    CHECK(refractive_index(473e-9, kRoomK) ==
          doctest::Approx(2.2649921264167467).epsilon(1e-12));
    CHECK(refractive_index(1064e-9, kRoomK) ==
          doctest::Approx(2.155817466485496).epsilon(1e-12));

    // Normal dispersion in this band.
    CHECK(refractive_index(946e-9, kRoomK) >
          refractive_index(1064e-9, kRoomK));
    CHECK(refractive_index(473e-9, kRoomK) >
          refractive_index(946e-9, kRoomK));

    // Range sanity required of any usable set.
    for (double lam : {0.45e-6, 0.7e-6, 1.0e-6, 2.0e-6, 4.0e-6}) {
        const double n = refractive_index(lam, kRoomK);
        CHECK(n > 1.5);
        CHECK(n < 2.5);
    }
}

TEST_CASE("index agrees with an independent published fit") {
    for (double lam : {0.45e-6, 0.5e-6, 0.6e-6, 0.8e-6, 1.0e-6, 1.5e-6,
                       2.0e-6}) {
        CHECK(std::abs(refractive_index(lam, 294.15) - zelmon_ne(lam)) <
              2e-3);
    }
}

TEST_CASE("index is smooth in temperature") {
    for (double t = 283.15; t <= 343.15; t += 10.0) {
        const double dn = std::abs(refractive_index(946e-9, t + 0.1) -
                                   refractive_index(946e-9, t));
        CHECK(dn < 1e-4);
    }
}

TEST_CASE("index validity guards") {
    CHECK_THROWS_AS(refractive_index(0.3e-6, kRoomK), InvalidArgument);
    CHECK_THROWS_AS(refractive_index(6e-6, kRoomK), InvalidArgument);
    CHECK_THROWS_AS(refractive_index(946e-9, 250.0), InvalidArgument);
    CHECK_THROWS_AS(refractive_index(946e-9, 500.0), InvalidArgument);
}

TEST_CASE("qpm period") {
    const double period = qpm_period(473e-9, 946e-9, kRoomK);

    SUBCASE("single-digit micrometers, matching real 946 nm devices") {
        CHECK(period > 1e-6);
        CHECK(period < 10e-6);
        CHECK(period == doctest::Approx(4.634949e-6).epsilon(1e-6));
    }

    SUBCASE("round trip zeroes the mismatch") {
        QpmWaveguide wg = make_waveguide();
        const double dk = delta_k(946e-9, 473e-9, wg);
        CHECK(std::abs(dk) < 1e-6 * (2.0 * M_PI / period));
    }

    SUBCASE("varies smoothly with temperature") {
        double prev = qpm_period(473e-9, 946e-9, kRoomK - 20.0);
        for (double t = kRoomK - 19.0; t <= kRoomK + 20.0; t += 1.0) {
            const double cur = qpm_period(473e-9, 946e-9, t);
            CHECK(std::abs(cur - prev) < 5e-9);  // |dL/dT| ~ 1 nm/K here
            prev = cur;
        }
    }

    SUBCASE("no solution when the mismatch has the wrong sign") {
        // Swapped roles: the "pump" is the longer wavelength.
        CHECK_THROWS_AS(qpm_period(946e-9, 473e-9, kRoomK), NumericalError);
    }
}

TEST_CASE("phase mismatch near degeneracy") {
    const QpmWaveguide wg = make_waveguide();

    SUBCASE("symmetric under signal/idler exchange") {
        const double ls = 900e-9;
        const double li = 1.0 / (1.0 / 473e-9 - 1.0 / ls);
        CHECK(delta_k(ls, 473e-9, wg) ==
              doctest::Approx(delta_k(li, 473e-9, wg)).epsilon(1e-9));
    }

    SUBCASE("degeneracy is a quadratic maximum of delta_k") {
        // Signal and idler share one dispersion curve, so the first
        // derivative cancels at the degenerate point: the mismatch stays on
        // one side of zero instead of crossing it.
        const double at_center = delta_k(946e-9, 473e-9, wg);
        for (double detune : {-10e-9, -5e-9, -1e-9, 1e-9, 5e-9, 10e-9}) {
            const double dk = delta_k(946e-9 + detune, 473e-9, wg);
            CHECK(dk < at_center);
            CHECK(dk < 0.0);
        }
        // Quadratic: quadrupling with doubled detuning.
        const double d1 = delta_k(946e-9 + 2e-9, 473e-9, wg) - at_center;
        const double d2 = delta_k(946e-9 + 4e-9, 473e-9, wg) - at_center;
        CHECK(d2 / d1 == doctest::Approx(4.0).epsilon(0.02));
    }

    SUBCASE("idler must keep a positive frequency") {
        CHECK_THROWS_AS(delta_k(400e-9, 473e-9, wg), InvalidArgument);
    }
}

TEST_CASE("sinc") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(1e-9) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sinc(M_PI) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sinc(1.5) == doctest::Approx(std::sin(1.5) / 1.5).epsilon(1e-15));
    // Continuity across the series/direct switch.
    CHECK(std::abs(sinc(0.9999e-8) - sinc(1.0001e-8)) < 1e-15);
}

TEST_CASE("phase matching curve of the 12 mm waveguide") {
    const QpmWaveguide wg = make_waveguide();
    const PmCurve curve = pm_curve(wg, 473e-9, 120e-9, 2001);

    SUBCASE("unit peak at the degenerate point") {
        double peak = 0.0;
        for (double e : curve.efficiency) {
            CHECK(e >= 0.0);
            CHECK(e <= 1.0);
            peak = std::max(peak, e);
        }
        CHECK(peak == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(curve.efficiency[1000] == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("bandwidth around 10 THz / 30 nm") {
        CHECK(curve.fwhm_frequency_hz > 7e12);
        CHECK(curve.fwhm_frequency_hz < 13e12);
        CHECK(curve.fwhm_wavelength_m > 20e-9);
        CHECK(curve.fwhm_wavelength_m < 40e-9);
    }

    SUBCASE("wavelength and frequency widths are consistent") {
        CHECK(std::abs(curve.fwhm_frequency_converted_hz -
                       curve.fwhm_frequency_hz) <
              0.02 * curve.fwhm_frequency_hz);
    }

    SUBCASE("span too narrow to bracket the FWHM is an error") {
        CHECK_THROWS_AS(pm_curve(wg, 473e-9, 10e-9, 2001), NumericalError);
    }

    SUBCASE("grid size guard") {
        CHECK_THROWS_AS(pm_curve(wg, 473e-9, 120e-9, 100), InvalidArgument);
    }
}

TEST_CASE("bandwidth scales as one over sqrt(length) at degeneracy") {
    // The mismatch is quadratic in detuning at the degenerate point, so the
    // sinc argument scales as L * detune^2 and the FWHM as 1/sqrt(L).
    const double ref = make_waveguide(0.012).length_m;
    const PmCurve base = pm_curve(make_waveguide(0.012), 473e-9, 200e-9, 4001);
    for (double length : {0.006, 0.012, 0.024}) {
        const PmCurve c = pm_curve(make_waveguide(length), 473e-9, 200e-9, 4001);
        const double scaled =
            c.fwhm_frequency_hz * std::sqrt(length / ref);
        CHECK(std::abs(scaled - base.fwhm_frequency_hz) <
              0.05 * base.fwhm_frequency_hz);
    }
}

TEST_CASE("wavelength to frequency conversion") {
    // 30 nm at 946 nm -> 10.05 THz, straight from c * dl / l^2.
    CHECK(wavelength_fwhm_to_frequency(30e-9, 946e-9) ==
          doctest::Approx(10049852433077.518).epsilon(1e-12));
}
