#include "epr/phasematch.hpp"

#include <algorithm>
#include <cmath>

namespace epr {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wavenumber(double wavelength_m, double temperature_k,
                  const SellmeierSet& set) {
    return 2.0 * kPi * refractive_index(wavelength_m, temperature_k, set) /
           wavelength_m;
}

double idler_wavelength(double signal_wavelength_m, double pump_wavelength_m) {
    const double inv = 1.0 / pump_wavelength_m - 1.0 / signal_wavelength_m;
    if (!(inv > 0.0)) {
        throw InvalidArgument("delta_k: idler frequency is not positive "
                              "(signal must be longer than the pump)");
    }
    return 1.0 / inv;
}

// Linear interpolation of the half-maximum crossing between grid points i0
// and i1.
double interp_crossing(const std::vector<double>& x,
                       const std::vector<double>& y, std::size_t i0,
                       std::size_t i1, double level) {
    const double t = (level - y[i0]) / (y[i1] - y[i0]);
    return x[i0] + t * (x[i1] - x[i0]);
}

}  // namespace

const SellmeierSet& congruent_linbo3_e() {
    static const SellmeierSet set{
        "congruent-LiNbO3-ne-Jundt1997",
        5.35583, 0.100473, 0.20692, 100.0, 11.34927, 1.5334e-2,
        4.629e-7, 3.862e-8, -0.89e-8, 2.657e-5,
        0.4e-6, 5.0e-6,
    };
    return set;
}

double refractive_index(double wavelength_m, double temperature_k,
                        const SellmeierSet& s) {
    if (!(wavelength_m >= s.min_wavelength_m &&
          wavelength_m <= s.max_wavelength_m)) {
        throw InvalidArgument(
            "refractive_index: wavelength " + std::to_string(wavelength_m) +
            " m outside the fit validity [" +
            std::to_string(s.min_wavelength_m) + ", " +
            std::to_string(s.max_wavelength_m) + "] m");
    }
    if (!(temperature_k >= kMinTemperatureK &&
          temperature_k <= kMaxTemperatureK)) {
        throw InvalidArgument("refractive_index: temperature " +
                              std::to_string(temperature_k) +
                              " K outside the fit validity [273, 473] K");
    }
    const double t_c = temperature_k - 273.15;
    const double f = (t_c - 24.5) * (t_c + 570.82);
    const double lam = wavelength_m * 1e6;  // micrometers
    const double lam2 = lam * lam;
    const double res1 = s.a3 + s.b3 * f;
    const double n2 = s.a1 + s.b1 * f +
                      (s.a2 + s.b2 * f) / (lam2 - res1 * res1) +
                      (s.a4 + s.b4 * f) / (lam2 - s.a5 * s.a5) -
                      s.a6 * lam2;
    if (!(n2 > 0.0)) {
        throw NumericalError("refractive_index: fit produced n^2 <= 0");
    }
    return std::sqrt(n2);
}

void check_waveguide(const QpmWaveguide& wg) {
    if (!(wg.length_m > 0.0)) {
        throw InvalidArgument("QpmWaveguide: length must be > 0");
    }
    if (!(wg.poling_period_m > 0.0)) {
        throw InvalidArgument("QpmWaveguide: poling period must be > 0");
    }
    if (!(wg.temperature_k >= kMinTemperatureK &&
          wg.temperature_k <= kMaxTemperatureK)) {
        throw InvalidArgument("QpmWaveguide: temperature outside [273, 473] K");
    }
}

double delta_k(double signal_wavelength_m, double pump_wavelength_m,
               const QpmWaveguide& wg) {
    check_waveguide(wg);
    const double lam_i = idler_wavelength(signal_wavelength_m,
                                          pump_wavelength_m);
    return wavenumber(pump_wavelength_m, wg.temperature_k, wg.sellmeier) -
           wavenumber(signal_wavelength_m, wg.temperature_k, wg.sellmeier) -
           wavenumber(lam_i, wg.temperature_k, wg.sellmeier) -
           2.0 * kPi / wg.poling_period_m;
}

double qpm_period(double pump_wavelength_m, double degenerate_wavelength_m,
                  double temperature_k, const SellmeierSet& sellmeier) {
    const double mismatch =
        wavenumber(pump_wavelength_m, temperature_k, sellmeier) -
        2.0 * wavenumber(degenerate_wavelength_m, temperature_k, sellmeier);
    if (!(mismatch > 0.0)) {
        throw NumericalError("qpm_period: no positive poling period solves "
                             "QPM for these wavelengths");
    }

    QpmWaveguide wg;
    wg.length_m = 1.0;
    wg.temperature_k = temperature_k;
    wg.sellmeier = sellmeier;
    auto residual = [&](double period) {
        wg.poling_period_m = period;
        return delta_k(degenerate_wavelength_m, pump_wavelength_m, wg);
    };

    // Bracketed bisection to 1e-12 m. The mismatch is monotone in the
    // period, so the bracket around 2 pi / mismatch always holds; the final
    // polish divides out the residual exactly (delta_k is linear in
    // 1/period), leaving the round trip at machine precision.
    double lo = kPi / mismatch;        // half the solution
    double hi = 4.0 * kPi / mismatch;  // twice the solution
    double f_lo = residual(lo);
    if (f_lo * residual(hi) > 0.0) {
        throw NumericalError("qpm_period: root not bracketed");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = residual(mid);
        if (f_lo * f_mid <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    const double bisected = 0.5 * (lo + hi);
    const double polished =
        1.0 / (1.0 / bisected + residual(bisected) / (2.0 * kPi));
    return polished;
}

double sinc(double x) {
    if (std::abs(x) < 1e-8) {
        return 1.0 - x * x / 6.0;
    }
    return std::sin(x) / x;
}

double wavelength_fwhm_to_frequency(double fwhm_wavelength_m,
                                    double center_wavelength_m) {
    return kSpeedOfLight * fwhm_wavelength_m /
           (center_wavelength_m * center_wavelength_m);
}

PmCurve pm_curve(const QpmWaveguide& wg, double pump_wavelength_m,
                 double span_m, int n_points) {
    check_waveguide(wg);
    if (n_points < 101) {
        throw InvalidArgument("pm_curve: need at least 101 grid points");
    }
    if (!(span_m > 0.0)) {
        throw InvalidArgument("pm_curve: span must be > 0");
    }

    const double center = 2.0 * pump_wavelength_m;  // degenerate signal
    PmCurve curve;
    curve.signal_wavelengths_m.resize(n_points);
    curve.efficiency.resize(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double lam = center - span_m / 2.0 +
                           span_m * static_cast<double>(i) / (n_points - 1);
        const double x = delta_k(lam, pump_wavelength_m, wg) * wg.length_m / 2.0;
        const double s = sinc(x);
        curve.signal_wavelengths_m[i] = lam;
        curve.efficiency[i] = s * s;
    }

    // Half-maximum crossings walking outward from the peak.
    const auto& eff = curve.efficiency;
    const auto& lam = curve.signal_wavelengths_m;
    const std::size_t peak = static_cast<std::size_t>(
        std::max_element(eff.begin(), eff.end()) - eff.begin());
    const double half = eff[peak] / 2.0;

    std::size_t left = peak;
    while (left > 0 && eff[left] >= half) --left;
    std::size_t right = peak;
    while (right + 1 < eff.size() && eff[right] >= half) ++right;
    if (eff[left] >= half || eff[right] >= half) {
        throw NumericalError("pm_curve: span too narrow, FWHM not bracketed "
                             "by the grid");
    }

    const double lam_lo = interp_crossing(lam, eff, left, left + 1, half);
    const double lam_hi = interp_crossing(lam, eff, right - 1, right, half);
    curve.fwhm_wavelength_m = lam_hi - lam_lo;

    // Exact frequency-domain width from the same crossings.
    curve.fwhm_frequency_hz =
        kSpeedOfLight / lam_lo - kSpeedOfLight / lam_hi;
    curve.fwhm_frequency_converted_hz =
        wavelength_fwhm_to_frequency(curve.fwhm_wavelength_m, lam[peak]);
    return curve;
}

}  // namespace epr
