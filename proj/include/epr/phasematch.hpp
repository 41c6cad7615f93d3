// Quasi-phase-matching of a periodically poled lithium niobate waveguide:
// temperature-dependent Sellmeier index, phase mismatch with first-order QPM,
// poling-period solve and the sinc^2 parametric gain profile with its FWHM in
// both wavelength and frequency.
#pragma once

#include <string>
#include <vector>

#include "epr/errors.hpp"

namespace epr {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Temperature-dependent Sellmeier fit n(lambda, T). The default set is the
// extraordinary index of congruent LiNbO3 from Jundt, Opt. Lett. 22, 1553
// (1997): n^2 = a1 + b1 f + (a2 + b2 f)/(L^2 - (a3 + b3 f)^2)
//             + (a4 + b4 f)/(L^2 - a5^2) - a6 L^2,
// with L the wavelength in micrometers and f = (T - 24.5)(T + 570.82),
// T in Celsius.
struct SellmeierSet {
    std::string name;
    double a1, a2, a3, a4, a5, a6;
    double b1, b2, b3, b4;
    double min_wavelength_m;
    double max_wavelength_m;

    bool operator==(const SellmeierSet&) const = default;
};

const SellmeierSet& congruent_linbo3_e();

double refractive_index(double wavelength_m, double temperature_k,
                        const SellmeierSet& sellmeier = congruent_linbo3_e());

struct QpmWaveguide {
    double length_m = 0.012;
    double poling_period_m = 0.0;
    double temperature_k = 298.15;
    SellmeierSet sellmeier = congruent_linbo3_e();
};

// Validity guard for the temperature fit.
inline constexpr double kMinTemperatureK = 273.0;
inline constexpr double kMaxTemperatureK = 473.0;

void check_waveguide(const QpmWaveguide& wg);

// k_pump - k_signal - k_idler - 2 pi / poling_period, first-order QPM, with
// the idler fixed by energy conservation.
double delta_k(double signal_wavelength_m, double pump_wavelength_m,
               const QpmWaveguide& waveguide);

// Poling period that zeroes delta_k at the degenerate point
// (signal = idler = degenerate_wavelength); bracketed bisection to 1e-12 m.
double qpm_period(double pump_wavelength_m, double degenerate_wavelength_m,
                  double temperature_k,
                  const SellmeierSet& sellmeier = congruent_linbo3_e());

// sin(x)/x with the removable singularity handled by series for small x.
double sinc(double x);

struct PmCurve {
    std::vector<double> signal_wavelengths_m;
    std::vector<double> efficiency;  // sinc^2(delta_k L / 2), peak 1
    double fwhm_wavelength_m = 0.0;
    // FWHM measured directly on the optical-frequency axis.
    double fwhm_frequency_hz = 0.0;
    // Small-bandwidth conversion c * d_lambda / lambda^2 of the wavelength
    // FWHM, reported alongside the exact value.
    double fwhm_frequency_converted_hz = 0.0;
};

PmCurve pm_curve(const QpmWaveguide& waveguide, double pump_wavelength_m,
                 double span_m, int n_points);

double wavelength_fwhm_to_frequency(double fwhm_wavelength_m,
                                    double center_wavelength_m);

}  // namespace epr
