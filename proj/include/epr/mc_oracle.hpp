// Statistical ground truth for the analytic pipeline: multivariate normal
// sampling of Gaussian states, plug-in inseparability estimates with standard
// errors, and shaped-noise time series with Welch PSD estimation.
#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "epr/detection.hpp"
#include "epr/gaussian.hpp"

namespace epr {

struct SampleBatch {
    int n_modes = 0;
    long n_samples = 0;
    // n_samples x 2n, one quadrature draw per row, (x1, p1, x2, p2, ...).
    Eigen::MatrixXd samples;
    std::uint64_t seed = 0;
};

// Multivariate normal draws via a symmetric eigen-factorization of the
// covariance. Eigenvalues below -1e-10 are rejected as unphysical; small
// negative noise is clamped to zero.
SampleBatch sample_state(const GaussianState& state, long n_samples,
                         std::uint64_t seed);

struct EprEstimate {
    double estimate = 0.0;   // same normalization as criterion: vacuum -> 1
    double std_error = 0.0;
    double var_x_minus = 0.0;
    double var_p_plus = 0.0;
};

EprEstimate estimate_delta_epr(const SampleBatch& batch, int mode_a,
                               int mode_b);

// Gaussian time series whose one-sided PSD follows the model; synthesized by
// shaping white noise block-by-block in the frequency domain.
std::vector<double> synthesize_gaussian_timeseries(
    const std::function<double(double)>& one_sided_psd, std::size_t n_samples,
    double sample_rate_hz, std::uint64_t seed, std::size_t block_size = 4096);

// Segment-averaged periodogram (rectangular window, non-overlapping
// segments). Returned as a SpectrumTrace with RBW = VBW = bin width and
// n_averages = number of segments.
SpectrumTrace welch_psd(const std::vector<double>& series,
                        double sample_rate_hz,
                        std::size_t segment_length = 4096);

// Convenience composition of the two steps above. Requires
// duration * sample_rate >= 2^16 samples.
SpectrumTrace timeseries_psd(const std::function<double(double)>& one_sided_psd,
                             double duration_s, double sample_rate_hz,
                             std::uint64_t seed,
                             std::size_t segment_length = 4096);

}  // namespace epr
