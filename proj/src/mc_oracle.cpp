#include "epr/mc_oracle.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "epr/fft.hpp"
#include "epr/rng.hpp"

namespace epr {

SampleBatch sample_state(const GaussianState& state, long n_samples,
                         std::uint64_t seed) {
    if (n_samples < 2) {
        throw InvalidArgument("sample_state: need at least 2 samples");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(state.cov());
    if (es.info() != Eigen::Success) {
        throw NumericalError("sample_state: eigen-factorization failed");
    }
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw NumericalError(
            "sample_state: covariance is not physical (eigenvalue " +
            std::to_string(es.eigenvalues().minCoeff()) + ")");
    }
    const Eigen::MatrixXd factor =
        es.eigenvectors() *
        es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

    const Eigen::Index dim = state.mean().size();
    SampleBatch batch;
    batch.n_modes = state.n_modes();
    batch.n_samples = n_samples;
    batch.seed = seed;
    batch.samples.resize(n_samples, dim);

    Rng rng(seed);
    Eigen::VectorXd z(dim);
    for (long i = 0; i < n_samples; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) z(j) = rng.next_normal();
        batch.samples.row(i) = (state.mean() + factor * z).transpose();
    }
    return batch;
}

EprEstimate estimate_delta_epr(const SampleBatch& batch, int mode_a,
                               int mode_b) {
    if (batch.n_samples < 10) {
        throw InvalidArgument("estimate_delta_epr: insufficient samples (" +
                              std::to_string(batch.n_samples) + " < 10)");
    }
    if (mode_a == mode_b || mode_a < 0 || mode_b < 0 ||
        mode_a >= batch.n_modes || mode_b >= batch.n_modes) {
        throw InvalidArgument("estimate_delta_epr: bad mode indices");
    }

    const Eigen::VectorXd u = batch.samples.col(2 * mode_a) -
                              batch.samples.col(2 * mode_b);
    const Eigen::VectorXd v = batch.samples.col(2 * mode_a + 1) +
                              batch.samples.col(2 * mode_b + 1);
    const double n = static_cast<double>(batch.n_samples);
    const Eigen::VectorXd du = u.array() - u.mean();
    const Eigen::VectorXd dv = v.array() - v.mean();
    const double var_u = du.squaredNorm() / (n - 1.0);
    const double var_v = dv.squaredNorm() / (n - 1.0);
    const double cov_uv = du.dot(dv) / (n - 1.0);

    EprEstimate est;
    est.var_x_minus = var_u;
    est.var_p_plus = var_v;
    est.estimate = var_u + var_v;
    // Variance of a Gaussian sample variance is 2 sigma^4/(n-1); the two
    // variances co-fluctuate through Cov(u, v)^2.
    est.std_error = std::sqrt(
        2.0 * (var_u * var_u + var_v * var_v + 2.0 * cov_uv * cov_uv) /
        (n - 1.0));
    return est;
}

std::vector<double> synthesize_gaussian_timeseries(
    const std::function<double(double)>& one_sided_psd, std::size_t n_samples,
    double sample_rate_hz, std::uint64_t seed, std::size_t block_size) {
    if (!is_power_of_two(block_size) || block_size < 8) {
        throw InvalidArgument("synthesize_gaussian_timeseries: block size "
                              "must be a power of two >= 8");
    }
    if (n_samples < block_size) {
        throw InvalidArgument("synthesize_gaussian_timeseries: need at least "
                              "one full block of samples");
    }
    const std::size_t n_blocks = n_samples / block_size;
    const double df = sample_rate_hz / static_cast<double>(block_size);
    const std::size_t half = block_size / 2;

    // Precompute the per-bin amplitude scale so that the one-sided
    // periodogram of each block has expectation exactly psd(f_k).
    std::vector<double> scale(half + 1);
    const double norm = sample_rate_hz * static_cast<double>(block_size);
    for (std::size_t k = 0; k <= half; ++k) {
        const double s = one_sided_psd(df * static_cast<double>(k));
        if (!(s >= 0.0)) {
            throw InvalidArgument("synthesize_gaussian_timeseries: PSD model "
                                  "must be >= 0");
        }
        scale[k] = (k == 0 || k == half) ? std::sqrt(s * norm)
                                         : std::sqrt(s * norm / 4.0);
    }

    const Rng root(seed);
    std::vector<double> series;
    series.reserve(n_blocks * block_size);
    std::vector<std::complex<double>> spectrum(block_size);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        Rng rng = root.stream(b);
        spectrum[0] = {scale[0] * rng.next_normal(), 0.0};
        for (std::size_t k = 1; k < half; ++k) {
            const double re = scale[k] * rng.next_normal();
            const double im = scale[k] * rng.next_normal();
            spectrum[k] = {re, im};
            spectrum[block_size - k] = {re, -im};
        }
        spectrum[half] = {scale[half] * rng.next_normal(), 0.0};
        fft(spectrum, /*inverse=*/true);
        for (std::size_t i = 0; i < block_size; ++i) {
            series.push_back(spectrum[i].real());
        }
    }
    return series;
}

SpectrumTrace welch_psd(const std::vector<double>& series,
                        double sample_rate_hz, std::size_t segment_length) {
    if (!is_power_of_two(segment_length) || segment_length < 8) {
        throw InvalidArgument("welch_psd: segment length must be a power of "
                              "two >= 8");
    }
    const std::size_t n_segments = series.size() / segment_length;
    if (n_segments < 1) {
        throw InvalidArgument("welch_psd: series shorter than one segment");
    }
    const std::size_t half = segment_length / 2;
    const double norm = sample_rate_hz * static_cast<double>(segment_length);

    std::vector<double> acc(half + 1, 0.0);
    std::vector<std::complex<double>> block(segment_length);
    for (std::size_t s = 0; s < n_segments; ++s) {
        for (std::size_t i = 0; i < segment_length; ++i) {
            block[i] = {series[s * segment_length + i], 0.0};
        }
        fft(block);
        for (std::size_t k = 0; k <= half; ++k) {
            const double p = std::norm(block[k]) / norm;
            acc[k] += (k == 0 || k == half) ? p : 2.0 * p;
        }
    }

    SpectrumTrace trace;
    trace.frequency_hz.resize(half + 1);
    trace.power_db.resize(half + 1);
    trace.rbw_hz = sample_rate_hz / static_cast<double>(segment_length);
    trace.vbw_hz = trace.rbw_hz;
    trace.n_averages = static_cast<int>(n_segments);
    trace.normalized = false;
    for (std::size_t k = 0; k <= half; ++k) {
        trace.frequency_hz[k] = trace.rbw_hz * static_cast<double>(k);
        trace.power_db[k] =
            to_db(std::max(acc[k] / static_cast<double>(n_segments), 1e-300));
    }
    return trace;
}

SpectrumTrace timeseries_psd(const std::function<double(double)>& one_sided_psd,
                             double duration_s, double sample_rate_hz,
                             std::uint64_t seed, std::size_t segment_length) {
    const double n_requested = duration_s * sample_rate_hz;
    if (!(n_requested >= 65536.0)) {
        throw InvalidArgument("timeseries_psd: duration * sample_rate must "
                              "be at least 2^16 samples");
    }
    const auto n = static_cast<std::size_t>(n_requested);
    const auto series = synthesize_gaussian_timeseries(
        one_sided_psd, n, sample_rate_hz, seed, segment_length);
    return welch_psd(series, sample_rate_hz, segment_length);
}

}  // namespace epr
