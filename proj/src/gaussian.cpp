#include "epr/gaussian.hpp"

#include <cmath>
#include <string>

namespace epr {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_mode(int mode, int n_modes, const char* what) {
    if (mode < 0 || mode >= n_modes) {
        throw InvalidArgument(std::string(what) + ": mode " +
                              std::to_string(mode) + " out of range for " +
                              std::to_string(n_modes) + " modes");
    }
}

double normalize_angle(double angle) {
    double a = std::fmod(angle, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

// Embeds a small symplectic block acting on the listed modes into the
// identity on the full register.
Eigen::MatrixXd embed(const Eigen::MatrixXd& block,
                      const std::vector<int>& modes, int n_modes) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    for (std::size_t bi = 0; bi < modes.size(); ++bi) {
        for (std::size_t bj = 0; bj < modes.size(); ++bj) {
            s.block<2, 2>(2 * modes[bi], 2 * modes[bj]) =
                block.block<2, 2>(2 * static_cast<int>(bi),
                                  2 * static_cast<int>(bj));
        }
    }
    return s;
}

}  // namespace

GaussianState GaussianState::vacuum(int n_modes) {
    if (n_modes < 1) {
        throw InvalidArgument("vacuum: n_modes must be >= 1, got " +
                              std::to_string(n_modes));
    }
    return GaussianState(
        Eigen::VectorXd::Zero(2 * n_modes),
        kVacuumVariance *
            Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
    const Eigen::Index dim = mean_.size();
    if (dim < 2 || dim % 2 != 0) {
        throw InvalidArgument("GaussianState: mean length must be a positive "
                              "even number, got " + std::to_string(dim));
    }
    if (cov_.rows() != dim || cov_.cols() != dim) {
        throw InvalidArgument("GaussianState: covariance must be " +
                              std::to_string(dim) + "x" + std::to_string(dim));
    }
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        throw InvalidArgument("GaussianState: covariance asymmetric beyond "
                              "tolerance (max deviation " +
                              std::to_string(asym) + ")");
    }
    cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
    n_modes_ = static_cast<int>(dim / 2);
}

double GaussianState::quadrature_variance(const Eigen::VectorXd& coeffs) const {
    if (coeffs.size() != mean_.size()) {
        throw InvalidArgument("quadrature_variance: coefficient length " +
                              std::to_string(coeffs.size()) + " != " +
                              std::to_string(mean_.size()));
    }
    if (coeffs.isZero(0.0)) {
        throw InvalidArgument("quadrature_variance: coefficients all zero");
    }
    return coeffs.dot(cov_ * coeffs);
}

double GaussianState::mean_photon_number() const {
    // <a^dag a> per mode = <x^2> + <p^2> - 1/2 with hbar = 1/2.
    return cov_.trace() + mean_.squaredNorm() - 0.5 * n_modes_;
}

double GaussianState::min_symplectic_eigenvalue() const {
    // nu_k are the moduli of the eigenvalues of i*Omega*V. With
    // W = V^{1/2}, K = W Omega W is antisymmetric and K^T K has eigenvalues
    // nu_k^2 (each twice), so two symmetric eigensolves suffice.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_);
    if (es.info() != Eigen::Success) {
        throw NumericalError("min_symplectic_eigenvalue: eigensolve failed");
    }
    Eigen::VectorXd evals = es.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXd w = es.eigenvectors() *
                              evals.cwiseSqrt().asDiagonal() *
                              es.eigenvectors().transpose();
    const Eigen::MatrixXd k = w * symplectic_form(n_modes_) * w;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(k.transpose() * k);
    if (es2.info() != Eigen::Success) {
        throw NumericalError("min_symplectic_eigenvalue: eigensolve failed");
    }
    return std::sqrt(std::max(0.0, es2.eigenvalues().minCoeff()));
}

SqueezerSpec::SqueezerSpec(double r_in, double angle_in)
    : r(r_in), angle(normalize_angle(angle_in)) {
    if (!std::isfinite(r) || !std::isfinite(angle_in)) {
        throw InvalidArgument("SqueezerSpec: parameters must be finite");
    }
    if (r < 0.0) {
        throw InvalidArgument("SqueezerSpec: r must be >= 0 (encode the "
                              "squeezing direction via the angle)");
    }
    if (r > kMaxSqueezing) {
        throw InvalidArgument("SqueezerSpec: r = " + std::to_string(r) +
                              " exceeds the guard " +
                              std::to_string(kMaxSqueezing));
    }
}

BeamSplitterSpec::BeamSplitterSpec(double transmittance_in, double phase_in)
    : transmittance(transmittance_in), relative_phase(phase_in) {
    if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
        throw InvalidArgument("BeamSplitterSpec: transmittance must be in "
                              "[0, 1], got " + std::to_string(transmittance_in));
    }
    if (!std::isfinite(relative_phase)) {
        throw InvalidArgument("BeamSplitterSpec: relative phase must be finite");
    }
}

LossChannel::LossChannel(double eta_in) : eta(eta_in) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw InvalidArgument("LossChannel: eta must be in [0, 1], got " +
                              std::to_string(eta_in));
    }
}

Eigen::Matrix2d rotation_matrix(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
}

Eigen::Matrix2d squeezer_matrix(const SqueezerSpec& spec) {
    Eigen::Matrix2d d;
    d << std::exp(spec.r), 0.0, 0.0, std::exp(-spec.r);
    const Eigen::Matrix2d rot = rotation_matrix(spec.angle);
    return rot * d * rot.transpose();
}

Eigen::Matrix4d beamsplitter_matrix(const BeamSplitterSpec& spec) {
    // a_A =  sqrt(T) a_1 + sqrt(1-T) e^{i phi} a_2
    // a_B =  sqrt(1-T) a_1 - sqrt(T) e^{i phi} a_2
    // so that T = 1/2, phi = 0 gives the sum/difference combination.
    // A complex coefficient u acts on (x, p) as [[Re u, -Im u], [Im u, Re u]].
    const double t = std::sqrt(spec.transmittance);
    const double rfl = std::sqrt(1.0 - spec.transmittance);
    const double c = std::cos(spec.relative_phase);
    const double s = std::sin(spec.relative_phase);
    Eigen::Matrix4d bs;
    bs << t, 0.0, rfl * c, -rfl * s,
          0.0, t, rfl * s, rfl * c,
          rfl, 0.0, -t * c, t * s,
          0.0, rfl, -t * s, -t * c;
    return bs;
}

GaussianState apply_symplectic(const GaussianState& state,
                               const Eigen::MatrixXd& s) {
    if (s.rows() != state.mean().size() || s.cols() != state.mean().size()) {
        throw InvalidArgument("apply_symplectic: matrix size mismatch");
    }
    return GaussianState(s * state.mean(), s * state.cov() * s.transpose());
}

GaussianState apply_squeezer(const GaussianState& state, int mode,
                             const SqueezerSpec& spec) {
    check_mode(mode, state.n_modes(), "apply_squeezer");
    return apply_symplectic(
        state, embed(squeezer_matrix(spec), {mode}, state.n_modes()));
}

GaussianState apply_beamsplitter(const GaussianState& state, int mode_a,
                                 int mode_b, const BeamSplitterSpec& spec) {
    check_mode(mode_a, state.n_modes(), "apply_beamsplitter");
    check_mode(mode_b, state.n_modes(), "apply_beamsplitter");
    if (mode_a == mode_b) {
        throw InvalidArgument("apply_beamsplitter: modes must be distinct");
    }
    return apply_symplectic(
        state,
        embed(beamsplitter_matrix(spec), {mode_a, mode_b}, state.n_modes()));
}

GaussianState apply_phase_shift(const GaussianState& state, int mode,
                                double theta) {
    check_mode(mode, state.n_modes(), "apply_phase_shift");
    if (!std::isfinite(theta)) {
        throw InvalidArgument("apply_phase_shift: theta must be finite");
    }
    return apply_symplectic(
        state, embed(rotation_matrix(theta), {mode}, state.n_modes()));
}

GaussianState apply_loss(const GaussianState& state, int mode,
                         const LossChannel& channel) {
    check_mode(mode, state.n_modes(), "apply_loss");
    const double eta = channel.eta;
    const double root = std::sqrt(eta);
    const Eigen::Index dim = state.mean().size();
    const Eigen::Index m = 2 * mode;

    Eigen::VectorXd mean = state.mean();
    mean.segment<2>(m) *= root;

    // Per-mode block V -> eta V + (1 - eta)/4 I; cross blocks scale by
    // sqrt(eta).
    Eigen::MatrixXd cov = state.cov();
    cov.block(m, 0, 2, dim) *= root;
    cov.block(0, m, dim, 2) *= root;
    cov.block<2, 2>(m, m) +=
        (1.0 - eta) * kVacuumVariance * Eigen::Matrix2d::Identity();
    return GaussianState(std::move(mean), std::move(cov));
}

SqueezerSpec pump_to_squeezing(double coupled_pump_power_mw,
                               double gain_per_sqrt_mw) {
    if (!(coupled_pump_power_mw >= 0.0)) {
        throw InvalidArgument("pump_to_squeezing: power must be >= 0, got " +
                              std::to_string(coupled_pump_power_mw));
    }
    if (!(gain_per_sqrt_mw > 0.0)) {
        throw InvalidArgument("pump_to_squeezing: gain coefficient must be "
                              "> 0, got " + std::to_string(gain_per_sqrt_mw));
    }
    return SqueezerSpec(gain_per_sqrt_mw * std::sqrt(coupled_pump_power_mw));
}

Eigen::MatrixXd symplectic_form(int n_modes) {
    if (n_modes < 1) {
        throw InvalidArgument("symplectic_form: n_modes must be >= 1");
    }
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

}  // namespace epr
