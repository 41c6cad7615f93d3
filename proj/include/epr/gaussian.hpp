// Multimode Gaussian states as covariance matrices and the optical elements
// acting on them: squeezers, beam splitters, phase shifters and loss
// channels. Units are fixed once here: hbar = 1/2, so each vacuum quadrature
// has variance 1/4. Quadratures are ordered (x1, p1, x2, p2, ...).
#pragma once

#include <Eigen/Dense>

#include "epr/errors.hpp"

namespace epr {

inline constexpr double kVacuumVariance = 0.25;

// Squeezing parameters above this would overflow exp(2r); far beyond any
// physical source.
inline constexpr double kMaxSqueezing = 10.0;

class GaussianState {
public:
    // Vacuum of n modes: zero mean, covariance (1/4) * identity.
    static GaussianState vacuum(int n_modes);

    // Takes ownership of an explicit mean/covariance pair. The covariance
    // must be symmetric to 1e-12 relative tolerance; it is symmetrized
    // exactly on construction.
    GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

    int n_modes() const { return n_modes_; }
    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::MatrixXd& cov() const { return cov_; }

    // coeffs^T * cov * coeffs for a quadrature combination of length 2n.
    double quadrature_variance(const Eigen::VectorXd& coeffs) const;

    // Sum over modes of <a^dag a>; invariant under beam splitters and phase
    // shifts, not under squeezing or loss.
    double mean_photon_number() const;

    // Smallest symplectic eigenvalue of the covariance matrix; physical
    // states satisfy >= 1/4 up to numerical noise.
    double min_symplectic_eigenvalue() const;

    bool is_physical(double tolerance = 1e-10) const {
        return min_symplectic_eigenvalue() >= kVacuumVariance - tolerance;
    }

private:
    int n_modes_;
    Eigen::VectorXd mean_;
    Eigen::MatrixXd cov_;
};

struct SqueezerSpec {
    // angle 0 squeezes p (Var p = e^{-2r}/4, Var x = e^{2r}/4);
    // angle pi/2 squeezes x. Normalized into [0, 2pi).
    explicit SqueezerSpec(double r, double angle = 0.0);
    double r;
    double angle;
};

struct BeamSplitterSpec {
    // Unitary-normalized splitter. At transmittance 1/2 and zero phase the
    // outputs are (a1 + a2)/sqrt(2) and (a1 - a2)/sqrt(2).
    explicit BeamSplitterSpec(double transmittance, double relative_phase = 0.0);
    double transmittance;
    double relative_phase;
};

struct LossChannel {
    // Power transmittance eta; eta = 1 is the identity, eta = 0 replaces the
    // mode with vacuum.
    explicit LossChannel(double eta);
    double eta;
};

GaussianState apply_squeezer(const GaussianState& state, int mode,
                             const SqueezerSpec& spec);
GaussianState apply_beamsplitter(const GaussianState& state, int mode_a,
                                 int mode_b, const BeamSplitterSpec& spec);
GaussianState apply_phase_shift(const GaussianState& state, int mode,
                                double theta);
GaussianState apply_loss(const GaussianState& state, int mode,
                         const LossChannel& channel);

// Applies a full-size 2n x 2n symplectic matrix: mean -> S mean,
// cov -> S cov S^T.
GaussianState apply_symplectic(const GaussianState& state,
                               const Eigen::MatrixXd& s);

// r = gain * sqrt(power); square-root pump scaling of parametric gain.
SqueezerSpec pump_to_squeezing(double coupled_pump_power_mw,
                               double gain_per_sqrt_mw);

// Standard skew form for the (x1, p1, ...) ordering: block-diagonal
// [[0, 1], [-1, 0]] per mode.
Eigen::MatrixXd symplectic_form(int n_modes);

// Single-mode and two-mode element matrices, exposed for property tests.
Eigen::Matrix2d rotation_matrix(double theta);
Eigen::Matrix2d squeezer_matrix(const SqueezerSpec& spec);
Eigen::Matrix4d beamsplitter_matrix(const BeamSplitterSpec& spec);

}  // namespace epr
