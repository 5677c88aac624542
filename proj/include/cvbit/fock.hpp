#pragma once

#include "cvbit/config.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>

namespace cvbit {

/// Harmonic oscillator eigenfunction in the vacuum-variance-1 convention:
/// psi_n(x) = (2 pi)^{-1/4} (2^n n!)^{-1/2} H_n(x / sqrt 2) e^{-x^2 / 4},
/// evaluated by the stable normalized recurrence
/// psi_{n+1} = (x psi_n - sqrt(n) psi_{n-1}) / sqrt(n+1).
double hermite_psi(int n, double x);

/// Fill out[0..n_max] with psi_0(x) .. psi_{n_max}(x) in one recurrence sweep.
void hermite_psi_all(int n_max, double x, std::span<double> out);

/// 1/Gamma(x), defined as exactly 0 at the poles x = 0, -1, -2, ...
double reciprocal_gamma(double x);

/// S_{mm'} = integral sgn(x) psi_m(x) psi_{m'}(x) dx. Zero for m + m' even
/// (parity); 2 * integral_0^inf psi_m psi_{m'} otherwise, computed by
/// composite Gauss-Legendre quadrature on the half line.
class SignOverlapMatrix {
public:
    explicit SignOverlapMatrix(int cutoff, const Config& cfg = default_config());

    int cutoff() const { return cutoff_; }
    double operator()(int m, int mp) const { return s_(m, mp); }
    const Eigen::MatrixXd& matrix() const { return s_; }

private:
    int cutoff_;
    Eigen::MatrixXd s_;
};

/// Process-wide cache; matrices are immutable after construction and safe to
/// share across threads.
std::shared_ptr<const SignOverlapMatrix> sign_overlap_matrix(int cutoff,
                                                             const Config& cfg = default_config());

/// Two-mode pure state, coefficients c_{mn} on |m, n> with m, n <= cutoff.
struct FockPureState {
    Eigen::MatrixXcd coeffs;
    double tail_mass = 0.0; // probability on the boundary row/column

    static FockPureState from_coeffs(Eigen::MatrixXcd c, bool renormalize = false,
                                     const Config& cfg = default_config());

    int cutoff() const { return static_cast<int>(coeffs.rows()) - 1; }
    int dim() const { return static_cast<int>(coeffs.rows()); }
    double norm_sq() const { return coeffs.squaredNorm(); }
};

/// Two-mode density matrix, entries rho_{(mn),(m'n')} with row index m*D + n.
struct FockDensityMatrix {
    Eigen::MatrixXcd rho;
    int dim = 0; // levels per mode
    double tail_mass = 0.0;

    static FockDensityMatrix from_pure(const FockPureState& psi);
    static FockDensityMatrix from_matrix(Eigen::MatrixXcd rho, int dim,
                                         const Config& cfg = default_config());

    int cutoff() const { return dim - 1; }
    /// Smallest eigenvalue, for positivity checks.
    double min_eigenvalue() const;
};

/// Phase-space rotation acting on Fock coefficients as a number-operator
/// phase: c_{mn} -> e^{i (m theta + n phi)} c_{mn}. Matches the covariance
/// rotation gamma -> (R(theta) (+) R(phi)) gamma (...)^T.
FockPureState rotate_mode_phases(const FockPureState& psi, double theta, double phi);
FockDensityMatrix rotate_mode_phases(const FockDensityMatrix& rho, double theta, double phi);

/// Angle-resolved sign-binned correlation of one state, evaluated as
///   E(theta, phi) = sum_{dm, dn} G_{dm, dn} e^{i (theta dm + phi dn)}
/// with the shift table G contracted once from the state and the sign
/// overlaps. Parity restricts contributions to odd dm, dn.
class FockCorrelator {
public:
    FockCorrelator(const FockPureState& psi, const SignOverlapMatrix& s);
    FockCorrelator(const FockDensityMatrix& rho, const SignOverlapMatrix& s);

    double e(double theta, double phi, const Config& cfg = default_config()) const;

private:
    int dim_;
    Eigen::MatrixXcd g_; // (2 dim - 1)^2, index shift + dim - 1
};

/// E(theta, phi) = sum c_{mn} c*_{m'n'} e^{i theta (m-m')} e^{i phi (n-n')}
/// S_{mm'} S_{nn'}; density-matrix version contracts rho with S (x) S.
/// Throws TailMassExceeded if the state's boundary mass exceeds cfg.tail_tol.
double e_fock(const FockPureState& psi, double theta, double phi,
              const Config& cfg = default_config());
double e_fock(const FockDensityMatrix& rho, double theta, double phi,
              const Config& cfg = default_config());

/// Negativity (||rho^{T_B}||_1 - 1) / 2 via the eigenvalues of the Hermitian
/// partial transpose.
double negativity_fock(const FockDensityMatrix& rho, const Config& cfg = default_config());

/// Negativity of a pure state from its Schmidt coefficients (singular values
/// of the coefficient matrix): ((sum sigma)^2 - 1) / 2.
double negativity_pure_schmidt(const FockPureState& psi);

/// Reduced single-mode density matrices.
Eigen::MatrixXcd reduced_mode_a(const FockPureState& psi);
Eigen::MatrixXcd reduced_mode_b(const FockPureState& psi);
Eigen::MatrixXcd reduced_mode_a(const FockDensityMatrix& rho);
Eigen::MatrixXcd reduced_mode_b(const FockDensityMatrix& rho);

} // namespace cvbit
