#pragma once

#include "cvbit/config.hpp"
#include "cvbit/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace cvbit {

/// Canonical parameters of a two-mode covariance matrix after reduction by
/// local symplectic operations: diagonal blocks lambda_a I, lambda_b I and
/// cross block diag(cx, -cp). Convention: cx >= |cp|.
struct StandardForm {
    double lambda_a;
    double lambda_b;
    double cx;
    double cp;

    StandardForm(double la, double lb, double cx_, double cp_);
};

/// Symplectic invariants of a standard form. delta = det(alpha) + det(beta)
/// + 2 det(delta-block); delta_tilde = delta - 4 det(delta-block); nu_tilde
/// is the smaller symplectic eigenvalue of the partial transpose.
struct GaussianInvariants {
    double delta;
    double delta_tilde;
    double nu_tilde;
    double det_gamma;
};

/// 4x4 real symmetric covariance matrix, mode order (x_A, p_A, x_B, p_B),
/// vacuum = identity. First moments are zero throughout.
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(const Eigen::Matrix4d& entries,
                              const Config& cfg = default_config());

    static CovarianceMatrix vacuum();
    static CovarianceMatrix from_standard_form(const StandardForm& sf);

    const Eigen::Matrix4d& mat() const { return m_; }
    Eigen::Matrix2d block_a() const { return m_.block<2, 2>(0, 0); }
    Eigen::Matrix2d block_b() const { return m_.block<2, 2>(2, 2); }
    Eigen::Matrix2d block_cross() const { return m_.block<2, 2>(0, 2); }

private:
    Eigen::Matrix4d m_;
};

/// Reduce to standard form via symplectic isotropization of the local blocks
/// followed by a signed SVD rotation of the cross block. Preserves det(alpha),
/// det(beta), det(cross), det(gamma).
StandardForm standard_form(const CovarianceMatrix& cm, const Config& cfg = default_config());

GaussianInvariants gaussian_invariants(const StandardForm& sf);

/// True iff the matrix is a bona fide quantum covariance matrix: positive
/// definite with lambda_{a,b} >= 1 and smaller symplectic eigenvalue >= 1
/// (equivalently gamma + i Omega >= 0), within cfg.physicality_tol.
bool is_physical(const CovarianceMatrix& cm, const Config& cfg = default_config());

struct NegativityResult {
    double negativity;
    GaussianInvariants invariants;
};

/// Negativity N = max{0, (1 - nu_tilde) / (2 nu_tilde)}. Throws Unphysical.
NegativityResult negativity_gaussian(const CovarianceMatrix& cm,
                                     const Config& cfg = default_config());

/// Closed form Q = (2/pi) arctan(cx / sqrt(lambda_a lambda_b - cx^2)),
/// attained at theta = phi = 0 for a standard form.
double q_gaussian_closed(const StandardForm& sf);

/// Sign-binned correlation E = (2/pi) arcsin(rho_c) of the rotated position
/// pair. Rotation convention: x(theta) = cos(theta) x - sin(theta) p, matching
/// the Fock-side phase convention in e_fock.
double e_gaussian(const CovarianceMatrix& cm, double theta, double phi);

/// Correlation coefficient of (x_A(theta), x_B(phi)); building block of
/// e_gaussian, also used by the homodyne sampler.
struct RotatedMarginal {
    double var_a;
    double var_b;
    double cov;
    double corr() const;
};
RotatedMarginal rotated_position_marginal(const CovarianceMatrix& cm, double theta, double phi);

/// Q of the pure two-mode squeezed state with negativity N, obtained by
/// inverting N = (1 - nu)/(2 nu) and evaluating the closed form on the
/// matching squeezed vacuum. Monotone increasing in N.
double q_pure_of_negativity(double negativity);

struct CmSampleRanges {
    double lambda_min = 1.0;
    double lambda_max = 9.0;
};

/// Rejection-sample a random physical standard-form state: lambda_{a,b}
/// uniform in [lambda_min, lambda_max], cx uniform in [0, sqrt(la lb)),
/// cp uniform in [-cx, cx].
CovarianceMatrix random_gaussian_cm(Rng& rng, const CmSampleRanges& ranges = {},
                                    const Config& cfg = default_config());
CovarianceMatrix random_gaussian_cm(std::uint64_t seed, const CmSampleRanges& ranges = {},
                                    const Config& cfg = default_config());

enum class BoundaryKind { separable, perfect };

/// Limiting families of the correlation-vs-negativity plane:
///   separable: cp = 0, cx = eps (lambda^2 - 1) / lambda   (negativity 0)
///   perfect:   cx = (lambda^2 - 1) / lambda, cp = eps cx  (Q -> 1 as lambda -> inf)
StandardForm boundary_family(BoundaryKind kind, double epsilon, double lambda);

/// Congruence by S_A (+) S_B; each block must have unit determinant.
CovarianceMatrix apply_local_symplectic(const CovarianceMatrix& cm,
                                        const Eigen::Matrix2d& s_a,
                                        const Eigen::Matrix2d& s_b,
                                        const Config& cfg = default_config());

/// Phase-space rotation matrix [[cos, -sin], [sin, cos]].
Eigen::Matrix2d rotation2(double angle);

/// Single-mode squeezer diag(1/z, z).
Eigen::Matrix2d squeeze2(double z);

} // namespace cvbit
