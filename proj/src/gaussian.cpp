#include "cvbit/gaussian.hpp"
#include "cvbit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cvbit {

namespace {

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

// S = (det A)^{1/4} A^{-1/2}: unit-determinant symmetric symplectic with
// S A S^T = sqrt(det A) * I. Requires A positive definite.
Eigen::Matrix2d isotropizer(const Eigen::Matrix2d& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a);
    const double e0 = es.eigenvalues()(0), e1 = es.eigenvalues()(1);
    if (e0 <= 0.0)
        throw DomainError("standard_form: diagonal block is not positive definite");
    const Eigen::Matrix2d inv_sqrt =
        es.eigenvectors() * Eigen::Vector2d(1.0 / std::sqrt(e0), 1.0 / std::sqrt(e1)).asDiagonal() *
        es.eigenvectors().transpose();
    return std::pow(e0 * e1, 0.25) * inv_sqrt;
}

} // namespace

StandardForm::StandardForm(double la, double lb, double cx_, double cp_)
    : lambda_a(la), lambda_b(lb), cx(cx_), cp(cp_) {
    if (!(la > 0.0) || !(lb > 0.0))
        throw OutOfRange("StandardForm: lambda_a, lambda_b must be positive");
    if (cx < std::abs(cp) - 1e-12)
        throw OutOfRange("StandardForm: convention cx >= |cp| violated");
}

CovarianceMatrix::CovarianceMatrix(const Eigen::Matrix4d& entries, const Config& cfg) {
    const double scale = 1.0 + entries.cwiseAbs().maxCoeff();
    const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (asym > cfg.symmetry_tol * scale)
        throw NonSymmetric("CovarianceMatrix: matrix is not symmetric");
    m_ = 0.5 * (entries + entries.transpose());
}

CovarianceMatrix CovarianceMatrix::vacuum() {
    return CovarianceMatrix(Eigen::Matrix4d::Identity());
}

CovarianceMatrix CovarianceMatrix::from_standard_form(const StandardForm& sf) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = m(1, 1) = sf.lambda_a;
    m(2, 2) = m(3, 3) = sf.lambda_b;
    m(0, 2) = m(2, 0) = sf.cx;
    m(1, 3) = m(3, 1) = -sf.cp;
    return CovarianceMatrix(m);
}

StandardForm standard_form(const CovarianceMatrix& cm, const Config&) {
    const Eigen::Matrix2d sa = isotropizer(cm.block_a());
    const Eigen::Matrix2d sb = isotropizer(cm.block_b());
    const double lambda_a = std::sqrt(cm.block_a().determinant());
    const double lambda_b = std::sqrt(cm.block_b().determinant());

    Eigen::Matrix2d cross = sa * cm.block_cross() * sb.transpose();

    // Signed SVD with proper rotations: fold any reflection into the sign of
    // the second singular value.
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double d0 = svd.singularValues()(0);
    double d1 = svd.singularValues()(1);
    const double sign = svd.matrixU().determinant() * svd.matrixV().determinant();
    d1 *= sign;

    // d0 = sigma_1 >= |d1| by the SVD ordering
    return StandardForm(lambda_a, lambda_b, d0, -d1);
}

GaussianInvariants gaussian_invariants(const StandardForm& sf) {
    GaussianInvariants inv{};
    const double det_cross = -sf.cx * sf.cp;
    inv.delta = sf.lambda_a * sf.lambda_a + sf.lambda_b * sf.lambda_b + 2.0 * det_cross;
    inv.delta_tilde = inv.delta - 4.0 * det_cross;
    inv.det_gamma = (sf.lambda_a * sf.lambda_b - sf.cx * sf.cx) *
                    (sf.lambda_a * sf.lambda_b - sf.cp * sf.cp);
    const double disc = std::max(0.0, inv.delta_tilde * inv.delta_tilde - 4.0 * inv.det_gamma);
    const double nu2 = 0.5 * (inv.delta_tilde - std::sqrt(disc));
    inv.nu_tilde = std::sqrt(std::max(nu2, 0.0));
    return inv;
}

bool is_physical(const CovarianceMatrix& cm, const Config& cfg) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(cm.mat());
    if (es.eigenvalues()(0) <= cfg.physicality_tol) return false;

    const StandardForm sf = standard_form(cm, cfg); // blocks pos-def here
    if (sf.lambda_a < 1.0 - cfg.physicality_tol) return false;
    if (sf.lambda_b < 1.0 - cfg.physicality_tol) return false;

    // Smaller symplectic eigenvalue of gamma itself (not the partial
    // transpose): nu_-^2 = (Delta - sqrt(Delta^2 - 4 det gamma)) / 2.
    // nu_- >= 1 is equivalent to gamma + i Omega >= 0 for positive definite
    // gamma, and subsumes Delta <= 1 + det gamma.
    const GaussianInvariants inv = gaussian_invariants(sf);
    const double disc = std::max(0.0, inv.delta * inv.delta - 4.0 * inv.det_gamma);
    const double nu_minus_sq = 0.5 * (inv.delta - std::sqrt(disc));
    return nu_minus_sq >= 1.0 - cfg.physicality_tol;
}

NegativityResult negativity_gaussian(const CovarianceMatrix& cm, const Config& cfg) {
    if (!is_physical(cm, cfg))
        throw Unphysical("negativity_gaussian: covariance matrix is not physical");
    const GaussianInvariants inv = gaussian_invariants(standard_form(cm, cfg));
    const double n = std::max(0.0, (1.0 - inv.nu_tilde) / (2.0 * inv.nu_tilde));
    return NegativityResult{n, inv};
}

double q_gaussian_closed(const StandardForm& sf) {
    const double denom_sq = sf.lambda_a * sf.lambda_b - sf.cx * sf.cx;
    if (denom_sq <= 0.0)
        throw DomainError("q_gaussian_closed: lambda_a lambda_b - cx^2 must be positive");
    return (2.0 / M_PI) * std::atan(sf.cx / std::sqrt(denom_sq));
}

Eigen::Matrix2d rotation2(double angle) {
    Eigen::Matrix2d r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

Eigen::Matrix2d squeeze2(double z) {
    if (z == 0.0) throw OutOfRange("squeeze2: parameter must be nonzero");
    Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
    s(0, 0) = 1.0 / z;
    s(1, 1) = z;
    return s;
}

RotatedMarginal rotated_position_marginal(const CovarianceMatrix& cm, double theta, double phi) {
    Eigen::Matrix4d rot = Eigen::Matrix4d::Zero();
    rot.block<2, 2>(0, 0) = rotation2(theta);
    rot.block<2, 2>(2, 2) = rotation2(phi);
    const Eigen::Matrix4d g = rot * cm.mat() * rot.transpose();
    return RotatedMarginal{g(0, 0), g(2, 2), g(0, 2)};
}

double RotatedMarginal::corr() const {
    if (var_a <= 0.0 || var_b <= 0.0)
        throw DomainError("rotated marginal has non-positive variance");
    return cov / std::sqrt(var_a * var_b);
}

double e_gaussian(const CovarianceMatrix& cm, double theta, double phi) {
    const double rho = rotated_position_marginal(cm, theta, phi).corr();
    if (std::abs(rho) > 1.0 + 1e-12)
        throw DomainError("e_gaussian: correlation coefficient outside [-1, 1]");
    return (2.0 / M_PI) * std::asin(clamp_unit(rho));
}

double q_pure_of_negativity(double negativity) {
    if (negativity < 0.0)
        throw DomainError("q_pure_of_negativity: negativity must be nonnegative");
    // nu = 1/(1+2N); the matching squeezed vacuum has sinh(2r) = (1-nu^2)/(2nu)
    // = 2N(N+1)/(2N+1), and the closed form reduces to (2/pi) arctan(sinh 2r).
    const double sinh2r = 2.0 * negativity * (negativity + 1.0) / (2.0 * negativity + 1.0);
    return (2.0 / M_PI) * std::atan(sinh2r);
}

CovarianceMatrix random_gaussian_cm(Rng& rng, const CmSampleRanges& ranges, const Config& cfg) {
    if (!(ranges.lambda_min >= 1.0) || !(ranges.lambda_max >= ranges.lambda_min))
        throw OutOfRange("random_gaussian_cm: invalid lambda range");
    for (int attempt = 0; attempt < cfg.random_cm_max_attempts; ++attempt) {
        const double la = ranges.lambda_min + (ranges.lambda_max - ranges.lambda_min) * rng.uniform();
        const double lb = ranges.lambda_min + (ranges.lambda_max - ranges.lambda_min) * rng.uniform();
        const double cx = std::sqrt(la * lb) * rng.uniform();
        const double cp = cx * (2.0 * rng.uniform() - 1.0);
        const CovarianceMatrix cm = CovarianceMatrix::from_standard_form(StandardForm(la, lb, cx, cp));
        if (is_physical(cm, cfg)) return cm;
    }
    throw ExhaustedAttempts("random_gaussian_cm: rejection sampling exhausted attempts");
}

CovarianceMatrix random_gaussian_cm(std::uint64_t seed, const CmSampleRanges& ranges, const Config& cfg) {
    Rng rng(seed);
    return random_gaussian_cm(rng, ranges, cfg);
}

StandardForm boundary_family(BoundaryKind kind, double epsilon, double lambda) {
    if (epsilon < 0.0 || epsilon > 1.0)
        throw OutOfRange("boundary_family: epsilon must lie in [0, 1]");
    if (!(lambda > 1.0))
        throw OutOfRange("boundary_family: lambda must exceed 1");
    const double cmax = (lambda * lambda - 1.0) / lambda;
    if (kind == BoundaryKind::separable)
        return StandardForm(lambda, lambda, epsilon * cmax, 0.0);
    return StandardForm(lambda, lambda, cmax, epsilon * cmax);
}

CovarianceMatrix apply_local_symplectic(const CovarianceMatrix& cm,
                                        const Eigen::Matrix2d& s_a,
                                        const Eigen::Matrix2d& s_b,
                                        const Config& cfg) {
    if (std::abs(s_a.determinant() - 1.0) > 1e-10 || std::abs(s_b.determinant() - 1.0) > 1e-10)
        throw NotSymplectic("apply_local_symplectic: blocks must have unit determinant");
    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    s.block<2, 2>(0, 0) = s_a;
    s.block<2, 2>(2, 2) = s_b;
    return CovarianceMatrix(s * cm.mat() * s.transpose(), cfg);
}

} // namespace cvbit
