#include "cvbit/fock.hpp"
#include "cvbit/errors.hpp"
#include "cvbit/quadrature.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <vector>

namespace cvbit {

using std::complex;

double hermite_psi(int n, double x) {
    if (n < 0) throw OutOfRange("hermite_psi: n must be nonnegative");
    const double psi0 = std::pow(2.0 * M_PI, -0.25) * std::exp(-0.25 * x * x);
    if (n == 0) return psi0;
    double prev = psi0;
    double cur = x * psi0; // psi_1 = x psi_0
    for (int k = 1; k < n; ++k) {
        const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) /
                            std::sqrt(static_cast<double>(k + 1));
        prev = cur;
        cur = next;
    }
    return cur;
}

void hermite_psi_all(int n_max, double x, std::span<double> out) {
    if (n_max < 0 || out.size() < static_cast<std::size_t>(n_max + 1))
        throw OutOfRange("hermite_psi_all: bad bounds");
    out[0] = std::pow(2.0 * M_PI, -0.25) * std::exp(-0.25 * x * x);
    if (n_max == 0) return;
    out[1] = x * out[0];
    for (int k = 1; k < n_max; ++k)
        out[k + 1] = (x * out[k] - std::sqrt(static_cast<double>(k)) * out[k - 1]) /
                     std::sqrt(static_cast<double>(k + 1));
}

double reciprocal_gamma(double x) {
    const double nearest = std::round(x);
    if (x <= 0.5 && std::abs(x - nearest) < 1e-12 && nearest <= 0.0) return 0.0;
    // sign(Gamma(x)) alternates between consecutive negative integers
    double sign = 1.0;
    if (x < 0.0) {
        const long k = static_cast<long>(std::floor(x));
        if (k % 2 != 0) sign = -1.0; // floor odd <=> Gamma negative on (k, k+1)
    }
    return sign * std::exp(-std::lgamma(x));
}

SignOverlapMatrix::SignOverlapMatrix(int cutoff, const Config& cfg) : cutoff_(cutoff) {
    if (cutoff < 0 || cutoff > cfg.cutoff_cap)
        throw OutOfRange("SignOverlapMatrix: cutoff outside [0, cutoff_cap]");
    const int dim = cutoff + 1;
    s_ = Eigen::MatrixXd::Zero(dim, dim);

    // Half-line rule covering the classical turning point of psi_cutoff.
    const double x_max = std::sqrt(4.0 * cutoff + 2.0) + 10.0;
    const int nodes = std::max(cfg.quad_min_nodes, cfg.quad_nodes_factor * cutoff);
    const int per_panel = 16;
    const int panels = (nodes + per_panel - 1) / per_panel;
    const QuadRule rule = composite_gauss_legendre(0.0, x_max, panels, per_panel);

    // Psi(n, k) = psi_n(x_k) for every level at once, then S = 2 Psi W Psi^T
    // restricted to opposite-parity pairs.
    const int nq = static_cast<int>(rule.size());
    Eigen::MatrixXd psi(dim, nq);
    std::vector<double> col(dim);
    for (int k = 0; k < nq; ++k) {
        hermite_psi_all(cutoff, rule.x[k], col);
        for (int n = 0; n < dim; ++n) psi(n, k) = col[n] * std::sqrt(rule.w[k]);
    }
    const Eigen::MatrixXd overlap = 2.0 * (psi * psi.transpose());
    for (int m = 0; m < dim; ++m)
        for (int mp = 0; mp < dim; ++mp)
            if ((m + mp) % 2 == 1) s_(m, mp) = overlap(m, mp);
}

std::shared_ptr<const SignOverlapMatrix> sign_overlap_matrix(int cutoff, const Config& cfg) {
    static std::mutex mtx;
    static std::map<int, std::shared_ptr<const SignOverlapMatrix>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(cutoff);
    if (it != cache.end()) return it->second;
    auto mat = std::make_shared<const SignOverlapMatrix>(cutoff, cfg);
    cache.emplace(cutoff, mat);
    return mat;
}

namespace {

double boundary_mass(const Eigen::MatrixXcd& coeffs) {
    const int dim = static_cast<int>(coeffs.rows());
    double mass = 0.0;
    for (int m = 0; m < dim; ++m) mass += std::norm(coeffs(m, dim - 1));
    for (int n = 0; n + 1 < dim; ++n) mass += std::norm(coeffs(dim - 1, n));
    return mass;
}

} // namespace

FockPureState FockPureState::from_coeffs(Eigen::MatrixXcd c, bool renormalize, const Config& cfg) {
    if (c.rows() != c.cols() || c.rows() < 1)
        throw OutOfRange("FockPureState: coefficient matrix must be square and nonempty");
    const double norm = std::sqrt(c.squaredNorm());
    if (renormalize) {
        if (norm == 0.0) throw NotNormalized("FockPureState: zero state cannot be normalized");
        c /= norm;
    } else if (std::abs(norm * norm - 1.0) > cfg.trace_tol) {
        throw NotNormalized("FockPureState: coefficients are not unit-norm");
    }
    FockPureState psi;
    psi.coeffs = std::move(c);
    psi.tail_mass = boundary_mass(psi.coeffs);
    return psi;
}

FockDensityMatrix FockDensityMatrix::from_pure(const FockPureState& psi) {
    const int d = psi.dim();
    Eigen::VectorXcd vec(d * d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) vec(m * d + n) = psi.coeffs(m, n);
    FockDensityMatrix rho;
    rho.rho = vec * vec.adjoint();
    rho.dim = d;
    rho.tail_mass = psi.tail_mass;
    return rho;
}

FockDensityMatrix FockDensityMatrix::from_matrix(Eigen::MatrixXcd m, int dim, const Config& cfg) {
    if (m.rows() != m.cols() || m.rows() != static_cast<Eigen::Index>(dim) * dim)
        throw OutOfRange("FockDensityMatrix: matrix must be (dim^2) x (dim^2)");
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > cfg.hermiticity_tol * scale)
        throw NotHermitian("FockDensityMatrix: matrix is not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > cfg.trace_tol || std::abs(m.trace().imag()) > cfg.trace_tol)
        throw NotNormalized("FockDensityMatrix: trace is not 1");
    FockDensityMatrix rho;
    rho.rho = 0.5 * (m + m.adjoint());
    rho.dim = dim;
    double mass = 0.0;
    for (int mm = 0; mm < dim; ++mm)
        for (int nn = 0; nn < dim; ++nn)
            if (mm == dim - 1 || nn == dim - 1) mass += rho.rho(mm * dim + nn, mm * dim + nn).real();
    rho.tail_mass = mass;
    return rho;
}

double FockDensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

FockPureState rotate_mode_phases(const FockPureState& psi, double theta, double phi) {
    FockPureState out = psi;
    const int d = psi.dim();
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            const double arg = theta * m + phi * n;
            out.coeffs(m, n) *= complex<double>(std::cos(arg), std::sin(arg));
        }
    }
    return out;
}

FockDensityMatrix rotate_mode_phases(const FockDensityMatrix& rho, double theta, double phi) {
    FockDensityMatrix out = rho;
    const int d = rho.dim;
    Eigen::VectorXcd phase(d * d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            const double arg = theta * m + phi * n;
            phase(m * d + n) = complex<double>(std::cos(arg), std::sin(arg));
        }
    out.rho = phase.asDiagonal() * rho.rho * phase.conjugate().asDiagonal();
    return out;
}

FockCorrelator::FockCorrelator(const FockPureState& psi, const SignOverlapMatrix& s)
    : dim_(psi.dim()), g_(Eigen::MatrixXcd::Zero(2 * psi.dim() - 1, 2 * psi.dim() - 1)) {
    if (s.cutoff() < psi.cutoff())
        throw OutOfRange("FockCorrelator: sign-overlap cutoff below state cutoff");
    const int d = dim_;
    for (int m = 0; m < d; ++m)
        for (int mp = 0; mp < d; ++mp) {
            if ((m + mp) % 2 == 0) continue;
            const double s_a = s(m, mp);
            for (int n = 0; n < d; ++n)
                for (int np = 0; np < d; ++np) {
                    if ((n + np) % 2 == 0) continue;
                    const complex<double> c = psi.coeffs(m, n) * std::conj(psi.coeffs(mp, np));
                    g_(m - mp + d - 1, n - np + d - 1) += c * s_a * s(n, np);
                }
        }
}

FockCorrelator::FockCorrelator(const FockDensityMatrix& rho, const SignOverlapMatrix& s)
    : dim_(rho.dim), g_(Eigen::MatrixXcd::Zero(2 * rho.dim - 1, 2 * rho.dim - 1)) {
    if (s.cutoff() < rho.cutoff())
        throw OutOfRange("FockCorrelator: sign-overlap cutoff below state cutoff");
    const int d = dim_;
    for (int m = 0; m < d; ++m)
        for (int mp = 0; mp < d; ++mp) {
            if ((m + mp) % 2 == 0) continue;
            const double s_a = s(m, mp);
            for (int n = 0; n < d; ++n)
                for (int np = 0; np < d; ++np) {
                    if ((n + np) % 2 == 0) continue;
                    g_(m - mp + d - 1, n - np + d - 1) +=
                        rho.rho(m * d + n, mp * d + np) * s_a * s(n, np);
                }
        }
}

double FockCorrelator::e(double theta, double phi, const Config& cfg) const {
    const int d = dim_;
    Eigen::VectorXcd pa(2 * d - 1), pb(2 * d - 1);
    for (int shift = -(d - 1); shift <= d - 1; ++shift) {
        pa(shift + d - 1) = complex<double>(std::cos(theta * shift), std::sin(theta * shift));
        pb(shift + d - 1) = complex<double>(std::cos(phi * shift), std::sin(phi * shift));
    }
    const complex<double> value = (pa.transpose() * (g_ * pb))(0);
    if (std::abs(value.imag()) > cfg.imag_residual_tol)
        throw DomainError("FockCorrelator: imaginary residual exceeds tolerance");
    return value.real();
}

namespace {

void check_tail(double tail_mass, const Config& cfg) {
    if (tail_mass > cfg.tail_tol)
        throw TailMassExceeded("e_fock: state boundary mass exceeds tail tolerance");
}

} // namespace

double e_fock(const FockPureState& psi, double theta, double phi, const Config& cfg) {
    check_tail(psi.tail_mass, cfg);
    const auto s = sign_overlap_matrix(psi.cutoff(), cfg);
    return FockCorrelator(psi, *s).e(theta, phi, cfg);
}

double e_fock(const FockDensityMatrix& rho, double theta, double phi, const Config& cfg) {
    check_tail(rho.tail_mass, cfg);
    const auto s = sign_overlap_matrix(rho.cutoff(), cfg);
    return FockCorrelator(rho, *s).e(theta, phi, cfg);
}

double negativity_fock(const FockDensityMatrix& rho, const Config& cfg) {
    const int d = rho.dim;
    const double scale = 1.0 + rho.rho.cwiseAbs().maxCoeff();
    if ((rho.rho - rho.rho.adjoint()).cwiseAbs().maxCoeff() > cfg.hermiticity_tol * scale)
        throw NotHermitian("negativity_fock: density matrix is not Hermitian");
    const complex<double> tr = rho.rho.trace();
    if (std::abs(tr.real() - 1.0) > cfg.trace_tol || std::abs(tr.imag()) > cfg.trace_tol)
        throw NotNormalized("negativity_fock: trace is not 1");

    Eigen::MatrixXcd pt(d * d, d * d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
            for (int mp = 0; mp < d; ++mp)
                for (int np = 0; np < d; ++np)
                    pt(m * d + n, mp * d + np) = rho.rho(m * d + np, mp * d + n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt, Eigen::EigenvaluesOnly);
    double sum_abs = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        sum_abs += std::abs(es.eigenvalues()(i));
    return std::max(0.0, 0.5 * (sum_abs - 1.0));
}

double negativity_pure_schmidt(const FockPureState& psi) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(psi.coeffs);
    const double sum = svd.singularValues().sum();
    return std::max(0.0, 0.5 * (sum * sum - 1.0));
}

Eigen::MatrixXcd reduced_mode_a(const FockPureState& psi) {
    return psi.coeffs * psi.coeffs.adjoint();
}

Eigen::MatrixXcd reduced_mode_b(const FockPureState& psi) {
    return psi.coeffs.transpose() * psi.coeffs.conjugate();
}

Eigen::MatrixXcd reduced_mode_a(const FockDensityMatrix& rho) {
    const int d = rho.dim;
    Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(d, d);
    for (int m = 0; m < d; ++m)
        for (int mp = 0; mp < d; ++mp)
            for (int n = 0; n < d; ++n) red(m, mp) += rho.rho(m * d + n, mp * d + n);
    return red;
}

Eigen::MatrixXcd reduced_mode_b(const FockDensityMatrix& rho) {
    const int d = rho.dim;
    Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n)
        for (int np = 0; np < d; ++np)
            for (int m = 0; m < d; ++m) red(n, np) += rho.rho(m * d + n, m * d + np);
    return red;
}

} // namespace cvbit
