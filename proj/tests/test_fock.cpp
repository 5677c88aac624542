#include "cvbit/fock.hpp"
#include "cvbit/catalog.hpp"
#include "cvbit/errors.hpp"
#include "cvbit/gaussian.hpp"
#include "cvbit/quadrature.hpp"
#include "cvbit/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace cvbit;

namespace {
constexpr double kS01 = 0.7978845608028654; // sqrt(2/pi)
constexpr double kS12 = 0.5641895835477563; // 1/sqrt(pi)
} // namespace

TEST_CASE("oscillator eigenfunctions: normalization and variance convention") {
    const QuadRule gh = gauss_hermite(64);
    CHECK(oracles::gh_overlap(0, 0, gh) == doctest::Approx(1.0).epsilon(1e-13));

    // vacuum variance 1: integral x^2 psi_0^2 dx = 1 with x = sqrt(2) u
    double var = 0.0;
    for (std::size_t i = 0; i < gh.size(); ++i) {
        const double h0 = oracles::hermite_gh_part(0, gh.x[i]);
        var += gh.w[i] * 2.0 * gh.x[i] * gh.x[i] * h0 * h0;
    }
    var *= std::sqrt(2.0);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-13));

    CHECK(hermite_psi(1, 0.0) == 0.0);
    CHECK(hermite_psi(0, 0.7) == doctest::Approx(std::pow(2 * M_PI, -0.25) *
                                                 std::exp(-0.7 * 0.7 / 4.0)));
}

TEST_CASE("oscillator eigenfunctions: orthonormality up to n = 20") {
    const QuadRule gh = gauss_hermite(64);
    for (int m = 0; m <= 20; ++m)
        for (int n = m; n <= 20; ++n) {
            const double overlap = oracles::gh_overlap(m, n, gh);
            CHECK(std::abs(overlap - (m == n ? 1.0 : 0.0)) < 1e-10);
        }
}

TEST_CASE("hermite_psi_all matches single evaluations") {
    std::vector<double> values(31);
    hermite_psi_all(30, 1.3, values);
    for (int n = 0; n <= 30; ++n)
        CHECK(values[n] == doctest::Approx(hermite_psi(n, 1.3)).epsilon(1e-14));
}

TEST_CASE("reciprocal gamma vanishes at the poles") {
    CHECK(reciprocal_gamma(0.0) == 0.0);
    CHECK(reciprocal_gamma(-1.0) == 0.0);
    CHECK(reciprocal_gamma(-7.0) == 0.0);
    CHECK(reciprocal_gamma(1.0) == doctest::Approx(1.0));
    CHECK(reciprocal_gamma(0.5) == doctest::Approx(1.0 / std::sqrt(M_PI)));
    // Gamma(-1/2) = -2 sqrt(pi)
    CHECK(reciprocal_gamma(-0.5) == doctest::Approx(-1.0 / (2.0 * std::sqrt(M_PI))));
    // Gamma(-3/2) = 4 sqrt(pi) / 3
    CHECK(reciprocal_gamma(-1.5) == doctest::Approx(3.0 / (4.0 * std::sqrt(M_PI))));
}

TEST_CASE("sign overlaps: closed-form spot values and parity") {
    const SignOverlapMatrix s(12);
    CHECK(s(0, 0) == 0.0);
    CHECK(s(3, 5) == 0.0);
    CHECK(s(0, 1) == doctest::Approx(kS01).epsilon(1e-12));
    CHECK(s(1, 0) == doctest::Approx(kS01).epsilon(1e-12));
    CHECK(s(1, 2) == doctest::Approx(kS12).epsilon(1e-12));
    // integral_0^inf psi_0 psi_3 has closed form -1/sqrt(3 pi)
    CHECK(s(0, 3) == doctest::Approx(-1.0 / std::sqrt(3.0 * M_PI)).epsilon(1e-12));
    for (int m = 0; m <= 12; ++m)
        for (int n = 0; n <= 12; ++n) {
            if ((m + n) % 2 == 0) CHECK(s(m, n) == 0.0);
            CHECK(std::abs(s(m, n)) <= 1.0 + 1e-12);
            CHECK(s(m, n) == s(n, m));
        }
}

TEST_CASE("sign overlaps reproduce the photon-subtracted series term by term") {
    // ideal two-photon subtraction: T = 1, Lambda = 0.5
    const double q = 0.5;
    const SignOverlapMatrix s(25);
    for (int m = 0; m < 25; ++m)
        for (int n = m + 1; n <= 25; ++n) {
            if ((m + n) % 2 == 0) continue;
            const double direct = 2.0 * ps_coefficient(m, q) * ps_coefficient(n, q) *
                                  s(m, n) * s(m, n);
            const double series = q_ps_series_term(m, n, q);
            CHECK(direct == doctest::Approx(series).epsilon(1e-8));
        }
}

TEST_CASE("pure states validate norm and report boundary mass") {
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(3, 3);
    c(0, 0) = 0.6;
    c(1, 1) = 0.8;
    const FockPureState psi = FockPureState::from_coeffs(c);
    CHECK(psi.cutoff() == 2);
    CHECK(psi.tail_mass == 0.0);

    c(0, 0) = 0.5; // no longer normalized
    CHECK_THROWS_AS(FockPureState::from_coeffs(c), NotNormalized);
    const FockPureState renorm = FockPureState::from_coeffs(c, true);
    CHECK(renorm.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("phase rotations: identity, periodicity, covariance consistency") {
    const TmsvState ts = tmsv(0.3, default_config(), 30);
    const FockPureState same = rotate_mode_phases(ts.fock, 0.0, 0.0);
    CHECK((same.coeffs - ts.fock.coeffs).cwiseAbs().maxCoeff() == 0.0);

    const FockPureState cycled = rotate_mode_phases(ts.fock, 2.0 * M_PI, 2.0 * M_PI);
    CHECK((cycled.coeffs - ts.fock.coeffs).cwiseAbs().maxCoeff() < 1e-12);

    // rotating the state matches rotating the covariance matrix
    Rng rng(3);
    for (int trial = 0; trial < 4; ++trial) {
        const double alpha = rng.uniform() * M_PI, beta = rng.uniform() * M_PI;
        const FockPureState rotated = rotate_mode_phases(ts.fock, alpha, beta);
        const CovarianceMatrix cm_rot =
            apply_local_symplectic(ts.cm, rotation2(alpha), rotation2(beta));
        for (double th : {0.0, 0.7})
            for (double ph : {0.3, 1.9})
                CHECK(e_fock(rotated, th, ph) ==
                      doctest::Approx(e_gaussian(cm_rot, th, ph)).epsilon(1e-6));
    }
}

TEST_CASE("Fock and Gaussian engines agree on an embedded squeezed vacuum") {
    const TmsvState ts = tmsv(0.3, default_config(), 30);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const double th = i * M_PI / 8.0, ph = j * M_PI / 8.0;
            CHECK(std::abs(e_fock(ts.fock, th, ph) - e_gaussian(ts.cm, th, ph)) < 1e-6);
        }
}

TEST_CASE("sign-binned correlation of catalog states") {
    // product state: zero at all angles
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(2, 2);
    c(0, 0) = 1.0;
    const FockPureState vac = FockPureState::from_coeffs(c);
    for (double th : {0.0, 0.5, 1.5})
        CHECK(e_fock(vac, th, 3.0 * th) == 0.0);

    // Bell state at its optimum
    const BellState bell = bell_state(FamilyKind::bell_phi_plus, 0.5);
    CHECK(e_fock(bell.state, 0.0, 0.0) == doctest::Approx(2.0 / M_PI).epsilon(1e-12));

    // photon-subtracted state against the closed series
    const Config cfg;
    const PhotonSubtractedState ps = photon_subtracted(0.4, 0.9, cfg, 60);
    const double series = q_ps_series(0.4, 0.9);
    CHECK(e_fock(ps.state, 0.0, 0.0) == doctest::Approx(series).epsilon(1e-6));
}

TEST_CASE("tail mass guard") {
    const TmsvState truncated = tmsv(1.0, default_config(), 4); // far too small a cutoff
    CHECK(truncated.fock.tail_mass > default_config().tail_tol);
    CHECK_THROWS_AS(e_fock(truncated.fock, 0.0, 0.0), TailMassExceeded);
}

TEST_CASE("negativity via partial transpose: examples") {
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(2, 2);
    c(0, 0) = 1.0;
    CHECK(negativity_fock(FockDensityMatrix::from_pure(FockPureState::from_coeffs(c))) == 0.0);

    const BellState bell = bell_state(FamilyKind::bell_psi_minus, 0.3);
    CHECK(negativity_fock(FockDensityMatrix::from_pure(bell.state)) ==
          doctest::Approx(std::sqrt(0.21)).epsilon(1e-10));
    CHECK(bell.negativity == doctest::Approx(std::sqrt(0.21)).epsilon(1e-14));
}

TEST_CASE("negativity: ideal photon subtraction reaches the closed form") {
    // T = 1, Lambda = 0.5 -> N = 2/(1-0.5) - 1/1.25 - 1 = 2.2
    const double r = std::atanh(0.5);
    CHECK(ps_negativity(r, 1.0) == doctest::Approx(2.2).epsilon(1e-12));

    const Config cfg;
    const int cutoff = ps_cutoff_for_sum_tail(r, 1.0, 1e-9, cfg);
    const PhotonSubtractedState ps = photon_subtracted(r, 1.0, cfg, cutoff);
    CHECK(negativity_fock(FockDensityMatrix::from_pure(ps.state)) ==
          doctest::Approx(2.2).epsilon(1e-6));
    CHECK(negativity_pure_schmidt(ps.state) == doctest::Approx(2.2).epsilon(1e-8));
}

TEST_CASE("negativity checks its inputs") {
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(4, 4);
    bad(0, 1) = 1.0; // not Hermitian
    FockDensityMatrix rho;
    rho.rho = bad;
    rho.dim = 2;
    CHECK_THROWS_AS(negativity_fock(rho), NotHermitian);

    rho.rho = 0.5 * Eigen::MatrixXcd::Identity(4, 4); // trace 2
    CHECK_THROWS_AS(negativity_fock(rho), NotNormalized);
}

TEST_CASE("negativity is invariant under local phase rotations") {
    const BellState bell = bell_state(FamilyKind::bell_phi_minus, 0.4);
    const double n0 = negativity_fock(FockDensityMatrix::from_pure(bell.state));
    const FockPureState rotated = rotate_mode_phases(bell.state, 0.9, 2.2);
    const double n1 = negativity_fock(FockDensityMatrix::from_pure(rotated));
    CHECK(std::abs(n0 - n1) < 1e-10);
}

TEST_CASE("Schmidt route equals partial-transpose route on random pure states") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXcd c(4, 4);
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n)
                c(m, n) = std::complex<double>(rng.normal(), rng.normal());
        const FockPureState psi = FockPureState::from_coeffs(c, true);
        const double pt = negativity_fock(FockDensityMatrix::from_pure(psi));
        const double schmidt = negativity_pure_schmidt(psi);
        CHECK(pt == doctest::Approx(schmidt).epsilon(1e-10));
    }
}

TEST_CASE("cross-representation agreement for the squeezed vacuum") {
    const Config cfg;
    const TmsvState ts = tmsv(0.5, cfg, 40);
    const double n_gauss = negativity_gaussian(ts.cm, cfg).negativity;
    const double n_fock = negativity_pure_schmidt(ts.fock);
    CHECK(n_gauss == doctest::Approx(n_fock).epsilon(1e-6));
    // full partial-transpose eigensolve at cutoff 40
    const double n_pt = negativity_fock(FockDensityMatrix::from_pure(ts.fock), cfg);
    CHECK(n_gauss == doctest::Approx(n_pt).epsilon(1e-6));
}
