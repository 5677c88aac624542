#include "cvbit/gaussian.hpp"
#include "cvbit/bitcorr.hpp"
#include "cvbit/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace cvbit;

namespace {

// frozen reference values
constexpr double kQTmsvHalf = 0.5511659713428300;   // (2/pi) arctan(sinh 1)
constexpr double kNTmsvHalf = 0.8591409142295226;   // (e - 1) / 2

CovarianceMatrix tmsv_cm(double r) {
    return CovarianceMatrix::from_standard_form(
        StandardForm(std::cosh(2 * r), std::cosh(2 * r), std::sinh(2 * r), std::sinh(2 * r)));
}

} // namespace

TEST_CASE("covariance matrix rejects asymmetric input") {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 1) = 0.5;
    CHECK_THROWS_AS(CovarianceMatrix{m}, NonSymmetric);
}

TEST_CASE("standard form of the vacuum") {
    const StandardForm sf = standard_form(CovarianceMatrix::vacuum());
    CHECK(sf.lambda_a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sf.lambda_b == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(sf.cx) < 1e-12);
    CHECK(std::abs(sf.cp) < 1e-12);
}

TEST_CASE("standard form of a squeezed vacuum is itself") {
    const StandardForm sf = standard_form(tmsv_cm(0.5));
    CHECK(sf.lambda_a == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
    CHECK(sf.lambda_b == doctest::Approx(std::cosh(1.0)).epsilon(1e-12));
    CHECK(sf.cx == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
    CHECK(sf.cp == doctest::Approx(std::sinh(1.0)).epsilon(1e-12));
}

TEST_CASE("standard form undoes random local rotations") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const CovarianceMatrix cm = random_gaussian_cm(rng);
        const StandardForm ref = standard_form(cm);
        const CovarianceMatrix rotated = apply_local_symplectic(
            cm, rotation2(rng.uniform() * 2 * M_PI), rotation2(rng.uniform() * 2 * M_PI));
        const StandardForm back = standard_form(rotated);
        CHECK(back.lambda_a == doctest::Approx(ref.lambda_a).epsilon(1e-9));
        CHECK(back.lambda_b == doctest::Approx(ref.lambda_b).epsilon(1e-9));
        CHECK(back.cx == doctest::Approx(ref.cx).epsilon(1e-9));
        CHECK(std::abs(back.cp - ref.cp) < 1e-9);
    }
}

TEST_CASE("standard form preserves the four local invariants") {
    Rng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const CovarianceMatrix cm = random_gaussian_cm(rng);
        const Eigen::Matrix2d sq_a = rotation2(rng.uniform()) * squeeze2(0.6 + rng.uniform());
        const Eigen::Matrix2d sq_b = rotation2(rng.uniform()) * squeeze2(0.6 + rng.uniform());
        const CovarianceMatrix moved = apply_local_symplectic(cm, sq_a, sq_b);

        const StandardForm sf = standard_form(moved);
        const double det_a = moved.block_a().determinant();
        const double det_b = moved.block_b().determinant();
        const double det_c = moved.block_cross().determinant();
        const double det_g = moved.mat().determinant();
        CHECK(sf.lambda_a * sf.lambda_a == doctest::Approx(det_a).epsilon(1e-10));
        CHECK(sf.lambda_b * sf.lambda_b == doctest::Approx(det_b).epsilon(1e-10));
        CHECK(-sf.cx * sf.cp == doctest::Approx(det_c).epsilon(1e-9));
        const double det_g_sf = (sf.lambda_a * sf.lambda_b - sf.cx * sf.cx) *
                                (sf.lambda_a * sf.lambda_b - sf.cp * sf.cp);
        CHECK(det_g_sf == doctest::Approx(det_g).epsilon(1e-9));
        CHECK(sf.cx >= std::abs(sf.cp) - 1e-12);
    }
}

TEST_CASE("physicality: examples") {
    CHECK(is_physical(CovarianceMatrix::vacuum()));
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 0) = m(1, 1) = 0.5;
    CHECK_FALSE(is_physical(CovarianceMatrix{m}));
    CHECK(is_physical(tmsv_cm(0.7)));
}

TEST_CASE("physicality agrees with the gamma + i Omega oracle") {
    // includes states where lambda >= 1 and Delta <= 1 + det gamma both hold
    // yet the state is unphysical (both symplectic eigenvalues below 1)
    const StandardForm tricky(1.02, 1.02, 0.25, 0.25);
    const CovarianceMatrix tricky_cm = CovarianceMatrix::from_standard_form(tricky);
    CHECK_FALSE(oracles::psd_physical(tricky_cm));
    CHECK_FALSE(is_physical(tricky_cm));

    for (double cx : {0.0, 0.5, 1.0, 1.5, 1.9, 1.95, 2.0}) {
        for (double cp : {-1.9, -1.0, 0.0, 0.7, 1.4, 1.9}) {
            if (cx < std::abs(cp)) continue;
            const CovarianceMatrix cm =
                CovarianceMatrix::from_standard_form(StandardForm(2.0, 2.0, cx, cp));
            CHECK(is_physical(cm) == oracles::psd_physical(cm));
        }
    }
}

TEST_CASE("invariant bundle satisfies its defining identities") {
    Rng rng(88);
    for (int trial = 0; trial < 30; ++trial) {
        const StandardForm sf = standard_form(random_gaussian_cm(rng));
        const GaussianInvariants inv = gaussian_invariants(sf);
        const double det_cross = -sf.cx * sf.cp;
        CHECK(inv.delta_tilde == doctest::Approx(inv.delta - 4.0 * det_cross).epsilon(1e-12));
        CHECK(inv.nu_tilde > 0.0);
    }
}

TEST_CASE("correlation coefficient outside [-1, 1] is rejected") {
    // not a physical state: cross correlation above the variance bound
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 2) = m(2, 0) = 1.5;
    CHECK_THROWS_AS(e_gaussian(CovarianceMatrix{m}, 0.0, 0.0), DomainError);
}

TEST_CASE("negativity: vacuum and squeezed vacuum") {
    CHECK(negativity_gaussian(CovarianceMatrix::vacuum()).negativity == 0.0);

    const NegativityResult res = negativity_gaussian(tmsv_cm(0.5));
    CHECK(res.invariants.nu_tilde == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(res.negativity == doctest::Approx(kNTmsvHalf).epsilon(1e-12));

    Eigen::Matrix4d bad = Eigen::Matrix4d::Identity();
    bad(0, 0) = bad(1, 1) = 0.25;
    CHECK_THROWS_AS(negativity_gaussian(CovarianceMatrix{bad}), Unphysical);
}

TEST_CASE("negativity: separable boundary family stays at zero") {
    for (double eps : {0.0, 0.3, 0.7, 1.0}) {
        const StandardForm sf = boundary_family(BoundaryKind::separable, eps, 3.0);
        const NegativityResult res =
            negativity_gaussian(CovarianceMatrix::from_standard_form(sf));
        CHECK(res.invariants.nu_tilde >= 1.0 - 1e-9);
        CHECK(res.negativity == 0.0);
    }
}

TEST_CASE("closed-form Q: examples") {
    CHECK(q_gaussian_closed(StandardForm(1.7, 2.4, 0.0, 0.0)) == 0.0);
    CHECK(q_gaussian_closed(standard_form(tmsv_cm(0.5))) ==
          doctest::Approx(kQTmsvHalf).epsilon(1e-12));
    // lambda -> infinity rendered at 1e3: Q approaches 1
    const StandardForm perf = boundary_family(BoundaryKind::perfect, 0.5, 1e3);
    CHECK(q_gaussian_closed(perf) == doctest::Approx(1.0).epsilon(2e-3));
    CHECK_THROWS_AS(q_gaussian_closed(StandardForm(1.0, 1.0, 1.0, 0.0)), DomainError);
}

TEST_CASE("sign-binned correlation at fixed angles") {
    const CovarianceMatrix vac = CovarianceMatrix::vacuum();
    for (double th : {0.0, 0.4, 1.2})
        CHECK(e_gaussian(vac, th, 2.0 * th) == 0.0);

    const CovarianceMatrix cm = tmsv_cm(0.5);
    CHECK(e_gaussian(cm, 0.0, 0.0) == doctest::Approx(kQTmsvHalf).epsilon(1e-12));
    CHECK(std::abs(e_gaussian(cm, 0.0, M_PI / 2)) < 1e-12);
    // depends only on theta + phi for the symmetric squeezed vacuum
    CHECK(e_gaussian(cm, M_PI / 8, M_PI / 8) == doctest::Approx(e_gaussian(cm, 0.0, M_PI / 4)));
}

TEST_CASE("closed form equals the numeric double integral") {
    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const CovarianceMatrix cm = random_gaussian_cm(rng);
        const StandardForm sf = standard_form(cm);
        const double closed = q_gaussian_closed(sf);
        const double numeric = oracles::numeric_sign_binned_e(
            sf.lambda_a, sf.lambda_b, sf.cx);
        CHECK(closed == doctest::Approx(numeric).epsilon(1e-6));
    }
}

TEST_CASE("arcsin route equals arctan route") {
    for (int i = 0; i <= 200; ++i) {
        const double rho = -1.0 + 1e-9 + (2.0 - 2e-9) * i / 200.0;
        const double lhs = (2.0 / M_PI) * std::asin(rho);
        const double rhs = (2.0 / M_PI) * std::atan(rho / std::sqrt(1.0 - rho * rho));
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("pure-state curve from negativity") {
    CHECK(q_pure_of_negativity(0.0) == 0.0);
    CHECK(q_pure_of_negativity(kNTmsvHalf) == doctest::Approx(kQTmsvHalf).epsilon(1e-12));
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double q = q_pure_of_negativity(0.25 * i);
        CHECK(q > prev);
        prev = q;
    }
    CHECK_THROWS_AS(q_pure_of_negativity(-0.1), DomainError);
}

TEST_CASE("random states: physical, deterministic, majorizing") {
    const CovarianceMatrix a = random_gaussian_cm(123);
    const CovarianceMatrix b = random_gaussian_cm(123);
    CHECK(a.mat() == b.mat());

    Rng rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        const CovarianceMatrix cm = random_gaussian_cm(rng);
        CHECK(is_physical(cm));
        const StandardForm sf = standard_form(cm);
        const double q = q_gaussian_closed(sf);
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
        const double n = negativity_gaussian(cm).negativity;
        CHECK(q >= q_pure_of_negativity(n) - 1e-9);
    }
}

TEST_CASE("boundary families: examples") {
    const StandardForm product = boundary_family(BoundaryKind::separable, 0.0, 1e3);
    CHECK(q_gaussian_closed(product) == 0.0);

    const StandardForm sep = boundary_family(BoundaryKind::separable, 1.0, 1e3);
    CHECK(negativity_gaussian(CovarianceMatrix::from_standard_form(sep)).negativity == 0.0);
    CHECK(q_gaussian_closed(sep) > 0.97);

    const StandardForm perf = boundary_family(BoundaryKind::perfect, 1.0, 1e3);
    CHECK(perf.cx == doctest::Approx(perf.cp));
    CHECK(q_gaussian_closed(perf) > 0.97);

    CHECK_THROWS_AS(boundary_family(BoundaryKind::separable, 1.5, 10.0), OutOfRange);
    CHECK_THROWS_AS(boundary_family(BoundaryKind::perfect, 0.5, 0.9), OutOfRange);
}

TEST_CASE("local symplectic congruence") {
    const CovarianceMatrix vac = CovarianceMatrix::vacuum();
    const CovarianceMatrix same =
        apply_local_symplectic(vac, Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity());
    CHECK(same.mat() == vac.mat());

    const double z = 1.7;
    const CovarianceMatrix squeezed =
        apply_local_symplectic(vac, squeeze2(z), Eigen::Matrix2d::Identity());
    CHECK(squeezed.mat()(0, 0) == doctest::Approx(1.0 / (z * z)).epsilon(1e-14));
    CHECK(squeezed.mat()(1, 1) == doctest::Approx(z * z).epsilon(1e-14));
    CHECK(squeezed.mat()(2, 2) == 1.0);

    Eigen::Matrix2d not_symplectic = 2.0 * Eigen::Matrix2d::Identity();
    CHECK_THROWS_AS(apply_local_symplectic(vac, not_symplectic, Eigen::Matrix2d::Identity()),
                    NotSymplectic);
}

TEST_CASE("Q is invariant under local symplectics after re-optimization") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const CovarianceMatrix cm = random_gaussian_cm(rng);
        const double q0 = optimize_q(cm).q;
        const Eigen::Matrix2d sa =
            rotation2(rng.uniform() * M_PI) * squeeze2(0.5 + 1.5 * rng.uniform());
        const Eigen::Matrix2d sb =
            rotation2(rng.uniform() * M_PI) * squeeze2(0.5 + 1.5 * rng.uniform());
        const double q1 = optimize_q(apply_local_symplectic(cm, sa, sb)).q;
        CHECK(q0 == doctest::Approx(q1).epsilon(1e-6));
    }
}
