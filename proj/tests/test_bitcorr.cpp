#include "cvbit/bitcorr.hpp"
#include "cvbit/catalog.hpp"
#include "cvbit/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace cvbit;

namespace {
constexpr double kQTmsvHalf = 0.5511659713428300;
} // namespace

TEST_CASE("strength from joint probabilities") {
    CHECK(strength_from_probabilities(0.25, 0.25, 0.25, 0.25) == 0.0);
    CHECK(strength_from_probabilities(0.5, 0.0, 0.0, 0.5) == 1.0);
    CHECK(strength_from_probabilities(0.1, 0.4, 0.4, 0.1) == doctest::Approx(0.6).epsilon(1e-14));
    // unnormalized counts work the same way
    CHECK(strength_from_probabilities(10, 40, 40, 10) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK_THROWS_AS(strength_from_probabilities(0, 0, 0, 0), AllZero);
    CHECK_THROWS_AS(strength_from_probabilities(-0.1, 0.4, 0.4, 0.1), OutOfRange);
}

TEST_CASE("angle normalization") {
    CHECK(AnglePair::normalize(0.0) == 0.0);
    CHECK(AnglePair::normalize(M_PI) == doctest::Approx(0.0));
    CHECK(AnglePair::normalize(1.5 * M_PI) == doctest::Approx(0.5 * M_PI));
    CHECK(AnglePair::normalize(-0.25 * M_PI) == doctest::Approx(0.75 * M_PI));
}

TEST_CASE("optimizer: vacuum in both representations") {
    CHECK(optimize_q(CovarianceMatrix::vacuum()).q == 0.0);

    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(2, 2);
    c(0, 0) = 1.0;
    CHECK(optimize_q(FockPureState::from_coeffs(c)).q < 1e-12);
}

TEST_CASE("optimizer: squeezed vacuum against the closed form") {
    const TmsvState ts = tmsv(0.5);
    const CorrelationResult res = optimize_q(ts.cm);
    CHECK(res.q == doctest::Approx(kQTmsvHalf).epsilon(1e-9));
    CHECK(res.theta_star == 0.0);
    CHECK(res.phi_star == 0.0);
    CHECK(res.q == std::abs(res.e_at_optimum));
}

TEST_CASE("optimizer: Bell state optimum and angle relation") {
    const BellState bell = bell_state(FamilyKind::bell_phi_minus, 0.5);
    const CorrelationResult res = optimize_q(bell.state);
    CHECK(res.q == doctest::Approx(2.0 / M_PI).epsilon(1e-9));
    // E = -(4/pi) N cos(theta + phi): |E| peaks on both theta + phi = 0 and
    // theta + phi = pi; the lexicographic tie-break lands on the first, where
    // the bits are anticorrelated. The positively correlated representative
    // sits on the pi line.
    const double sum = res.theta_star + res.phi_star;
    CHECK(std::abs(std::abs(std::cos(sum)) - 1.0) < 1e-8);
    CHECK(res.e_at_optimum == doctest::Approx(-2.0 / M_PI).epsilon(1e-9));
    CHECK(e_fock(bell.state, M_PI / 2, M_PI / 2) == doctest::Approx(2.0 / M_PI).epsilon(1e-9));

    const auto s = sign_overlap_matrix(bell.state.cutoff());
    const FockCorrelator corr(bell.state, *s);
    const double brute =
        oracles::brute_force_q([&](double th, double ph) { return corr.e(th, ph); }, 512);
    CHECK(res.q >= brute - 1e-9);
}

TEST_CASE("optimizer: refinement never loses the grid value") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const CovarianceMatrix cm = random_gaussian_cm(rng);
        const CorrelationResult res = optimize_q(cm);
        const int grid = res.grid_resolution;
        double grid_best = 0.0;
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j)
                grid_best = std::max(grid_best,
                                     std::abs(e_gaussian(cm, i * M_PI / grid, j * M_PI / grid)));
        CHECK(res.q >= grid_best - 1e-12 * (1.0 + grid_best)); // ulp-tie slack

        CHECK(res.q <= 1.0);
        CHECK(res.q == std::abs(res.e_at_optimum));
        CHECK(res.theta_star >= 0.0);
        CHECK(res.theta_star < M_PI);
        CHECK(res.phi_star >= 0.0);
        CHECK(res.phi_star < M_PI);
    }
}

TEST_CASE("optimizer: product states stay at zero") {
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const double la = 1.0 + 4.0 * rng.uniform(), lb = 1.0 + 4.0 * rng.uniform();
        const CovarianceMatrix cm =
            CovarianceMatrix::from_standard_form(StandardForm(la, lb, 0.0, 0.0));
        CHECK(optimize_q(cm).q < 1e-9);
    }
}

TEST_CASE("optimizer: deterministic") {
    // non-trivial optimum away from the grid: locally squeezed random state
    const CovarianceMatrix base = random_gaussian_cm(777);
    const CovarianceMatrix cm =
        apply_local_symplectic(base, rotation2(0.37) * squeeze2(1.4), rotation2(1.11));
    const CorrelationResult a = optimize_q(cm);
    const CorrelationResult b = optimize_q(cm);
    CHECK(a.q == b.q);
    CHECK(a.theta_star == b.theta_star);
    CHECK(a.phi_star == b.phi_star);
}

TEST_CASE("optimizer agrees across engines") {
    const TmsvState ts = tmsv(0.5, default_config(), 40);
    const double q_gauss = optimize_q(ts.cm).q;
    const double q_fock = optimize_q(ts.fock).q;
    CHECK(q_gauss == doctest::Approx(q_fock).epsilon(1e-6));
}

TEST_CASE("fairness: Gaussian states and catalog Fock states") {
    CHECK(fairness_check(CovarianceMatrix::vacuum(), {0.3, 1.2}) == 0.0);
    CHECK(fairness_check(random_gaussian_cm(5), {0.0, 0.0}) == 0.0);

    const PhotonSubtractedState ps = photon_subtracted(0.4, 0.9);
    for (double th : {0.0, 0.7, 2.1})
        CHECK(fairness_check(ps.state, {th, 2.0 * th}) < 1e-8);

    const BellState bell = bell_state(FamilyKind::bell_psi_plus, 0.3);
    CHECK(fairness_check(bell.state, {0.4, 0.9}) < 1e-8);

    CHECK(fairness_check(qutrit_h(), {0.2, 1.7}) < 1e-8);

    const MixtureState mix = mixture_tmsv_vacuum(0.5, 0.6);
    CHECK(fairness_check(mix.rho, {0.0, 0.0}) < 1e-8);
}

TEST_CASE("fairness flags a biased state") {
    // (|0> + |1>)/sqrt(2) has a displaced marginal on mode A
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(3, 3);
    c(0, 0) = 1.0 / std::sqrt(2.0);
    c(1, 0) = 1.0 / std::sqrt(2.0);
    const FockPureState psi = FockPureState::from_coeffs(c);
    CHECK(fairness_check(psi, {0.0, 0.0}) > 0.5);
}
