#pragma once

#include "cvbit/config.hpp"
#include "cvbit/fock.hpp"
#include "cvbit/gaussian.hpp"

#include <functional>

namespace cvbit {

/// Local quadrature angles. Sign-binning is pi-periodic up to the sign of E,
/// so angles are reported reduced into [0, pi).
struct AnglePair {
    double theta = 0.0;
    double phi = 0.0;

    static double normalize(double angle);
    AnglePair normalized() const { return {normalize(theta), normalize(phi)}; }
};

struct OptimizeSettings {
    int grid_resolution = 32;
    int refine_passes = 60;
    double angle_tol = 1e-9;
    double value_tol = 1e-10;

    static OptimizeSettings from_config(const Config& cfg);
};

struct CorrelationResult {
    double q = 0.0;
    double theta_star = 0.0;
    double phi_star = 0.0;
    double e_at_optimum = 0.0;
    int grid_resolution = 0;
    int refine_iterations = 0;
};

/// Normalized strength of bit correlations B = |P_equal - P_different| from the
/// four joint sign probabilities. Throws AllZero when all inputs vanish.
double strength_from_probabilities(double p_pp, double p_pm, double p_mp, double p_mm);

/// sup_{theta, phi} |E(theta, phi)| over [0, pi)^2: coarse grid scan followed
/// by coordinate-wise golden-section refinement. Deterministic; ties between
/// equal grid optima resolve to the lexicographically smallest angles.
CorrelationResult optimize_q(const std::function<double(double, double)>& e,
                             const OptimizeSettings& settings = {});
CorrelationResult optimize_q(const CovarianceMatrix& cm,
                             const OptimizeSettings& settings = {},
                             const Config& cfg = default_config());
CorrelationResult optimize_q(const FockPureState& psi,
                             const OptimizeSettings& settings = {},
                             const Config& cfg = default_config());
CorrelationResult optimize_q(const FockDensityMatrix& rho,
                             const OptimizeSettings& settings = {},
                             const Config& cfg = default_config());

/// Max over the two modes of |P_+ - P_-| for the marginal sign outcome at the
/// given angles. Zero-mean Gaussian marginals are even, so the covariance
/// route returns 0 identically; Fock states contract the dressed reduced
/// density matrix with the sign overlaps.
double fairness_check(const CovarianceMatrix& cm, const AnglePair& angles);
double fairness_check(const FockPureState& psi, const AnglePair& angles,
                      const Config& cfg = default_config());
double fairness_check(const FockDensityMatrix& rho, const AnglePair& angles,
                      const Config& cfg = default_config());

} // namespace cvbit
