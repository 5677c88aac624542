#include "cvbit/bitcorr.hpp"
#include "cvbit/errors.hpp"

#include <cmath>

namespace cvbit {

double AnglePair::normalize(double angle) {
    double a = std::fmod(angle, M_PI);
    if (a < 0.0) a += M_PI;
    if (a >= M_PI) a = 0.0; // fmod rounding at the boundary
    return a;
}

OptimizeSettings OptimizeSettings::from_config(const Config& cfg) {
    OptimizeSettings s;
    s.grid_resolution = cfg.opt_grid;
    s.refine_passes = cfg.opt_refine_passes;
    s.angle_tol = cfg.opt_angle_tol;
    s.value_tol = cfg.opt_value_tol;
    return s;
}

double strength_from_probabilities(double p_pp, double p_pm, double p_mp, double p_mm) {
    if (p_pp < 0.0 || p_pm < 0.0 || p_mp < 0.0 || p_mm < 0.0)
        throw OutOfRange("strength_from_probabilities: probabilities must be nonnegative");
    const double total = p_pp + p_pm + p_mp + p_mm;
    if (total <= 0.0)
        throw AllZero("strength_from_probabilities: all probabilities are zero");
    const double p_equal = (p_pp + p_mm) / total;
    return std::abs(2.0 * p_equal - 1.0);
}

namespace {

// Golden-section maximization of f on [lo, hi] down to width `tol`.
// Returns the midpoint of the final bracket.
double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

CorrelationResult optimize_q(const std::function<double(double, double)>& e,
                             const OptimizeSettings& settings) {
    const int grid = settings.grid_resolution;
    if (grid < 1) throw OutOfRange("optimize_q: grid resolution must be >= 1");
    const double step = M_PI / grid;

    // Lexicographic scan keeps the smallest angles on ties. Values within a
    // few ulps count as ties so that degenerate ridges (e.g. symmetric states,
    // where E depends on theta + phi only) resolve to the first optimum.
    double best_theta = 0.0, best_phi = 0.0, best_abs = -1.0;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double th = i * step, ph = j * step;
            const double v = std::abs(e(th, ph));
            if (v > best_abs + 1e-12 * (1.0 + best_abs)) {
                best_abs = v;
                best_theta = th;
                best_phi = ph;
            }
        }
    }
    const double grid_best = best_abs;

    const double grid_theta = best_theta, grid_phi = best_phi;

    // Golden-section line searches along an evolving direction pair seeded
    // with the coordinate axes (Powell). Each cycle's net displacement
    // replaces the older direction, so the search tracks the curved ridges
    // that local squeezing produces; plain coordinate descent creeps on them.
    int passes = 0;
    double u1x = step, u1y = 0.0, u2x = 0.0, u2y = step;
    const auto search = [&](double dx, double dy, double reach) {
        const double len = std::hypot(dx, dy);
        if (len < 1e-300) return;
        const double t = golden_max(
            [&](double s) { return std::abs(e(best_theta + s * dx, best_phi + s * dy)); },
            -reach, reach, settings.angle_tol / len);
        const double cand_theta = best_theta + t * dx;
        const double cand_phi = best_phi + t * dy;
        const double value = std::abs(e(cand_theta, cand_phi));
        if (value > best_abs) {
            best_abs = value;
            best_theta = cand_theta;
            best_phi = cand_phi;
        }
        ++passes;
    };
    while (passes < settings.refine_passes) {
        const double start_theta = best_theta, start_phi = best_phi, start_abs = best_abs;
        search(u1x, u1y, 1.5);
        search(u2x, u2y, 1.5);
        double dx = best_theta - start_theta, dy = best_phi - start_phi;
        const double dlen = std::hypot(dx, dy);
        if (dlen > settings.angle_tol) {
            dx *= step / dlen;
            dy *= step / dlen;
            search(dx, dy, 2.0);
            u1x = u2x;
            u1y = u2y;
            u2x = dx;
            u2y = dy;
            if (std::abs(u1x * u2y - u1y * u2x) < 0.05 * step * step) {
                u1x = step;
                u1y = 0.0;
                u2x = 0.0;
                u2y = step;
            }
        }
        if (best_abs - start_abs < settings.value_tol && dlen < settings.angle_tol) break;
    }

    // Report angles reduced into [0, pi); re-evaluate there and fall back to
    // the grid optimum if periodic reduction cost anything, so the result is
    // never below the best probed grid value.
    double theta_n = AnglePair::normalize(best_theta);
    double phi_n = AnglePair::normalize(best_phi);
    if (std::abs(e(theta_n, phi_n)) < grid_best) {
        theta_n = grid_theta;
        phi_n = grid_phi;
    }
    const double e_opt = e(theta_n, phi_n);

    CorrelationResult result;
    result.q = std::abs(e_opt);
    result.e_at_optimum = e_opt;
    result.theta_star = theta_n;
    result.phi_star = phi_n;
    result.grid_resolution = grid;
    result.refine_iterations = passes;
    return result;
}

CorrelationResult optimize_q(const CovarianceMatrix& cm, const OptimizeSettings& settings,
                             const Config&) {
    return optimize_q([&cm](double th, double ph) { return e_gaussian(cm, th, ph); }, settings);
}

CorrelationResult optimize_q(const FockPureState& psi, const OptimizeSettings& settings,
                             const Config& cfg) {
    if (psi.tail_mass > cfg.tail_tol)
        throw TailMassExceeded("optimize_q: state boundary mass exceeds tail tolerance");
    const auto s = sign_overlap_matrix(psi.cutoff(), cfg);
    const FockCorrelator corr(psi, *s);
    return optimize_q([&corr, &cfg](double th, double ph) { return corr.e(th, ph, cfg); }, settings);
}

CorrelationResult optimize_q(const FockDensityMatrix& rho, const OptimizeSettings& settings,
                             const Config& cfg) {
    if (rho.tail_mass > cfg.tail_tol)
        throw TailMassExceeded("optimize_q: state boundary mass exceeds tail tolerance");
    const auto s = sign_overlap_matrix(rho.cutoff(), cfg);
    const FockCorrelator corr(rho, *s);
    return optimize_q([&corr, &cfg](double th, double ph) { return corr.e(th, ph, cfg); }, settings);
}

double fairness_check(const CovarianceMatrix&, const AnglePair&) {
    // First moments are zero by construction; every rotated marginal is an
    // even density, so the sign outcomes are exactly balanced.
    return 0.0;
}

namespace {

double fock_mode_asymmetry(const Eigen::MatrixXcd& reduced, double angle,
                           const SignOverlapMatrix& s) {
    const int d = static_cast<int>(reduced.rows());
    std::complex<double> acc = 0.0;
    for (int m = 0; m < d; ++m)
        for (int mp = 0; mp < d; ++mp) {
            if ((m + mp) % 2 == 0) continue;
            const double arg = angle * (m - mp);
            acc += reduced(m, mp) * std::complex<double>(std::cos(arg), std::sin(arg)) * s(m, mp);
        }
    return std::abs(acc);
}

} // namespace

double fairness_check(const FockPureState& psi, const AnglePair& angles, const Config& cfg) {
    const auto s = sign_overlap_matrix(psi.cutoff(), cfg);
    return std::max(fock_mode_asymmetry(reduced_mode_a(psi), angles.theta, *s),
                    fock_mode_asymmetry(reduced_mode_b(psi), angles.phi, *s));
}

double fairness_check(const FockDensityMatrix& rho, const AnglePair& angles, const Config& cfg) {
    const auto s = sign_overlap_matrix(rho.cutoff(), cfg);
    return std::max(fock_mode_asymmetry(reduced_mode_a(rho), angles.theta, *s),
                    fock_mode_asymmetry(reduced_mode_b(rho), angles.phi, *s));
}

} // namespace cvbit
