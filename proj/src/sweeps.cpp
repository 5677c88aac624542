#include "cvbit/sweeps.hpp"
#include "cvbit/bitcorr.hpp"
#include "cvbit/errors.hpp"
#include "cvbit/numformat.hpp"
#include "cvbit/rng.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cvbit {

double GridSpec::at(int i) const {
    if (steps < 1) throw OutOfRange("GridSpec: steps must be >= 1");
    if (i < 0 || i >= steps) throw OutOfRange("GridSpec: index out of range");
    if (steps == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
}

void parallel_rows(int n, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mtx;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mtx);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min(workers, n);
    pool.reserve(count);
    for (int w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

namespace {

double scaled_negativity(double n) { return 2.0 * n / (1.0 + 2.0 * n); }

} // namespace

std::string fig1_csv(const Fig1Options& opt, const Config& cfg) {
    if (opt.samples < 1) throw OutOfRange("fig1: samples must be >= 1");

    // States are drawn serially so the stream depends only on the seed;
    // the per-row evaluation is what parallelizes.
    Rng rng(opt.seed);
    CmSampleRanges ranges;
    ranges.lambda_max = opt.lambda_max;
    std::vector<StandardForm> states;
    states.reserve(opt.samples);
    for (int i = 0; i < opt.samples; ++i)
        states.push_back(standard_form(random_gaussian_cm(rng, ranges, cfg), cfg));

    std::string csv = "tag,scaled_negativity,Q,lambda_a,lambda_b,c_x,c_p\n";
    std::vector<std::string> rows(states.size());
    parallel_rows(static_cast<int>(states.size()), opt.workers, [&](int i) {
        const StandardForm& sf = states[i];
        const NegativityResult neg =
            negativity_gaussian(CovarianceMatrix::from_standard_form(sf), cfg);
        rows[i] = csv_row({"sample", g12(scaled_negativity(neg.negativity)),
                           g12(q_gaussian_closed(sf)), g12(sf.lambda_a), g12(sf.lambda_b),
                           g12(sf.cx), g12(sf.cp)});
    });
    for (const auto& row : rows) csv += row;

    // Pure-state curve, uniformly in scaled negativity over the sample range.
    for (int i = 0; i < opt.curve_points; ++i) {
        const double s = 0.98 * static_cast<double>(i) / (opt.curve_points - 1);
        const double n = 0.5 * s / (1.0 - s);
        const double r = 0.5 * std::log1p(2.0 * n); // nu = e^{-2r} = 1/(1+2N)
        const StandardForm sf(std::cosh(2.0 * r), std::cosh(2.0 * r), std::sinh(2.0 * r),
                              std::sinh(2.0 * r));
        csv += csv_row({"pure_curve", g12(s), g12(q_pure_of_negativity(n)), g12(sf.lambda_a),
                        g12(sf.lambda_b), g12(sf.cx), g12(sf.cp)});
    }

    for (int i = 0; i < opt.family_points; ++i) {
        const double eps = static_cast<double>(i) / (opt.family_points - 1);
        const StandardForm sf = boundary_family(BoundaryKind::separable, eps, opt.family_lambda);
        const NegativityResult neg =
            negativity_gaussian(CovarianceMatrix::from_standard_form(sf), cfg);
        csv += csv_row({"separable", g12(scaled_negativity(neg.negativity)),
                        g12(q_gaussian_closed(sf)), g12(sf.lambda_a), g12(sf.lambda_b), g12(sf.cx),
                        g12(sf.cp)});
    }
    for (int i = 0; i < opt.family_points; ++i) {
        const double eps = static_cast<double>(i) / (opt.family_points - 1);
        const StandardForm sf = boundary_family(BoundaryKind::perfect, eps, opt.family_lambda);
        const NegativityResult neg =
            negativity_gaussian(CovarianceMatrix::from_standard_form(sf), cfg);
        csv += csv_row({"perfect", g12(scaled_negativity(neg.negativity)),
                        g12(q_gaussian_closed(sf)), g12(sf.lambda_a), g12(sf.lambda_b), g12(sf.cx),
                        g12(sf.cp)});
    }
    return csv;
}

Fig2Result fig2_csv(const Fig2Options& opt, const Config& cfg) {
    const int n_rows = opt.r.steps * opt.t.steps;
    std::vector<std::string> rows(n_rows);
    std::atomic<int> warnings{0};
    parallel_rows(n_rows, opt.workers, [&](int idx) {
        const double r = opt.r.at(idx / opt.t.steps);
        const double t = opt.t.at(idx % opt.t.steps);
        double q_ps = 0.0;
        bool converged = true;
        try {
            q_ps = q_ps_series(r, t, -1, cfg);
        } catch (const NotConverged&) {
            converged = false;
            warnings.fetch_add(1);
        }
        const double n_ps = ps_negativity(r, t);
        rows[idx] = csv_row({g12(r), g12(t), converged ? g12(q_ps) : "nan", g12(n_ps),
                             g12(tmsv_q(r)), g12(tmsv_negativity(r)),
                             g12(scaled_negativity(n_ps)), converged ? "1" : "0"});
    });
    std::string csv = "r,T,Q_ps,N_ps,Q_tmsv,N_tmsv,scaled_N_ps,converged\n";
    for (const auto& row : rows) csv += row;
    return Fig2Result{std::move(csv), warnings.load()};
}

std::string mixture_csv(const MixtureOptions& opt, const Config& cfg) {
    const int n_rows = opt.r.steps * opt.p.steps;
    std::vector<std::string> rows(n_rows);
    parallel_rows(n_rows, opt.workers, [&](int idx) {
        const double r = opt.r.at(idx / opt.p.steps);
        const double p = opt.p.at(idx % opt.p.steps);
        const MixtureState state = mixture_tmsv_vacuum(r, p, cfg);
        const CorrelationResult res =
            optimize_q(state.rho, OptimizeSettings::from_config(cfg), cfg);
        rows[idx] = csv_row({g12(r), g12(p), g12(state.negativity), g12(state.q), g12(res.q)});
    });
    std::string csv = "r,p,N_m,Q_analytic,Q_numeric\n";
    for (const auto& row : rows) csv += row;
    return csv;
}

nlohmann::json eval_report(const FamilyParams& params, const Config& cfg) {
    const OptimizeSettings settings = OptimizeSettings::from_config(cfg);
    nlohmann::json out;
    out["kind"] = FamilyParams::kind_name(params.kind);

    const auto fill_gaussian = [&](const CovarianceMatrix& cm) {
        const CorrelationResult res = optimize_q(cm, settings, cfg);
        out["Q"] = res.q;
        out["theta_star"] = res.theta_star;
        out["phi_star"] = res.phi_star;
        out["N"] = negativity_gaussian(cm, cfg).negativity;
        out["fairness"] = fairness_check(cm, {res.theta_star, res.phi_star});
        out["cutoff"] = 0;
        out["tail_mass"] = 0.0;
        out["representation"] = "gaussian";
    };
    const auto fill_fock = [&](const FockPureState& psi, double negativity) {
        const CorrelationResult res = optimize_q(psi, settings, cfg);
        out["Q"] = res.q;
        out["theta_star"] = res.theta_star;
        out["phi_star"] = res.phi_star;
        out["N"] = negativity;
        out["fairness"] = fairness_check(psi, {res.theta_star, res.phi_star}, cfg);
        out["cutoff"] = psi.cutoff();
        out["tail_mass"] = psi.tail_mass;
        out["representation"] = "fock";
    };

    switch (params.kind) {
        case FamilyKind::tmsv:
            fill_gaussian(tmsv(params.r, cfg).cm);
            break;
        case FamilyKind::gaussian:
            fill_gaussian(CovarianceMatrix::from_standard_form(
                StandardForm(params.lambda_a, params.lambda_b, params.cx, params.cp)));
            break;
        case FamilyKind::bell_phi_plus:
        case FamilyKind::bell_phi_minus:
        case FamilyKind::bell_psi_plus:
        case FamilyKind::bell_psi_minus: {
            const BellState bell = bell_state(params.kind, params.p);
            fill_fock(bell.state, bell.negativity);
            break;
        }
        case FamilyKind::photon_subtracted: {
            const PhotonSubtractedState ps = photon_subtracted(params.r, params.t, cfg);
            fill_fock(ps.state, ps.negativity);
            break;
        }
        case FamilyKind::qutrit_h: {
            const FockPureState psi = qutrit_h();
            fill_fock(psi, negativity_fock(FockDensityMatrix::from_pure(psi), cfg));
            break;
        }
        case FamilyKind::mixture: {
            const MixtureState mix = mixture_tmsv_vacuum(params.r, params.p, cfg);
            const CorrelationResult res = optimize_q(mix.rho, settings, cfg);
            out["Q"] = res.q;
            out["theta_star"] = res.theta_star;
            out["phi_star"] = res.phi_star;
            out["N"] = mix.negativity;
            out["fairness"] = fairness_check(mix.rho, {res.theta_star, res.phi_star}, cfg);
            out["cutoff"] = mix.rho.cutoff();
            out["tail_mass"] = mix.rho.tail_mass;
            out["representation"] = "fock";
            break;
        }
    }
    return out;
}

} // namespace cvbit
