#pragma once

#include "cvbit/catalog.hpp"
#include "cvbit/config.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>

namespace cvbit {

/// Inclusive uniform grid; steps == 1 degenerates to the lower endpoint.
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 1;

    double at(int i) const;
};

/// Run fn(0..n-1) across `workers` threads; any exception is rethrown on the
/// caller. Output arrays indexed by row keep results deterministic regardless
/// of scheduling.
void parallel_rows(int n, int workers, const std::function<void(int)>& fn);

struct Fig1Options {
    int samples = 18000;
    std::uint64_t seed = 20070611;
    double lambda_max = 9.0;
    int curve_points = 200;    // pure-state curve resolution
    int family_points = 101;   // epsilon resolution of the boundary families
    double family_lambda = 1e3;
    int workers = 1;
};

/// Scatter of random Gaussian states in the (scaled negativity, Q) plane,
/// with the pure-state curve and the two boundary families appended as
/// tagged rows. Columns:
///   tag,scaled_negativity,Q,lambda_a,lambda_b,c_x,c_p
std::string fig1_csv(const Fig1Options& opt, const Config& cfg = default_config());

struct Fig2Options {
    GridSpec r{0.0, 1.4, 29};
    GridSpec t{0.5, 1.0, 11};
    int workers = 1;
};

struct Fig2Result {
    std::string csv;
    int not_converged = 0;
};

/// Photon-subtracted vs squeezed-vacuum sweep. Columns:
///   r,T,Q_ps,N_ps,Q_tmsv,N_tmsv,scaled_N_ps,converged
Fig2Result fig2_csv(const Fig2Options& opt, const Config& cfg = default_config());

struct MixtureOptions {
    GridSpec r{0.1, 1.0, 10};
    GridSpec p{0.1, 1.0, 10};
    int workers = 1;
};

/// Columns: r,p,N_m,Q_analytic,Q_numeric
std::string mixture_csv(const MixtureOptions& opt, const Config& cfg = default_config());

/// Full report for one state: {Q, theta_star, phi_star, N, fairness, cutoff,
/// tail_mass} plus kind/representation annotations.
nlohmann::json eval_report(const FamilyParams& params, const Config& cfg = default_config());

} // namespace cvbit
