#pragma once

#include "cvbit/config.hpp"
#include "cvbit/fock.hpp"
#include "cvbit/gaussian.hpp"

#include <string>

namespace cvbit {

enum class FamilyKind {
    tmsv,
    bell_phi_plus,
    bell_phi_minus,
    bell_psi_plus,
    bell_psi_minus,
    photon_subtracted,
    mixture,
    qutrit_h,
    gaussian, // user-specified standard form
};

/// Parameters of a catalog family, parsed from the plain-text mini-format
/// `kind=...;r=...;T=...;p=...` (order-insensitive, unknown keys rejected).
struct FamilyParams {
    FamilyKind kind = FamilyKind::tmsv;
    double r = 0.0;      // squeezing, natural units
    double t = 1.0;      // beam splitter transmittivity
    double p = 0.5;      // weight
    double lambda_a = 1.0, lambda_b = 1.0, cx = 0.0, cp = 0.0; // kind=gaussian only

    double big_lambda() const; // tanh(r)

    static FamilyParams parse(const std::string& spec);
    static const char* kind_name(FamilyKind kind);
};

/// Squeezing report convention: r_dB = (20 / ln 10) r.
double squeezing_db_from_r(double r);
double squeezing_r_from_db(double db);

// --- two-mode squeezed vacuum ---------------------------------------------

struct TmsvState {
    StandardForm sf;          // (cosh 2r, cosh 2r, sinh 2r, sinh 2r)
    CovarianceMatrix cm;
    FockPureState fock;       // diagonal c_n = tanh^n r / cosh r
};

/// Both representations; `cutoff_override` < 0 selects the smallest cutoff
/// whose boundary mass is below cfg.tail_tol.
TmsvState tmsv(double r, const Config& cfg = default_config(), int cutoff_override = -1);

double tmsv_q(double r);          // (2/pi) arctan(sinh 2r)
double tmsv_negativity(double r); // (e^{2r} - 1) / 2

// --- photonic Bell-like states ---------------------------------------------

struct BellState {
    FockPureState state;
    double negativity; // sqrt(p (1-p))
    double q;          // (4/pi) sqrt(p (1-p))
};

BellState bell_state(FamilyKind kind, double p);

// --- photon-subtracted states ----------------------------------------------

/// Coefficient c_n = (n+1) q^n (1 - q^2)^{3/2} / sqrt(q^2 + 1) with q = T tanh r.
double ps_coefficient(int n, double q);

/// Closed-form negativity 2/(1 - T Lambda) - 1/(1 + T^2 Lambda^2) - 1.
double ps_negativity(double r, double t);

/// Sum of all coefficients, Sigma c_n = (1-q^2)^{3/2} / (sqrt(q^2+1) (1-q)^2);
/// the Schmidt representation gives N = ((Sigma c_n)^2 - 1) / 2.
double ps_coefficient_sum(double r, double t);

/// Smallest cutoff with Sigma_{n > K} c_n below `tol` (linear tail; stricter
/// than the probability tail, needed when comparing against closed forms).
int ps_cutoff_for_sum_tail(double r, double t, double tol, const Config& cfg = default_config());

struct PhotonSubtractedState {
    FockPureState state;
    double negativity; // closed form
};

PhotonSubtractedState photon_subtracted(double r, double t,
                                        const Config& cfg = default_config(),
                                        int cutoff_override = -1);

/// Q(psi_ps) as the double series over opposite-parity index pairs, evaluated
/// in log space, summed by diagonal bands m+n = const; converged when the
/// last five bands contribute less than cfg.series_band_tol.
double q_ps_series(double r, double t, int n_max = -1, const Config& cfg = default_config());

/// One series term (m < n, m + n odd); exposed for term-by-term checks
/// against the sign-overlap contraction 2 c_m c_n S_{mn}^2.
double q_ps_series_term(int m, int n, double q);

// --- mixture of squeezed vacuum and vacuum ---------------------------------

struct MixtureState {
    FockDensityMatrix rho;
    double negativity; // p (e^{2r} - 1) / 2
    double q;          // (2p/pi) arctan(N_m [1/(2 N_m + p) + 1/p])
};

MixtureState mixture_tmsv_vacuum(double r, double p, const Config& cfg = default_config(),
                                 int cutoff_override = -1);

double mixture_negativity(double r, double p);
double mixture_q(double r, double p);

// --- qutrit counterexample --------------------------------------------------

/// |00>/sqrt(2) + (|02> + |20>)/2: entangled but with Q = 0 (its correlations
/// live above second moments).
FockPureState qutrit_h();

} // namespace cvbit
