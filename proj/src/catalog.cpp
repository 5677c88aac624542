#include "cvbit/catalog.hpp"
#include "cvbit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace cvbit {

double FamilyParams::big_lambda() const { return std::tanh(r); }

double squeezing_db_from_r(double r) { return 20.0 / std::log(10.0) * r; }
double squeezing_r_from_db(double db) { return db * std::log(10.0) / 20.0; }

namespace {

const std::map<std::string, FamilyKind>& kind_table() {
    static const std::map<std::string, FamilyKind> table = {
        {"tmsv", FamilyKind::tmsv},
        {"bell_phi_plus", FamilyKind::bell_phi_plus},
        {"bell_phi_minus", FamilyKind::bell_phi_minus},
        {"bell_psi_plus", FamilyKind::bell_psi_plus},
        {"bell_psi_minus", FamilyKind::bell_psi_minus},
        {"photon_subtracted", FamilyKind::photon_subtracted},
        {"mixture", FamilyKind::mixture},
        {"qutrit_h", FamilyKind::qutrit_h},
        {"gaussian", FamilyKind::gaussian},
    };
    return table;
}

double parse_value(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParseError("state spec: bad value for '" + key + "': " + text);
    }
}

std::set<std::string> allowed_keys(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::tmsv: return {"r"};
        case FamilyKind::bell_phi_plus:
        case FamilyKind::bell_phi_minus:
        case FamilyKind::bell_psi_plus:
        case FamilyKind::bell_psi_minus: return {"p"};
        case FamilyKind::photon_subtracted: return {"r", "T"};
        case FamilyKind::mixture: return {"r", "p"};
        case FamilyKind::qutrit_h: return {};
        case FamilyKind::gaussian: return {"lambda_a", "lambda_b", "cx", "cp"};
    }
    return {};
}

} // namespace

const char* FamilyParams::kind_name(FamilyKind kind) {
    for (const auto& [name, k] : kind_table())
        if (k == kind) return name.c_str();
    return "?";
}

FamilyParams FamilyParams::parse(const std::string& spec) {
    std::map<std::string, std::string> fields;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ParseError("state spec: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        if (fields.count(key)) throw ParseError("state spec: duplicate key '" + key + "'");
        fields[key] = value;
    }
    const auto kind_it = fields.find("kind");
    if (kind_it == fields.end()) throw ParseError("state spec: missing 'kind'");
    const auto kind_entry = kind_table().find(kind_it->second);
    if (kind_entry == kind_table().end())
        throw ParseError("state spec: unknown kind '" + kind_it->second + "'");

    FamilyParams params;
    params.kind = kind_entry->second;
    const auto allowed = allowed_keys(params.kind);
    for (const auto& [key, value] : fields) {
        if (key == "kind") continue;
        if (!allowed.count(key))
            throw ParseError("state spec: key '" + key + "' not valid for kind '" +
                             kind_it->second + "'");
        const double v = parse_value(key, value);
        if (key == "r") params.r = v;
        else if (key == "T") params.t = v;
        else if (key == "p") params.p = v;
        else if (key == "lambda_a") params.lambda_a = v;
        else if (key == "lambda_b") params.lambda_b = v;
        else if (key == "cx") params.cx = v;
        else if (key == "cp") params.cp = v;
    }
    if (params.r < 0.0) throw OutOfRange("state spec: r must be nonnegative");
    if (params.t < 0.0 || params.t > 1.0) throw OutOfRange("state spec: T must lie in [0, 1]");
    if (params.p < 0.0 || params.p > 1.0) throw OutOfRange("state spec: p must lie in [0, 1]");
    return params;
}

// --- two-mode squeezed vacuum -----------------------------------------------

TmsvState tmsv(double r, const Config& cfg, int cutoff_override) {
    if (r < 0.0) throw OutOfRange("tmsv: r must be nonnegative");
    const StandardForm sf(std::cosh(2.0 * r), std::cosh(2.0 * r), std::sinh(2.0 * r),
                          std::sinh(2.0 * r));

    const double q = std::tanh(r);
    int cutoff = cutoff_override;
    if (cutoff < 0) {
        // boundary probability |c_K|^2 = q^{2K} / cosh^2 r
        cutoff = 1;
        while (cutoff < cfg.cutoff_cap &&
               std::pow(q, 2 * cutoff) / (std::cosh(r) * std::cosh(r)) >= cfg.tail_tol)
            ++cutoff;
        if (cutoff >= cfg.cutoff_cap &&
            std::pow(q, 2 * cutoff) / (std::cosh(r) * std::cosh(r)) >= cfg.tail_tol)
            throw CutoffCapExceeded("tmsv: required cutoff exceeds cap");
    }
    if (cutoff > cfg.cutoff_cap) throw CutoffCapExceeded("tmsv: cutoff exceeds cap");

    Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) coeffs(n, n) = std::pow(q, n) / std::cosh(r);
    return TmsvState{sf, CovarianceMatrix::from_standard_form(sf),
                     FockPureState::from_coeffs(std::move(coeffs), true, cfg)};
}

double tmsv_q(double r) { return (2.0 / M_PI) * std::atan(std::sinh(2.0 * r)); }
double tmsv_negativity(double r) { return 0.5 * (std::exp(2.0 * r) - 1.0); }

// --- Bell-like states ---------------------------------------------------------

BellState bell_state(FamilyKind kind, double p) {
    if (p < 0.0 || p > 1.0) throw OutOfRange("bell_state: p must lie in [0, 1]");
    const double a = std::sqrt(p), b = std::sqrt(1.0 - p);
    Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(3, 3);
    switch (kind) {
        case FamilyKind::bell_phi_plus:
            coeffs(0, 0) = a;
            coeffs(1, 1) = b;
            break;
        case FamilyKind::bell_phi_minus:
            coeffs(0, 0) = a;
            coeffs(1, 1) = -b;
            break;
        case FamilyKind::bell_psi_plus:
            coeffs(0, 1) = a;
            coeffs(1, 0) = b;
            break;
        case FamilyKind::bell_psi_minus:
            coeffs(0, 1) = a;
            coeffs(1, 0) = -b;
            break;
        default:
            throw OutOfRange("bell_state: kind is not a Bell family");
    }
    const double nb = std::sqrt(p * (1.0 - p));
    return BellState{FockPureState::from_coeffs(std::move(coeffs)), nb, 4.0 / M_PI * nb};
}

// --- photon-subtracted states -------------------------------------------------

double ps_coefficient(int n, double q) {
    if (n < 0) throw OutOfRange("ps_coefficient: n must be nonnegative");
    if (q < 0.0 || q >= 1.0) throw OutOfRange("ps_coefficient: q must lie in [0, 1)");
    return (n + 1) * std::pow(q, n) * std::pow(1.0 - q * q, 1.5) / std::sqrt(q * q + 1.0);
}

double ps_negativity(double r, double t) {
    const double q = t * std::tanh(r);
    return 2.0 / (1.0 - q) - 1.0 / (1.0 + q * q) - 1.0;
}

double ps_coefficient_sum(double r, double t) {
    const double q = t * std::tanh(r);
    return std::pow(1.0 - q * q, 1.5) / (std::sqrt(q * q + 1.0) * (1.0 - q) * (1.0 - q));
}

int ps_cutoff_for_sum_tail(double r, double t, double tol, const Config& cfg) {
    const double q = t * std::tanh(r);
    if (q == 0.0) return 1;
    double tail = ps_coefficient_sum(r, t);
    for (int k = 0; k <= cfg.cutoff_cap; ++k) {
        tail -= ps_coefficient(k, q);
        if (tail < tol) return std::max(1, k + 1); // one empty boundary level
    }
    throw CutoffCapExceeded("ps_cutoff_for_sum_tail: cutoff cap exceeded");
}

PhotonSubtractedState photon_subtracted(double r, double t, const Config& cfg,
                                        int cutoff_override) {
    if (r < 0.0) throw OutOfRange("photon_subtracted: r must be nonnegative");
    if (t < 0.0 || t > 1.0) throw OutOfRange("photon_subtracted: T must lie in [0, 1]");
    const double q = t * std::tanh(r);

    int cutoff = cutoff_override;
    if (cutoff < 0) {
        cutoff = 1;
        while (cutoff < cfg.cutoff_cap) {
            const double c = ps_coefficient(cutoff, q);
            if (c * c < cfg.tail_tol) break;
            ++cutoff;
        }
        const double c_edge = ps_coefficient(cutoff, q);
        if (c_edge * c_edge >= cfg.tail_tol)
            throw CutoffCapExceeded("photon_subtracted: required cutoff exceeds cap");
    }
    if (cutoff > cfg.cutoff_cap)
        throw CutoffCapExceeded("photon_subtracted: cutoff exceeds cap");

    Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
    for (int n = 0; n <= cutoff; ++n) coeffs(n, n) = ps_coefficient(n, q);
    return PhotonSubtractedState{FockPureState::from_coeffs(std::move(coeffs), true, cfg),
                                 ps_negativity(r, t)};
}

namespace {

double log_ps_coefficient(int n, double q) {
    return std::log(n + 1.0) + n * std::log(q) + 1.5 * std::log1p(-q * q) -
           0.5 * std::log1p(q * q);
}

} // namespace

double q_ps_series_term(int m, int n, double q) {
    if (m >= n) throw OutOfRange("q_ps_series_term: requires m < n");
    if ((m + n) % 2 == 0) return 0.0; // equal parity: both F factors vanish
    // Exactly one of F(m,n), F(n,m) is nonzero; with mo the odd index and ne
    // the even one the surviving factor is 1 / [Gamma(-mo/2) Gamma((1-ne)/2)].
    const int mo = (m % 2 == 1) ? m : n;
    const int ne = (m % 2 == 1) ? n : m;
    const double log_term = (m + n + 3) * std::log(2.0) + std::log(M_PI) +
                            log_ps_coefficient(m, q) + log_ps_coefficient(n, q) -
                            2.0 * std::log(static_cast<double>(n - m)) -
                            std::lgamma(m + 1.0) - std::lgamma(n + 1.0) -
                            2.0 * std::lgamma(-0.5 * mo) - 2.0 * std::lgamma(0.5 * (1.0 - ne));
    return std::exp(log_term);
}

double q_ps_series(double r, double t, int n_max, const Config& cfg) {
    if (r < 0.0) throw OutOfRange("q_ps_series: r must be nonnegative");
    if (t < 0.0 || t > 1.0) throw OutOfRange("q_ps_series: T must lie in [0, 1]");
    if (n_max < 0) n_max = cfg.series_nmax;
    if (n_max > cfg.series_nmax)
        throw OutOfRange("q_ps_series: n_max exceeds the configured cap");
    const double q = t * std::tanh(r);
    if (q == 0.0) return 0.0;

    // All terms are nonnegative; sum over diagonal bands m + n = s (odd s
    // only, by parity) and stop when the trailing five bands are negligible.
    double total = 0.0;
    std::deque<double> last_bands;
    for (int s = 1; s <= 2 * n_max - 1; s += 2) {
        double band = 0.0;
        const int m_lo = std::max(0, s - n_max);
        for (int m = m_lo; m <= (s - 1) / 2; ++m) band += q_ps_series_term(m, s - m, q);
        total += band;
        last_bands.push_back(band);
        if (last_bands.size() > 5) last_bands.pop_front();
        if (last_bands.size() == 5) {
            double trailing = 0.0;
            for (double b : last_bands) trailing += b;
            if (trailing < cfg.series_band_tol) return total;
        }
    }
    throw NotConverged("q_ps_series: band sum did not converge within n_max");
}

// --- mixtures -----------------------------------------------------------------

double mixture_negativity(double r, double p) { return p * tmsv_negativity(r); }

double mixture_q(double r, double p) {
    const double nm = mixture_negativity(r, p);
    if (p <= 0.0 || nm <= 0.0) return 0.0;
    return (2.0 * p / M_PI) * std::atan(nm * (1.0 / (2.0 * nm + p) + 1.0 / p));
}

MixtureState mixture_tmsv_vacuum(double r, double p, const Config& cfg, int cutoff_override) {
    if (p < 0.0 || p > 1.0) throw OutOfRange("mixture_tmsv_vacuum: p must lie in [0, 1]");
    const TmsvState ts = tmsv(r, cfg, cutoff_override);
    const int d = ts.fock.dim();
    const FockDensityMatrix pure = FockDensityMatrix::from_pure(ts.fock);
    Eigen::MatrixXcd rho = p * pure.rho;
    rho(0, 0) += (1.0 - p);
    return MixtureState{FockDensityMatrix::from_matrix(std::move(rho), d, cfg),
                        mixture_negativity(r, p), mixture_q(r, p)};
}

// --- qutrit -------------------------------------------------------------------

FockPureState qutrit_h() {
    Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(4, 4);
    coeffs(0, 0) = 1.0 / std::sqrt(2.0);
    coeffs(0, 2) = 0.5;
    coeffs(2, 0) = 0.5;
    return FockPureState::from_coeffs(std::move(coeffs));
}

} // namespace cvbit
