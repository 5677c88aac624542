// cvbit: bit quadrature correlations for two-mode continuous-variable states.
//
// Subcommands: eval, fig1, fig2, mixture, sample, selftest.
// Exit codes: 0 success, 2 usage/parse error, 3 numeric failure, 4 I/O error.

#include "cvbit/bitcorr.hpp"
#include "cvbit/catalog.hpp"
#include "cvbit/errors.hpp"
#include "cvbit/fock.hpp"
#include "cvbit/gaussian.hpp"
#include "cvbit/sampler.hpp"
#include "cvbit/sweeps.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using namespace cvbit;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

int run_selftest(const Config& cfg) {
    int failures = 0;
    const auto check = [&failures](const std::string& name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };

    // arcsin/arctan identity used by the closed forms
    {
        bool ok = true;
        for (int i = 0; i <= 100; ++i) {
            const double rho = -1.0 + 1e-9 + (2.0 - 2e-9) * i / 100.0;
            const double lhs = std::asin(rho);
            const double rhs = std::atan(rho / std::sqrt(1.0 - rho * rho));
            if (std::abs(lhs - rhs) > 1e-12) ok = false;
        }
        check("arcsin/arctan identity", ok);
    }
    // half-line sign overlap against the closed forms
    {
        const auto s = sign_overlap_matrix(8, cfg);
        const bool ok = std::abs((*s)(0, 1) - std::sqrt(2.0 / M_PI)) < 1e-12 &&
                        std::abs((*s)(1, 2) - 1.0 / std::sqrt(M_PI)) < 1e-12 &&
                        (*s)(0, 0) == 0.0 && (*s)(2, 4) == 0.0;
        check("sign-overlap quadrature", ok);
    }
    // normalization and product-state zero
    {
        Rng rng(7);
        bool ok = true;
        for (int i = 0; i < 50; ++i) {
            const StandardForm sf = standard_form(random_gaussian_cm(rng, {}, cfg), cfg);
            const double q = q_gaussian_closed(sf);
            if (q < 0.0 || q > 1.0) ok = false;
            const StandardForm product(sf.lambda_a, sf.lambda_b, 0.0, 0.0);
            if (q_gaussian_closed(product) > 1e-12) ok = false;
        }
        check("Q in [0,1], zero on product states", ok);
    }
    // local symplectic invariance (reduced count)
    {
        Rng rng(11);
        bool ok = true;
        for (int i = 0; i < 10; ++i) {
            const CovarianceMatrix cm = random_gaussian_cm(rng, {}, cfg);
            const double q0 = optimize_q(cm, OptimizeSettings::from_config(cfg), cfg).q;
            const Eigen::Matrix2d sa =
                rotation2(rng.uniform() * M_PI) * squeeze2(0.5 + rng.uniform());
            const Eigen::Matrix2d sb =
                rotation2(rng.uniform() * M_PI) * squeeze2(0.5 + rng.uniform());
            const CovarianceMatrix moved = apply_local_symplectic(cm, sa, sb, cfg);
            const double q1 = optimize_q(moved, OptimizeSettings::from_config(cfg), cfg).q;
            if (std::abs(q0 - q1) > 1e-6) ok = false;
        }
        check("local symplectic invariance", ok);
    }
    // squeezed-vacuum closed form vs optimizer, and Bell value
    {
        const TmsvState ts = tmsv(0.5, cfg);
        const double q_closed = q_gaussian_closed(ts.sf);
        const double q_opt = optimize_q(ts.cm, OptimizeSettings::from_config(cfg), cfg).q;
        check("squeezed vacuum closed form vs optimizer", std::abs(q_closed - q_opt) < 1e-8);

        const BellState bell = bell_state(FamilyKind::bell_phi_plus, 0.5);
        const double q_bell = optimize_q(bell.state, OptimizeSettings::from_config(cfg), cfg).q;
        check("Bell state value", std::abs(q_bell - 2.0 / M_PI) < 1e-8);
    }
    // engines agree on an embedded Gaussian state
    {
        const TmsvState ts = tmsv(0.3, cfg);
        bool ok = true;
        for (int i = 0; i < 8 && ok; ++i)
            for (int j = 0; j < 8; ++j) {
                const double th = i * M_PI / 8.0, ph = j * M_PI / 8.0;
                if (std::abs(e_fock(ts.fock, th, ph, cfg) - e_gaussian(ts.cm, th, ph)) > 1e-6) {
                    ok = false;
                    break;
                }
            }
        check("Gaussian and Fock engines agree", ok);
    }
    // qutrit counterexample
    {
        const FockPureState psi = qutrit_h();
        const double q = optimize_q(psi, OptimizeSettings::from_config(cfg), cfg).q;
        const double n = negativity_fock(FockDensityMatrix::from_pure(psi), cfg);
        check("qutrit: Q = 0 with N > 0", q < 1e-8 && n > 0.1);
    }

    std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return failures == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bit quadrature correlations for two-mode CV states"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "config file (key=value per line)");

    // eval
    auto* cmd_eval = app.add_subcommand("eval", "evaluate one state spec, JSON to stdout");
    std::string eval_spec;
    cmd_eval
        ->add_option("spec", eval_spec,
                     "state spec, e.g. kind=tmsv;r=0.5 "
                     "(squeezing r in natural units; r_dB = (20/ln 10) r)")
        ->required();

    // fig1
    auto* cmd_fig1 = app.add_subcommand("fig1", "random-state scatter CSV");
    Fig1Options fig1_opt;
    std::string fig1_out;
    cmd_fig1->add_option("--samples", fig1_opt.samples, "number of random states");
    cmd_fig1->add_option("--seed", fig1_opt.seed, "RNG seed");
    cmd_fig1->add_option("--lambda-max", fig1_opt.lambda_max, "upper bound of lambda range");
    cmd_fig1->add_option("--workers", fig1_opt.workers, "evaluation threads");
    cmd_fig1->add_option("--out,-o", fig1_out, "output path (default stdout)");

    // fig2
    auto* cmd_fig2 = app.add_subcommand("fig2", "photon-subtracted sweep CSV");
    Fig2Options fig2_opt;
    std::string fig2_out;
    cmd_fig2->add_option("--r-min", fig2_opt.r.lo);
    cmd_fig2->add_option("--r-max", fig2_opt.r.hi);
    cmd_fig2->add_option("--r-steps", fig2_opt.r.steps);
    cmd_fig2->add_option("--t-min", fig2_opt.t.lo);
    cmd_fig2->add_option("--t-max", fig2_opt.t.hi);
    cmd_fig2->add_option("--t-steps", fig2_opt.t.steps);
    cmd_fig2->add_option("--workers", fig2_opt.workers);
    cmd_fig2->add_option("--out,-o", fig2_out, "output path (default stdout)");

    // mixture
    auto* cmd_mixture = app.add_subcommand("mixture", "squeezed-vacuum/vacuum mixture sweep CSV");
    MixtureOptions mix_opt;
    std::string mix_out;
    cmd_mixture->add_option("--r-min", mix_opt.r.lo);
    cmd_mixture->add_option("--r-max", mix_opt.r.hi);
    cmd_mixture->add_option("--r-steps", mix_opt.r.steps);
    cmd_mixture->add_option("--p-min", mix_opt.p.lo);
    cmd_mixture->add_option("--p-max", mix_opt.p.hi);
    cmd_mixture->add_option("--p-steps", mix_opt.p.steps);
    cmd_mixture->add_option("--workers", mix_opt.workers);
    cmd_mixture->add_option("--out,-o", mix_out, "output path (default stdout)");

    // sample
    auto* cmd_sample = app.add_subcommand("sample", "simulate sign-binned joint quadrature shots");
    std::string sample_spec, sample_out, sample_format = "csv";
    double sample_theta = 0.0, sample_phi = 0.0, sample_sigma = 0.0;
    std::uint64_t sample_shots = 1000000, sample_seed = 1;
    cmd_sample->add_option("spec", sample_spec, "state spec")->required();
    cmd_sample->add_option("--theta", sample_theta, "quadrature angle of mode A (rad)");
    cmd_sample->add_option("--phi", sample_phi, "quadrature angle of mode B (rad)");
    cmd_sample->add_option("--shots", sample_shots, "number of shots");
    cmd_sample->add_option("--seed", sample_seed, "RNG seed");
    cmd_sample->add_option("--sigma", sample_sigma, "Gaussian smoothing of outcomes");
    cmd_sample->add_option("--format", sample_format, "csv or bin")
        ->check(CLI::IsMember({"csv", "bin"}));
    cmd_sample->add_option("--out,-o", sample_out, "output path")->required();

    // selftest
    auto* cmd_selftest = app.add_subcommand("selftest", "run the built-in property checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Config cfg;
        if (config_path.empty()) {
            if (const char* env = std::getenv("CVBIT_CONFIG")) config_path = env;
        }
        if (!config_path.empty()) cfg = load_config_file(config_path);

        if (cmd_eval->parsed()) {
            const FamilyParams params = FamilyParams::parse(eval_spec);
            std::cout << eval_report(params, cfg).dump(2) << "\n";
        } else if (cmd_fig1->parsed()) {
            write_text(fig1_out, fig1_csv(fig1_opt, cfg));
        } else if (cmd_fig2->parsed()) {
            const Fig2Result result = fig2_csv(fig2_opt, cfg);
            write_text(fig2_out, result.csv);
            if (result.not_converged > 0)
                std::cerr << "warning: " << result.not_converged
                          << " rows did not converge (flagged in CSV)\n";
        } else if (cmd_mixture->parsed()) {
            write_text(mix_out, mixture_csv(mix_opt, cfg));
        } else if (cmd_sample->parsed()) {
            const FamilyParams params = FamilyParams::parse(sample_spec);
            const AnglePair angles{sample_theta, sample_phi};
            HomodyneRun run;
            switch (params.kind) {
                case FamilyKind::tmsv:
                    run = sample_run(tmsv(params.r, cfg).cm, angles, sample_shots, sample_seed,
                                     sample_sigma, cfg);
                    break;
                case FamilyKind::gaussian:
                    run = sample_run(CovarianceMatrix::from_standard_form(
                                         StandardForm(params.lambda_a, params.lambda_b,
                                                      params.cx, params.cp)),
                                     angles, sample_shots, sample_seed, sample_sigma, cfg);
                    break;
                case FamilyKind::mixture:
                    run = sample_run(mixture_tmsv_vacuum(params.r, params.p, cfg).rho, angles,
                                     sample_shots, sample_seed, sample_sigma, cfg);
                    break;
                case FamilyKind::bell_phi_plus:
                case FamilyKind::bell_phi_minus:
                case FamilyKind::bell_psi_plus:
                case FamilyKind::bell_psi_minus:
                    run = sample_run(bell_state(params.kind, params.p).state, angles, sample_shots,
                                     sample_seed, sample_sigma, cfg);
                    break;
                case FamilyKind::photon_subtracted:
                    run = sample_run(photon_subtracted(params.r, params.t, cfg).state, angles,
                                     sample_shots, sample_seed, sample_sigma, cfg);
                    break;
                case FamilyKind::qutrit_h:
                    run = sample_run(qutrit_h(), angles, sample_shots, sample_seed, sample_sigma,
                                     cfg);
                    break;
            }
            if (sample_format == "bin")
                write_bits_binary(sample_out, run);
            else
                write_bits_csv(sample_out, run);
            nlohmann::json summary;
            summary["b_hat"] = run.b_hat;
            summary["std_err"] = run.std_err;
            summary["shots"] = run.shots;
            summary["seed"] = run.seed;
            summary["out"] = sample_out;
            std::cout << summary.dump(2) << "\n";
        } else if (cmd_selftest->parsed()) {
            return run_selftest(cfg);
        }
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const OutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
