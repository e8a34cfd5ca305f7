#include "ebfdr_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "ebfdr/baselines.hpp"
#include "ebfdr/binning.hpp"
#include "ebfdr/encoding.hpp"
#include "ebfdr/error.hpp"
#include "ebfdr/fdr_eb.hpp"
#include "ebfdr/io.hpp"
#include "ebfdr/mixture_fit.hpp"
#include "ebfdr/simulation.hpp"
#include "ebfdr/transforms.hpp"

namespace ebfdr::cli {

namespace {

// Thrown for bad flag values found after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

std::string fmt(double x) { return format_double(x); }

struct EmFlags {
    std::size_t max_iter = EmConfig{}.max_iter;
    double tol = EmConfig{}.rel_tol;
    std::size_t starts = EmConfig{}.n_starts;
    double var_floor = EmConfig{}.variance_floor;

    void add(CLI::App* app) {
        app->add_option("--max-iter", max_iter, "EM iteration cap")->capture_default_str();
        app->add_option("--tol", tol, "relative log-likelihood tolerance")->capture_default_str();
        app->add_option("--starts", starts, "number of EM starting points")->capture_default_str();
        app->add_option("--var-floor", var_floor, "lower bound on component variances")->capture_default_str();
    }
    EmConfig config(std::uint64_t seed) const {
        EmConfig c;
        c.max_iter = max_iter;
        c.rel_tol = tol;
        c.n_starts = starts;
        c.variance_floor = var_floor;
        c.seed = seed;
        c.validate();
        return c;
    }
};

template <class T, class F>
std::vector<T> parse_list(const std::vector<std::string>& items, F parse) {
    std::vector<T> out;
    for (const auto& s : items) out.push_back(parse(s));
    return out;
}

std::vector<QuantizationScheme> parse_schemes(const std::vector<std::string>& items) {
    return parse_list<QuantizationScheme>(items, [](const std::string& s) { return QuantizationScheme::parse(s); });
}

class Runner {
public:
    Runner(std::ostream& out) : out_(out) {}

    void emit(const std::string& path, const std::string& text) {
        if (path == "-") {
            out_ << text;
            out_.flush();
        } else {
            write_text(path, text);
        }
    }

private:
    std::ostream& out_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Empirical-Bayes FDR control for quantized p-values", "ebfdr"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(library_version()));
    Runner runner(out);

    std::function<void()> action;

    // encode
    auto* enc = app.add_subcommand("encode", "quantize p-values (p-type) or test statistics (t-type)");
    std::string enc_in, enc_out = "-", enc_format = "csv", enc_scheme;
    bool enc_as_p = false;
    enc->add_option("--in", enc_in, "input values")->required();
    enc->add_option("--in-format", enc_format, "csv | f64le")->capture_default_str();
    enc->add_option("--scheme", enc_scheme, "none|p8|p9|p16|p17|t7|t8|t15|t16")->required();
    enc->add_option("--out", enc_out, "output CSV ('-' for stdout)")->capture_default_str();
    enc->add_flag("--pvalues", enc_as_p, "t-type only: write 1 - Phi(t) of the stored statistics");
    enc->callback([&] {
        action = [&] {
            const auto scheme = QuantizationScheme::parse(enc_scheme);
            const auto fmt_kind = parse_value_format(enc_format);
            if (enc_as_p && scheme.kind != EncodingKind::TType) {
                throw UsageError("--pvalues only applies to t-type schemes");
            }
            const auto values = read_values(enc_in, fmt_kind);
            std::vector<double> result;
            std::vector<std::pair<std::string, std::string>> extra{{"scheme", scheme.name()}};
            std::string column = "value";
            if (scheme.kind == EncodingKind::PType) {
                result = p_type_encode(values, scheme.gamma);
                column = "pvalue";
            } else if (scheme.kind == EncodingKind::TType) {
                auto te = t_type_encode(values, scheme.gamma);
                extra.emplace_back("max_abs", fmt(te.scale.max_abs));
                result = std::move(te.values);
                column = "tstat";
                if (enc_as_p) {
                    for (double& v : result) v = z_to_p(v);
                    column = "pvalue";
                }
            } else {
                result = values;
            }
            std::string text = provenance_header(0, extra) + column + "\n";
            for (double v : result) text += fmt(v) + "\n";
            runner.emit(enc_out, text);
        };
    });

    // fit
    auto* fit = app.add_subcommand("fit", "fit the two-component mixture to binned z-scores of p-values");
    std::string fit_in, fit_out = "-", fit_format = "csv", fit_rule = "sturges";
    std::uint64_t fit_seed = 0;
    EmFlags fit_em;
    fit->add_option("--in", fit_in, "input p-values")->required();
    fit->add_option("--in-format", fit_format, "csv | f64le")->capture_default_str();
    fit->add_option("--bin-rule", fit_rule, "sturges | scott | fd")->capture_default_str();
    fit->add_option("--out", fit_out, "model JSON ('-' for stdout)")->capture_default_str();
    fit->add_option("--seed", fit_seed, "seed for EM restarts")->capture_default_str();
    fit_em.add(fit);
    fit->callback([&] {
        action = [&] {
            const auto rule = parse_bin_rule(fit_rule);
            const auto fmt_kind = parse_value_format(fit_format);
            const auto cfg = fit_em.config(fit_seed);
            const auto p = read_values(fit_in, fmt_kind);
            const PValueFit pf = fit_pvalues(p, rule, cfg);
            ModelFile m;
            m.params = pf.fit.params;
            m.loglik = pf.fit.loglik;
            m.n_iter = pf.fit.n_iter;
            m.bin_edges = pf.fit.bins.edges;
            m.bin_rule = bin_rule_name(rule);
            m.n_total = pf.z.total();
            m.n_pos_inf = pf.z.n_pos_inf;
            m.n_neg_inf = pf.z.n_neg_inf;
            m.seed = fit_seed;
            runner.emit(fit_out, model_to_json(m));
        };
    });

    // control
    auto* ctl = app.add_subcommand("control", "reject hypotheses at marginal FDR level beta");
    std::string ctl_in, ctl_out = "-", ctl_format = "csv", ctl_model, ctl_rule;
    double ctl_beta = 0.0;
    std::string ctl_thr = "mfdr";
    std::uint64_t ctl_seed = 0;
    EmFlags ctl_em;
    ctl->add_option("--in", ctl_in, "input p-values")->required();
    ctl->add_option("--in-format", ctl_format, "csv | f64le")->capture_default_str();
    ctl->add_option("--model", ctl_model, "model JSON from 'fit'; fitted in-line when absent");
    ctl->add_option("--beta", ctl_beta, "target level in (0,1)")->required();
    ctl->add_option("--bin-rule", ctl_rule, "sturges | scott | fd (in-line fit only)");
    ctl->add_option("--threshold-rule", ctl_thr, "mfdr (mean tau of rejections <= beta) | lfdr (tau <= beta)")
        ->capture_default_str();
    ctl->add_option("--out", ctl_out, "decision CSV ('-' for stdout)")->capture_default_str();
    ctl->add_option("--seed", ctl_seed, "seed for EM restarts")->capture_default_str();
    ctl_em.add(ctl);
    ctl->callback([&] {
        action = [&] {
            validate_beta(ctl_beta);
            const auto fmt_kind = parse_value_format(ctl_format);
            if (!ctl_model.empty() && !ctl_rule.empty()) {
                throw UsageError("--bin-rule conflicts with --model");
            }
            const auto rule = parse_bin_rule(ctl_rule.empty() ? "sturges" : ctl_rule);
            const auto thr = parse_threshold_rule(ctl_thr);
            const auto cfg = ctl_em.config(ctl_seed);
            std::optional<ModelFile> model;
            if (!ctl_model.empty()) model = read_model(ctl_model);
            const auto p = read_values(ctl_in, fmt_kind);
            FdrResult r = model ? eb_decide(p, model->params, ctl_beta, thr) : eb_control(p, ctl_beta, rule, cfg, thr);
            const MixtureParams& th = r.model;
            std::string text = provenance_header(model ? model->seed : ctl_seed,
                                                 {{"beta", fmt(ctl_beta)},
                                                  {"threshold_rule", threshold_rule_name(thr)},
                                                  {"threshold", fmt(r.threshold_c)},
                                                  {"mfdr", fmt(r.mfdr_at_c)},
                                                  {"n_rejected", std::to_string(r.n_rejected)},
                                                  {"params", fmt(th.pi0) + "," + fmt(th.mu0) + "," + fmt(th.var0) +
                                                                 "," + fmt(th.mu1) + "," + fmt(th.var1)}});
            text += "index,pvalue,zscore,tau,rejected\n";
            for (std::size_t i = 0; i < p.size(); ++i) {
                text += std::to_string(i) + "," + fmt(p[i]) + "," + fmt(p_to_z(p[i])) + "," + fmt(r.tau[i]) + "," +
                        (r.rejected[i] ? "1" : "0") + "\n";
            }
            runner.emit(ctl_out, text);
        };
    });

    // simulate
    auto* sim = app.add_subcommand("simulate", "FDP/TPP study of EB and baseline procedures");
    std::string sim_scenario = "s1", sim_out = "-", sim_rule = "sturges", sim_thr = "mfdr";
    std::size_t sim_n = 100000, sim_reps = 20, sim_workers = 1;
    double sim_pi0 = 0.8, sim_lambda = 0.5, sim_s4_null = 1.5;
    std::uint64_t sim_seed = 0;
    std::vector<std::string> sim_methods{"eb", "bh", "by", "qvalue"}, sim_encodings{"none"};
    std::vector<double> sim_betas{0.05, 0.10};
    EmFlags sim_em;
    sim->add_option("--scenario", sim_scenario, "s1 .. s5")->capture_default_str();
    sim->add_option("--n", sim_n, "hypotheses per replication")->capture_default_str();
    sim->add_option("--pi0", sim_pi0, "null proportion")->capture_default_str();
    sim->add_option("--s4-null-mean", sim_s4_null, "null mean of scenario s4")->capture_default_str();
    sim->add_option("--reps", sim_reps, "replications")->capture_default_str();
    sim->add_option("--methods", sim_methods, "comma list of eb,bh,by,qvalue")->delimiter(',');
    sim->add_option("--betas", sim_betas, "comma list of levels")->delimiter(',');
    sim->add_option("--encodings", sim_encodings, "comma list of schemes")->delimiter(',');
    sim->add_option("--bin-rule", sim_rule, "sturges | scott | fd")->capture_default_str();
    sim->add_option("--threshold-rule", sim_thr, "EB threshold rule: mfdr | lfdr")->capture_default_str();
    sim->add_option("--lambda", sim_lambda, "q-value pi0 tuning parameter")->capture_default_str();
    sim->add_option("--seed", sim_seed, "master seed")->capture_default_str();
    sim->add_option("--workers", sim_workers, "worker threads")->capture_default_str();
    sim->add_option("--out", sim_out, "summary CSV ('-' for stdout)")->capture_default_str();
    sim_em.add(sim);
    sim->callback([&] {
        action = [&] {
            StudyConfig cfg;
            cfg.scenario.id = parse_scenario(sim_scenario);
            cfg.scenario.n = sim_n;
            cfg.scenario.pi0 = sim_pi0;
            cfg.scenario.seed = sim_seed;
            cfg.scenario.s4_null_mean = sim_s4_null;
            cfg.encodings = parse_schemes(sim_encodings);
            cfg.methods = parse_list<Method>(sim_methods, [](const std::string& s) { return parse_method(s); });
            cfg.betas = sim_betas;
            cfg.reps = sim_reps;
            cfg.workers = std::max<std::size_t>(1, sim_workers);
            cfg.em = sim_em.config(sim_seed);
            cfg.bin_rule = parse_bin_rule(sim_rule);
            cfg.lambda = sim_lambda;
            cfg.threshold_rule = parse_threshold_rule(sim_thr);
            cfg.validate();
            const SimSummary s = run_study(cfg);
            std::string text = provenance_header(sim_seed, {{"scenario", scenario_name(cfg.scenario.id)},
                                                            {"n", std::to_string(sim_n)},
                                                            {"pi0", fmt(sim_pi0)},
                                                            {"s4_null_mean", fmt(sim_s4_null)},
                                                            {"bin_rule", bin_rule_name(cfg.bin_rule)},
                                                            {"threshold_rule", threshold_rule_name(cfg.threshold_rule)}});
            text += "scenario,encoding,method,beta,reps,failures,mean_fdp,sd_fdp,se_fdp,mean_tpp,sd_tpp,se_tpp\n";
            for (const auto& r : s.rows) {
                text += scenario_name(r.scenario) + "," + r.encoding.name() + "," + method_name(r.method) + "," +
                        fmt(r.beta) + "," + std::to_string(r.reps) + "," + std::to_string(r.failures) + "," +
                        fmt(r.fdp.mean) + "," + fmt(r.fdp.sd) + "," + fmt(r.fdp.se()) + "," + fmt(r.tpp.mean) +
                        "," + fmt(r.tpp.sd) + "," + fmt(r.tpp.se()) + "\n";
            }
            runner.emit(sim_out, text);
        };
    });

    // null-study
    auto* nul = app.add_subcommand("null-study", "normal fit to all-null z-scores after encoding");
    std::vector<std::string> nul_encodings{"none", "p8", "p9", "p16", "p17", "t7", "t8", "t15", "t16"};
    std::size_t nul_n = 1000000, nul_reps = 10, nul_workers = 1;
    std::uint64_t nul_seed = 0;
    std::string nul_out = "-";
    nul->add_option("--encodings", nul_encodings, "comma list of schemes")->delimiter(',');
    nul->add_option("--n", nul_n, "statistics per replication")->capture_default_str();
    nul->add_option("--reps", nul_reps, "replications")->capture_default_str();
    nul->add_option("--seed", nul_seed, "master seed")->capture_default_str();
    nul->add_option("--workers", nul_workers, "worker threads")->capture_default_str();
    nul->add_option("--out", nul_out, "summary CSV ('-' for stdout)")->capture_default_str();
    nul->callback([&] {
        action = [&] {
            const auto schemes = parse_schemes(nul_encodings);
            const auto rows = run_null_study(schemes, nul_n, nul_reps, nul_seed, std::max<std::size_t>(1, nul_workers));
            std::string text = provenance_header(nul_seed, {{"n", std::to_string(nul_n)}});
            text += "encoding,reps,mean_mu,sd_mu,mean_var,sd_var,mean_finite_fraction\n";
            for (const auto& r : rows) {
                text += r.encoding.name() + "," + std::to_string(r.reps) + "," + fmt(r.mu.mean) + "," +
                        fmt(r.mu.sd) + "," + fmt(r.var.mean) + "," + fmt(r.var.sd) + "," +
                        fmt(r.finite_fraction.mean) + "\n";
            }
            runner.emit(nul_out, text);
        };
    });

    // mixture-study
    auto* mix = app.add_subcommand("mixture-study", "mixture parameter estimates under encodings");
    std::string mix_scenario = "s1", mix_estimator = "binned", mix_rule = "sturges", mix_out = "-";
    std::vector<std::string> mix_encodings{"none", "p8", "t16"};
    std::size_t mix_n = 1000000, mix_reps = 10, mix_workers = 1;
    double mix_pi0 = 0.8;
    std::uint64_t mix_seed = 0;
    EmFlags mix_em;
    mix->add_option("--scenario", mix_scenario, "s1 .. s5")->capture_default_str();
    mix->add_option("--estimator", mix_estimator, "raw | binned")->capture_default_str();
    mix->add_option("--encodings", mix_encodings, "comma list of schemes")->delimiter(',');
    mix->add_option("--bin-rule", mix_rule, "sturges | scott | fd")->capture_default_str();
    mix->add_option("--n", mix_n, "hypotheses per replication")->capture_default_str();
    mix->add_option("--pi0", mix_pi0, "null proportion")->capture_default_str();
    mix->add_option("--reps", mix_reps, "replications")->capture_default_str();
    mix->add_option("--seed", mix_seed, "master seed")->capture_default_str();
    mix->add_option("--workers", mix_workers, "worker threads")->capture_default_str();
    mix->add_option("--out", mix_out, "summary CSV ('-' for stdout)")->capture_default_str();
    mix_em.add(mix);
    mix->callback([&] {
        action = [&] {
            MixtureStudyConfig cfg;
            cfg.scenario.id = parse_scenario(mix_scenario);
            cfg.scenario.n = mix_n;
            cfg.scenario.pi0 = mix_pi0;
            cfg.scenario.seed = mix_seed;
            cfg.encodings = parse_schemes(mix_encodings);
            cfg.estimator = parse_estimator(mix_estimator);
            cfg.bin_rule = parse_bin_rule(mix_rule);
            cfg.reps = mix_reps;
            cfg.workers = std::max<std::size_t>(1, mix_workers);
            cfg.em = mix_em.config(mix_seed);
            cfg.validate();
            const auto rows = run_mixture_study(cfg);
            std::string text = provenance_header(mix_seed, {{"scenario", scenario_name(cfg.scenario.id)},
                                                            {"n", std::to_string(mix_n)}});
            text += "encoding,estimator,bin_rule,reps,failures";
            for (const char* name : {"pi0", "mu0", "var0", "mu1", "var1"}) {
                text += std::string(",mean_") + name + ",sd_" + name;
            }
            text += "\n";
            for (const auto& r : rows) {
                text += r.encoding.name() + "," + estimator_name(r.estimator) + "," + bin_rule_name(r.bin_rule) + "," +
                        std::to_string(r.reps) + "," + std::to_string(r.failures);
                for (const auto& p : r.params) text += "," + fmt(p.mean) + "," + fmt(p.sd);
                text += "\n";
            }
            runner.emit(mix_out, text);
        };
    });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << library_version() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << one_line(e.what()) << "\n";
        return 2;
    }
    if (!action) {
        err << "error: usage: no subcommand given\n";
        return 2;
    }
    try {
        action();
    } catch (const UsageError& e) {
        err << "error: usage: " << one_line(e.what()) << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: invalid-argument: " << one_line(e.what()) << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "error: io: " << one_line(e.what()) << "\n";
        return 1;
    } catch (const DegenerateDataError& e) {
        err << "error: degenerate-data: " << one_line(e.what()) << "\n";
        return 1;
    } catch (const FitError& e) {
        err << "error: fit: " << one_line(e.what()) << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << one_line(e.what()) << "\n";
        return 1;
    }
    return 0;
}

}  // namespace ebfdr::cli
