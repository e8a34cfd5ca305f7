#include "ebfdr/simulation.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "ebfdr/error.hpp"
#include "ebfdr/fdr_eb.hpp"
#include "ebfdr/transforms.hpp"

namespace ebfdr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> finite_only(const std::vector<double>& z) {
    std::vector<double> out;
    out.reserve(z.size());
    for (double v : z) {
        if (std::isfinite(v)) out.push_back(v);
    }
    return out;
}

std::vector<double> probit_all(const std::vector<double>& p) {
    std::vector<double> z(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) z[i] = p_to_z(p[i]);
    return z;
}

}  // namespace

ScenarioId parse_scenario(std::string_view text) {
    if (text == "s1" || text == "S1") return ScenarioId::S1;
    if (text == "s2" || text == "S2") return ScenarioId::S2;
    if (text == "s3" || text == "S3") return ScenarioId::S3;
    if (text == "s4" || text == "S4") return ScenarioId::S4;
    if (text == "s5" || text == "S5") return ScenarioId::S5;
    throw DomainError("unknown scenario '" + std::string(text) + "' (expected s1..s5)");
}

std::string scenario_name(ScenarioId id) {
    return "s" + std::to_string(static_cast<int>(id) + 1);
}

void ScenarioSpec::validate() const {
    if (n < 1) throw DomainError("scenario: n must be >= 1");
    if (!(pi0 > 0.0 && pi0 < 1.0)) throw DomainError("scenario: pi0 must lie in (0,1)");
    if (!std::isfinite(s4_null_mean)) throw DomainError("scenario: s4_null_mean must be finite");
}

ExperimentInstance gen_scenario(const ScenarioSpec& spec, std::uint64_t stream_index) {
    spec.validate();
    RngStream rng(spec.seed, stream_index);
    ExperimentInstance inst;
    inst.hypotheses.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) inst.hypotheses[i] = !rng.bernoulli(spec.pi0);

    auto shifted = [&](std::vector<double> noise, double null_mean, double alt_mean) {
        for (std::size_t i = 0; i < spec.n; ++i) noise[i] += inst.hypotheses[i] ? alt_mean : null_mean;
        return noise;
    };

    switch (spec.id) {
        case ScenarioId::S1:
            inst.tstats = shifted(sample_normal(rng, {0.0, 1.0}, spec.n), 0.0, 2.0);
            break;
        case ScenarioId::S2:
        case ScenarioId::S3: {
            const double coeff = spec.id == ScenarioId::S2 ? 0.5 : -0.5;
            const auto null_chain = gen_ar1(rng, 0.0, coeff, spec.n);
            const auto alt_chain = gen_ar1(rng, 2.0, coeff, spec.n);
            inst.tstats.resize(spec.n);
            for (std::size_t i = 0; i < spec.n; ++i) {
                inst.tstats[i] = inst.hypotheses[i] ? alt_chain[i] : null_chain[i];
            }
            break;
        }
        case ScenarioId::S4:
            inst.tstats = shifted(sample_normal(rng, {0.0, 1.0}, spec.n), spec.s4_null_mean, 2.5);
            break;
        case ScenarioId::S5:
            inst.tstats = shifted(sample_t_scaled(rng, 0.0, 25.0, spec.n), 0.0, 2.0);
            break;
    }
    inst.pvalues.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) inst.pvalues[i] = norm_cdf(-inst.tstats[i]);
    return inst;
}

std::vector<double> apply_encoding(const ExperimentInstance& inst, const QuantizationScheme& scheme) {
    scheme.validate();
    switch (scheme.kind) {
        case EncodingKind::None: return inst.pvalues;
        case EncodingKind::PType: return p_type_encode(inst.pvalues, scheme.gamma);
        case EncodingKind::TType: {
            const TTypeEncoded enc = t_type_encode(inst.tstats, scheme.gamma);
            std::vector<double> p(enc.values.size());
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = norm_cdf(-enc.values[i]);
            return p;
        }
    }
    throw DomainError("unknown encoding kind");
}

FdpTpp fdp_tpp(const std::vector<bool>& rejected, const std::vector<bool>& hypotheses) {
    if (rejected.size() != hypotheses.size()) throw DomainError("fdp_tpp: length mismatch");
    std::size_t n_rej = 0, n01 = 0, n11 = 0, n1 = 0;
    for (std::size_t i = 0; i < rejected.size(); ++i) {
        if (hypotheses[i]) ++n1;
        if (!rejected[i]) continue;
        ++n_rej;
        if (hypotheses[i]) {
            ++n11;
        } else {
            ++n01;
        }
    }
    FdpTpp r;
    r.fdp = n_rej == 0 ? 0.0 : static_cast<double>(n01) / static_cast<double>(n_rej);
    r.tpp = n1 == 0 ? 0.0 : static_cast<double>(n11) / static_cast<double>(n1);
    return r;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double MeanSd::se() const {
    return count == 0 ? 0.0 : sd / std::sqrt(static_cast<double>(count));
}

MeanSd summarize(const std::vector<double>& values) {
    MeanSd s;
    double sum = 0.0;
    for (double v : values) {
        if (std::isnan(v)) continue;
        sum += v;
        ++s.count;
    }
    if (s.count == 0) {
        s.mean = kNaN;
        return s;
    }
    s.mean = sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0.0;
        for (double v : values) {
            if (!std::isnan(v)) ss += (v - s.mean) * (v - s.mean);
        }
        s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
    }
    return s;
}

void StudyConfig::validate() const {
    scenario.validate();
    em.validate();
    if (reps < 1) throw DomainError("study: reps must be >= 1");
    if (encodings.empty() || methods.empty() || betas.empty()) {
        throw DomainError("study: encodings, methods and betas must be non-empty");
    }
    for (const auto& e : encodings) e.validate();
    for (double b : betas) validate_beta(b);
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("study: lambda must lie in (0,1)");
}

const SimRow* SimSummary::find(const QuantizationScheme& enc, Method method, double beta) const {
    for (const auto& r : rows) {
        if (r.encoding == enc && r.method == method && r.beta == beta) return &r;
    }
    return nullptr;
}

SimSummary run_study(const StudyConfig& cfg) {
    cfg.validate();
    const std::size_t n_enc = cfg.encodings.size(), n_meth = cfg.methods.size(),
                      n_beta = cfg.betas.size();
    const std::size_t cells = n_enc * n_meth * n_beta;
    auto cell = [&](std::size_t e, std::size_t m, std::size_t b) { return (e * n_meth + m) * n_beta + b; };

    // [rep][cell]; NaN marks a failed fit
    std::vector<std::vector<FdpTpp>> results(cfg.reps, std::vector<FdpTpp>(cells));

    parallel_for(cfg.reps, cfg.workers, [&](std::size_t rep) {
        ScenarioSpec spec = cfg.scenario;
        const ExperimentInstance inst = gen_scenario(spec, rep);
        auto& out = results[rep];
        for (std::size_t e = 0; e < n_enc; ++e) {
            const std::vector<double> p = apply_encoding(inst, cfg.encodings[e]);
            std::optional<std::vector<double>> qvalues;
            for (std::size_t m = 0; m < n_meth; ++m) {
                const Method method = cfg.methods[m];
                if (method == Method::EB) {
                    std::optional<PValueFit> pf;
                    try {
                        pf = fit_pvalues(p, cfg.bin_rule, cfg.em);
                    } catch (const std::runtime_error&) {
                    } catch (const DomainError&) {
                    }
                    if (!pf) {
                        for (std::size_t b = 0; b < n_beta; ++b) out[cell(e, m, b)] = {kNaN, kNaN};
                        continue;
                    }
                    const MixtureParams theta = pf->fit.params;
                    const std::vector<double> tau_values = posterior_null(p, theta);
                    for (std::size_t b = 0; b < n_beta; ++b) {
                        const FdrResult r = eb_decide_tau(tau_values, theta, cfg.betas[b], cfg.threshold_rule);
                        out[cell(e, m, b)] = fdp_tpp(r.rejected, inst.hypotheses);
                    }
                    continue;
                }
                if (method == Method::QValue && !qvalues) qvalues = storey_qvalues(p, cfg.lambda);
                for (std::size_t b = 0; b < n_beta; ++b) {
                    RejectionSet rs;
                    switch (method) {
                        case Method::BH: rs = bh_reject(p, cfg.betas[b]); break;
                        case Method::BY: rs = by_reject(p, cfg.betas[b]); break;
                        case Method::QValue: rs = qvalue_reject(*qvalues, cfg.betas[b]); break;
                        case Method::EB: break;
                    }
                    out[cell(e, m, b)] = fdp_tpp(rs.rejected, inst.hypotheses);
                }
            }
        }
    });

    SimSummary summary;
    for (std::size_t e = 0; e < n_enc; ++e) {
        for (std::size_t m = 0; m < n_meth; ++m) {
            for (std::size_t b = 0; b < n_beta; ++b) {
                std::vector<double> fdp(cfg.reps), tpp(cfg.reps);
                for (std::size_t r = 0; r < cfg.reps; ++r) {
                    fdp[r] = results[r][cell(e, m, b)].fdp;
                    tpp[r] = results[r][cell(e, m, b)].tpp;
                }
                SimRow row;
                row.scenario = cfg.scenario.id;
                row.encoding = cfg.encodings[e];
                row.method = cfg.methods[m];
                row.beta = cfg.betas[b];
                row.fdp = summarize(fdp);
                row.tpp = summarize(tpp);
                row.reps = row.fdp.count;
                row.failures = cfg.reps - row.reps;
                summary.rows.push_back(row);
            }
        }
    }
    return summary;
}

std::vector<NullStudyRow> run_null_study(const std::vector<QuantizationScheme>& encodings,
                                         std::size_t n, std::size_t reps, std::uint64_t seed,
                                         std::size_t workers) {
    if (n < 2) throw DomainError("null study: n must be >= 2");
    if (reps < 1) throw DomainError("null study: reps must be >= 1");
    if (encodings.empty()) throw DomainError("null study: no encodings");
    for (const auto& e : encodings) e.validate();

    struct Cell {
        double mu = kNaN, var = kNaN, finite = kNaN;
    };
    std::vector<std::vector<Cell>> results(reps, std::vector<Cell>(encodings.size()));
    parallel_for(reps, workers, [&](std::size_t rep) {
        RngStream rng(seed, rep);
        ExperimentInstance inst;
        inst.tstats = sample_normal(rng, {0.0, 1.0}, n);
        inst.pvalues.resize(n);
        for (std::size_t i = 0; i < n; ++i) inst.pvalues[i] = norm_cdf(-inst.tstats[i]);
        for (std::size_t e = 0; e < encodings.size(); ++e) {
            const auto z = finite_only(probit_all(apply_encoding(inst, encodings[e])));
            Cell c;
            c.finite = static_cast<double>(z.size()) / static_cast<double>(n);
            if (z.size() >= 2) {
                const NormalFit f = fit_normal_ml(z);
                c.mu = f.mean;
                c.var = f.var;
            }
            results[rep][e] = c;
        }
    });

    std::vector<NullStudyRow> rows;
    for (std::size_t e = 0; e < encodings.size(); ++e) {
        std::vector<double> mu(reps), var(reps), fin(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            mu[r] = results[r][e].mu;
            var[r] = results[r][e].var;
            fin[r] = results[r][e].finite;
        }
        NullStudyRow row;
        row.encoding = encodings[e];
        row.mu = summarize(mu);
        row.var = summarize(var);
        row.finite_fraction = summarize(fin);
        row.reps = row.mu.count;
        rows.push_back(row);
    }
    return rows;
}

Estimator parse_estimator(std::string_view text) {
    if (text == "raw") return Estimator::RawEM;
    if (text == "binned") return Estimator::BinnedEM;
    throw DomainError("unknown estimator '" + std::string(text) + "' (expected raw|binned)");
}

std::string estimator_name(Estimator e) { return e == Estimator::RawEM ? "raw" : "binned"; }

void MixtureStudyConfig::validate() const {
    scenario.validate();
    em.validate();
    if (reps < 1) throw DomainError("mixture study: reps must be >= 1");
    if (encodings.empty()) throw DomainError("mixture study: no encodings");
    for (const auto& e : encodings) e.validate();
}

std::vector<MixtureStudyRow> run_mixture_study(const MixtureStudyConfig& cfg) {
    cfg.validate();
    using Estimate = std::optional<std::array<double, 5>>;
    std::vector<std::vector<Estimate>> results(cfg.reps, std::vector<Estimate>(cfg.encodings.size()));

    parallel_for(cfg.reps, cfg.workers, [&](std::size_t rep) {
        const ExperimentInstance inst = gen_scenario(cfg.scenario, rep);
        for (std::size_t e = 0; e < cfg.encodings.size(); ++e) {
            const std::vector<double> p = apply_encoding(inst, cfg.encodings[e]);
            try {
                FitResult fit;
                if (cfg.estimator == Estimator::RawEM) {
                    fit = fit_raw_em(finite_only(probit_all(p)), cfg.em);
                } else {
                    fit = fit_pvalues(p, cfg.bin_rule, cfg.em).fit;
                }
                results[rep][e] = fit.params.as_array();
            } catch (const std::runtime_error&) {
            } catch (const DomainError&) {
            }
        }
    });

    std::vector<MixtureStudyRow> rows;
    for (std::size_t e = 0; e < cfg.encodings.size(); ++e) {
        MixtureStudyRow row;
        row.encoding = cfg.encodings[e];
        row.estimator = cfg.estimator;
        row.bin_rule = cfg.bin_rule;
        for (std::size_t r = 0; r < cfg.reps; ++r) {
            if (results[r][e]) row.estimates.push_back(*results[r][e]);
        }
        row.reps = row.estimates.size();
        row.failures = cfg.reps - row.reps;
        for (std::size_t k = 0; k < 5; ++k) {
            std::vector<double> v;
            for (const auto& est : row.estimates) v.push_back(est[k]);
            row.params[k] = summarize(v);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::optional<MixtureParams> scenario_truth(const ScenarioSpec& spec) {
    switch (spec.id) {
        case ScenarioId::S1:
        case ScenarioId::S2:
        case ScenarioId::S3: return MixtureParams{spec.pi0, 0.0, 1.0, 2.0, 1.0};
        case ScenarioId::S4: return MixtureParams{spec.pi0, spec.s4_null_mean, 1.0, 2.5, 1.0};
        case ScenarioId::S5: return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace ebfdr
