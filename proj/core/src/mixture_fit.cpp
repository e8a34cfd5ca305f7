#include "ebfdr/mixture_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ebfdr/error.hpp"

namespace ebfdr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCollapseMass = 1e-10;
constexpr double kLog2Pi = 1.837877066409345483560659472811;

double std_pdf(double x) { return std::isinf(x) ? 0.0 : kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Bin integrals of one component, in standardized coordinates.
struct StdBin {
    double prob = 0.0;
    double pdf_lo = 0.0, pdf_hi = 0.0;    // standard normal density at standardized edges
    double xpdf_lo = 0.0, xpdf_hi = 0.0;  // standardized edge times density; 0 at infinity
};

StdBin standardize(double mu, double sd, double lower, double upper) {
    StdBin s;
    const double a = std::isinf(lower) ? lower : (lower - mu) / sd;
    const double b = std::isinf(upper) ? upper : (upper - mu) / sd;
    // take the difference on the short-tail side to keep relative accuracy
    s.prob = a > 0.0 ? norm_cdf(-a) - norm_cdf(-b) : norm_cdf(b) - norm_cdf(a);
    s.prob = std::max(s.prob, 0.0);
    s.pdf_lo = std_pdf(a);
    s.pdf_hi = std_pdf(b);
    s.xpdf_lo = std::isinf(a) ? 0.0 : a * s.pdf_lo;
    s.xpdf_hi = std::isinf(b) ? 0.0 : b * s.pdf_hi;
    return s;
}

// int_B (z - mu_new)^2 phi(z; mu, sd^2) dz
double kappa_term(const StdBin& s, double mu, double sd, double mu_new) {
    const double d = mu_new - mu;
    const double central = sd * sd * (s.prob - (s.xpdf_hi - s.xpdf_lo));
    return central + 2.0 * d * sd * (s.pdf_hi - s.pdf_lo) + d * d * s.prob;
}

using StdTable = std::vector<std::array<StdBin, 2>>;

StdTable standardize_all(const MixtureParams& theta, const BinSpec& bins) {
    StdTable table(bins.bins());
    for (int k = 0; k < 2; ++k) {
        const NormalParams c = theta.component(k);
        const double sd = c.sd();
        for (std::size_t j = 0; j < table.size(); ++j) {
            const auto [lo, hi] = bins.interval(j);
            table[j][k] = standardize(c.mu, sd, lo, hi);
        }
    }
    return table;
}

EStepQuantities e_step_from_table(const MixtureParams& theta, const BinSpec& bins,
                                  const StdTable& table, const std::array<double, 2>& mu_new) {
    EStepQuantities q;
    q.terms.resize(table.size());
    q.bin_mass.resize(table.size());
    for (std::size_t j = 0; j < table.size(); ++j) {
        const auto [lo, hi] = bins.interval(j);
        double mass = 0.0;
        for (int k = 0; k < 2; ++k) {
            const NormalParams c = theta.component(k);
            const double sd = c.sd();
            const StdBin& s = table[j][k];
            BinComponentTerms& t = q.terms[j][k];
            t.prob = s.prob;
            t.upsilon = (s.pdf_hi - s.pdf_lo) / sd;
            const double lo_term = std::isinf(lo) ? 0.0 : lo * s.pdf_lo / sd;
            const double hi_term = std::isinf(hi) ? 0.0 : hi * s.pdf_hi / sd;
            t.omega = hi_term - lo_term;
            t.delta = c.mu * s.prob - sd * (s.pdf_hi - s.pdf_lo);
            t.kappa = kappa_term(s, c.mu, sd, mu_new[k]);
            mass += theta.weight(k) * s.prob;
        }
        q.bin_mass[j] = mass;
        for (int k = 0; k < 2; ++k) {
            BinComponentTerms& t = q.terms[j][k];
            const double w = theta.weight(k);
            if (mass > 0.0) {
                t.alpha = w * t.prob / mass;
                t.beta = w * t.delta / mass;
                t.gamma = w * t.kappa / mass;
            } else {
                // Bin beyond the reach of both components: fall back to the prior
                // weight and a point mass at the finite edge.
                const double at = std::isinf(lo) ? hi : lo;
                t.alpha = w;
                t.beta = w * at;
                t.gamma = w * (at - mu_new[k]) * (at - mu_new[k]);
            }
        }
    }
    return q;
}

bool converged_step(double prev, double next, double rel_tol) {
    return std::isfinite(prev) && std::isfinite(next) &&
           std::fabs(next - prev) <= rel_tol * (std::fabs(prev) + 1.0);
}

MixtureParams floor_variances(MixtureParams p, double floor) {
    p.var0 = std::max(p.var0, floor);
    p.var1 = std::max(p.var1, floor);
    return p;
}

// Starting values shared by the binned and raw estimators: start 0 from the
// quartiles, the rest perturbed by +-0.5 sd with pi0 ~ U[0.2, 0.8].
std::vector<MixtureParams> make_starts(double q25, double q75, double var, const EmConfig& cfg) {
    var = std::max(var, std::max(cfg.variance_floor, 1e-12));
    const double sd = std::sqrt(var);
    if (!(q75 - q25 > 1e-12 * std::max(1.0, sd))) {
        const double mid = 0.5 * (q25 + q75);
        q25 = mid - 0.5 * sd;
        q75 = mid + 0.5 * sd;
    }
    std::vector<MixtureParams> starts;
    starts.push_back({0.5, q25, var, q75, var});
    for (std::size_t s = 1; s < cfg.n_starts; ++s) {
        RngStream rng(cfg.seed, s);
        MixtureParams p;
        p.mu0 = q25 + (rng.uniform() - 0.5) * sd;
        p.mu1 = q75 + (rng.uniform() - 0.5) * sd;
        p.pi0 = 0.2 + 0.6 * rng.uniform();
        p.var0 = var;
        p.var1 = var;
        starts.push_back(p);
    }
    return starts;
}

template <class RunOne>
FitResult best_of_starts(const std::vector<MixtureParams>& starts, RunOne&& run_one) {
    std::optional<FitResult> best;
    std::string failures;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        try {
            FitResult r = run_one(starts[s]);
            r.start_index = s;
            if (!std::isfinite(r.loglik)) {
                failures += " start " + std::to_string(s) + ": non-finite log-likelihood;";
                continue;
            }
            if (!best || r.loglik > best->loglik) best = std::move(r);
        } catch (const ComponentCollapse& e) {
            failures += " start " + std::to_string(s) + ": " + e.what() + ";";
        } catch (const DomainError& e) {
            failures += " start " + std::to_string(s) + ": " + e.what() + ";";
        }
    }
    if (!best) throw FitError("EM failed for every start:" + failures);
    best->params = best->params.canonical();
    return std::move(*best);
}

}  // namespace

void MixtureParams::validate(double variance_floor) const {
    if (!(pi0 > 0.0 && pi0 < 1.0)) throw DomainError("MixtureParams: pi0 must lie in (0,1)");
    if (!std::isfinite(mu0) || !std::isfinite(mu1)) {
        throw DomainError("MixtureParams: means must be finite");
    }
    const double lo = std::max(variance_floor, 0.0);
    if (!(var0 > 0.0 && var0 >= lo && std::isfinite(var0)) ||
        !(var1 > 0.0 && var1 >= lo && std::isfinite(var1))) {
        throw DomainError("MixtureParams: variances must be finite and above the floor");
    }
}

MixtureParams MixtureParams::canonical() const noexcept {
    if (mu0 <= mu1) return *this;
    return {pi1(), mu1, var1, mu0, var0};
}

void EmConfig::validate() const {
    if (max_iter < 1) throw DomainError("EmConfig: max_iter must be >= 1");
    if (!(rel_tol > 0.0)) throw DomainError("EmConfig: rel_tol must be > 0");
    if (n_starts < 1) throw DomainError("EmConfig: n_starts must be >= 1");
    if (!(variance_floor > 0.0)) throw DomainError("EmConfig: variance_floor must be > 0");
}

double component_bin_prob(const NormalParams& comp, double lower, double upper) {
    comp.validate();
    if (std::isnan(lower) || std::isnan(upper) || !(lower < upper)) {
        throw DomainError("component_bin_prob: need lower < upper");
    }
    return standardize(comp.mu, comp.sd(), lower, upper).prob;
}

double log_marginal_likelihood(const MixtureParams& theta, const BinnedCounts& counts,
                               const BinSpec& bins) {
    theta.validate();
    if (counts.counts.size() != bins.bins()) {
        throw DomainError("log_marginal_likelihood: counts do not match bins");
    }
    const double sd0 = std::sqrt(theta.var0), sd1 = std::sqrt(theta.var1);
    double ll = 0.0;
    for (std::size_t j = 0; j < bins.bins(); ++j) {
        if (counts.counts[j] == 0) continue;
        const auto [lo, hi] = bins.interval(j);
        const double mass = theta.pi0 * standardize(theta.mu0, sd0, lo, hi).prob +
                            theta.pi1() * standardize(theta.mu1, sd1, lo, hi).prob;
        if (!(mass > 0.0)) return -kInf;
        ll += static_cast<double>(counts.counts[j]) * std::log(mass);
    }
    return ll;
}

EStepQuantities e_step(const MixtureParams& theta, const BinSpec& bins,
                       std::optional<std::array<double, 2>> mu_new) {
    theta.validate();
    bins.validate();
    const std::array<double, 2> target = mu_new.value_or(std::array<double, 2>{theta.mu0, theta.mu1});
    return e_step_from_table(theta, bins, standardize_all(theta, bins), target);
}

MixtureParams m_step(const BinnedCounts& counts, const MixtureParams& theta, const BinSpec& bins,
                     double variance_floor) {
    theta.validate();
    if (counts.counts.size() != bins.bins()) throw DomainError("m_step: counts do not match bins");
    if (counts.total == 0) throw DomainError("m_step: no observations");

    const StdTable table = standardize_all(theta, bins);
    const EStepQuantities q =
        e_step_from_table(theta, bins, table, std::array<double, 2>{theta.mu0, theta.mu1});

    std::array<double, 2> mass{0.0, 0.0}, first{0.0, 0.0};
    for (std::size_t j = 0; j < q.terms.size(); ++j) {
        const auto n = static_cast<double>(counts.counts[j]);
        if (n == 0.0) continue;
        for (int k = 0; k < 2; ++k) {
            mass[k] += n * q.terms[j][k].alpha;
            first[k] += n * q.terms[j][k].beta;
        }
    }
    for (int k = 0; k < 2; ++k) {
        if (!(mass[k] >= kCollapseMass)) {
            throw ComponentCollapse("component " + std::to_string(k) + " has posterior count " +
                                    std::to_string(mass[k]));
        }
    }
    const std::array<double, 2> mu_new{first[0] / mass[0], first[1] / mass[1]};

    // variances use kappa re-centred at the updated means
    std::array<double, 2> second{0.0, 0.0};
    for (std::size_t j = 0; j < q.terms.size(); ++j) {
        const auto n = static_cast<double>(counts.counts[j]);
        if (n == 0.0) continue;
        const double f = q.bin_mass[j];
        for (int k = 0; k < 2; ++k) {
            const NormalParams c = theta.component(k);
            const double w = theta.weight(k);
            double g;
            if (f > 0.0) {
                g = w * kappa_term(table[j][k], c.mu, c.sd(), mu_new[k]) / f;
            } else {
                const auto [lo, hi] = bins.interval(j);
                const double at = std::isinf(lo) ? hi : lo;
                g = w * (at - mu_new[k]) * (at - mu_new[k]);
            }
            second[k] += n * g;
        }
    }

    const double n_total = static_cast<double>(counts.total);
    MixtureParams next;
    next.pi0 = mass[0] / n_total;
    next.mu0 = mu_new[0];
    next.mu1 = mu_new[1];
    next.var0 = std::max(second[0] / mass[0], variance_floor);
    next.var1 = std::max(second[1] / mass[1], variance_floor);
    if (!(next.pi0 > 0.0 && next.pi0 < 1.0)) {
        throw ComponentCollapse("mixing proportion left (0,1)");
    }
    return next;
}

std::vector<MixtureParams> binned_initial_values(const BinnedCounts& counts, const BinSpec& bins,
                                                 const EmConfig& cfg) {
    bins.validate();
    const std::size_t m = bins.bins();
    const double width = bins.edges.size() >= 2 ? bins.edges[1] - bins.edges[0] : 1.0;
    std::vector<double> rep(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (j == 0) {
            rep[j] = bins.edges.front() - 0.5 * width;
        } else if (j == m - 1) {
            rep[j] = bins.edges.back() + 0.5 * width;
        } else {
            rep[j] = 0.5 * (bins.edges[j - 1] + bins.edges[j]);
        }
    }
    const auto n = static_cast<double>(counts.total);
    double mean = 0.0;
    for (std::size_t j = 0; j < m; ++j) mean += static_cast<double>(counts.counts[j]) * rep[j];
    mean /= n;
    double var = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        var += static_cast<double>(counts.counts[j]) * (rep[j] - mean) * (rep[j] - mean);
    }
    var = std::max(var / n, width * width / 12.0);

    auto weighted_quantile = [&](double prob) {
        double cum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            cum += static_cast<double>(counts.counts[j]);
            if (cum >= prob * n) return rep[j];
        }
        return rep.back();
    };
    return make_starts(weighted_quantile(0.25), weighted_quantile(0.75), var, cfg);
}

namespace {

// Unconstrained coordinates for extrapolation: logit pi0, means, log variances.
std::array<double, 5> to_free(const MixtureParams& t) {
    return {std::log(t.pi0) - std::log1p(-t.pi0), t.mu0, std::log(t.var0), t.mu1, std::log(t.var1)};
}

std::optional<MixtureParams> from_free(const std::array<double, 5>& u, double variance_floor) {
    MixtureParams t;
    t.pi0 = 1.0 / (1.0 + std::exp(-u[0]));
    t.mu0 = u[1];
    t.var0 = std::max(std::exp(u[2]), variance_floor);
    t.mu1 = u[3];
    t.var1 = std::max(std::exp(u[4]), variance_floor);
    const bool ok = t.pi0 > 0.0 && t.pi0 < 1.0 && std::isfinite(t.mu0) && std::isfinite(t.mu1) &&
                    std::isfinite(t.var0) && std::isfinite(t.var1);
    if (!ok) return std::nullopt;
    return t;
}

// EM driver shared by the binned and raw estimators. `evaluate` returns the
// E-step state of a parameter value (with its log-likelihood in .loglik),
// `update` the M-step from that state. With cfg.accelerate, every two EM steps
// are followed by a squared extrapolation (SQUAREM, step length capped and
// adapted) that is kept only if its log-likelihood is at least that of the
// second EM step and `usable` accepts it, so the recorded log-likelihoods never
// decrease. The stopping test is always the increment of a plain EM step.
template <class State, class Evaluate, class Update, class Usable>
FitResult accelerated_em(MixtureParams theta, const EmConfig& cfg, Evaluate&& evaluate, Update&& update,
                         Usable&& usable) {
    theta.validate();
    FitResult res;
    State e = evaluate(theta);
    if (cfg.keep_trace) res.loglik_trace.push_back(e.loglik);
    std::size_t steps = 0;
    double step_max = 1.0;

    auto finish = [&](const MixtureParams& t, const State& et, bool converged) {
        res.params = t;
        res.loglik = et.loglik;
        res.n_iter = steps;
        res.converged = converged;
        return res;
    };

    while (steps < cfg.max_iter) {
        const MixtureParams t1 = update(e, theta);
        ++steps;
        const State e1 = evaluate(t1);
        if (cfg.keep_trace) res.loglik_trace.push_back(e1.loglik);
        if (converged_step(e.loglik, e1.loglik, cfg.rel_tol)) return finish(t1, e1, true);
        if (!cfg.accelerate || steps >= cfg.max_iter) {
            theta = t1;
            e = e1;
            continue;
        }
        const MixtureParams t2 = update(e1, t1);
        ++steps;
        const State e2 = evaluate(t2);
        if (cfg.keep_trace) res.loglik_trace.push_back(e2.loglik);
        if (converged_step(e1.loglik, e2.loglik, cfg.rel_tol)) return finish(t2, e2, true);

        const auto u0 = to_free(theta), u1 = to_free(t1), u2 = to_free(t2);
        double rr = 0.0, vv = 0.0;
        std::array<double, 5> r{}, v{};
        for (std::size_t k = 0; k < 5; ++k) {
            r[k] = u1[k] - u0[k];
            v[k] = u2[k] - u1[k] - r[k];
            rr += r[k] * r[k];
            vv += v[k] * v[k];
        }
        theta = t2;
        e = e2;
        if (!(vv > 0.0) || !std::isfinite(rr / vv)) continue;
        const double alpha = std::clamp(-std::sqrt(rr / vv), -step_max, -1.0);
        std::array<double, 5> ux{};
        for (std::size_t k = 0; k < 5; ++k) ux[k] = u0[k] - 2.0 * alpha * r[k] + alpha * alpha * v[k];
        const auto tx = from_free(ux, cfg.variance_floor);
        if (!tx) {
            step_max = std::max(1.0, step_max / 4.0);
            continue;
        }
        const State ex = evaluate(*tx);
        if (std::isfinite(ex.loglik) && ex.loglik >= e2.loglik && usable(ex)) {
            theta = *tx;
            e = ex;
            if (cfg.keep_trace) res.loglik_trace.push_back(ex.loglik);
            if (alpha == -step_max) step_max *= 4.0;
        } else {
            step_max = std::max(1.0, step_max / 4.0);
        }
    }
    return finish(theta, e, false);
}

struct BinnedState {
    double loglik;
};

}  // namespace

FitResult run_binned_em(const BinnedCounts& counts, const BinSpec& bins,
                        const MixtureParams& init, const EmConfig& cfg) {
    cfg.validate();
    FitResult res = accelerated_em<BinnedState>(
        floor_variances(init, cfg.variance_floor), cfg,
        [&](const MixtureParams& t) { return BinnedState{log_marginal_likelihood(t, counts, bins)}; },
        [&](const BinnedState&, const MixtureParams& t) { return m_step(counts, t, bins, cfg.variance_floor); },
        [](const BinnedState&) { return true; });
    res.bins = bins;
    return res;
}

FitResult fit_binned_em(const BinnedCounts& counts, const BinSpec& bins, const EmConfig& cfg) {
    cfg.validate();
    bins.validate();
    if (counts.counts.size() != bins.bins()) throw DomainError("fit_binned_em: counts do not match bins");
    if (counts.total < 10) throw DomainError("fit_binned_em: need at least 10 observations");
    const auto nonempty = std::count_if(counts.counts.begin(), counts.counts.end(),
                                        [](std::size_t c) { return c > 0; });
    if (nonempty < 3) throw DomainError("fit_binned_em: need at least 3 nonempty bins");

    const auto starts = binned_initial_values(counts, bins, cfg);
    return best_of_starts(starts, [&](const MixtureParams& init) {
        return run_binned_em(counts, bins, init, cfg);
    });
}

// ---------------------------------------------------------------------------
// Raw-data EM. Data are reduced to sorted distinct values with multiplicities,
// which leaves the likelihood unchanged and makes quantized inputs cheap.

namespace {

struct WeightedData {
    std::vector<double> x;  // distinct values, centred at `centre`
    std::vector<double> w;
    double centre = 0.0;
    double n = 0.0;
};

WeightedData compress(std::span<const double> z) {
    std::vector<double> sorted(z.begin(), z.end());
    std::sort(sorted.begin(), sorted.end());
    WeightedData d;
    d.n = static_cast<double>(sorted.size());
    d.centre = std::accumulate(sorted.begin(), sorted.end(), 0.0) / d.n;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        d.x.push_back(sorted[i] - d.centre);
        d.w.push_back(static_cast<double>(j - i));
        i = j;
    }
    return d;
}

void check_raw(std::span<const double> z) {
    if (z.size() < 10) throw DomainError("raw EM: need at least 10 observations");
    for (double v : z) {
        if (!std::isfinite(v)) throw DomainError("raw EM: infinite z-scores must be removed first");
    }
}

struct RawEStep {
    double loglik = 0.0;
    std::array<double, 2> w{}, s{}, q{};  // sum of r, r x, r x^2 (centred x)
};

RawEStep raw_e_step(const WeightedData& d, const MixtureParams& theta) {
    const double c0 = std::log(theta.pi0) - 0.5 * std::log(theta.var0);
    const double c1 = std::log(theta.pi1()) - 0.5 * std::log(theta.var1);
    const double m0 = theta.mu0 - d.centre, m1 = theta.mu1 - d.centre;
    const double h0 = 0.5 / theta.var0, h1 = 0.5 / theta.var1;
    RawEStep e;
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        const double x = d.x[i], w = d.w[i];
        const double lp0 = c0 - h0 * (x - m0) * (x - m0);
        const double lp1 = c1 - h1 * (x - m1) * (x - m1);
        const double diff = lp1 - lp0;
        const double t = std::exp(-std::fabs(diff));
        e.loglik += w * (std::max(lp0, lp1) + std::log1p(t));
        const double r1 = diff > 0.0 ? 1.0 / (1.0 + t) : t / (1.0 + t);
        const double r0 = 1.0 - r1;
        e.w[0] += w * r0;
        e.w[1] += w * r1;
        e.s[0] += w * r0 * x;
        e.s[1] += w * r1 * x;
        e.q[0] += w * r0 * x * x;
        e.q[1] += w * r1 * x * x;
    }
    e.loglik -= 0.5 * kLog2Pi * d.n;
    return e;
}

MixtureParams raw_m_step(const RawEStep& e, const WeightedData& d, double variance_floor) {
    for (int k = 0; k < 2; ++k) {
        if (!(e.w[k] >= kCollapseMass)) {
            throw ComponentCollapse("component " + std::to_string(k) + " has posterior count " +
                                    std::to_string(e.w[k]));
        }
    }
    MixtureParams next;
    next.pi0 = e.w[0] / d.n;
    const double mc0 = e.s[0] / e.w[0], mc1 = e.s[1] / e.w[1];
    next.mu0 = mc0 + d.centre;
    next.mu1 = mc1 + d.centre;
    next.var0 = std::max(e.q[0] / e.w[0] - mc0 * mc0, variance_floor);
    next.var1 = std::max(e.q[1] / e.w[1] - mc1 * mc1, variance_floor);
    if (!(next.pi0 > 0.0 && next.pi0 < 1.0)) {
        throw ComponentCollapse("mixing proportion left (0,1)");
    }
    return next;
}

FitResult run_raw_em_weighted(const WeightedData& d, const MixtureParams& init, const EmConfig& cfg) {
    cfg.validate();
    return accelerated_em<RawEStep>(
        floor_variances(init, cfg.variance_floor), cfg,
        [&](const MixtureParams& t) { return raw_e_step(d, t); },
        [&](const RawEStep& e, const MixtureParams&) { return raw_m_step(e, d, cfg.variance_floor); },
        [](const RawEStep& e) { return e.w[0] >= kCollapseMass && e.w[1] >= kCollapseMass; });
}

}  // namespace

double raw_log_likelihood(const MixtureParams& theta, std::span<const double> z) {
    theta.validate();
    double ll = 0.0;
    for (double v : z) {
        const double lp0 = std::log(theta.pi0) + norm_log_pdf(v, theta.component(0));
        const double lp1 = std::log(theta.pi1()) + norm_log_pdf(v, theta.component(1));
        const double mx = std::max(lp0, lp1);
        ll += mx + std::log(std::exp(lp0 - mx) + std::exp(lp1 - mx));
    }
    return ll;
}

std::vector<MixtureParams> raw_initial_values(std::span<const double> z, const EmConfig& cfg) {
    check_raw(z);
    std::vector<double> sorted(z.begin(), z.end());
    std::sort(sorted.begin(), sorted.end());
    const NormalFit nf = fit_normal_ml(sorted);
    return make_starts(sample_quantile(sorted, 0.25), sample_quantile(sorted, 0.75), nf.var, cfg);
}

FitResult run_raw_em(std::span<const double> z, const MixtureParams& init, const EmConfig& cfg) {
    check_raw(z);
    return run_raw_em_weighted(compress(z), init, cfg);
}

FitResult fit_raw_em(std::span<const double> z_finite, const EmConfig& cfg) {
    cfg.validate();
    check_raw(z_finite);
    const WeightedData d = compress(z_finite);
    const auto starts = raw_initial_values(z_finite, cfg);
    return best_of_starts(starts, [&](const MixtureParams& init) {
        return run_raw_em_weighted(d, init, cfg);
    });
}

NormalFit fit_normal_ml(std::span<const double> z_finite) {
    if (z_finite.size() < 2) throw DomainError("fit_normal_ml: need at least 2 values");
    const auto n = static_cast<double>(z_finite.size());
    NormalFit f;
    f.mean = std::accumulate(z_finite.begin(), z_finite.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : z_finite) ss += (v - f.mean) * (v - f.mean);
    f.var = ss / n;
    return f;
}

}  // namespace ebfdr
