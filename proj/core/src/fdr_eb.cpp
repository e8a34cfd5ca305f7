#include "ebfdr/fdr_eb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ebfdr/error.hpp"

namespace ebfdr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tail_limit(bool upper, const MixtureParams& theta) {
    if (theta.var1 > theta.var0) return 0.0;
    if (theta.var1 < theta.var0) return 1.0;
    if (theta.mu1 == theta.mu0) return theta.pi0;
    const bool alt_right = theta.mu1 > theta.mu0;
    return upper == alt_right ? 0.0 : 1.0;
}

// log P(lower < X <= upper) for X ~ N(mu, var).
double log_interval_prob(const NormalParams& c, double lower, double upper) {
    const double sd = c.sd();
    if (std::isinf(lower) && std::isinf(upper)) return 0.0;
    if (std::isinf(lower)) return norm_log_cdf((upper - c.mu) / sd);
    if (std::isinf(upper)) return norm_log_cdf(-(lower - c.mu) / sd);
    const double p = component_bin_prob(c, lower, upper);
    return p > 0.0 ? std::log(p) : -kInf;
}

double posterior_from_logs(double l0, double l1) {
    if (l0 == -kInf && l1 == -kInf) return std::numeric_limits<double>::quiet_NaN();
    if (l0 == -kInf) return 0.0;
    if (l1 == -kInf) return 1.0;
    return 1.0 / (1.0 + std::exp(l1 - l0));
}

}  // namespace

void validate_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
}

double tau(double z, const MixtureParams& theta) {
    theta.validate();
    if (std::isnan(z)) throw DomainError("tau: NaN z-score");
    if (std::isinf(z)) return tail_limit(z > 0.0, theta);
    const double l0 = std::log(theta.pi0) + norm_log_pdf(z, theta.component(0));
    const double l1 = std::log(theta.pi1()) + norm_log_pdf(z, theta.component(1));
    return posterior_from_logs(l0, l1);
}

double tau_interval(double lower, double upper, const MixtureParams& theta) {
    theta.validate();
    if (std::isnan(lower) || std::isnan(upper) || !(lower < upper)) {
        throw DomainError("tau_interval: need lower < upper");
    }
    const double l0 = std::log(theta.pi0) + log_interval_prob(theta.component(0), lower, upper);
    const double l1 = std::log(theta.pi1()) + log_interval_prob(theta.component(1), lower, upper);
    const double t = posterior_from_logs(l0, l1);
    if (!std::isnan(t)) return t;
    // both masses underflow: the interval lies in one tail
    return tail_limit(lower > 0.0 || upper == kInf, theta);
}

double mfdr_hat(std::span<const double> tau, double c) {
    double sum = 0.0;
    std::size_t count = 0;
    for (double t : tau) {
        if (t <= c) {
            sum += t;
            ++count;
        }
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

ThresholdSelection select_threshold(std::span<const double> tau, double beta) {
    validate_beta(beta);
    std::vector<double> sorted(tau.begin(), tau.end());
    std::sort(sorted.begin(), sorted.end());
    ThresholdSelection best;  // empty set
    double cum = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cum += sorted[i];
        const bool group_end = i + 1 == sorted.size() || sorted[i + 1] != sorted[i];
        if (!group_end) continue;
        const double mfdr = cum / static_cast<double>(i + 1);
        // running means of sorted values never decrease, so stop at the first miss
        if (mfdr > beta) break;
        best = {sorted[i], mfdr, i + 1};
    }
    return best;
}

CensoringBounds censoring_bounds(std::span<const double> pvalues) {
    double min_pos = kInf, max_below_one = -kInf;
    for (double p : pvalues) {
        if (p > 0.0) min_pos = std::min(min_pos, p);
        if (p < 1.0) max_below_one = std::max(max_below_one, p);
    }
    CensoringBounds b{kInf, -kInf};
    if (std::isfinite(min_pos)) b.pos_inf_lower = p_to_z(0.5 * min_pos);
    if (std::isfinite(max_below_one)) b.neg_inf_upper = p_to_z(0.5 * (1.0 + max_below_one));
    return b;
}

std::vector<double> posterior_null(std::span<const double> pvalues, const MixtureParams& theta) {
    theta.validate();
    const CensoringBounds bounds = censoring_bounds(pvalues);
    const double tau_pos = std::isfinite(bounds.pos_inf_lower)
                               ? tau_interval(bounds.pos_inf_lower, kInf, theta)
                               : tau(kInf, theta);
    const double tau_neg = std::isfinite(bounds.neg_inf_upper)
                               ? tau_interval(-kInf, bounds.neg_inf_upper, theta)
                               : tau(-kInf, theta);
    std::vector<double> out(pvalues.size());
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
        const double z = p_to_z(pvalues[i]);
        if (z == kInf) {
            out[i] = tau_pos;
        } else if (z == -kInf) {
            out[i] = tau_neg;
        } else {
            out[i] = tau(z, theta);
        }
    }
    return out;
}

ThresholdSelection select_threshold_lfdr(std::span<const double> tau, double beta) {
    validate_beta(beta);
    ThresholdSelection sel;
    double sum = 0.0;
    for (double t : tau) {
        if (t <= beta) {
            sel.c = std::max(sel.c, t);
            sum += t;
            ++sel.n_rejected;
        }
    }
    if (sel.n_rejected == 0) return {};
    sel.mfdr = sum / static_cast<double>(sel.n_rejected);
    return sel;
}

ThresholdRule parse_threshold_rule(std::string_view text) {
    if (text == "mfdr") return ThresholdRule::Mfdr;
    if (text == "lfdr") return ThresholdRule::LocalFdr;
    throw DomainError("unknown threshold rule '" + std::string(text) + "' (expected mfdr|lfdr)");
}

std::string threshold_rule_name(ThresholdRule rule) { return rule == ThresholdRule::Mfdr ? "mfdr" : "lfdr"; }

ThresholdSelection select_threshold(std::span<const double> tau, double beta, ThresholdRule rule) {
    return rule == ThresholdRule::Mfdr ? select_threshold(tau, beta) : select_threshold_lfdr(tau, beta);
}

FdrResult eb_decide_tau(std::vector<double> tau_values, const MixtureParams& theta, double beta,
                        ThresholdRule rule) {
    const ThresholdSelection sel = select_threshold(tau_values, beta, rule);
    FdrResult r;
    r.tau = std::move(tau_values);
    r.threshold_c = sel.c;
    r.mfdr_at_c = sel.mfdr;
    r.model = theta;
    r.rejected.assign(r.tau.size(), false);
    if (sel.n_rejected > 0) {
        for (std::size_t i = 0; i < r.tau.size(); ++i) r.rejected[i] = r.tau[i] <= sel.c;
    }
    r.n_rejected = sel.n_rejected;
    return r;
}

FdrResult eb_decide(std::span<const double> pvalues, const MixtureParams& theta, double beta,
                    ThresholdRule rule) {
    validate_beta(beta);
    return eb_decide_tau(posterior_null(pvalues, theta), theta, beta, rule);
}

PValueFit fit_pvalues(std::span<const double> pvalues, BinRule rule, const EmConfig& cfg) {
    if (pvalues.empty()) throw DomainError("no p-values");
    PValueFit out;
    out.rule = rule;
    out.z = collect_zscores(pvalues);
    const BinSpec bins = make_bins(out.z.finite, bin_count(rule, out.z.finite));
    out.counts = bin_counts(out.z, bins);
    out.fit = fit_binned_em(out.counts, bins, cfg);
    return out;
}

FdrResult eb_control(std::span<const double> pvalues, double beta, BinRule rule, const EmConfig& cfg,
                     ThresholdRule threshold_rule) {
    validate_beta(beta);
    const PValueFit pf = fit_pvalues(pvalues, rule, cfg);
    return eb_decide(pvalues, pf.fit.params, beta, threshold_rule);
}

}  // namespace ebfdr
