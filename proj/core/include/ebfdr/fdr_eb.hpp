#pragma once

// Empirical-Bayes FDR control: posterior null probabilities under the fitted
// mixture, the plug-in marginal FDR estimate, and threshold selection.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ebfdr/binning.hpp"
#include "ebfdr/mixture_fit.hpp"
#include "ebfdr/transforms.hpp"

namespace ebfdr {

// P(null | Z = z). Finite z in log space. For z = +-inf the tail limit: the
// component with the larger variance dominates; equal variances fall back to
// the mean ordering.
double tau(double z, const MixtureParams& theta);

// P(null | lower < Z <= upper). Used for censored z-scores whose exact value
// was lost to quantization.
double tau_interval(double lower, double upper, const MixtureParams& theta);

// Mean of tau over {tau_i <= c}; 0 if that set is empty.
double mfdr_hat(std::span<const double> tau, double c);

struct ThresholdSelection {
    double c = 0.0;  // 0 with n_rejected == 0 designates the empty rejection set
    double mfdr = 0.0;
    std::size_t n_rejected = 0;
};

// Largest observed tau value c with mfdr_hat(tau, c) <= beta.
ThresholdSelection select_threshold(std::span<const double> tau, double beta);

// Rejecting tau <= beta directly: c is the largest observed tau not above
// beta. More conservative than the mFDR rule; mfdr reports mfdr_hat at c.
ThresholdSelection select_threshold_lfdr(std::span<const double> tau, double beta);

// Mfdr: select_threshold. LocalFdr: select_threshold_lfdr.
enum class ThresholdRule { Mfdr, LocalFdr };
ThresholdRule parse_threshold_rule(std::string_view text);  // mfdr | lfdr
std::string threshold_rule_name(ThresholdRule rule);
ThresholdSelection select_threshold(std::span<const double> tau, double beta, ThresholdRule rule);

// Ranges that infinite z-scores are known to lie in. A p-value of 0 was
// rounded down from below half the smallest positive p-value, so its z-score
// exceeds pos_inf_lower; symmetrically for p-values of 1.
struct CensoringBounds {
    double pos_inf_lower;
    double neg_inf_upper;
};
CensoringBounds censoring_bounds(std::span<const double> pvalues);

struct FdrResult {
    std::vector<double> tau;  // original input order
    double threshold_c = 0.0;
    double mfdr_at_c = 0.0;
    std::vector<bool> rejected;
    std::size_t n_rejected = 0;
    MixtureParams model;
};

// Binned fit of the z-score mixture from raw p-values.
struct PValueFit {
    ZScoreSample z;
    BinRule rule = BinRule::Sturges;
    BinnedCounts counts;
    FitResult fit;
};
PValueFit fit_pvalues(std::span<const double> pvalues, BinRule rule, const EmConfig& cfg);

// Posterior null probabilities of every input under a given model.
std::vector<double> posterior_null(std::span<const double> pvalues, const MixtureParams& theta);

// Decisions at level beta under a given model.
FdrResult eb_decide(std::span<const double> pvalues, const MixtureParams& theta, double beta,
                    ThresholdRule rule = ThresholdRule::Mfdr);
FdrResult eb_decide_tau(std::vector<double> tau, const MixtureParams& theta, double beta,
                        ThresholdRule rule = ThresholdRule::Mfdr);

// Full pipeline: probit, bin, fit, posterior, threshold.
FdrResult eb_control(std::span<const double> pvalues, double beta, BinRule rule, const EmConfig& cfg,
                     ThresholdRule threshold_rule = ThresholdRule::Mfdr);

void validate_beta(double beta);

}  // namespace ebfdr
