#pragma once

// Two-component normal mixture f(z) = pi0 N(mu0, var0) + pi1 N(mu1, var1):
// maximum marginal likelihood from binned counts (EM for grouped data), plus the
// raw-data estimators used as naive baselines.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ebfdr/binning.hpp"
#include "ebfdr/rng_dist.hpp"

namespace ebfdr {

struct MixtureParams {
    double pi0 = 0.5;
    double mu0 = 0.0;
    double var0 = 1.0;
    double mu1 = 1.0;
    double var1 = 1.0;

    double pi1() const noexcept { return 1.0 - pi0; }
    double weight(int k) const noexcept { return k == 0 ? pi0 : pi1(); }
    NormalParams component(int k) const noexcept {
        return k == 0 ? NormalParams{mu0, var0} : NormalParams{mu1, var1};
    }
    std::array<double, 5> as_array() const noexcept { return {pi0, mu0, var0, mu1, var1}; }
    static MixtureParams from_array(const std::array<double, 5>& v) noexcept {
        return {v[0], v[1], v[2], v[3], v[4]};
    }

    // pi0 in (0,1), finite means, variances >= variance_floor.
    void validate(double variance_floor = 0.0) const;
    // Components swapped so that mu0 <= mu1.
    MixtureParams canonical() const noexcept;

    friend bool operator==(const MixtureParams&, const MixtureParams&) = default;
};

struct EmConfig {
    std::size_t max_iter = 50000;
    double rel_tol = 1e-12;
    std::size_t n_starts = 5;
    double variance_floor = 1e-6;
    std::uint64_t seed = 0;
    bool keep_trace = false;  // record the log-likelihood of every iterate
    // Squared extrapolation between EM steps (SQUAREM), accepted only when it
    // improves on the plain step, so the likelihood still never drops.
    bool accelerate = true;

    void validate() const;
};

// Per-(bin, component) E-step terms. With P = int_B phi(z; mu, var) dz:
//   upsilon = phi(b_j) - phi(b_{j-1}),  omega = b_j phi(b_j) - b_{j-1} phi(b_{j-1})
//   delta   = mu P - var upsilon                         = int_B z phi
//   kappa   = var [P + (2 mu' - mu) upsilon - omega] + (mu' - mu)^2 P
//                                                       = int_B (z - mu')^2 phi
//   alpha   = pi_k P / f_j,  beta = pi_k delta / f_j,  gamma = pi_k kappa / f_j
// where f_j is the mixture mass of the bin, mu' the updated mean, and edge terms
// at +-inf are zero.
struct BinComponentTerms {
    double prob = 0.0;
    double upsilon = 0.0;
    double omega = 0.0;
    double delta = 0.0;
    double kappa = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

struct EStepQuantities {
    std::vector<std::array<BinComponentTerms, 2>> terms;  // [bin][component]
    std::vector<double> bin_mass;                        // f_j
};

struct FitResult {
    MixtureParams params;
    double loglik = 0.0;
    std::size_t n_iter = 0;
    bool converged = false;
    BinSpec bins;
    std::size_t start_index = 0;
    std::vector<double> loglik_trace;  // only when EmConfig::keep_trace
};

double component_bin_prob(const NormalParams& comp, double lower, double upper);

// sum_j n_j log(pi0 P_0j + pi1 P_1j); -inf when a nonempty bin has zero mass.
double log_marginal_likelihood(const MixtureParams& theta, const BinnedCounts& counts,
                               const BinSpec& bins);

EStepQuantities e_step(const MixtureParams& theta, const BinSpec& bins,
                       std::optional<std::array<double, 2>> mu_new = std::nullopt);

// One EM update. Throws ComponentCollapse when a component's posterior count
// drops below 1e-10.
MixtureParams m_step(const BinnedCounts& counts, const MixtureParams& theta, const BinSpec& bins,
                     double variance_floor = 1e-6);

// Starting values for the binned EM: a quantile start followed by
// n_starts - 1 seeded perturbations.
std::vector<MixtureParams> binned_initial_values(const BinnedCounts& counts, const BinSpec& bins,
                                                 const EmConfig& cfg);

// Single EM run from init (no relabelling, no restarts).
FitResult run_binned_em(const BinnedCounts& counts, const BinSpec& bins,
                        const MixtureParams& init, const EmConfig& cfg);

// Multi-start binned EM; best final log-likelihood wins, labels ordered mu0 <= mu1.
FitResult fit_binned_em(const BinnedCounts& counts, const BinSpec& bins, const EmConfig& cfg);

// Log-likelihood of raw (finite) data under the mixture.
double raw_log_likelihood(const MixtureParams& theta, std::span<const double> z);

std::vector<MixtureParams> raw_initial_values(std::span<const double> z, const EmConfig& cfg);
FitResult run_raw_em(std::span<const double> z, const MixtureParams& init, const EmConfig& cfg);
// Ordinary EM on unbinned finite z-scores. Infinite values must be removed by the caller.
FitResult fit_raw_em(std::span<const double> z_finite, const EmConfig& cfg);

struct NormalFit {
    double mean = 0.0;
    double var = 0.0;  // divisor n
};

NormalFit fit_normal_ml(std::span<const double> z_finite);

}  // namespace ebfdr
