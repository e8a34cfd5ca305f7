#pragma once

// Simulation scenarios S1-S5, FDP/TPP metrics, and replication harnesses for
// the FDR comparison, the all-null variance study and the mixture-fit studies.
//
// Replication r always draws from RngStream(seed, r), so results do not depend
// on how replications are scheduled across worker threads.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ebfdr/baselines.hpp"
#include "ebfdr/binning.hpp"
#include "ebfdr/encoding.hpp"
#include "ebfdr/fdr_eb.hpp"
#include "ebfdr/mixture_fit.hpp"
#include "ebfdr/rng_dist.hpp"

namespace ebfdr {

enum class ScenarioId { S1, S2, S3, S4, S5 };

ScenarioId parse_scenario(std::string_view text);  // s1 .. s5
std::string scenario_name(ScenarioId id);

struct ScenarioSpec {
    ScenarioId id = ScenarioId::S1;
    std::size_t n = 100000;
    double pi0 = 0.8;
    std::uint64_t seed = 0;
    double s4_null_mean = 1.5;  // S4 only; the alternative mean stays 2.5

    void validate() const;
};

struct ExperimentInstance {
    std::vector<bool> hypotheses;  // true = alternative
    std::vector<double> pvalues;   // 1 - Phi(T)
    std::vector<double> tstats;
};

// S1: N(0,1) vs N(2,1). S2/S3: two stationary AR(1) chains (coeff +0.5 / -0.5,
// means 0 and 2), T_i taken from the chain selected by H_i. S4: N(1.5,1) vs
// N(2.5,1) (null mean configurable). S5: unit-variance t(25) located at 0 vs 2.
ExperimentInstance gen_scenario(const ScenarioSpec& spec, std::uint64_t stream_index = 0);

// p-values as seen after storage under the scheme.
std::vector<double> apply_encoding(const ExperimentInstance& inst, const QuantizationScheme& scheme);

struct FdpTpp {
    double fdp = 0.0;
    double tpp = 0.0;
};

// 0/0 is reported as 0 for both proportions.
FdpTpp fdp_tpp(const std::vector<bool>& rejected, const std::vector<bool>& hypotheses);

// Runs body(i) for i in [0, count) on up to `workers` threads. Exceptions are
// rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;  // across replications, divisor reps - 1
    std::size_t count = 0;
    double se() const;  // sd / sqrt(count)
};
MeanSd summarize(const std::vector<double>& values);

struct StudyConfig {
    ScenarioSpec scenario;
    std::vector<QuantizationScheme> encodings{QuantizationScheme::none()};
    std::vector<Method> methods{Method::EB, Method::BH, Method::BY, Method::QValue};
    std::vector<double> betas{0.05, 0.10};
    std::size_t reps = 20;
    std::size_t workers = 1;
    EmConfig em;
    BinRule bin_rule = BinRule::Sturges;
    double lambda = 0.5;
    ThresholdRule threshold_rule = ThresholdRule::Mfdr;

    void validate() const;
};

struct SimRow {
    ScenarioId scenario = ScenarioId::S1;
    QuantizationScheme encoding;
    Method method = Method::EB;
    double beta = 0.0;
    std::size_t reps = 0;      // replications that produced a value
    std::size_t failures = 0;  // replications whose fit failed
    MeanSd fdp;
    MeanSd tpp;
};

struct SimSummary {
    std::vector<SimRow> rows;  // encoding-major, then method, then beta

    const SimRow* find(const QuantizationScheme& enc, Method method, double beta) const;
};

SimSummary run_study(const StudyConfig& cfg);

struct NullStudyRow {
    QuantizationScheme encoding;
    std::size_t reps = 0;
    MeanSd mu;
    MeanSd var;
    MeanSd finite_fraction;
};

// All-null statistics T ~ N(0,1), encoded, probit, infinite z dropped, normal ML fit.
std::vector<NullStudyRow> run_null_study(const std::vector<QuantizationScheme>& encodings,
                                         std::size_t n, std::size_t reps, std::uint64_t seed,
                                         std::size_t workers = 1);

enum class Estimator { RawEM, BinnedEM };
Estimator parse_estimator(std::string_view text);  // raw | binned
std::string estimator_name(Estimator e);

struct MixtureStudyConfig {
    ScenarioSpec scenario;
    std::vector<QuantizationScheme> encodings{QuantizationScheme::none()};
    Estimator estimator = Estimator::BinnedEM;
    BinRule bin_rule = BinRule::Sturges;
    std::size_t reps = 10;
    std::size_t workers = 1;
    EmConfig em;

    void validate() const;
};

struct MixtureStudyRow {
    QuantizationScheme encoding;
    Estimator estimator = Estimator::BinnedEM;
    BinRule bin_rule = BinRule::Sturges;
    std::size_t reps = 0;
    std::size_t failures = 0;
    std::array<MeanSd, 5> params;                  // pi0, mu0, var0, mu1, var1
    std::vector<std::array<double, 5>> estimates;  // per successful replication, rep order
};

// Fits the two-component mixture to z-scores of scenario data under each encoding.
std::vector<MixtureStudyRow> run_mixture_study(const MixtureStudyConfig& cfg);

// Generative parameters of a scenario's z-score mixture (S1-S4; S5 is not normal).
std::optional<MixtureParams> scenario_truth(const ScenarioSpec& spec);

}  // namespace ebfdr
