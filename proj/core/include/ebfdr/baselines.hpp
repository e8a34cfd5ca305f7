#pragma once

// Comparison procedures: Benjamini-Hochberg, Benjamini-Yekutieli, Storey q-values.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ebfdr {

enum class Method { EB, BH, BY, QValue };

Method parse_method(std::string_view text);  // eb | bh | by | qvalue
std::string method_name(Method m);

struct RejectionSet {
    std::vector<bool> rejected;
    std::size_t n_rejected = 0;
    Method method = Method::BH;
};

RejectionSet bh_reject(std::span<const double> pvalues, double beta);
RejectionSet by_reject(std::span<const double> pvalues, double beta);

// Harmonic number c_n = sum_{i=1}^n 1/i.
double harmonic_number(std::size_t n);

// min(1, #{p > lambda} / (n (1 - lambda)))
double storey_pi0(std::span<const double> pvalues, double lambda = 0.5);
std::vector<double> storey_qvalues(std::span<const double> pvalues, double lambda = 0.5);
// q_(k) = min_{j >= k} pi0 n p_(j) / j for a given pi0.
std::vector<double> qvalues_given_pi0(std::span<const double> pvalues, double pi0);
RejectionSet qvalue_reject(std::span<const double> qvalues, double beta);

}  // namespace ebfdr
