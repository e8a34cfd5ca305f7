#pragma once

// Histogram bin-count rules and the open-ended bin system
// B_1 = (-inf, b_1], B_j = (b_{j-1}, b_j], B_m = (b_{m-1}, +inf).

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ebfdr/transforms.hpp"

namespace ebfdr {

enum class BinRule { Sturges, Scott, FreedmanDiaconis };

BinRule parse_bin_rule(std::string_view text);  // sturges | scott | fd
std::string bin_rule_name(BinRule rule);

struct BinSpec {
    std::vector<double> edges;  // b_1 < ... < b_{m-1}, all finite

    std::size_t bins() const noexcept { return edges.size() + 1; }
    // Bin j (0-based) as (lower, upper]; the outer ends are -inf / +inf.
    std::pair<double, double> interval(std::size_t j) const;
    // Index of the unique bin containing z (z may be infinite).
    std::size_t locate(double z) const;
    void validate() const;
};

struct BinnedCounts {
    std::vector<std::size_t> counts;
    std::size_t total = 0;
};

// ceil(log2 n) + 1
std::size_t bin_count_sturges(std::size_t n);
// ceil(range / h), h = 3.5 s n^{-1/3}; at least 2.
std::size_t bin_count_scott(std::span<const double> values);
// ceil(range / h), h = 2 IQR n^{-1/3}; at least 2.
std::size_t bin_count_fd(std::span<const double> values);
std::size_t bin_count(BinRule rule, std::span<const double> finite_values);

// Sample quantile, linear interpolation between order statistics (Hyndman-Fan type 7).
double sample_quantile(std::span<const double> sorted, double prob);

// m bins with interior edges equally spaced over [min, max] of the values.
BinSpec make_bins(std::span<const double> finite_values, std::size_t m);

// +inf z-scores go to the last bin, -inf to the first.
BinnedCounts bin_counts(const ZScoreSample& z, const BinSpec& bins);

}  // namespace ebfdr
