#include "ebfdr/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ebfdr/error.hpp"

namespace ebfdr {

namespace {

std::size_t clamp_bins(double ratio) {
    const double m = std::ceil(ratio);
    if (!(m >= 2.0)) return 2;
    return static_cast<std::size_t>(m);
}

void require_range(std::span<const double> values, const char* rule) {
    if (values.size() < 2) throw DomainError(std::string(rule) + ": need at least 2 values");
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainError(std::string(rule) + ": values must be finite");
    }
}

}  // namespace

BinRule parse_bin_rule(std::string_view text) {
    if (text == "sturges") return BinRule::Sturges;
    if (text == "scott") return BinRule::Scott;
    if (text == "fd") return BinRule::FreedmanDiaconis;
    throw DomainError("unknown bin rule '" + std::string(text) + "' (expected sturges|scott|fd)");
}

std::string bin_rule_name(BinRule rule) {
    switch (rule) {
        case BinRule::Sturges: return "sturges";
        case BinRule::Scott: return "scott";
        case BinRule::FreedmanDiaconis: return "fd";
    }
    return "?";
}

std::pair<double, double> BinSpec::interval(std::size_t j) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double lo = j == 0 ? -inf : edges[j - 1];
    const double hi = j == edges.size() ? inf : edges[j];
    return {lo, hi};
}

std::size_t BinSpec::locate(double z) const {
    // first edge >= z: z lies in (edges[i-1], edges[i]]
    return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), z) - edges.begin());
}

void BinSpec::validate() const {
    if (edges.empty()) throw DomainError("BinSpec: need at least one interior edge (m >= 2)");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!std::isfinite(edges[i])) throw DomainError("BinSpec: edges must be finite");
        if (i > 0 && !(edges[i] > edges[i - 1])) {
            throw DomainError("BinSpec: edges must be strictly increasing");
        }
    }
}

std::size_t bin_count_sturges(std::size_t n) {
    if (n < 2) throw DomainError("bin_count_sturges: n must be >= 2");
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) ++k;  // k = ceil(log2 n)
    return k + 1;
}

double sample_quantile(std::span<const double> sorted, double prob) {
    if (sorted.empty()) throw DomainError("sample_quantile: empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::size_t bin_count_scott(std::span<const double> values) {
    require_range(values, "bin_count_scott");
    const auto n = static_cast<double>(values.size());
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double range = *mx - *mn;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double s = std::sqrt(ss / (n - 1.0));
    if (!(range > 0.0) || !(s > 0.0)) {
        throw DegenerateDataError("bin_count_scott: zero variance or zero range");
    }
    const double h = 3.5 * s / std::cbrt(n);
    return clamp_bins(range / h);
}

std::size_t bin_count_fd(std::span<const double> values) {
    require_range(values, "bin_count_fd");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double range = sorted.back() - sorted.front();
    const double iqr = sample_quantile(sorted, 0.75) - sample_quantile(sorted, 0.25);
    if (!(iqr > 0.0) || !(range > 0.0)) {
        throw DegenerateDataError("bin_count_fd: zero interquartile range");
    }
    const double h = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
    return clamp_bins(range / h);
}

std::size_t bin_count(BinRule rule, std::span<const double> finite_values) {
    switch (rule) {
        case BinRule::Sturges: return bin_count_sturges(finite_values.size());
        case BinRule::Scott: return bin_count_scott(finite_values);
        case BinRule::FreedmanDiaconis: return bin_count_fd(finite_values);
    }
    throw DomainError("unknown bin rule");
}

BinSpec make_bins(std::span<const double> finite_values, std::size_t m) {
    if (m < 2) throw DomainError("make_bins: m must be >= 2");
    if (finite_values.empty()) throw DegenerateDataError("make_bins: no finite values");
    for (double v : finite_values) {
        if (!std::isfinite(v)) throw DomainError("make_bins: values must be finite");
    }
    const auto [mn, mx] = std::minmax_element(finite_values.begin(), finite_values.end());
    const double lo = *mn, hi = *mx;
    if (!(hi > lo)) throw DegenerateDataError("make_bins: all finite values are equal");
    BinSpec spec;
    spec.edges.reserve(m - 1);
    const double width = (hi - lo) / static_cast<double>(m);
    for (std::size_t k = 1; k < m; ++k) {
        const double e = lo + static_cast<double>(k) * width;
        if (!spec.edges.empty() && !(e > spec.edges.back())) {
            throw DegenerateDataError("make_bins: range too small for the requested bin count");
        }
        spec.edges.push_back(e);
    }
    return spec;
}

BinnedCounts bin_counts(const ZScoreSample& z, const BinSpec& bins) {
    bins.validate();
    BinnedCounts out;
    out.counts.assign(bins.bins(), 0);
    for (double v : z.finite) ++out.counts[bins.locate(v)];
    out.counts.front() += z.n_neg_inf;
    out.counts.back() += z.n_pos_inf;
    out.total = z.total();
    return out;
}

}  // namespace ebfdr
