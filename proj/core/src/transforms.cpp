#include "ebfdr/transforms.hpp"

#include <cmath>
#include <limits>

#include "ebfdr/error.hpp"
#include "ebfdr/rng_dist.hpp"

namespace ebfdr {

double p_to_z(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) throw DomainError("p_to_z: p-value outside [0,1]");
    // Phi^{-1}(1 - p) = -Phi^{-1}(p); avoids forming 1 - p for tiny p.
    return -norm_quantile(p);
}

double z_to_p(double z) {
    if (std::isnan(z)) throw DomainError("z_to_p: NaN z-score");
    return norm_cdf(-z);
}

double ZScoreSample::z_at(std::size_t i) const {
    const ZSlot& s = order_map.at(i);
    switch (s.kind) {
        case ZSlot::Kind::Finite: return finite[s.finite_pos];
        case ZSlot::Kind::PosInf: return std::numeric_limits<double>::infinity();
        case ZSlot::Kind::NegInf: return -std::numeric_limits<double>::infinity();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

ZScoreSample collect_zscores(std::span<const double> pvalues) {
    ZScoreSample out;
    out.finite.reserve(pvalues.size());
    out.order_map.resize(pvalues.size());
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
        const double z = p_to_z(pvalues[i]);
        if (z == std::numeric_limits<double>::infinity()) {
            out.order_map[i].kind = ZSlot::Kind::PosInf;
            ++out.n_pos_inf;
        } else if (z == -std::numeric_limits<double>::infinity()) {
            out.order_map[i].kind = ZSlot::Kind::NegInf;
            ++out.n_neg_inf;
        } else {
            out.order_map[i] = {ZSlot::Kind::Finite, out.finite.size()};
            out.finite.push_back(z);
        }
    }
    return out;
}

double fisher_corr_pvalue(double r, std::size_t n_subjects) {
    if (n_subjects <= 3) throw DomainError("fisher_corr_pvalue: need more than 3 subjects");
    if (std::isnan(r) || std::fabs(r) > 1.0) throw DomainError("fisher_corr_pvalue: |r| must be <= 1");
    if (std::fabs(r) == 1.0) return 0.0;
    const double stat = std::fabs(std::atanh(r)) * std::sqrt(static_cast<double>(n_subjects - 3));
    return 2.0 * norm_cdf(-stat);
}

}  // namespace ebfdr
