#pragma once

// Probit transform between p-values and z-scores, with bookkeeping for the
// infinite z-scores produced by p-values of exactly 0 or 1.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ebfdr {

// z = Phi^{-1}(1 - p); p = 0 -> +inf, p = 1 -> -inf.
double p_to_z(double p);
// p = 1 - Phi(z).
double z_to_p(double z);

// Where an input landed after collect_zscores.
struct ZSlot {
    enum class Kind : std::uint8_t { Finite, PosInf, NegInf };
    Kind kind = Kind::Finite;
    std::size_t finite_pos = 0;  // index into ZScoreSample::finite when kind == Finite
};

struct ZScoreSample {
    std::vector<double> finite;
    std::size_t n_pos_inf = 0;
    std::size_t n_neg_inf = 0;
    std::vector<ZSlot> order_map;  // one entry per original input

    std::size_t total() const noexcept { return finite.size() + n_pos_inf + n_neg_inf; }
    // z-score of original input i (possibly infinite).
    double z_at(std::size_t i) const;
};

ZScoreSample collect_zscores(std::span<const double> pvalues);

// Two-sided p-value for a sample correlation via the Fisher z-transformation.
double fisher_corr_pvalue(double r, std::size_t n_subjects);

}  // namespace ebfdr
