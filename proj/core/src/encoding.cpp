#include "ebfdr/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ebfdr/error.hpp"
#include "ebfdr/rng_dist.hpp"

namespace ebfdr {

bool valid_p_type_gamma(int gamma) noexcept {
    return gamma == 8 || gamma == 9 || gamma == 16 || gamma == 17;
}

bool valid_t_type_gamma(int gamma) noexcept {
    return gamma == 7 || gamma == 8 || gamma == 15 || gamma == 16;
}

QuantizationScheme QuantizationScheme::p_type(int gamma) {
    QuantizationScheme s{EncodingKind::PType, gamma};
    s.validate();
    return s;
}

QuantizationScheme QuantizationScheme::t_type(int gamma) {
    QuantizationScheme s{EncodingKind::TType, gamma};
    s.validate();
    return s;
}

QuantizationScheme QuantizationScheme::parse(std::string_view text) {
    if (text == "none") return none();
    for (int g : {8, 9, 16, 17}) {
        if (text == "p" + std::to_string(g)) return p_type(g);
    }
    for (int g : {7, 8, 15, 16}) {
        if (text == "t" + std::to_string(g)) return t_type(g);
    }
    throw DomainError("invalid encoding scheme '" + std::string(text) + "'");
}

std::string QuantizationScheme::name() const {
    switch (kind) {
        case EncodingKind::None: return "none";
        case EncodingKind::PType: return "p" + std::to_string(gamma);
        case EncodingKind::TType: return "t" + std::to_string(gamma);
    }
    return "?";
}

bool QuantizationScheme::valid() const noexcept {
    switch (kind) {
        case EncodingKind::None: return gamma == 0;
        case EncodingKind::PType: return valid_p_type_gamma(gamma);
        case EncodingKind::TType: return valid_t_type_gamma(gamma);
    }
    return false;
}

void QuantizationScheme::validate() const {
    if (!valid()) throw DomainError("invalid bit width for encoding kind: " + name());
}

double grid_levels(int gamma) { return std::ldexp(1.0, gamma) - 1.0; }

std::vector<double> p_type_encode(std::span<const double> p, int gamma) {
    if (!valid_p_type_gamma(gamma)) {
        throw DomainError("p-type encoding: gamma must be one of 8, 9, 16, 17");
    }
    const double levels = grid_levels(gamma);
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double v = p[i];
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("p-type encoding: p-value outside [0,1]");
        // nearbyint honours the default round-to-nearest-even mode
        out[i] = std::nearbyint(v * levels) / levels;
    }
    return out;
}

TTypeEncoded t_type_encode(std::span<const double> t, int gamma) {
    if (!valid_t_type_gamma(gamma)) {
        throw DomainError("T-type encoding: gamma must be one of 7, 8, 15, 16");
    }
    if (t.empty()) throw DomainError("T-type encoding: empty input");
    double max_abs = 0.0;
    for (double v : t) {
        if (!std::isfinite(v)) throw DomainError("T-type encoding: non-finite statistic");
        max_abs = std::max(max_abs, std::fabs(v));
    }
    TTypeEncoded enc;
    enc.scale.max_abs = max_abs;
    enc.values.resize(t.size());
    if (max_abs == 0.0) return enc;  // all zeros

    const double levels = grid_levels(gamma);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double k = std::nearbyint(std::fabs(t[i]) * levels / max_abs);
        const double mag = k >= levels ? max_abs : k * max_abs / levels;
        enc.values[i] = std::copysign(mag, t[i]);
    }
    return enc;
}

double truncation_bound(int gamma) {
    if (gamma < 2) throw DomainError("truncation_bound: gamma must be >= 2");
    const double tail = 1.0 / (std::ldexp(1.0, gamma + 1) - 1.0);
    return -norm_quantile(tail);
}

double truncated_null_variance(int gamma) {
    const double a = truncation_bound(gamma);
    const double mass = norm_cdf(a) - norm_cdf(-a);
    return 1.0 - 2.0 * a * norm_pdf(a, {0.0, 1.0}) / mass;
}

double expected_finite_fraction(int gamma, double pi0, double mu1) {
    if (!(pi0 >= 0.0 && pi0 <= 1.0)) throw DomainError("expected_finite_fraction: pi0 outside [0,1]");
    if (!std::isfinite(mu1)) throw DomainError("expected_finite_fraction: mu1 must be finite");
    const double a = truncation_bound(gamma);
    return pi0 * (norm_cdf(a) - norm_cdf(-a)) +
           (1.0 - pi0) * (norm_cdf(a - mu1) - norm_cdf(-a - mu1));
}

}  // namespace ebfdr
