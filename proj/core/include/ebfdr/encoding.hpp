#pragma once

// Integer quantization of p-values (p-type) and test statistics (T-type), and
// the truncation analysis of the probit of quantized null p-values.
//
// Encoders return reconstructed reals, i.e. grid points k / (2^g - 1) for
// p-type and sign * k * M / (2^g - 1) for T-type. Ties round half to even.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ebfdr {

enum class EncodingKind { None, PType, TType };

struct QuantizationScheme {
    EncodingKind kind = EncodingKind::None;
    int gamma = 0;  // bit width; 0 for None

    static QuantizationScheme none() { return {}; }
    static QuantizationScheme p_type(int gamma);
    static QuantizationScheme t_type(int gamma);

    // Grammar: none | p8 | p9 | p16 | p17 | t7 | t8 | t15 | t16.
    static QuantizationScheme parse(std::string_view text);
    std::string name() const;

    bool valid() const noexcept;
    void validate() const;

    friend bool operator==(const QuantizationScheme&, const QuantizationScheme&) = default;
};

bool valid_p_type_gamma(int gamma) noexcept;
bool valid_t_type_gamma(int gamma) noexcept;

// Number of grid steps 2^gamma - 1.
double grid_levels(int gamma);

std::vector<double> p_type_encode(std::span<const double> p, int gamma);

struct TTypeScale {
    double max_abs = 0.0;
};

struct TTypeEncoded {
    std::vector<double> values;
    TTypeScale scale;
};

TTypeEncoded t_type_encode(std::span<const double> t, int gamma);

// a_gamma = Phi^{-1}(1 - 1 / (2^{gamma+1} - 1)).
double truncation_bound(int gamma);

// Variance of a standard normal doubly truncated to [-a_gamma, a_gamma].
double truncated_null_variance(int gamma);

// pi0 [Phi(a) - Phi(-a)] + (1 - pi0) [Phi(a - mu1) - Phi(-a - mu1)], a = a_gamma.
double expected_finite_fraction(int gamma, double pi0, double mu1);

}  // namespace ebfdr
