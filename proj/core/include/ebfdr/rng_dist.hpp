#pragma once

// Seedable random streams and the normal / Student-t / AR(1) primitives used by
// the rest of the library.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace ebfdr {

// One reproducible random stream identified by (master_seed, stream_index).
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard, seeded through std::seed_seq (also fully specified) from the four
// 32-bit halves of the two identifiers. All variate generation on top of the
// raw 64-bit words is done here rather than through <random> distributions,
// whose algorithms are implementation-defined.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    // Standard normal (Marsaglia polar method).
    double normal();
    // Gamma(shape, 1) for shape > 0 (Marsaglia-Tsang).
    double gamma(double shape);
    // Chi-square with df degrees of freedom.
    double chi_square(double df) { return 2.0 * gamma(0.5 * df); }
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

struct NormalParams {
    double mu = 0.0;
    double var = 1.0;

    double sd() const;
    // Throws DomainError unless mu is finite and var is finite and > 0.
    void validate() const;
};

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

double norm_pdf(double x, const NormalParams& p);
double norm_log_pdf(double x, const NormalParams& p);

// Standard normal CDF; accepts +-infinity, throws DomainError on NaN.
double norm_cdf(double x);
// log Phi(x), accurate far into the lower tail.
double norm_log_cdf(double x);
// Standard normal quantile; q = 0 -> -inf, q = 1 -> +inf.
double norm_quantile(double q);

std::vector<double> sample_normal(RngStream& rng, const NormalParams& p, std::size_t n);

// mu + sqrt((df - 2) / df) * T with T ~ Student-t(df): unit variance, location mu.
std::vector<double> sample_t_scaled(RngStream& rng, double mu, double df, std::size_t n);

// Stationary AR(1) with unit marginal variance, started from its stationary law.
std::vector<double> gen_ar1(RngStream& rng, double mean, double coeff, std::size_t n);

}  // namespace ebfdr
