#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "doctest.h"
#include "ebfdr/error.hpp"
#include "ebfdr/rng_dist.hpp"
#include "oracles.hpp"

using namespace ebfdr;

namespace {

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double var_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
}

double lag1_corr(const std::vector<double>& v) {
    const double m = mean_of(v);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        den += (v[i] - m) * (v[i] - m);
        if (i + 1 < v.size()) num += (v[i] - m) * (v[i + 1] - m);
    }
    return num / den;
}

}  // namespace

TEST_SUITE("rng_dist") {

TEST_CASE("norm_pdf closed form and symmetry") {
    CHECK(norm_pdf(0.0, {0.0, 1.0}) == doctest::Approx(0.3989423).epsilon(1e-7));
    CHECK(norm_pdf(0.7, {0.7, 2.5}) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI * 2.5)).epsilon(1e-14));
    CHECK(norm_pdf(0.3 + 1.7, {0.3, 2.0}) == doctest::Approx(norm_pdf(0.3 - 1.7, {0.3, 2.0})).epsilon(1e-15));
    CHECK_THROWS_AS(norm_pdf(0.0, {0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(norm_pdf(0.0, {0.0, -1.0}), DomainError);
}

TEST_CASE("norm_cdf values") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(norm_cdf(0.0) == 0.5);
    CHECK(norm_cdf(inf) == 1.0);
    CHECK(norm_cdf(-inf) == 0.0);
    CHECK(std::fabs(norm_cdf(1.959964) - 0.975) < 1e-6);
    CHECK_THROWS_AS(norm_cdf(std::nan("")), DomainError);
}

TEST_CASE("norm_cdf agrees with the reference implementation") {
    for (double x = -37.0; x <= 8.0; x += 0.173) {
        const double ref = oracle::normal_cdf(x);
        // relative conditioning of Phi(x) grows like x^2
        CHECK(std::fabs(norm_cdf(x) - ref) <= 4e-16 * (10.0 + x * x) * ref);
    }
}

TEST_CASE("norm_cdf reflection") {
    for (double x = -9.0; x <= 9.0; x += 0.0371) CHECK(std::fabs(norm_cdf(x) + norm_cdf(-x) - 1.0) <= 1e-12);
}

TEST_CASE("norm_log_cdf deep tail") {
    CHECK(norm_log_cdf(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
    // log Phi(-40) from the asymptotic series: -x^2/2 - log(-x) - log sqrt(2 pi) + log(1 - 1/x^2 + 3/x^4)
    const double x = -40.0;
    const double ref = -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * M_PI) +
                       std::log(1.0 - 1.0 / (x * x) + 3.0 / std::pow(x, 4) - 15.0 / std::pow(x, 6));
    CHECK(norm_log_cdf(x) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("norm_quantile values and boundaries") {
    CHECK(norm_quantile(0.5) == 0.0);
    CHECK(norm_quantile(0.0) == -std::numeric_limits<double>::infinity());
    CHECK(norm_quantile(1.0) == std::numeric_limits<double>::infinity());
    CHECK(std::fabs(norm_quantile(1.0 - 1.0 / 511.0) - 2.8856) < 1e-3);
    CHECK_THROWS_AS(norm_quantile(-0.1), DomainError);
    CHECK_THROWS_AS(norm_quantile(1.1), DomainError);
}

TEST_CASE("norm_quantile agrees with the reference implementation") {
    std::mt19937_64 g(11);
    for (int i = 0; i < 2000; ++i) {
        const double q = std::pow(10.0, -std::uniform_real_distribution<double>(0.0, 15.0)(g));
        for (double p : {q, 1.0 - q}) {
            if (p <= 0.0 || p >= 1.0) continue;
            const double ref = oracle::normal_quantile(p);
            CHECK(std::fabs(norm_quantile(p) - ref) <= 1e-12 * std::max(1.0, std::fabs(ref)));
        }
    }
}

TEST_CASE("cdf of quantile is the identity") {
    std::mt19937_64 g(12);
    std::uniform_real_distribution<double> u(1e-12, 1.0 - 1e-12);
    for (int i = 0; i < 10000; ++i) {
        const double q = u(g);
        CHECK(std::fabs(norm_cdf(norm_quantile(q)) - q) <= 1e-9);
    }
}

TEST_CASE("streams are reproducible and distinct") {
    RngStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    const auto va = sample_normal(a, {0.0, 1.0}, 1000);
    CHECK(va == sample_normal(b, {0.0, 1.0}, 1000));
    CHECK(va != sample_normal(c, {0.0, 1.0}, 1000));
    CHECK(va != sample_normal(d, {0.0, 1.0}, 1000));
}

TEST_CASE("uniform stays inside the open interval") {
    RngStream r(1, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("sample_normal moments") {
    const std::size_t n = 100000;
    RngStream r(42, 0);
    const auto z = sample_normal(r, {0.0, 1.0}, n);
    CHECK(std::fabs(mean_of(z)) <= 4.0 / std::sqrt(double(n)));
    CHECK(std::fabs(var_of(z) - 1.0) < 0.02);
    RngStream r2(42, 1);
    const auto z2 = sample_normal(r2, {2.0, 1.0}, n);
    CHECK(std::fabs(mean_of(z2) - 2.0) <= 4.0 / std::sqrt(double(n)));
}

TEST_CASE("independent streams are uncorrelated") {
    RngStream a(5, 0), b(5, 1);
    const auto x = sample_normal(a, {0.0, 1.0}, 10000);
    const auto y = sample_normal(b, {0.0, 1.0}, 10000);
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    CHECK(std::fabs(sxy / std::sqrt(sxx * syy)) < 0.03);
}

TEST_CASE("scaled t has unit variance") {
    CHECK(std::sqrt(23.0 / 25.0) == doctest::Approx(0.959166).epsilon(1e-6));
    RngStream r(3, 0);
    const auto t = sample_t_scaled(r, 0.0, 25.0, 100000);
    CHECK(std::fabs(var_of(t) - 1.0) < 0.05);
    RngStream r2(3, 1);
    const auto t2 = sample_t_scaled(r2, 2.0, 25.0, 100000);
    CHECK(std::fabs(mean_of(t2) - 2.0) < 0.02);
    CHECK_THROWS_AS(sample_t_scaled(r, 0.0, 2.0, 10), DomainError);
}

TEST_CASE("gamma variates have the right mean") {
    RngStream r(9, 0);
    for (double shape : {0.3, 1.0, 12.5}) {
        double s = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) s += r.gamma(shape);
        CHECK(std::fabs(s / n - shape) < 5.0 * std::sqrt(shape / n));
    }
}

TEST_CASE("AR(1) lag-one correlation") {
    RngStream r(17, 0);
    const auto x = gen_ar1(r, 0.0, -0.5, 100000);
    CHECK(std::fabs(lag1_corr(x) + 0.5) < 0.02);
    RngStream r2(17, 1);
    const auto y = gen_ar1(r2, 2.0, 0.5, 100000);
    CHECK(std::fabs(lag1_corr(y) - 0.5) < 0.02);
    CHECK(std::fabs(mean_of(y) - 2.0) < 0.03);
}

TEST_CASE("AR(1) marginal variance is one") {
    for (double coeff : {-0.5, 0.0, 0.5}) {
        double acc = 0.0;
        for (std::uint64_t s = 0; s < 50; ++s) {
            RngStream r(100, s);
            acc += var_of(gen_ar1(r, 0.0, coeff, 10000));
        }
        CHECK(std::fabs(acc / 50.0 - 1.0) < 0.02);
    }
}

TEST_CASE("AR(1) with zero coefficient is IID normal in distribution") {
    RngStream r(23, 0);
    const auto x = gen_ar1(r, 1.0, 0.0, 100000);
    CHECK(std::fabs(lag1_corr(x)) < 0.02);
    CHECK(std::fabs(var_of(x) - 1.0) < 0.02);
    CHECK_THROWS_AS(gen_ar1(r, 0.0, 1.0, 10), DomainError);
}

}
