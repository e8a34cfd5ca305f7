#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "ebfdr/error.hpp"
#include "ebfdr/rng_dist.hpp"
#include "ebfdr/transforms.hpp"

using namespace ebfdr;

TEST_SUITE("transforms") {

TEST_CASE("probit examples") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(p_to_z(0.5) == 0.0);
    CHECK(p_to_z(0.0) == inf);
    CHECK(p_to_z(1.0) == -inf);
    CHECK(std::fabs(p_to_z(1.53e-5) - 4.169) < 1e-3);
    CHECK(z_to_p(0.0) == 0.5);
    CHECK(z_to_p(inf) == 0.0);
    CHECK(z_to_p(-inf) == 1.0);
    CHECK(std::fabs(z_to_p(p_to_z(0.3)) - 0.3) < 1e-10);
    CHECK_THROWS_AS(p_to_z(-0.01), DomainError);
    CHECK_THROWS_AS(p_to_z(std::nan("")), DomainError);
}

TEST_CASE("probit is strictly decreasing") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        double a = u(g), b = u(g);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        CHECK(p_to_z(a) > p_to_z(b));
    }
}

TEST_CASE("z-score of a one-sided p-value is the statistic") {
    RngStream r(8, 0);
    const auto t = sample_normal(r, {0.0, 1.0}, 20000);
    for (double x : t) CHECK(std::fabs(p_to_z(norm_cdf(-x)) - x) <= 1e-9);
}

TEST_CASE("collect_zscores splits infinities and keeps order") {
    const std::vector<double> p{0.0, 0.5, 1.0};
    const auto s = collect_zscores(p);
    CHECK(s.finite == std::vector<double>{0.0});
    CHECK(s.n_pos_inf == 1);
    CHECK(s.n_neg_inf == 1);
    CHECK(s.total() == 3);
    CHECK(s.z_at(0) == std::numeric_limits<double>::infinity());
    CHECK(s.z_at(1) == 0.0);
    CHECK(s.z_at(2) == -std::numeric_limits<double>::infinity());

    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> q(5000);
    for (auto& v : q) v = u(g);
    q[10] = 0.0;
    q[20] = 1.0;
    const auto s2 = collect_zscores(q);
    REQUIRE(s2.order_map.size() == q.size());
    for (std::size_t i = 0; i < q.size(); ++i) CHECK(s2.z_at(i) == p_to_z(q[i]));

    std::vector<double> inner(1000, 0.3);
    const auto s3 = collect_zscores(inner);
    CHECK(s3.n_pos_inf + s3.n_neg_inf == 0);
}

TEST_CASE("infinite z-scores after 8-bit encoding of uniform p-values") {
    const std::size_t n = 1000000;
    RngStream r(99, 0);
    std::vector<double> p(n);
    for (auto& v : p) v = std::nearbyint(r.uniform() * 255.0) / 255.0;
    const auto s = collect_zscores(p);
    // half a grid spacing at each end
    const double q = 2.0 / (std::ldexp(1.0, 9) - 2.0);
    const double got = double(s.n_pos_inf + s.n_neg_inf);
    CHECK(std::fabs(got - n * q) <= 3.0 * std::sqrt(n * q * (1.0 - q)));
}

TEST_CASE("Fisher correlation p-value") {
    CHECK(fisher_corr_pvalue(0.0, 50) == 1.0);
    CHECK(fisher_corr_pvalue(1.0, 50) == 0.0);
    CHECK(fisher_corr_pvalue(-1.0, 50) == 0.0);
    CHECK(std::fabs(fisher_corr_pvalue(0.3, 241) - 1.796752102790987e-06) < 1e-8);
    CHECK(fisher_corr_pvalue(0.3, 241) == doctest::Approx(1.796752102790987e-06).epsilon(1e-9));
    CHECK(fisher_corr_pvalue(-0.3, 241) == fisher_corr_pvalue(0.3, 241));
    CHECK_THROWS_AS(fisher_corr_pvalue(0.5, 3), DomainError);
    CHECK_THROWS_AS(fisher_corr_pvalue(1.5, 10), DomainError);
}

}
