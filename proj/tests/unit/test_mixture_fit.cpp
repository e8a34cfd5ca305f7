#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "ebfdr/error.hpp"
#include "ebfdr/mixture_fit.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace ebfdr;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> draw(std::mt19937_64& g, const MixtureParams& t, std::size_t n) {
    std::normal_distribution<double> z01;
    std::uniform_real_distribution<double> u;
    std::vector<double> z(n);
    for (auto& v : z) {
        v = u(g) < t.pi0 ? t.mu0 + std::sqrt(t.var0) * z01(g) : t.mu1 + std::sqrt(t.var1) * z01(g);
    }
    return z;
}

struct Binned {
    BinSpec bins;
    BinnedCounts counts;
};

Binned binned(const std::vector<double>& z, std::size_t m) {
    ZScoreSample s;
    s.finite = z;
    Binned b;
    b.bins = make_bins(z, m);
    b.counts = bin_counts(s, b.bins);
    return b;
}

}  // namespace

TEST_SUITE("mixture_fit") {

TEST_CASE("component bin probabilities") {
    CHECK(component_bin_prob({0.3, 2.0}, -kInf, kInf) == 1.0);
    CHECK(component_bin_prob({0.3, 2.0}, -kInf, 0.3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::fabs(component_bin_prob({0.0, 1.0}, -1.0, 1.0) - 0.6826895) < 1e-6);
    CHECK(component_bin_prob({0.0, 1.0}, -1.0, 1.0) == doctest::Approx(0.6826894921370859).epsilon(1e-13));
    // far tails keep their relative accuracy
    CHECK(component_bin_prob({0.0, 1.0}, 30.0, kInf) ==
          doctest::Approx(oracle::bin_mass(0.0, 1.0, 30.0, kInf)).epsilon(1e-10));
    CHECK(component_bin_prob({0.0, 1.0}, 30.0, 31.0) ==
          doctest::Approx(oracle::bin_mass(0.0, 1.0, 30.0, 31.0)).epsilon(1e-10));
    CHECK_THROWS_AS(component_bin_prob({0.0, 1.0}, 1.0, 1.0), DomainError);
}

TEST_CASE("parameter validation and relabelling") {
    CHECK_THROWS_AS((MixtureParams{1.0, 0, 1, 2, 1}.validate()), DomainError);
    CHECK_THROWS_AS((MixtureParams{0.5, 0, 0, 2, 1}.validate()), DomainError);
    CHECK_THROWS_AS((MixtureParams{0.5, 0, 1, kInf, 1}.validate()), DomainError);
    const MixtureParams t{0.3, 2.0, 1.5, -1.0, 0.5};
    const auto c = t.canonical();
    CHECK(c.pi0 == doctest::Approx(0.7));
    CHECK(c.mu0 == -1.0);
    CHECK(c.var0 == 0.5);
    CHECK(c.mu1 == 2.0);
    CHECK(c.var1 == 1.5);
    EmConfig cfg;
    cfg.n_starts = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("binned log-likelihood") {
    std::mt19937_64 g(1);
    const MixtureParams truth{0.8, 0.0, 1.0, 2.0, 1.0};
    const auto b = binned(draw(g, truth, 5000), 13);
    const MixtureParams t{0.7, 0.1, 1.2, 1.8, 0.9};
    const double ll = log_marginal_likelihood(t, b.counts, b.bins);
    CHECK(ll == doctest::Approx(oracle::binned_loglik(t, b.counts, b.bins)).epsilon(1e-10));
    BinnedCounts twice = b.counts;
    for (auto& c : twice.counts) c *= 2;
    twice.total *= 2;
    CHECK(log_marginal_likelihood(t, twice, b.bins) == doctest::Approx(2.0 * ll).epsilon(1e-14));
    // all mass in one bin whose probability is essentially one
    BinSpec wide{{-50.0, 50.0}};
    BinnedCounts mid{{0, 100, 0}, 100};
    CHECK(std::fabs(log_marginal_likelihood(truth, mid, wide)) < 1e-12);
}

TEST_CASE("E-step terms") {
    const MixtureParams t{0.6, 0.0, 1.0, 2.0, 1.5};
    const auto q = e_step(t, BinSpec{{-1.0, 1.0}});
    CHECK(std::fabs(q.terms[1][0].delta) < 1e-15);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(q.terms[j][0].alpha + q.terms[j][1].alpha == doctest::Approx(1.0).epsilon(1e-14));
    }
    double total0 = 0.0, mean0 = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        total0 += q.terms[j][0].prob;
        mean0 += q.terms[j][0].delta;
    }
    CHECK(total0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::fabs(mean0) < 1e-14);
}

TEST_CASE("E-step moments against quadrature") {
    const auto r = props::moment_oracle(1000, 2);
    INFO(r.first_failure);
    INFO("worst relative error " << r.worst);
    CHECK(r.cases == 1000);
    CHECK(r.violations == 0);
}

TEST_CASE("M-step against the integral definitions") {
    const MixtureParams t{0.75, -0.2, 0.8, 1.5, 1.3};
    const BinSpec two{{0.0}};
    const BinnedCounts c{{70, 30}, 100};
    const auto got = m_step(c, t, two);
    const auto ref = oracle::brute_m_step(t, c, two);
    CHECK(got.pi0 == doctest::Approx(ref.pi0).epsilon(1e-10));
    CHECK(got.mu0 == doctest::Approx(ref.mu0).epsilon(1e-10));
    CHECK(got.var0 == doctest::Approx(ref.var0).epsilon(1e-10));
    CHECK(got.mu1 == doctest::Approx(ref.mu1).epsilon(1e-10));
    CHECK(got.var1 == doctest::Approx(ref.var1).epsilon(1e-10));
    CHECK(got.pi0 + got.pi1() == 1.0);

    std::mt19937_64 g(3);
    const auto b = binned(draw(g, {0.8, 0, 1, 2, 1}, 3000), 12);
    const auto got2 = m_step(b.counts, t, b.bins);
    const auto ref2 = oracle::brute_m_step(t, b.counts, b.bins);
    for (int k = 0; k < 5; ++k) CHECK(got2.as_array()[k] == doctest::Approx(ref2.as_array()[k]).epsilon(1e-9));
}

TEST_CASE("EM ascent") {
    const auto r = props::em_ascent(200, 4);
    INFO(r.first_failure);
    CHECK(r.cases >= 200);
    CHECK(r.violations == 0);
}

TEST_CASE("EM fixed point matches direct maximization") {
    const auto r = props::fixed_point_vs_direct(20, 5);
    INFO(r.first_failure);
    INFO("worst " << r.worst);
    CHECK(r.cases == 20);
    CHECK(r.violations == 0);
}

TEST_CASE("swapping the starting labels does not change the fit") {
    std::mt19937_64 g(6);
    const auto b = binned(draw(g, {0.8, 0, 1, 2, 1}, 20000), 15);
    EmConfig cfg;
    cfg.rel_tol = 1e-15;
    cfg.max_iter = 1000000;
    const MixtureParams init{0.6, -0.5, 1.5, 2.5, 0.7};
    const MixtureParams swapped{0.4, 2.5, 0.7, -0.5, 1.5};
    const auto a = run_binned_em(b.counts, b.bins, init, cfg).params.canonical();
    const auto s = run_binned_em(b.counts, b.bins, swapped, cfg).params.canonical();
    for (int k = 0; k < 5; ++k) CHECK(a.as_array()[k] == doctest::Approx(s.as_array()[k]).epsilon(1e-6));
}

TEST_CASE("two separated spikes") {
    std::mt19937_64 g(7);
    const auto b = binned(draw(g, {0.5, -5.0, 0.5, 5.0, 0.5}, 20000), 15);
    const auto fit = fit_binned_em(b.counts, b.bins, EmConfig{});
    CHECK(fit.params.pi0 == doctest::Approx(0.5).epsilon(0.03));
    CHECK(fit.params.mu0 == doctest::Approx(-5.0).epsilon(0.02));
    CHECK(fit.params.mu1 == doctest::Approx(5.0).epsilon(0.02));
    const auto direct = oracle::direct_maximize(fit.params, b.counts, b.bins).canonical();
    for (int k = 0; k < 5; ++k) CHECK(std::fabs(fit.params.as_array()[k] - direct.as_array()[k]) < 1e-3);
}

TEST_CASE("data from a single component") {
    std::mt19937_64 g(8);
    std::normal_distribution<double> z01;
    std::vector<double> z(20000);
    for (auto& v : z) v = z01(g);
    const auto b = binned(z, 15);
    bool documented = false;
    try {
        const auto fit = fit_binned_em(b.counts, b.bins, EmConfig{});
        // either one weight goes to ~1, or the two components coincide
        const bool one_weight = fit.params.pi0 > 0.95 || fit.params.pi0 < 0.05;
        const bool same = std::fabs(fit.params.mu0 - fit.params.mu1) < 0.5;
        documented = one_weight || same;
    } catch (const FitError&) {
        documented = true;
    }
    CHECK(documented);
}

TEST_CASE("binned fit of a well-specified sample") {
    std::mt19937_64 g(9);
    const MixtureParams truth{0.8, 0.0, 1.0, 2.0, 1.0};
    std::vector<double> z = draw(g, truth, 200000);
    const auto b = binned(z, bin_count(BinRule::Sturges, z));
    const auto fit = fit_binned_em(b.counts, b.bins, EmConfig{});
    CHECK(fit.converged);
    CHECK(std::fabs(fit.params.pi0 - 0.8) < 0.02);
    CHECK(std::fabs(fit.params.mu0) < 0.03);
    CHECK(std::fabs(fit.params.var0 - 1.0) < 0.05);
    CHECK(std::fabs(fit.params.mu1 - 2.0) < 0.06);
    CHECK(std::fabs(fit.params.var1 - 1.0) < 0.1);
    CHECK(fit.params.mu0 <= fit.params.mu1);
}

TEST_CASE("raw EM") {
    std::mt19937_64 g(10);
    const MixtureParams truth{0.7, 0.0, 1.0, 3.0, 0.5};
    const auto z = draw(g, truth, 20000);
    EmConfig cfg;
    cfg.keep_trace = true;
    const auto fit = fit_raw_em(z, cfg);
    CHECK(std::fabs(fit.params.pi0 - 0.7) < 0.03);
    CHECK(std::fabs(fit.params.mu1 - 3.0) < 0.06);
    const auto& tr = fit.loglik_trace;
    REQUIRE(tr.size() > 2);
    for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr[i] >= tr[i - 1] - 1e-8 * (std::fabs(tr[i - 1]) + 1.0));
    CHECK(fit.loglik == doctest::Approx(raw_log_likelihood(fit.params, z)).epsilon(1e-12));

    // plain EM reaches the same optimum
    EmConfig plain = cfg;
    plain.accelerate = false;
    const auto slow = fit_raw_em(z, plain);
    for (int k = 0; k < 5; ++k) CHECK(std::fabs(slow.params.as_array()[k] - fit.params.as_array()[k]) < 1e-4);
    CHECK(fit.n_iter <= slow.n_iter);
}

TEST_CASE("raw EM on symmetric two-point data") {
    std::vector<double> pm{-1.0, 1.0};
    std::vector<double> both;
    for (int i = 0; i < 1000; ++i) both.insert(both.end(), pm.begin(), pm.end());
    // the likelihood is symmetric under z -> -z, so a symmetric start stays symmetric
    EmConfig one;
    one.n_starts = 1;
    const auto f = run_raw_em(both, MixtureParams{0.5, -0.8, 0.5, 0.8, 0.5}, one);
    CHECK(std::fabs(f.params.mu0 + f.params.mu1) < 1e-9);
    CHECK(f.params.pi0 == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("normal ML fit") {
    const auto f = fit_normal_ml(std::vector<double>{-1.0, 1.0});
    CHECK(f.mean == 0.0);
    CHECK(f.var == 1.0);
    CHECK_THROWS(fit_normal_ml(std::vector<double>{}));
}

}
