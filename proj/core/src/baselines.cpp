#include "ebfdr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ebfdr/error.hpp"

namespace ebfdr {

namespace {

void check_pvalues(std::span<const double> p) {
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("p-value outside [0,1]");
    }
}

std::vector<std::size_t> ascending_order(std::span<const double> p) {
    std::vector<std::size_t> idx(p.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    return idx;
}

RejectionSet step_up(std::span<const double> p, double level, Method method) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("beta must lie in (0,1)");
    check_pvalues(p);
    RejectionSet rs;
    rs.method = method;
    rs.rejected.assign(p.size(), false);
    if (p.empty()) return rs;
    const auto order = ascending_order(p);
    const auto n = static_cast<double>(p.size());
    std::size_t k_star = 0;
    for (std::size_t k = p.size(); k >= 1; --k) {
        if (p[order[k - 1]] <= static_cast<double>(k) * level / n) {
            k_star = k;
            break;
        }
    }
    if (k_star == 0) return rs;
    const double cutoff = p[order[k_star - 1]];
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= cutoff) {
            rs.rejected[i] = true;
            ++rs.n_rejected;
        }
    }
    return rs;
}

}  // namespace

Method parse_method(std::string_view text) {
    if (text == "eb") return Method::EB;
    if (text == "bh") return Method::BH;
    if (text == "by") return Method::BY;
    if (text == "qvalue") return Method::QValue;
    throw DomainError("unknown method '" + std::string(text) + "' (expected eb|bh|by|qvalue)");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::EB: return "eb";
        case Method::BH: return "bh";
        case Method::BY: return "by";
        case Method::QValue: return "qvalue";
    }
    return "?";
}

RejectionSet bh_reject(std::span<const double> pvalues, double beta) {
    return step_up(pvalues, beta, Method::BH);
}

double harmonic_number(std::size_t n) {
    double c = 0.0;
    for (std::size_t i = n; i >= 1; --i) c += 1.0 / static_cast<double>(i);  // small terms first
    return c;
}

RejectionSet by_reject(std::span<const double> pvalues, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
    return step_up(pvalues, beta / harmonic_number(pvalues.size()), Method::BY);
}

double storey_pi0(std::span<const double> pvalues, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("storey_pi0: lambda must lie in (0,1)");
    check_pvalues(pvalues);
    if (pvalues.empty()) throw DomainError("storey_pi0: no p-values");
    const auto above = std::count_if(pvalues.begin(), pvalues.end(), [&](double p) { return p > lambda; });
    const double est =
        static_cast<double>(above) / (static_cast<double>(pvalues.size()) * (1.0 - lambda));
    return std::min(1.0, est);
}

std::vector<double> storey_qvalues(std::span<const double> pvalues, double lambda) {
    return qvalues_given_pi0(pvalues, storey_pi0(pvalues, lambda));
}

std::vector<double> qvalues_given_pi0(std::span<const double> pvalues, double pi0) {
    if (!(pi0 >= 0.0 && pi0 <= 1.0)) throw DomainError("qvalues_given_pi0: pi0 must lie in [0,1]");
    check_pvalues(pvalues);
    const auto order = ascending_order(pvalues);
    const auto n = static_cast<double>(pvalues.size());
    std::vector<double> q(pvalues.size());
    double running = 1.0;
    for (std::size_t r = pvalues.size(); r >= 1; --r) {
        const std::size_t i = order[r - 1];
        running = std::min(running, pi0 * n * pvalues[i] / static_cast<double>(r));
        q[i] = std::clamp(running, 0.0, 1.0);
    }
    return q;
}

RejectionSet qvalue_reject(std::span<const double> qvalues, double beta) {
    RejectionSet rs;
    rs.method = Method::QValue;
    rs.rejected.assign(qvalues.size(), false);
    for (std::size_t i = 0; i < qvalues.size(); ++i) {
        if (qvalues[i] <= beta) {
            rs.rejected[i] = true;
            ++rs.n_rejected;
        }
    }
    return rs;
}

}  // namespace ebfdr
