#include "fractaldim/thermo.hpp"

#include <algorithm>
#include <cmath>

#include "fractaldim/errors.hpp"

namespace fractaldim {

namespace {

constexpr long long kCylinderBudget = 1LL << 26;  // enumerated leaves

// log(sum_i Jg_i^s), evaluated against the largest Jacobian so the powers
// never underflow for large s.
double log_sum_jacobian_pow(const DerivativeStats& stats, double s) {
    const double jg_max = *std::max_element(stats.per_branch_jacobian.begin(),
                                            stats.per_branch_jacobian.end());
    double sum = 0.0;
    for (double jg : stats.per_branch_jacobian) sum += std::pow(jg / jg_max, s);
    return s * std::log(jg_max) + std::log(sum);
}

// Relative branch weights (Jg_i / Jg_max)^s; always in (0, 1], max is 1.
std::vector<double> relative_weights(const DerivativeStats& stats, double s) {
    const double jg_max = *std::max_element(stats.per_branch_jacobian.begin(),
                                            stats.per_branch_jacobian.end());
    std::vector<double> u;
    u.reserve(stats.per_branch_jacobian.size());
    for (double jg : stats.per_branch_jacobian) u.push_back(std::pow(jg / jg_max, s));
    return u;
}

// Sum over all branch words of length `depth` of the product of relative
// weights, by explicit depth-first enumeration. Subtree sums keep the
// accumulation well conditioned.
double enumerate_words(const std::vector<double>& u, int depth, double prefix) {
    if (depth == 0) return prefix;
    double acc = 0.0;
    for (double ui : u) acc += enumerate_words(u, depth - 1, prefix * ui);
    return acc;
}

void check_params(PotentialParams params) {
    if (!(params.s >= 0.0) || !std::isfinite(params.s) || !std::isfinite(params.t))
        throw Error(errc::invalid_params, "potential requires s >= 0 and finite t");
}

}  // namespace

PressureResult pressure(const DerivativeStats& stats, PotentialParams params, int depth) {
    check_params(params);
    if (depth < 0) throw Error(errc::invalid_params, "depth must be non-negative");

    PressureResult res;
    if (depth == 0) {
        res.value = log_sum_jacobian_pow(stats, params.s) - params.s * params.t;
        res.method = PressureMethod::closed_form;
        return res;
    }

    const int count = stats.branch_count();
    if (depth * std::log(static_cast<double>(count)) >
        std::log(static_cast<double>(kCylinderBudget)) + 1e-12)
        throw Error(errc::depth_overflow, "word enumeration at depth " + std::to_string(depth) +
                                              " exceeds the leaf budget");

    const auto u = relative_weights(stats, params.s);
    const double jg_max = *std::max_element(stats.per_branch_jacobian.begin(),
                                            stats.per_branch_jacobian.end());
    const double n = static_cast<double>(depth);
    const double log_zn = params.s * n * std::log(jg_max) + std::log(enumerate_words(u, depth, 1.0));
    res.value = log_zn / n - params.s * params.t;
    res.method = PressureMethod::cylinder_sum;
    res.depth = depth;

    // Reference value at twice the depth via the word-length recursion
    // Z_{k+1} = Z_k * sum(u); exact here because the per-branch derivative
    // brackets are tight (constant Jacobians).
    double sum_u = 0.0;
    for (double ui : u) sum_u += ui;
    double log_s2n = 0.0;
    for (int k = 0; k < 2 * depth; ++k) log_s2n += std::log(sum_u);
    const double p2n =
        (params.s * 2.0 * n * std::log(jg_max) + log_s2n) / (2.0 * n) - params.s * params.t;
    res.gap_estimate = std::abs(res.value - p2n);
    return res;
}

GibbsWeights gibbs_weights(const DerivativeStats& stats, PotentialParams params) {
    check_params(params);
    auto u = relative_weights(stats, params.s);
    double sum = 0.0;
    for (double ui : u) sum += ui;
    for (double& ui : u) ui /= sum;
    return GibbsWeights{std::move(u)};
}

double lyapunov_volume(const DerivativeStats& stats, PotentialParams params) {
    const auto w = gibbs_weights(stats, params).weights;
    double chi = params.t;
    for (size_t i = 0; i < w.size(); ++i)
        chi += w[i] * std::log(1.0 / stats.per_branch_jacobian[i]);
    return chi;
}

double dynamical_dimension(const DerivativeStats& stats) {
    // Zero of s -> log sum Jg^s (strictly decreasing, positive at s = 0).
    double hi = 1.0;
    int doublings = 0;
    while (log_sum_jacobian_pow(stats, hi) >= 0.0) {
        hi *= 2.0;
        if (++doublings > 64)
            throw Error(errc::no_bracket, "zero-pressure parameter bracket not found");
    }
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double p = log_sum_jacobian_pow(stats, mid);
        if (std::abs(p) <= 1e-14 || hi - lo < 1e-15) {
            lo = hi = mid;
            break;
        }
        (p > 0.0 ? lo : hi) = mid;
    }
    const double alpha = 0.5 * (lo + hi);

    const auto w = gibbs_weights(stats, {alpha, 0.0}).weights;
    double entropy = 0.0, chi = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
        entropy -= w[i] * std::log(w[i]);
        chi += w[i] * std::log(1.0 / stats.per_branch_jacobian[i]);
    }
    return entropy / chi;
}

}  // namespace fractaldim
