#include "fractaldim/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "fractaldim/errors.hpp"

namespace fractaldim {

namespace {

constexpr double kRootTol = 1e-12;  // pressure-root tolerance used throughout

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw Error(errc::invalid_params, "delta must lie in (0, 1)");
}

void check_dim(int d) {
    if (d < 1) throw Error(errc::invalid_params, "ambient dimension must be at least 1");
}

DimBounds clamp_bounds(double upper_raw, double lower_raw, int d) {
    DimBounds b;
    b.upper_raw = upper_raw;
    b.lower_raw = lower_raw;
    b.upper_clamped = std::min(std::max(upper_raw, 0.0), static_cast<double>(d));
    b.lower_clamped = std::min(std::max(lower_raw, 0.0), static_cast<double>(d));
    b.lower_vacuous = lower_raw <= 0.0;
    b.upper_vacuous = upper_raw >= static_cast<double>(d);
    return b;
}

double boxdim_fallback(const DerivativeStats& stats, const BoundParams& params, int d) {
    if (params.boxdim_estimate) return *params.boxdim_estimate;
    return box_bounds(stats, params, d).upper_clamped;
}

}  // namespace

double epsilon_scale(const DerivativeStats& stats, double delta, int d) {
    check_delta(delta);
    check_dim(d);
    const double base = stats.min_Jg / std::pow(stats.norm_Dg, d - 1 + delta);
    return (1.0 - delta) * std::pow(base, 1.0 / (1.0 - delta));
}

double n_zero(const DerivativeStats& stats, double epsilon, double rho0) {
    if (!(epsilon > 0.0 && epsilon < stats.norm_Dg))
        throw Error(errc::invalid_params, "epsilon must lie in (0, norm_Dg)");
    if (!(rho0 > 0.0)) throw Error(errc::gap_zero, "border gap is zero");
    if (!(rho0 < 1.0)) throw Error(errc::invalid_params, "border gap must be below 1");
    return std::log(rho0 / 2.0) / std::log(epsilon / stats.norm_Dg);
}

Lambdas lambda_envelopes(const DerivativeStats& stats, double epsilon, double rho) {
    if (!(rho >= 0.0)) throw Error(errc::invalid_params, "rho must be non-negative");
    if (!(rho < stats.inf_Jf))
        throw Error(errc::rho_too_large, "rho must stay below inf_Jf = " +
                                             std::to_string(stats.inf_Jf));
    Lambdas l;
    l.lambda0 = std::log(stats.inf_Jf - rho);
    l.lambda1 = std::log(stats.sup_Jf + rho);
    l.lambda2 = l.lambda1 * std::log(epsilon) / std::log(stats.norm_Dg);
    return l;
}

DimBounds box_bounds(const DerivativeStats& stats, const BoundParams& params, int d) {
    check_dim(d);
    const double eps = epsilon_scale(stats, params.delta, d);
    const double log_eps = std::log(eps);
    const Lambdas l = lambda_envelopes(stats, eps, params.rho);
    const double alpha0 = solve_bowen(stats, 0.0, kRootTol).alpha;
    const double upper = d + l.lambda0 * (1.0 - alpha0) / log_eps;
    const double lower = d + l.lambda2 * (1.0 - alpha0) / log_eps;
    return clamp_bounds(upper, lower, d);
}

SigmaInterval sigma_interval(const DerivativeStats& stats, double epsilon, double delta, int d,
                             double boxdim_estimate, std::optional<double> hausdim_estimate) {
    check_dim(d);
    check_delta(delta);
    const double log_eps = std::log(epsilon);
    const double dh = hausdim_estimate.value_or(boxdim_estimate);
    SigmaInterval si;
    si.sigma_lower = std::log(stats.inf_Jf) + (dh + delta - d) * log_eps;
    si.sigma_upper = std::log(stats.sup_Jf) + (boxdim_estimate - delta) * std::log(stats.norm_Df * epsilon) -
                     d * log_eps;
    si.lower_nonpositive = si.sigma_lower <= 0.0;
    return si;
}

DimBounds hausdorff_bounds(const DerivativeStats& stats, const BoundParams& params, int d) {
    check_dim(d);
    const double eps = epsilon_scale(stats, params.delta, d);
    const double log_eps = std::log(eps);
    const Lambdas l = lambda_envelopes(stats, eps, params.rho);

    double sigma_lo, sigma_hi;
    if (params.sigma_lower_override && params.sigma_upper_override) {
        sigma_lo = *params.sigma_lower_override;
        sigma_hi = *params.sigma_upper_override;
    } else {
        const SigmaInterval si = sigma_interval(stats, eps, params.delta, d,
                                                boxdim_fallback(stats, params, d),
                                                params.hausdim_estimate);
        // The shift function is non-negative, so a non-positive derived lower
        // endpoint carries no information and is tightened to 0 (the upper
        // bound then coincides with the box upper bound). Explicit overrides
        // pass through untouched.
        sigma_lo = params.sigma_lower_override.value_or(std::max(0.0, si.sigma_lower));
        sigma_hi = params.sigma_upper_override.value_or(si.sigma_upper);
    }

    const double alpha_bar = solve_bowen(stats, sigma_lo, kRootTol).alpha;
    const double alpha_underbar = solve_bowen(stats, sigma_hi, kRootTol).alpha;
    const double upper = d + l.lambda0 * (1.0 - alpha_bar) / log_eps;
    const double lower = d + l.lambda1 * (1.0 - alpha_underbar) / log_eps;
    return clamp_bounds(upper, lower, d);
}

std::vector<std::pair<double, double>> dimension_curve(const DerivativeStats& stats,
                                                       const BoundParams& params, int d,
                                                       const std::vector<double>& t_grid) {
    check_dim(d);
    const double eps = epsilon_scale(stats, params.delta, d);
    const double log_eps = std::log(eps);
    const Lambdas l = lambda_envelopes(stats, eps, params.rho);

    const auto roots = alpha_curve(stats, t_grid, kRootTol);
    std::vector<std::pair<double, double>> curve;
    curve.reserve(roots.size());
    for (const auto& r : roots) {
        const double dim = d + l.lambda1 * (1.0 - r.alpha) / log_eps;
        if (!curve.empty() && !(dim < curve.back().second))
            throw std::logic_error("dimension_curve: values are not strictly decreasing");
        curve.emplace_back(r.t, dim);
    }
    return curve;
}

double invert_dimension(const DerivativeStats& stats, const BoundParams& params, int d,
                        double target_dim, double tol) {
    check_dim(d);
    if (!(tol > 0.0)) throw Error(errc::invalid_params, "tol must be positive");
    const double eps = epsilon_scale(stats, params.delta, d);
    const double log_eps = std::log(eps);
    const Lambdas l = lambda_envelopes(stats, eps, params.rho);

    double sigma_hi;
    if (params.sigma_upper_override) {
        sigma_hi = *params.sigma_upper_override;
    } else {
        sigma_hi = sigma_interval(stats, eps, params.delta, d, boxdim_fallback(stats, params, d),
                                  params.hausdim_estimate)
                       .sigma_upper;
    }
    if (!(sigma_hi > 0.0))
        throw Error(errc::invalid_params, "upper sigma endpoint must be positive");

    auto value = [&](double t) {
        return d + l.lambda1 * (1.0 - solve_bowen(stats, t, kRootTol).alpha) / log_eps;
    };
    const double top = value(0.0), bottom = value(sigma_hi);
    if (!(target_dim <= top && target_dim >= bottom))
        throw Error(errc::target_out_of_range,
                    "target " + std::to_string(target_dim) + " is outside [" +
                        std::to_string(bottom) + ", " + std::to_string(top) + "]");

    double lo = 0.0, hi = sigma_hi, mid = 0.0;
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        const double v = value(mid);
        if (std::abs(v - target_dim) <= tol) return mid;
        (v > target_dim ? lo : hi) = mid;  // the curve decreases in t
    }
    return mid;
}

bool is_conformal(const DerivativeStats& stats) {
    for (const auto& sv : stats.per_branch_singular_values)
        if (sv.front() - sv.back() > 1e-12 * sv.front()) return false;
    return true;
}

DeltaThresholds delta_thresholds(const DerivativeStats& stats, int d, double boxdim_estimate) {
    check_dim(d);
    if (is_conformal(stats))
        throw Error(errc::conformal,
                    "all branches are conformal; the delta thresholds degenerate");

    constexpr int kGrid = 512;
    const double lo_edge = 1e-9, hi_edge = 1.0 - 1e-12;
    auto product = [&](double delta) { return stats.norm_Df * epsilon_scale(stats, delta, d); };

    DeltaThresholds th;
    // delta0: sup of delta with norm_Df * epsilon(delta) < 1. The product is
    // decreasing in delta for this branch class, so scan from above and
    // refine the first crossing if one exists.
    int best = -1;
    for (int k = kGrid - 1; k >= 1; --k) {
        const double delta = static_cast<double>(k) / kGrid;
        if (product(delta) < 1.0) {
            best = k;
            break;
        }
    }
    if (best == kGrid - 1) {
        th.delta0 = 1.0;
    } else if (best < 0) {
        th.delta0 = product(lo_edge) < 1.0 ? 1.0 / kGrid : lo_edge;
    } else {
        double lo = static_cast<double>(best) / kGrid, hi = static_cast<double>(best + 1) / kGrid;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (product(mid) < 1.0 ? lo : hi) = mid;
        }
        th.delta0 = lo;
    }

    // delta1: sup of delta < delta0 with a positive lower sigma endpoint.
    auto sig_lo = [&](double delta) {
        return std::log(stats.inf_Jf) +
               (boxdim_estimate + delta - d) * std::log(epsilon_scale(stats, delta, d));
    };
    const double cap = std::min(th.delta0, hi_edge);
    int best1 = -1;
    for (int k = kGrid - 1; k >= 1; --k) {
        const double delta = cap * static_cast<double>(k) / kGrid;
        if (delta <= lo_edge) break;
        if (sig_lo(delta) > 0.0) {
            best1 = k;
            break;
        }
    }
    if (best1 == kGrid - 1) {
        th.delta1 = cap;
    } else if (best1 < 0) {
        th.delta1 = sig_lo(lo_edge) > 0.0 ? cap / kGrid : 0.0;
    } else {
        double lo = cap * best1 / kGrid, hi = cap * (best1 + 1) / kGrid;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            (sig_lo(mid) > 0.0 ? lo : hi) = mid;
        }
        th.delta1 = lo;
    }
    return th;
}

BoundsReport full_report(const DerivativeStats& stats, const BoundParams& params, int d,
                         double border_gap) {
    check_dim(d);
    BoundsReport rep;
    rep.d = d;
    rep.delta = params.delta;
    rep.rho = params.rho;
    rep.epsilon = epsilon_scale(stats, params.delta, d);
    rep.log_epsilon = std::log(rep.epsilon);
    rep.lambdas = lambda_envelopes(stats, rep.epsilon, params.rho);
    if (border_gap > 0.0) {
        rep.n0 = n_zero(stats, rep.epsilon, border_gap);
    } else {
        rep.notes.push_back("border gap is zero: the cell-separation depth n0 is unavailable");
    }

    rep.alpha0 = solve_bowen(stats, 0.0, kRootTol).alpha;
    rep.box = clamp_bounds(d + rep.lambdas.lambda0 * (1.0 - rep.alpha0) / rep.log_epsilon,
                           d + rep.lambdas.lambda2 * (1.0 - rep.alpha0) / rep.log_epsilon, d);

    rep.conformal = is_conformal(stats);
    if (rep.conformal) {
        rep.notes.push_back(
            "conformal system: delta thresholds and the sigma machinery are skipped");
        return rep;
    }

    const double boxdim_est = params.boxdim_estimate.value_or(rep.box.upper_clamped);
    rep.thresholds = delta_thresholds(stats, d, boxdim_est);
    if (params.delta > rep.thresholds->delta1)
        rep.notes.push_back("delta exceeds delta1: the default lower sigma endpoint is not positive");

    const SigmaInterval si =
        sigma_interval(stats, rep.epsilon, params.delta, d, boxdim_est, params.hausdim_estimate);
    rep.sigma = si;
    // Same tightening as hausdorff_bounds: the derived lower endpoint is
    // intersected with [0, inf) because the shift function is non-negative.
    rep.sigma_lower_used = params.sigma_lower_override.value_or(std::max(0.0, si.sigma_lower));
    rep.sigma_upper_used = params.sigma_upper_override.value_or(si.sigma_upper);

    rep.alpha_bar = solve_bowen(stats, *rep.sigma_lower_used, kRootTol).alpha;
    rep.alpha_underbar = solve_bowen(stats, *rep.sigma_upper_used, kRootTol).alpha;
    rep.hausdorff =
        clamp_bounds(d + rep.lambdas.lambda0 * (1.0 - *rep.alpha_bar) / rep.log_epsilon,
                     d + rep.lambdas.lambda1 * (1.0 - *rep.alpha_underbar) / rep.log_epsilon, d);
    return rep;
}

}  // namespace fractaldim
