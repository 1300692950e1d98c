#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fractaldim/bowen.hpp"

namespace fractaldim {

/** Tuning knobs for the rigorous bounds. */
struct BoundParams {
    double delta = 0.1;  // shape-tolerance exponent, in (0,1)
    double rho = 0.1;    // Jacobian slack, >= 0 and < inf_Jf
    // A-priori box-dimension estimate entering the default sigma interval;
    // when absent the clamped box upper bound is used in its place.
    std::optional<double> boxdim_estimate;
    // Hausdorff-dimension estimate for the lower sigma endpoint; defaults to
    // boxdim_estimate.
    std::optional<double> hausdim_estimate;
    // Explicit sigma endpoints override the derived interval entirely.
    std::optional<double> sigma_lower_override;
    std::optional<double> sigma_upper_override;
};

/** Characteristic covering scale
 * epsilon(delta) = (1 - delta) * (min_Jg / norm_Dg^(d-1+delta))^(1/(1-delta)),
 * strictly below min(1, norm_Dg) and strictly decreasing in delta. */
double epsilon_scale(const DerivativeStats& stats, double delta, int d);

/** Depth after which an epsilon^n-cell of the attractor fits inside a
 * rho0-neighbourhood gap: n0 = log(rho0 / 2) / log(epsilon / norm_Dg).
 * rho0 is the border gap; GapZero when it vanishes. */
double n_zero(const DerivativeStats& stats, double epsilon, double rho0);

struct Lambdas {
    double lambda0 = 0.0;  // log(inf_Jf - rho)
    double lambda1 = 0.0;  // log(sup_Jf + rho)
    double lambda2 = 0.0;  // lambda1 * log(epsilon) / log(norm_Dg)
};

/** Volume-growth envelopes entering the dimension formulas. RhoTooLarge when
 * rho >= inf_Jf. */
Lambdas lambda_envelopes(const DerivativeStats& stats, double epsilon, double rho);

struct DimBounds {
    double upper_raw = 0.0;
    double lower_raw = 0.0;
    double upper_clamped = 0.0;  // intersected with [0, d]
    double lower_clamped = 0.0;
    bool lower_vacuous = false;  // raw lower <= 0 carries no information
    bool upper_vacuous = false;  // raw upper >= d carries no information
};

/** Box-counting dimension bounds
 *   upper = d + lambda0 * (1 - alpha(0)) / log(epsilon)
 *   lower = d + lambda2 * (1 - alpha(0)) / log(epsilon).
 * Raw values are reported even when vacuous; clamped values always satisfy
 * 0 <= lower <= upper <= d. */
DimBounds box_bounds(const DerivativeStats& stats, const BoundParams& params, int d);

struct SigmaInterval {
    double sigma_lower = 0.0;
    double sigma_upper = 0.0;
    bool lower_nonpositive = false;  // delta beyond the useful threshold
};

/** Default shift interval for the modified pressure equation:
 *   sigma_lower = log(inf_Jf) + (hausdim_est + delta - d) * log(epsilon)
 *   sigma_upper = log(sup_Jf) + (boxdim_est - delta) * log(norm_Df * epsilon)
 *                 - d * log(epsilon). */
SigmaInterval sigma_interval(const DerivativeStats& stats, double epsilon, double delta, int d,
                             double boxdim_estimate,
                             std::optional<double> hausdim_estimate = std::nullopt);

/** Hausdorff bounds from the shifted pressure roots:
 *   upper = d + lambda0 * (1 - alpha(sigma_lower_used)) / log(epsilon)
 *   lower = d + lambda1 * (1 - alpha(sigma_upper_used)) / log(epsilon).
 * Sigma endpoints come from the overrides in `params` when present, else
 * from sigma_interval; a derived (non-overridden) lower endpoint is
 * intersected with [0, inf) since the shift function is non-negative, so
 * past the delta1 threshold the upper bound degrades to the box bound
 * instead of failing. */
DimBounds hausdorff_bounds(const DerivativeStats& stats, const BoundParams& params, int d);

/** Sampled graph of t -> d + lambda1 * (1 - alpha(t)) / log(epsilon), the
 * Hausdorff lower bound as a function of the shift. Strictly decreasing. */
std::vector<std::pair<double, double>> dimension_curve(const DerivativeStats& stats,
                                                       const BoundParams& params, int d,
                                                       const std::vector<double>& t_grid);

/** Inverts the dimension curve: the shift sigma with
 * curve(sigma) = target_dim, found by bisection over [0, sigma_upper].
 * TargetOutOfRange when target_dim is outside [curve(sigma_upper), curve(0)].
 */
double invert_dimension(const DerivativeStats& stats, const BoundParams& params, int d,
                        double target_dim, double tol = 1e-10);

struct DeltaThresholds {
    double delta0 = 0.0;  // sup of delta with norm_Df * epsilon(delta) < 1
    double delta1 = 0.0;  // sup of delta < delta0 with sigma_lower(delta) > 0
};

/** Usable ranges of delta. Requires a genuinely non-conformal system: when
 * every branch has all singular values equal the thresholds degenerate and
 * Conformal is thrown. */
DeltaThresholds delta_thresholds(const DerivativeStats& stats, int d, double boxdim_estimate);

/** True when all branches are conformal (all singular values equal within
 * 1e-12 relative tolerance). */
bool is_conformal(const DerivativeStats& stats);

/** Everything the analyze pipeline derives, in one bundle. Optional fields
 * are absent when their preconditions fail (n0 needs a positive border gap;
 * the sigma machinery needs a non-conformal system). */
struct BoundsReport {
    int d = 0;
    double delta = 0.0;
    double rho = 0.0;
    double epsilon = 0.0;
    double log_epsilon = 0.0;
    std::optional<double> n0;
    Lambdas lambdas;
    double alpha0 = 0.0;  // pressure root at shift 0
    DimBounds box;
    std::optional<DeltaThresholds> thresholds;
    std::optional<SigmaInterval> sigma;
    std::optional<double> sigma_lower_used;  // after overrides
    std::optional<double> sigma_upper_used;
    std::optional<double> alpha_bar;       // root at sigma_lower_used
    std::optional<double> alpha_underbar;  // root at sigma_upper_used
    std::optional<DimBounds> hausdorff;
    bool conformal = false;
    std::vector<std::string> notes;
};

/** Assembles the full report. border_gap feeds n0; boxdim fallbacks follow
 * BoundParams semantics. Never throws for conformal systems or a zero gap —
 * those limitations are recorded as notes instead. */
BoundsReport full_report(const DerivativeStats& stats, const BoundParams& params, int d,
                         double border_gap);

}  // namespace fractaldim
