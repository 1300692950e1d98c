#pragma once

#include <vector>

#include "fractaldim/thermo.hpp"

namespace fractaldim {

struct BowenRoot {
    double alpha = 0.0;
    double t = 0.0;
    double residual = 0.0;  // |P(alpha, t)| at the returned root
    int iterations = 0;
};

/** Solves P(alpha, t) = 0 in alpha for fixed t by bisection on the
 * closed-form pressure, which is strictly decreasing in alpha whenever the
 * shifted system is expanding (e^t * inf_Jf > 1; NotExpanding otherwise).
 * The initial bracket [0, hi] doubles hi until the pressure turns negative
 * (NoBracket after 64 doublings). Stops once |P| <= tol; never exceeds 200
 * iterations. */
BowenRoot solve_bowen(const DerivativeStats& stats, double t, double tol = 1e-10);

/** solve_bowen over an ascending grid of t values. The grid must be strictly
 * increasing; the resulting alpha values are checked to be strictly
 * decreasing. */
std::vector<BowenRoot> alpha_curve(const DerivativeStats& stats, const std::vector<double>& t_grid,
                                   double tol = 1e-10);

/** Derivative of t -> alpha(t) via the implicit-function identity
 * alpha'(t) = -alpha(t) / lyapunov_volume(alpha(t), t). */
double alpha_prime(const DerivativeStats& stats, double t, double tol = 1e-10);

}  // namespace fractaldim
