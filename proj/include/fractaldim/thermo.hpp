#pragma once

#include <cstdint>
#include <vector>

#include "fractaldim/ifs_model.hpp"

namespace fractaldim {

/** Parameters of the additive potential s * log Jf - s * t evaluated on the
 * expanding (inverse-branch) side; for affine systems the potential is
 * constant on cylinders. */
struct PotentialParams {
    double s = 0.0;
    double t = 0.0;
};

enum class PressureMethod { closed_form, cylinder_sum };

struct PressureResult {
    double value = 0.0;
    PressureMethod method = PressureMethod::closed_form;
    int depth = 0;           // word length used; 0 for the closed form
    double gap_estimate = 0.0;  // |P_n - P_2n|, 0 for the closed form
};

/** Topological pressure of the potential.
 *
 * depth == 0 selects the closed form log(sum_i Jg_i^s) - s*t, exact for
 * constant-derivative branches. depth >= 1 enumerates all branch words of
 * that length and returns (1/n) log Z_n, with weights normalised per level so
 * the sum never underflows; the enumeration budget is 2^26 leaves
 * (DepthOverflow beyond that). gap_estimate compares against the word-length
 * recursion at depth 2n, which is exact here because per-branch derivative
 * brackets are tight. */
PressureResult pressure(const DerivativeStats& stats, PotentialParams params, int depth = 0);

struct GibbsWeights {
    std::vector<double> weights;  // one per branch, positive, sums to 1
};

/** Equilibrium weights w_i proportional to Jg_i^s. The t-part of the
 * potential is constant across branches and cancels. */
GibbsWeights gibbs_weights(const DerivativeStats& stats, PotentialParams params);

/** Lyapunov exponent of the volume cocycle under the Gibbs weights:
 * t + sum_i w_i log(1/Jg_i). Strictly positive whenever t >= 0. */
double lyapunov_volume(const DerivativeStats& stats, PotentialParams params);

/** Entropy-over-exponent ratio h/chi at the zero-pressure parameter for
 * t = 0. For this branch class it coincides with the root of the pressure
 * equation; the ratio is evaluated from the Gibbs weights directly. */
double dynamical_dimension(const DerivativeStats& stats);

}  // namespace fractaldim
