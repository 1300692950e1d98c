#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fractaldim/linalg.hpp"

namespace fractaldim {

/** One affine branch x -> linear * x + translation on the unit cube. */
struct AffineBranch {
    Mat linear;
    Vec translation;
    std::string label;  // optional; defaults to "g<k>" when empty

    Parallelotope image() const { return Parallelotope{linear, translation}; }
};

/** A finite system of affine contractions of [0,1]^d. */
struct SystemSpec {
    int ambient_dim = 0;
    std::vector<AffineBranch> branches;

    int branch_count() const { return static_cast<int>(branches.size()); }
    std::string branch_label(int i) const;
};

struct Violation {
    std::string kind;    // "containment" | "open_condition" | "border_condition"
    std::string detail;  // human-readable, names the offending branch(es)
};

struct ValidationReport {
    // True when the system has no containment or open-condition violation.
    // A border_condition finding (images touching the cube boundary) is
    // still listed in `violations` but does not clear this flag: every
    // downstream formula survives border contact, only n0 becomes
    // unavailable.
    bool regular = false;
    std::vector<Violation> violations;
    double border_gap = 0.0;  // min distance from branch images to the cube boundary
    // Heuristic: true when all branch images fit in a common axis-aligned
    // slab thinner than 1e-12, i.e. the attractor sits inside a hyperplane.
    // Advisory only; does not affect `regular`.
    bool volume_reducibility_flag = false;
};

/** Checks structural health of the system.
 *
 * Hard defects (non-square or singular linear parts, a branch with operator
 * norm >= 1) throw; geometric defects (images escaping the open cube,
 * overlapping branch images) are reported in `violations` and clear
 * `regular`. `border_gap` is 0 whenever some image touches or crosses the
 * cube boundary. */
ValidationReport validate(const SystemSpec& spec);

/** Derivative data shared by every formula downstream. All branches are
 * affine, so per-branch derivatives are constant and the sup/inf brackets
 * collapse to single numbers. */
struct DerivativeStats {
    std::vector<std::vector<double>> per_branch_singular_values;  // each descending
    std::vector<double> per_branch_jacobian;                      // |det|, in (0,1)
    double norm_Dg = 0.0;  // max over branches of the largest singular value
    double min_Jg = 0.0;   // min over branches of |det|
    double norm_Df = 0.0;  // sup |det D(inverse)| ... = 1 / (min singular value)
    double inf_Jf = 0.0;   // inf over inverse branches of |det| = 1 / max_Jg
    double sup_Jf = 0.0;   // sup over inverse branches of |det| = 1 / min_Jg

    int branch_count() const { return static_cast<int>(per_branch_jacobian.size()); }
};

/** Computes singular values, Jacobians and the inverse-branch envelopes.
 * Throws on non-square, singular, or non-contractive branches. */
DerivativeStats derivative_stats(const SystemSpec& spec);

/** Concentric shrink of every branch image about the cube center: the linear
 * parts are divided by (1 + margin) and translations recentred so each new
 * image sits strictly inside the old one. margin = 0 returns the input
 * unchanged. Throws MarginTooLarge when the shrunken system still fails the
 * open or border condition. */
SystemSpec perturb_template(const SystemSpec& spec, double margin);

}  // namespace fractaldim
