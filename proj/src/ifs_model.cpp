#include "fractaldim/ifs_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fractaldim/errors.hpp"

namespace fractaldim {

std::string SystemSpec::branch_label(int i) const {
    const auto& given = branches[static_cast<size_t>(i)].label;
    return given.empty() ? "g" + std::to_string(i) : given;
}

namespace {

// Shape and contractivity checks shared by validate / derivative_stats /
// perturb_template. Returns the descending singular values per branch.
std::vector<std::vector<double>> check_branches(const SystemSpec& spec) {
    if (spec.ambient_dim < 1)
        throw Error(errc::invalid_params, "ambient dimension must be at least 1");
    if (spec.branch_count() < 2)
        throw Error(errc::invalid_params, "a system needs at least two branches");

    std::vector<std::vector<double>> svs;
    svs.reserve(spec.branches.size());
    for (int i = 0; i < spec.branch_count(); ++i) {
        const auto& br = spec.branches[static_cast<size_t>(i)];
        const auto label = spec.branch_label(i);
        if (br.linear.rows() != spec.ambient_dim || br.linear.cols() != spec.ambient_dim)
            throw Error(errc::non_square_matrix,
                        "branch " + label + " linear part is not " +
                            std::to_string(spec.ambient_dim) + "x" +
                            std::to_string(spec.ambient_dim));
        if (br.translation.size() != spec.ambient_dim)
            throw Error(errc::non_square_matrix,
                        "branch " + label + " translation has wrong dimension");
        if (!br.linear.allFinite() || !br.translation.allFinite())
            throw Error(errc::invalid_params, "branch " + label + " has non-finite entries");

        auto sv = singular_values_desc(br.linear);
        if (!(sv.back() > 0.0))
            throw Error(errc::singular_branch, "branch " + label + " has zero determinant");
        if (!(sv.front() < 1.0))
            throw Error(errc::non_contractive,
                        "branch " + label + " has operator norm >= 1");
        svs.push_back(std::move(sv));
    }
    return svs;
}

}  // namespace

ValidationReport validate(const SystemSpec& spec) {
    const auto svs = check_branches(spec);
    ValidationReport report;

    const int d = spec.ambient_dim;
    double min_gap = 1.0;
    Vec slab_lo = Vec::Constant(d, std::numeric_limits<double>::infinity());
    Vec slab_hi = Vec::Constant(d, -std::numeric_limits<double>::infinity());
    for (int i = 0; i < spec.branch_count(); ++i) {
        const auto po = spec.branches[static_cast<size_t>(i)].image();
        auto [lo, hi] = po.bounding_box();
        double gap = 1.0;
        bool escapes = false;
        for (int k = 0; k < d; ++k) {
            gap = std::min({gap, lo[k], 1.0 - hi[k]});
            if (lo[k] < 0.0 || hi[k] > 1.0) escapes = true;
            slab_lo[k] = std::min(slab_lo[k], lo[k]);
            slab_hi[k] = std::max(slab_hi[k], hi[k]);
        }
        min_gap = std::min(min_gap, gap);
        if (escapes)
            report.violations.push_back(
                {"containment", "branch " + spec.branch_label(i) + " maps outside the unit cube"});
        else if (gap <= 0.0)
            report.violations.push_back(
                {"border_condition",
                 "branch " + spec.branch_label(i) + " touches the cube boundary"});
    }
    report.border_gap = std::max(0.0, min_gap);
    for (int k = 0; k < d; ++k)
        if (slab_hi[k] - slab_lo[k] < 1e-12) report.volume_reducibility_flag = true;

    for (int i = 0; i < spec.branch_count(); ++i) {
        for (int j = i + 1; j < spec.branch_count(); ++j) {
            if (!parallelotopes_disjoint(spec.branches[static_cast<size_t>(i)].image(),
                                         spec.branches[static_cast<size_t>(j)].image()))
                report.violations.push_back(
                    {"open_condition", "branches " + spec.branch_label(i) + " and " +
                                           spec.branch_label(j) + " have intersecting images"});
        }
    }

    report.regular = std::none_of(report.violations.begin(), report.violations.end(),
                                  [](const Violation& v) { return v.kind != "border_condition"; });
    return report;
}

DerivativeStats derivative_stats(const SystemSpec& spec) {
    DerivativeStats stats;
    stats.per_branch_singular_values = check_branches(spec);

    double max_Jg = 0.0, min_sv = 1.0;
    stats.min_Jg = 1.0;
    for (const auto& sv : stats.per_branch_singular_values) {
        double jac = 1.0;
        for (double s : sv) jac *= s;
        stats.per_branch_jacobian.push_back(jac);
        stats.norm_Dg = std::max(stats.norm_Dg, sv.front());
        min_sv = std::min(min_sv, sv.back());
        stats.min_Jg = std::min(stats.min_Jg, jac);
        max_Jg = std::max(max_Jg, jac);
    }
    stats.norm_Df = 1.0 / min_sv;
    stats.inf_Jf = 1.0 / max_Jg;
    stats.sup_Jf = 1.0 / stats.min_Jg;
    return stats;
}

SystemSpec perturb_template(const SystemSpec& spec, double margin) {
    check_branches(spec);
    if (!(margin >= 0.0) || !std::isfinite(margin))
        throw Error(errc::invalid_params, "margin must be a finite non-negative number");
    if (margin == 0.0) return spec;

    const double factor = 1.0 / (1.0 + margin);
    const Vec center = Vec::Constant(spec.ambient_dim, 0.5);
    SystemSpec out = spec;
    for (auto& br : out.branches) {
        const Mat shrunk = br.linear * factor;
        br.translation += (br.linear - shrunk) * center;
        br.linear = shrunk;
    }

    const auto report = validate(out);
    if (!report.regular)
        throw Error(errc::margin_too_large,
                    "shrinking by margin " + std::to_string(margin) +
                        " does not produce a regular system (" +
                        report.violations.front().detail + ")");
    return out;
}

}  // namespace fractaldim
