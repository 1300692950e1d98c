#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fractaldim/errors.hpp"
#include "fractaldim/ifs_model.hpp"
#include "test_support.hpp"

using namespace fractaldim;
using namespace fractaldim::testing;

namespace {

bool has_violation(const ValidationReport& vr, const std::string& kind) {
    return std::any_of(vr.violations.begin(), vr.violations.end(),
                       [&](const Violation& v) { return v.kind == kind; });
}

}  // namespace

TEST_CASE("corner-anchored pair validates as regular with a border finding") {
    const auto vr = validate(benchmark_pair());
    CHECK(vr.regular);
    CHECK(has_violation(vr, "border_condition"));
    CHECK_FALSE(has_violation(vr, "open_condition"));
    CHECK_FALSE(has_violation(vr, "containment"));
    CHECK(vr.border_gap == 0.0);
    CHECK_FALSE(vr.volume_reducibility_flag);
}

TEST_CASE("ternary square template touches the border but stays regular") {
    const auto vr = validate(ternary_square_2d());
    CHECK(vr.regular);
    CHECK(vr.border_gap == 0.0);
    CHECK(has_violation(vr, "border_condition"));
}

TEST_CASE("strictly interior images yield a positive border gap") {
    SystemSpec spec;
    spec.ambient_dim = 1;
    spec.branches.push_back({mat1(0.25), vec1(0.1), ""});   // image [0.1, 0.35]
    spec.branches.push_back({mat1(0.25), vec1(0.6), ""});   // image [0.6, 0.85]
    const auto vr = validate(spec);
    CHECK(vr.regular);
    CHECK(vr.violations.empty());
    CHECK(vr.border_gap == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("escaping image is a containment violation and not regular") {
    SystemSpec spec;
    spec.ambient_dim = 2;
    spec.branches.push_back({diag2(0.5, 0.5), vec2(0.7, 0.0), ""});  // x-range [0.7, 1.2]
    spec.branches.push_back({diag2(0.3, 0.3), vec2(0.0, 0.6), ""});
    const auto vr = validate(spec);
    CHECK_FALSE(vr.regular);
    CHECK(has_violation(vr, "containment"));
}

TEST_CASE("overlapping images break the open condition") {
    SystemSpec spec;
    spec.ambient_dim = 2;
    spec.branches.push_back({diag2(0.4, 0.4), vec2(0.0, 0.0), ""});
    spec.branches.push_back({diag2(0.4, 0.4), vec2(0.1, 0.1), ""});
    const auto vr = validate(spec);
    CHECK_FALSE(vr.regular);
    CHECK(has_violation(vr, "open_condition"));
}

TEST_CASE("images touching each other are graded as an open-condition failure") {
    SystemSpec spec;
    spec.ambient_dim = 1;
    spec.branches.push_back({mat1(0.5), vec1(0.0), ""});
    spec.branches.push_back({mat1(0.5), vec1(0.5), ""});
    const auto vr = validate(spec);
    CHECK_FALSE(vr.regular);
    CHECK(has_violation(vr, "open_condition"));
}

TEST_CASE("volume-reducibility flag fires only for a common thin slab") {
    SUBCASE("both images inside one hyperplane slab") {
        SystemSpec spec;
        spec.ambient_dim = 2;
        spec.branches.push_back({diag2(0.4, 1e-13), vec2(0.0, 0.0), ""});
        spec.branches.push_back({diag2(0.4, 1e-13), vec2(0.55, 0.0), ""});
        const auto vr = validate(spec);
        CHECK(vr.volume_reducibility_flag);
    }
    SUBCASE("thin images at different heights do not flag") {
        SystemSpec spec;
        spec.ambient_dim = 2;
        spec.branches.push_back({diag2(0.4, 1e-13), vec2(0.0, 0.0), ""});
        spec.branches.push_back({diag2(0.4, 1e-13), vec2(0.55, 0.5), ""});
        const auto vr = validate(spec);
        CHECK_FALSE(vr.volume_reducibility_flag);
    }
}

TEST_CASE("structural defects throw with named codes") {
    SUBCASE("non-square linear part") {
        SystemSpec spec;
        spec.ambient_dim = 2;
        Mat bad(2, 1);
        bad << 0.5, 0.0;
        spec.branches.push_back({bad, vec2(0.0, 0.0), ""});
        spec.branches.push_back({diag2(0.3, 0.3), vec2(0.6, 0.6), ""});
        CHECK(thrown_code([&] { validate(spec); }) == errc::non_square_matrix);
    }
    SUBCASE("translation dimension mismatch") {
        SystemSpec spec;
        spec.ambient_dim = 2;
        spec.branches.push_back({diag2(0.3, 0.3), vec1(0.0), ""});
        spec.branches.push_back({diag2(0.3, 0.3), vec2(0.6, 0.6), ""});
        CHECK(thrown_code([&] { validate(spec); }) == errc::non_square_matrix);
    }
    SUBCASE("singular value exactly one is non-contractive") {
        SystemSpec spec;
        spec.ambient_dim = 2;
        spec.branches.push_back({diag2(1.0, 0.5), vec2(0.0, 0.0), ""});
        spec.branches.push_back({diag2(0.3, 0.3), vec2(0.6, 0.6), ""});
        CHECK(thrown_code([&] { validate(spec); }) == errc::non_contractive);
    }
    SUBCASE("zero determinant is a singular branch") {
        SystemSpec spec;
        spec.ambient_dim = 2;
        spec.branches.push_back({diag2(0.5, 0.0), vec2(0.0, 0.0), ""});
        spec.branches.push_back({diag2(0.3, 0.3), vec2(0.6, 0.6), ""});
        CHECK(thrown_code([&] { validate(spec); }) == errc::singular_branch);
    }
    SUBCASE("fewer than two branches is invalid") {
        SystemSpec spec;
        spec.ambient_dim = 1;
        spec.branches.push_back({mat1(0.5), vec1(0.0), ""});
        CHECK(thrown_code([&] { validate(spec); }) == errc::invalid_params);
    }
}

TEST_CASE("derivative stats for the running example") {
    const auto st = derivative_stats(benchmark_pair());
    REQUIRE(st.branch_count() == 2);
    CHECK(st.per_branch_singular_values[0][0] == doctest::Approx(0.77).epsilon(1e-14));
    CHECK(st.per_branch_singular_values[0][1] == doctest::Approx(0.35).epsilon(1e-14));
    CHECK(close(st.per_branch_jacobian[0], 0.2695, 1e-15));
    CHECK(close(st.per_branch_jacobian[1], 0.2695, 1e-15));
    CHECK(st.norm_Dg == doctest::Approx(0.77).epsilon(1e-14));
    CHECK(close(st.min_Jg, 0.2695, 1e-15));
    CHECK(close(st.norm_Df, 2.857142857142857, 1e-12));
    CHECK(close(st.inf_Jf, 3.7105751391465684, 1e-12));
    CHECK(close(st.sup_Jf, 3.7105751391465684, 1e-12));
}

TEST_CASE("derivative stats closed forms for simple diagonals") {
    SUBCASE("conformal thirds") {
        const auto st = derivative_stats(ternary_square_2d());
        CHECK(close(st.norm_Dg, 1.0 / 3.0, 1e-15));
        CHECK(close(st.norm_Df, 3.0, 1e-12));
        CHECK(close(st.per_branch_jacobian[0], 1.0 / 9.0, 1e-15));
    }
    SUBCASE("diag(1/2, 1/4)") {
        SystemSpec spec;
        spec.ambient_dim = 2;
        spec.branches.push_back({diag2(0.5, 0.25), vec2(0.0, 0.0), ""});
        spec.branches.push_back({diag2(0.25, 0.25), vec2(0.7, 0.7), ""});
        const auto st = derivative_stats(spec);
        CHECK(st.per_branch_singular_values[0][0] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(st.per_branch_singular_values[0][1] == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(close(st.per_branch_jacobian[0], 0.125, 1e-15));
        CHECK(close(st.norm_Df, 4.0, 1e-12));
    }
}

TEST_CASE("derivative-stat identities hold on random systems") {
    std::mt19937_64 rng(20260813ULL);
    for (int trial = 0; trial < 25; ++trial) {
        const SystemSpec spec = random_corner_system(rng);
        const auto st = derivative_stats(spec);
        const int d = spec.ambient_dim;
        CAPTURE(trial);
        CAPTURE(d);

        // min Jacobian never exceeds the operator norm to the d-th power
        CHECK(st.min_Jg <= std::pow(st.norm_Dg, d) * (1.0 + 1e-12));
        CHECK(st.inf_Jf <= st.sup_Jf);
        CHECK(st.norm_Df >= 1.0 / st.norm_Dg - 1e-12);
        // per-branch Jacobian equals the product of its singular values
        for (int i = 0; i < st.branch_count(); ++i) {
            double prod = 1.0;
            for (double s : st.per_branch_singular_values[static_cast<size_t>(i)]) prod *= s;
            CHECK(close(st.per_branch_jacobian[static_cast<size_t>(i)], prod, 1e-13));
        }
        // inf_Jf is the exact reciprocal of the largest Jacobian (4 ulp)
        const double max_jg =
            *std::max_element(st.per_branch_jacobian.begin(), st.per_branch_jacobian.end());
        CHECK(std::abs(st.inf_Jf * max_jg - 1.0) <= 4.0 * 2.220446049250313e-16);
    }
}

TEST_CASE("derivative stats are permutation-equivariant") {
    SystemSpec spec = quarter_half_1d();
    const auto st = derivative_stats(spec);
    std::swap(spec.branches[0], spec.branches[1]);
    const auto st_swapped = derivative_stats(spec);
    CHECK(st.norm_Dg == st_swapped.norm_Dg);
    CHECK(st.min_Jg == st_swapped.min_Jg);
    CHECK(st.norm_Df == st_swapped.norm_Df);
    CHECK(st.inf_Jf == st_swapped.inf_Jf);
    CHECK(st.sup_Jf == st_swapped.sup_Jf);
    CHECK(st.per_branch_jacobian[0] == st_swapped.per_branch_jacobian[1]);
    CHECK(st.per_branch_jacobian[1] == st_swapped.per_branch_jacobian[0]);
}

TEST_CASE("perturbation shrinks every image into the original") {
    const SystemSpec base = benchmark_pair();

    SUBCASE("margin zero is the identity") {
        const SystemSpec same = perturb_template(base, 0.0);
        for (size_t i = 0; i < base.branches.size(); ++i) {
            CHECK((same.branches[i].linear - base.branches[i].linear).cwiseAbs().maxCoeff() == 0.0);
            CHECK((same.branches[i].translation - base.branches[i].translation)
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
        }
    }

    SUBCASE("positive margin keeps centers and nests images") {
        const double margin = 0.05;
        const SystemSpec out = perturb_template(base, margin);
        const Vec center = Vec::Constant(2, 0.5);
        for (size_t i = 0; i < base.branches.size(); ++i) {
            const auto& ob = base.branches[i];
            const auto& nb = out.branches[i];
            // linear part scaled by exactly 1/(1+margin)
            CHECK((nb.linear * (1.0 + margin) - ob.linear).norm() <= 1e-14);
            // cube-center image is preserved
            const Vec c_old = ob.linear * center + ob.translation;
            const Vec c_new = nb.linear * center + nb.translation;
            CHECK((c_old - c_new).norm() <= 1e-14);
            // all vertices of the new image live inside the old image
            const Parallelotope old_image = ob.image();
            for (int corner = 0; corner < 4; ++corner) {
                Vec u(2);
                u << (corner & 1 ? 1.0 : 0.0), (corner & 2 ? 1.0 : 0.0);
                const Vec vtx = nb.linear * u + nb.translation;
                CHECK(old_image.contains(vtx, 1e-12));
            }
        }
        // the perturbed system no longer touches the boundary
        const auto vr = validate(out);
        CHECK(vr.regular);
        CHECK(vr.border_gap > 0.0);
        CHECK(vr.violations.empty());
    }

    SUBCASE("ternary template gains a border gap") {
        const SystemSpec out = perturb_template(ternary_pair_1d(), 0.1);
        const auto vr = validate(out);
        CHECK(vr.border_gap > 0.0);
        // image of branch 0 is [1/6 - 1/6.6, 1/6 + 1/6.6]
        const double half = (1.0 / 3.0) / 1.1 / 2.0;
        CHECK(out.branches[0].linear(0, 0) == doctest::Approx((1.0 / 3.0) / 1.1).epsilon(1e-14));
        CHECK(vr.border_gap == doctest::Approx(1.0 / 6.0 - half).epsilon(1e-10));
    }

    SUBCASE("negative or non-finite margins are invalid") {
        CHECK(thrown_code([&] { perturb_template(base, -0.1); }) == errc::invalid_params);
        CHECK(thrown_code([&] {
                  perturb_template(base, std::numeric_limits<double>::quiet_NaN());
              }) == errc::invalid_params);
    }

    SUBCASE("a margin that cannot restore disjoint images throws") {
        SystemSpec overlapping;
        overlapping.ambient_dim = 2;
        overlapping.branches.push_back({diag2(0.45, 0.45), vec2(0.0, 0.0), ""});
        overlapping.branches.push_back({diag2(0.45, 0.45), vec2(0.01, 0.01), ""});
        CHECK(thrown_code([&] { perturb_template(overlapping, 1e-3); }) ==
              errc::margin_too_large);
    }
}
