#include <doctest.h>

#include <cmath>
#include <random>

#include "fractaldim/bowen.hpp"
#include "fractaldim/errors.hpp"
#include "test_support.hpp"

using namespace fractaldim;
using namespace fractaldim::testing;

namespace {

// For equal-Jacobian pairs the root has the closed form
// alpha(t) = log(count) / (t + log(1/Jg)).
double equal_jacobian_root(int count, double jg, double t) {
    return std::log(static_cast<double>(count)) / (t + std::log(1.0 / jg));
}

}  // namespace

TEST_CASE("bisection root matches the closed form for the running example") {
    const auto st = derivative_stats(benchmark_pair());

    const BowenRoot r0 = solve_bowen(st, 0.0);
    CHECK(close(r0.alpha, 0.5286410248370867, 1e-9));
    CHECK(close(r0.alpha, equal_jacobian_root(2, 0.2695, 0.0), 2e-10));
    CHECK(r0.t == 0.0);
    CHECK(r0.residual <= 1e-10);
    CHECK(r0.iterations <= 200);

    const BowenRoot r05 = solve_bowen(st, 0.5);
    CHECK(close(r05.alpha, 0.3827032897102452, 1e-9));
    CHECK(close(r05.alpha, equal_jacobian_root(2, 0.2695, 0.5), 2e-10));

    const BowenRoot r1 = solve_bowen(st, 1.0);
    CHECK(close(r1.alpha, 0.29990961958506784, 1e-9));

    // strictly decreasing in the shift
    CHECK(r0.alpha > r05.alpha);
    CHECK(r05.alpha > r1.alpha);
}

TEST_CASE("classical roots") {
    SUBCASE("middle-thirds Cantor dimension") {
        const auto st = derivative_stats(ternary_pair_1d());
        CHECK(close(solve_bowen(st, 0.0).alpha, 0.6309297535714574, 5e-10));
    }
    SUBCASE("golden-mean root for Jacobians (1/4, 1/2)") {
        const auto st = derivative_stats(quarter_half_1d());
        const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
        CHECK(close(solve_bowen(st, 0.0).alpha, 0.694241913630617, 5e-10));
        CHECK(close(solve_bowen(st, 0.0).alpha, std::log(phi) / std::log(2.0), 5e-10));
    }
}

TEST_CASE("negative shifts are accepted down to the expansion threshold") {
    const auto st = derivative_stats(benchmark_pair());
    // still expanding: t + log(inf_Jf) > 0
    const BowenRoot r = solve_bowen(st, -1.0);
    CHECK(close(r.alpha, equal_jacobian_root(2, 0.2695, -1.0), 1e-9));
    CHECK(r.alpha > 2.0);  // the root is allowed to exceed the ambient dimension

    // below the threshold -log(inf_Jf) the shifted system stops expanding
    CHECK(thrown_code([&] { solve_bowen(st, -1.3111868888); }) == errc::not_expanding);
    CHECK(thrown_code([&] { solve_bowen(st, -1.32); }) == errc::not_expanding);
}

TEST_CASE("the expanding guard precedes any bracketing failure") {
    // For Jacobians (1/4, 1/2) and t = -0.8 the pressure tends to +infinity
    // in s, so no root exists -- but every such shift already violates the
    // expanding condition (t <= log max_Jg = -log 2), which fires first.
    const auto st = derivative_stats(quarter_half_1d());
    CHECK(thrown_code([&] { solve_bowen(st, -0.8); }) == errc::not_expanding);
}

TEST_CASE("inconsistent derivative data reports a missing bracket") {
    // Hand-built stats whose envelope claims expansion while the per-branch
    // Jacobians keep the pressure positive forever: the doubling search must
    // give up rather than loop. (Unreachable through derivative_stats.)
    DerivativeStats st;
    st.per_branch_singular_values = {{0.5}, {0.5}};
    st.per_branch_jacobian = {0.5, 0.5};
    st.norm_Dg = 0.5;
    st.min_Jg = 0.5;
    st.norm_Df = 2.0;
    st.inf_Jf = 100.0;  // inconsistent with the Jacobians above
    st.sup_Jf = 100.0;
    CHECK(thrown_code([&] { solve_bowen(st, -0.8); }) == errc::no_bracket);
}

TEST_CASE("roots never exceed the worst-case ambient bound at shift zero") {
    std::mt19937_64 rng(31337ULL);
    for (int trial = 0; trial < 15; ++trial) {
        const SystemSpec spec = random_corner_system(rng);
        const auto st = derivative_stats(spec);
        const BowenRoot r = solve_bowen(st, 0.0);
        CAPTURE(trial);
        CHECK(r.alpha <= spec.ambient_dim + 1e-9);
        CHECK(r.residual <= 1e-10);
        CHECK(r.iterations <= 200);
    }
}

TEST_CASE("alpha_curve equals pointwise solves and enforces its grid contract") {
    const auto st = derivative_stats(benchmark_pair());
    const std::vector<double> grid{0.0, 0.25, 0.5, 1.0, 1.7};

    const auto roots = alpha_curve(st, grid, 1e-12);
    REQUIRE(roots.size() == grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        CHECK(roots[i].t == grid[i]);
        CHECK(roots[i].alpha == solve_bowen(st, grid[i], 1e-12).alpha);
        if (i) CHECK(roots[i].alpha < roots[i - 1].alpha);
    }

    CHECK(thrown_code([&] { alpha_curve(st, {0.5, 0.5}, 1e-10); }) == errc::invalid_params);
    CHECK(thrown_code([&] { alpha_curve(st, {0.5, 0.2}, 1e-10); }) == errc::invalid_params);
}

TEST_CASE("alpha_prime matches the implicit-function quotient and finite differences") {
    const auto st = derivative_stats(benchmark_pair());

    CHECK(close(alpha_prime(st, 0.0), -0.4031774794424584, 1e-8));
    CHECK(close(alpha_prime(st, 0.5), -0.21129972401637354, 1e-8));

    for (double t : {0.0, 0.5, 1.2}) {
        const double h = 1e-5;
        const double fd =
            (solve_bowen(st, t + h, 1e-12).alpha - solve_bowen(st, t - h, 1e-12).alpha) / (2 * h);
        const double an = alpha_prime(st, t);
        CAPTURE(t);
        CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
    }
}
