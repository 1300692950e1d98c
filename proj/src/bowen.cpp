#include "fractaldim/bowen.hpp"

#include <cmath>

#include "fractaldim/errors.hpp"

namespace fractaldim {

BowenRoot solve_bowen(const DerivativeStats& stats, double t, double tol) {
    if (!(tol > 0.0) || !std::isfinite(t))
        throw Error(errc::invalid_params, "solve_bowen needs finite t and tol > 0");
    // The shifted inverse system must expand volume, i.e. e^t * inf_Jf > 1;
    // otherwise the pressure is not strictly decreasing in s and the
    // equation loses its unique root.
    if (t + std::log(stats.inf_Jf) <= 0.0)
        throw Error(errc::not_expanding,
                    "shift t = " + std::to_string(t) + " is at or below the expansion threshold " +
                        std::to_string(-std::log(stats.inf_Jf)));

    auto press = [&](double s) { return pressure(stats, {s, t}).value; };

    double hi = 1.0;
    int doublings = 0;
    while (press(hi) >= 0.0) {
        hi *= 2.0;
        if (++doublings > 64)
            throw Error(errc::no_bracket, "no sign change found while doubling the bracket");
    }

    BowenRoot root;
    root.t = t;
    double lo = 0.0;
    double mid = 0.0, p = 0.0;
    for (int i = 1; i <= 200; ++i) {
        mid = 0.5 * (lo + hi);
        p = press(mid);
        root.iterations = i;
        if (std::abs(p) <= tol) break;
        (p > 0.0 ? lo : hi) = mid;
    }
    root.alpha = mid;
    root.residual = std::abs(p);
    return root;
}

std::vector<BowenRoot> alpha_curve(const DerivativeStats& stats, const std::vector<double>& t_grid,
                                   double tol) {
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw Error(errc::invalid_params, "t grid must be strictly increasing");

    std::vector<BowenRoot> roots;
    roots.reserve(t_grid.size());
    for (double t : t_grid) {
        roots.push_back(solve_bowen(stats, t, tol));
        if (roots.size() > 1 && !(roots.back().alpha < roots[roots.size() - 2].alpha))
            throw std::logic_error("alpha_curve: root sequence is not strictly decreasing");
    }
    return roots;
}

double alpha_prime(const DerivativeStats& stats, double t, double tol) {
    const BowenRoot root = solve_bowen(stats, t, tol);
    return -root.alpha / lyapunov_volume(stats, {root.alpha, t});
}

}  // namespace fractaldim
