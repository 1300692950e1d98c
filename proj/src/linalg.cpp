#include "fractaldim/linalg.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

#include "fractaldim/errors.hpp"

namespace fractaldim {

const char* errc_name(errc code) {
    switch (code) {
        case errc::non_square_matrix: return "NonSquareMatrix";
        case errc::non_contractive: return "NonContractive";
        case errc::singular_branch: return "SingularBranch";
        case errc::margin_too_large: return "MarginTooLarge";
        case errc::depth_overflow: return "DepthOverflow";
        case errc::not_expanding: return "NotExpanding";
        case errc::no_bracket: return "NoBracket";
        case errc::gap_zero: return "GapZero";
        case errc::rho_too_large: return "RhoTooLarge";
        case errc::conformal: return "Conformal";
        case errc::target_out_of_range: return "TargetOutOfRange";
        case errc::budget_exceeded: return "BudgetExceeded";
        case errc::degenerate_scales: return "DegenerateScales";
        case errc::empty_intersection: return "EmptyIntersection";
        case errc::invalid_params: return "InvalidParams";
        case errc::undefined: return "Undefined";
    }
    return "UnknownError";
}

std::vector<double> singular_values_desc(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& sv = svd.singularValues();
    return std::vector<double>(sv.data(), sv.data() + sv.size());
}

std::pair<double, double> Parallelotope::extent(const Vec& axis) const {
    double center = axis.dot(offset);
    double half = 0.0;
    for (int j = 0; j < static_cast<int>(linear.cols()); ++j) {
        const double a = axis.dot(linear.col(j));
        center += 0.5 * a;
        half += 0.5 * std::abs(a);
    }
    return {center - half, center + half};
}

std::pair<Vec, Vec> Parallelotope::bounding_box() const {
    const int d = dim();
    Vec lo = offset, hi = offset;
    for (int k = 0; k < d; ++k) {
        for (int j = 0; j < static_cast<int>(linear.cols()); ++j) {
            const double a = linear(k, j);
            if (a < 0.0)
                lo[k] += a;
            else
                hi[k] += a;
        }
    }
    return {lo, hi};
}

bool Parallelotope::contains(const Vec& p, double tol) const {
    Eigen::PartialPivLU<Mat> lu(linear);
    Vec u = lu.solve(p - offset);
    for (int k = 0; k < u.size(); ++k) {
        if (!(u[k] >= -tol && u[k] <= 1.0 + tol)) return false;
    }
    return true;
}

Vec orthogonal_complement(const Mat& rows) {
    const int d = static_cast<int>(rows.cols());
    Vec normal = Vec::Zero(d);
    if (d == 1) {
        normal[0] = 1.0;
        return normal;
    }
    // Cofactor expansion of det([e; rows]) along the symbolic first row.
    Mat minor(d - 1, d - 1);
    for (int j = 0; j < d; ++j) {
        for (int c = 0, cc = 0; c < d; ++c) {
            if (c == j) continue;
            minor.col(cc++) = rows.col(c);
        }
        const double det = minor.determinant();
        normal[j] = (j % 2 == 0) ? det : -det;
    }
    return normal;
}

namespace {

// Calls fn(combination) for every (d-1)-subset of {0, ..., n-1}.
template <typename F>
void for_each_subset(int n, int k, F&& fn) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

bool parallelotopes_disjoint(const Parallelotope& a, const Parallelotope& b) {
    const int d = a.dim();
    Mat gens(d, 2 * d);
    gens.leftCols(d) = a.linear;
    gens.rightCols(d) = b.linear;

    bool separated = false;
    auto try_axis = [&](const Vec& axis) {
        const double scale = axis.cwiseAbs().maxCoeff();
        if (!(scale > 1e-14)) return;  // degenerate subset, no direction
        auto [alo, ahi] = a.extent(axis);
        auto [blo, bhi] = b.extent(axis);
        if (blo - ahi > 0.0 || alo - bhi > 0.0) separated = true;
    };

    if (d == 1) {
        try_axis(Vec::Ones(1));
        return separated;
    }
    Mat rows(d - 1, d);
    for_each_subset(2 * d, d - 1, [&](const std::vector<int>& idx) {
        if (separated) return;
        for (int r = 0; r < d - 1; ++r) rows.row(r) = gens.col(idx[r]).transpose();
        try_axis(orthogonal_complement(rows));
    });
    return separated;
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t n = xs.size();
    if (n < 2 || ys.size() != n)
        throw Error(errc::invalid_params, "line fit needs at least two (x, y) pairs");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw Error(errc::invalid_params, "line fit needs distinct abscissae");

    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.slope_stderr = (n > 2) ? std::sqrt(ss_res / (static_cast<double>(n - 2) * sxx)) : 0.0;
    fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

}  // namespace fractaldim
