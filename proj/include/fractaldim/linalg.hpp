#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fractaldim {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/** Singular values of `m`, sorted in descending order. */
std::vector<double> singular_values_desc(const Mat& m);

/** A parallelotope {A u + b : u in [0,1]^d}, i.e. the affine image of the
 * closed unit cube. Extents along arbitrary axes are exact because the image
 * is the convex hull of the 2^d vertex images. */
struct Parallelotope {
    Mat linear;
    Vec offset;

    int dim() const { return static_cast<int>(linear.rows()); }

    /** [min, max] of x . axis over the parallelotope. */
    std::pair<double, double> extent(const Vec& axis) const;

    /** Coordinate-wise bounding box, as (min, max) per coordinate. */
    std::pair<Vec, Vec> bounding_box() const;

    /** True if `p` lies in the parallelotope (requires invertible `linear`);
     * `tol` loosens the preimage-coordinate check at both ends. */
    bool contains(const Vec& p, double tol = 0.0) const;
};

/** Vector orthogonal to the span of the rows of `rows` ((d-1) x d), computed
 * by cofactor expansion of the formal determinant. Zero vector if the rows
 * are linearly dependent. */
Vec orthogonal_complement(const Mat& rows);

/** Separating-axis test for two affine images of the unit cube.
 * Returns true only when a strictly positive gap exists along some candidate
 * axis; touching boundaries count as non-disjoint. The candidate axes (all
 * normals to (d-1)-subsets of the combined generator columns) are exhaustive
 * for this shape class, so the test is exact up to roundoff. */
bool parallelotopes_disjoint(const Parallelotope& a, const Parallelotope& b);

/** Least-squares line fit y ~ intercept + slope * x. */
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 1.0;
};

/** Ordinary least squares for a scalar line; requires xs.size() >= 2 and at
 * least two distinct abscissae. r_squared is defined as 1 when the responses
 * are constant (perfect fit by the constant line). */
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace fractaldim
