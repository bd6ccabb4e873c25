#pragma once

// Grids of codimension-two planes.  The standard grid Sigma_eps is the union
// of the planes C^{n-1} x {p} over lattice offsets p in eps Z^2; a
// transformed grid pulls these back through a symplectic map T, giving the
// planes T^{-1}(C^{n-1} x {p}).  Each plane is the solution set of A y = p
// with A the last two rows of T, so distances and intersections reduce to
// the affine geometry of A.

#include "sympb/common.hpp"
#include "sympb/ellipsoid.hpp"
#include "sympb/symplectic.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <vector>

namespace sympb {

class GridHyperplanes {
  public:
    GridHyperplanes(double eps, Mat transform)
        : eps_(eps), T_(std::move(transform)) {
        require(eps > 0.0, "GridHyperplanes: eps must be > 0");
        n_ = require_even_square(T_, "GridHyperplanes");
        if (!is_symplectic(T_, 1e-9))
            throw std::invalid_argument("GridHyperplanes: transform must be symplectic");
        A_ = T_.bottomRows(2);
        Eigen::JacobiSVD<Mat> svd(A_, Eigen::ComputeFullU | Eigen::ComputeFullV);
        pinv_ = svd.matrixV().leftCols(2) *
                svd.singularValues().head(2).cwiseInverse().asDiagonal() *
                svd.matrixU().transpose();
        kernel_ = svd.matrixV().rightCols(2 * n_ - 2);
        // Lattice search window covering every offset that could be nearest
        // in the pulled-back metric.
        const double cond = svd.singularValues()(0) / svd.singularValues()(1);
        window_ = static_cast<long>(std::ceil(cond * std::sqrt(0.5))) + 1;
    }

    static GridHyperplanes standard(double eps, int n) {
        return GridHyperplanes(eps, Mat::Identity(2 * n, 2 * n));
    }

    double eps() const { return eps_; }
    int half_dim() const { return n_; }
    const Mat& transform() const { return T_; }
    // Orthonormal basis of the common direction space of the planes.
    const Mat& direction_basis() const { return kernel_; }
    // The point of the plane with offset p closest to the origin.
    Vec plane_point(const Vec2& p) const { return pinv_ * p; }

    // Euclidean distance from x to the nearest plane of the grid.
    double distance(const Vec& x) const {
        require(x.size() == 2 * n_, "GridHyperplanes::distance: wrong dimension");
        const Vec2 w = A_ * x;
        const Vec2 base(eps_ * std::round(w[0] / eps_), eps_ * std::round(w[1] / eps_));
        double best = std::numeric_limits<double>::infinity();
        for (long dm = -window_; dm <= window_; ++dm)
            for (long dk = -window_; dk <= window_; ++dk) {
                const Vec2 p = base + eps_ * Vec2(static_cast<double>(dm), static_cast<double>(dk));
                best = std::min(best, (pinv_ * (w - p)).norm());
            }
        return best;
    }

    // Offsets p whose plane meets E: exactly the lattice points inside the
    // image ellipse A * E, enumerated row by row.
    std::uint64_t count_planes_meeting(const Ellipsoid& E) const {
        return enumerate(E, nullptr);
    }
    std::vector<Vec2> planes_meeting(const Ellipsoid& E) const {
        std::vector<Vec2> out;
        enumerate(E, &out);
        return out;
    }

  private:
    std::uint64_t enumerate(const Ellipsoid& E, std::vector<Vec2>* out) const {
        require(E.dim() == 2 * n_, "GridHyperplanes: ellipsoid dimension mismatch");
        const Mat C = A_ * E.generator();
        const Mat W = C * C.transpose();
        if (W.determinant() <= 0.0)
            throw std::invalid_argument("GridHyperplanes: degenerate shadow ellipse");
        const Mat V = W.inverse();
        const double ymax = std::sqrt(W(1, 1));
        std::uint64_t count = 0;
        for (long k = static_cast<long>(std::ceil(-ymax / eps_ - 1e-12));
             k <= static_cast<long>(std::floor(ymax / eps_ + 1e-12)); ++k) {
            const double y = eps_ * static_cast<double>(k);
            // V00 x^2 + 2 V01 x y + V11 y^2 <= 1
            const double disc = V(0, 1) * V(0, 1) * y * y - V(0, 0) * (V(1, 1) * y * y - 1.0);
            if (disc < 0.0) continue;
            const double mid = -V(0, 1) * y / V(0, 0);
            const double halfw = std::sqrt(disc) / V(0, 0);
            const long mlo = static_cast<long>(std::ceil((mid - halfw) / eps_ - 1e-12));
            const long mhi = static_cast<long>(std::floor((mid + halfw) / eps_ + 1e-12));
            if (mhi < mlo) continue;
            count += static_cast<std::uint64_t>(mhi - mlo + 1);
            if (out)
                for (long m = mlo; m <= mhi; ++m)
                    out->emplace_back(eps_ * static_cast<double>(m), y);
        }
        return count;
    }

    double eps_;
    Mat T_, A_, pinv_, kernel_;
    int n_ = 0;
    long window_ = 1;
};

// A plane given by a basis of its direction space is symplectic iff the Gram
// matrix of the form on the basis is nondegenerate.
inline bool plane_is_symplectic(const Mat& basis, double tol = 1e-9) {
    const int dim = static_cast<int>(basis.rows());
    const int k = static_cast<int>(basis.cols());
    require(dim % 2 == 0 && k >= 2 && k % 2 == 0 && k < dim,
            "plane_is_symplectic: basis must span an even proper subspace");
    Eigen::JacobiSVD<Mat> svd(basis);
    if (svd.singularValues()(k - 1) <= 1e-12 * svd.singularValues()(0))
        throw std::invalid_argument("plane_is_symplectic: basis vectors are dependent");
    const Mat J = standard_form_matrix(dim / 2);
    const Mat gram = basis.transpose() * J * basis;
    Eigen::JacobiSVD<Mat> gsvd(gram);
    return gsvd.singularValues()(k - 1) > tol;
}

}  // namespace sympb
