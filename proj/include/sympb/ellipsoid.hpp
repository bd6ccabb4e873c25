#pragma once

// Ellipsoids E = G * B^{2n}(1) given by an invertible generator G, and the
// geometric quantities the barrier construction consumes: support function,
// minimal width, areas of slices by the planes {z_n = b}, and the inflation
// coefficient of the grid outer approximation.

#include "sympb/common.hpp"
#include "sympb/parallel.hpp"
#include "sympb/symplectic.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace sympb {

class Ellipsoid {
  public:
    // generator must be square 2n x 2n and invertible.
    explicit Ellipsoid(Mat generator) : gen_(std::move(generator)) {
        n_ = require_even_square(gen_, "Ellipsoid");
        Eigen::JacobiSVD<Mat> svd(gen_, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        if (!(smin > 1e-13 * smax))
            throw std::invalid_argument("Ellipsoid: generator is singular");
        inv_ = gen_.partialPivLu().inverse();
        width_min_ = smin;
    }

    int half_dim() const { return n_; }
    int dim() const { return 2 * n_; }
    const Mat& generator() const { return gen_; }
    const Mat& inverse() const { return inv_; }

    Ellipsoid scaled(double c) const {
        require(c > 0.0, "Ellipsoid::scaled: factor must be > 0");
        return Ellipsoid(c * gen_);
    }
    Ellipsoid mapped(const Mat& T) const { return Ellipsoid(T * gen_); }

    double cached_width_min() const { return width_min_; }

  private:
    Mat gen_, inv_;
    int n_ = 0;
    double width_min_ = 0.0;
};

// Support function h_E(u) = |G^T u| for unit u.
inline double support(const Ellipsoid& E, const Vec& u) {
    require(u.size() == E.dim(), "support: direction has wrong dimension");
    if (std::abs(u.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("support: direction must be a unit vector");
    return (E.generator().transpose() * u).norm();
}

// Minimal width lambda(E) = min_{|u|=1} h_E(u) = sigma_min(G).
inline double width_min(const Ellipsoid& E) { return E.cached_width_min(); }

// x in (1 + slack) * E.
inline bool membership(const Ellipsoid& E, const Vec& x, double slack) {
    require(x.size() == E.dim(), "membership: point has wrong dimension");
    require(slack >= 0.0, "membership: slack must be >= 0");
    return (E.inverse() * x).norm() <= 1.0 + slack;
}

namespace detail {

// Restriction of |G^{-1} x|^2 to the affine plane {z_n = b}: with
// Q = G^{-T} G^{-1} split into the leading (2n-2) block Q11, the coupling
// Q12 and the trailing 2x2 block Q22, the slice is the sublevel set
//   (w - w0)^T Q11 (w - w0) <= rho(b),  rho(b) = 1 - b^T (Q22 - Q12^T Q11^{-1} Q12) b.
struct SliceForm {
    Mat Q11;
    double rho;     // may be <= 0 when the plane misses the ellipsoid
    double detQ11;
};

inline SliceForm slice_form(const Ellipsoid& E, const Vec2& b) {
    const int m = E.dim() - 2;
    const Mat& Gi = E.inverse();
    const Mat Q = Gi.transpose() * Gi;
    const Mat Q11 = Q.topLeftCorner(m, m);
    const Mat Q12 = Q.topRightCorner(m, 2);
    const Mat Q22 = Q.bottomRightCorner(2, 2);
    const Mat schur = Q22 - Q12.transpose() * Q11.ldlt().solve(Q12);
    SliceForm f;
    f.Q11 = Q11;
    f.rho = 1.0 - b.dot(schur * b);
    f.detQ11 = Q11.determinant();
    return f;
}

inline double unit_ball_volume(int d) {
    // V_d = pi^{d/2} / Gamma(d/2 + 1)
    return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

}  // namespace detail

// (2n-2)-volume of the slice E cap {z_n = b}; for n = 2 this is the area of
// a planar ellipse.  Zero when the plane misses E.
inline double slice_area(const Ellipsoid& E, const Vec2& b) {
    const auto f = detail::slice_form(E, b);
    if (f.rho <= 0.0) return 0.0;
    const int m = E.dim() - 2;
    return detail::unit_ball_volume(m) * std::pow(f.rho, 0.5 * m) / std::sqrt(f.detQ11);
}

// Independent oracle: rejection sampling over the bounding box of the slice
// in the plane {z_n = b}.  Parallel chunking keeps the count, and hence the
// estimate, reproducible for a given seed regardless of worker count.
inline double slice_area_monte_carlo(const Ellipsoid& E, const Vec2& b, std::uint64_t samples,
                                     std::uint64_t seed, unsigned threads = 0) {
    require(samples > 0, "slice_area_monte_carlo: need at least one sample");
    const int m = E.dim() - 2;
    const auto f = detail::slice_form(E, b);
    if (f.rho <= 0.0) return 0.0;
    // Axis-aligned bounding box of the slice ellipse: half-width along axis i
    // is sqrt(rho * (Q11^{-1})_{ii}).
    const Mat C = f.Q11.inverse();
    Vec half(m);
    for (int i = 0; i < m; ++i) half[i] = std::sqrt(f.rho * C(i, i));
    double box = 1.0;
    for (int i = 0; i < m; ++i) box *= 2.0 * half[i];

    const Mat& Gi = E.inverse();
    const std::size_t chunk = 1 << 16;
    const std::size_t chunks = (samples + chunk - 1) / chunk;
    std::vector<std::uint64_t> hits(chunks, 0);
    parallel_chunks(samples, chunk, threads, [&](std::size_t c, std::size_t lo, std::size_t hi) {
        auto rng = chunk_rng(seed, c);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        Vec x = Vec::Zero(E.dim());
        x[m] = b[0];
        x[m + 1] = b[1];
        std::uint64_t h = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            for (int k = 0; k < m; ++k) x[k] = half[k] * unif(rng);
            if ((Gi * x).squaredNorm() <= 1.0) ++h;
        }
        hits[c] = h;
    });
    std::uint64_t total = 0;
    for (auto h : hits) total += h;
    return box * static_cast<double>(total) / static_cast<double>(samples);
}

struct SliceScanRow {
    double bx, by, area;
};

// Slice areas over a uniform grid of offsets covering the bounding box of
// the projection of E to the z_n plane.
inline std::vector<SliceScanRow> slice_area_scan(const Ellipsoid& E, int grid_per_axis = 41) {
    require(grid_per_axis >= 2, "slice_area_scan: grid must have >= 2 points per axis");
    const Mat Cproj = E.generator().bottomRows(2) * E.generator().bottomRows(2).transpose();
    const double bx = std::sqrt(Cproj(0, 0));
    const double by = std::sqrt(Cproj(1, 1));
    std::vector<SliceScanRow> rows;
    rows.reserve(static_cast<std::size_t>(grid_per_axis) * grid_per_axis);
    for (int i = 0; i < grid_per_axis; ++i) {
        for (int j = 0; j < grid_per_axis; ++j) {
            Vec2 b(-bx + 2.0 * bx * i / (grid_per_axis - 1), -by + 2.0 * by * j / (grid_per_axis - 1));
            rows.push_back({b[0], b[1], slice_area(E, b)});
        }
    }
    return rows;
}

struct SliceSup {
    double area;
    Vec2 argmax;
};

// sup_b of the slice area: coarse grid then coordinate-wise golden-section
// refinement around the best grid offset.
inline SliceSup slice_area_sup(const Ellipsoid& E, int grid_per_axis = 41) {
    const auto rows = slice_area_scan(E, grid_per_axis);
    SliceSup best{-1.0, Vec2::Zero()};
    for (const auto& r : rows)
        if (r.area > best.area) best = {r.area, Vec2(r.bx, r.by)};

    const Mat Cproj = E.generator().bottomRows(2) * E.generator().bottomRows(2).transpose();
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int sweep = 0; sweep < 4; ++sweep) {
        for (int axis = 0; axis < 2; ++axis) {
            const double span = 2.0 * std::sqrt(Cproj(axis, axis)) / (grid_per_axis - 1);
            double lo = best.argmax[axis] - span, hi = best.argmax[axis] + span;
            auto eval = [&](double v) {
                Vec2 b = best.argmax;
                b[axis] = v;
                return slice_area(E, b);
            };
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            double f1 = eval(x1), f2 = eval(x2);
            for (int it = 0; it < 60; ++it) {
                if (f1 < f2) {
                    lo = x1; x1 = x2; f1 = f2;
                    x2 = lo + gr * (hi - lo); f2 = eval(x2);
                } else {
                    hi = x2; x2 = x1; f2 = f1;
                    x1 = hi - gr * (hi - lo); f1 = eval(x1);
                }
            }
            best.argmax[axis] = 0.5 * (lo + hi);
            best.area = eval(best.argmax[axis]);
        }
    }
    return best;
}

// Inflation coefficient of the grid outer approximation: replacing the
// z_n-shadow of the scaled ellipsoid A^L E by whole grid squares of side
// eps*L costs at most a sqrt(2)*eps*L Hausdorff enlargement, i.e. a factor
// 1 + sqrt(2)*eps*L / lambda(A^L E).
inline double grid_inflation(double eps, double L, const Ellipsoid& E) {
    require(eps >= 0.0, "grid_inflation: eps must be >= 0");
    if (L < 1.0) throw std::domain_error("grid_inflation: L must be >= 1");
    const Ellipsoid scaled = E.mapped(scaling_map(L, E.half_dim()));
    return 1.0 + std::sqrt(2.0) * eps * L / width_min(scaled);
}

// The family {G_a} of closed grid squares of side eps; cells are indexed by
// the lattice point at their center with the half-open convention
// [-eps/2, eps/2)^2, so every point belongs to exactly one cell.
struct GridCellFamily {
    double eps;

    explicit GridCellFamily(double eps_) : eps(eps_) {
        require(eps_ > 0.0, "GridCellFamily: eps must be > 0");
    }

    std::array<long, 2> cell_index(const Vec2& p) const {
        return {static_cast<long>(std::floor(p[0] / eps + 0.5)),
                static_cast<long>(std::floor(p[1] / eps + 0.5))};
    }
    Vec2 cell_center(const std::array<long, 2>& idx) const {
        return Vec2(eps * static_cast<double>(idx[0]), eps * static_cast<double>(idx[1]));
    }
    // Local coordinate within the unit cell [-1/2, 1/2)^2.
    Vec2 local_coordinate(const Vec2& p) const {
        const auto idx = cell_index(p);
        return (p - cell_center(idx)) / eps;
    }
};

}  // namespace sympb
