#pragma once

// The divergence -1 cell field.
//
// On the unit cell Q = [-1/2, 1/2]^2 punctured at the origin, the field is
//
//     X = Y + grad^perp H,      Y = (-r/2 + 1/(2 pi r)) d/dr,
//
// with grad^perp H = (-dH/dy, dH/dx).  Y alone has divergence -1 away from
// the puncture and pushes unit flux out of it, but is not tangent to the
// cell boundary; the stream correction H restores tangency without touching
// the divergence.  Tangency pins the tangential derivative of H along each
// edge (dH/ds = -Y.n clockwise), which integrates to Dirichlet data because
// the net flux of Y through the boundary vanishes.  At a corner the two edge
// conditions determine the whole gradient, forcing X(corner) = 0.  H is the
// harmonic extension of that data, tapered to zero inside the blend annulus
// so the field is exactly radial near the puncture.

#include "sympb/common.hpp"
#include "sympb/poisson.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <vector>

namespace sympb {

// Y(p) = g(|p|) p/|p| with g(r) = -r/2 + 1/(2 pi r); equivalently
// (-1/2 + 1/(2 pi |p|^2)) p.  Undefined at the puncture itself.
inline Vec2 puncture_field(const Vec2& p) {
    const double r2 = p.squaredNorm();
    if (r2 < 1e-24)
        throw std::runtime_error(
            "puncture_field: evaluation at the puncture; trajectories cannot reach it, "
            "this signals a field bug");
    return (-0.5 + 1.0 / (2.0 * M_PI * r2)) * p;
}

struct BoundaryStreamData {
    // H along the clockwise boundary loop starting at the corner (-1/2, 1/2):
    // edge 0 top (left to right), 1 right (top to bottom), 2 bottom (right to
    // left), 3 left (bottom to top).  Each edge holds samples_per_edge + 1
    // values; consecutive edges share their corner value.
    std::array<std::vector<double>, 4> edge;
    double loop_gap;  // |H at the end of the loop|, zero for exact data
};

namespace detail {

// -Y.n on edge `e` at clockwise arclength parameter s in [0, 1].
inline double minus_normal_flux(int e, double s) {
    Vec2 p, n;
    switch (e) {
        case 0: p = {-0.5 + s, 0.5}; n = {0.0, 1.0}; break;
        case 1: p = {0.5, 0.5 - s}; n = {1.0, 0.0}; break;
        case 2: p = {0.5 - s, -0.5}; n = {0.0, -1.0}; break;
        default: p = {-0.5, -0.5 + s}; n = {-1.0, 0.0}; break;
    }
    return -puncture_field(p).dot(n);
}

}  // namespace detail

// Integrates -Y.n clockwise around the cell boundary (per-step Simpson rule).
// The loop closes because the interior divergence -1 over unit area exactly
// balances the unit flux out of the puncture.
inline BoundaryStreamData boundary_stream_data(int samples_per_edge) {
    require(samples_per_edge >= 16, "boundary_stream_data: need at least 16 samples per edge");
    BoundaryStreamData out;
    const double step = 1.0 / samples_per_edge;
    double acc = 0.0;
    for (int e = 0; e < 4; ++e) {
        auto& vals = out.edge[e];
        vals.resize(samples_per_edge + 1);
        vals[0] = acc;
        for (int k = 0; k < samples_per_edge; ++k) {
            const double s0 = k * step;
            const double f0 = detail::minus_normal_flux(e, s0);
            const double fm = detail::minus_normal_flux(e, s0 + 0.5 * step);
            const double f1 = detail::minus_normal_flux(e, s0 + step);
            acc += step / 6.0 * (f0 + 4.0 * fm + f1);
            vals[k + 1] = acc;
        }
    }
    out.loop_gap = std::abs(acc);
    return out;
}

struct CellFieldParams {
    int resolution = 512;          // grid spacing h = 1/resolution
    double puncture_radius = 0.15; // X = Y exactly inside this radius
    double blend_radius = 0.35;    // H reaches full strength beyond this
};

struct CellFieldDiagnostics {
    double loop_gap = 0.0;
    double solve_residual = 0.0;          // discrete Laplace residual of H
    double edge_normal_residual = 0.0;    // max |X.n| at edge nodes, before pinning
    double corner_speed_residual = 0.0;   // max |X| at the four corners, before pinning
    double divergence_deviation = 0.0;    // max |div_h X + 1| away from the puncture
};

class CellField {
  public:
    static CellField build(const CellFieldParams& params = {});

    int resolution() const { return N_; }
    double spacing() const { return h_; }
    double puncture_radius() const { return r0_; }
    const CellFieldDiagnostics& diagnostics() const { return diag_; }
    const Mat& stream() const { return H_; }

    // Field evaluation: exact radial field inside the puncture radius,
    // Catmull-Rom bicubic interpolation of the node values elsewhere (C^1,
    // so finite-difference Jacobians of the flow are clean; at t = 0, 1 the
    // cubic reproduces the node values, so the pinned edges stay exact).
    // Queries are clamped to the closed cell (integrator stages may poke
    // slightly out).
    Vec2 eval(const Vec2& p) const {
        const double r2 = p.squaredNorm();
        if (r2 < r0_ * r0_) return puncture_field(p);
        const double x = std::clamp(p[0], -0.5, 0.5);
        const double y = std::clamp(p[1], -0.5, 0.5);
        const double gx = (x + 0.5) / h_, gy = (y + 0.5) / h_;
        const int i = std::min(static_cast<int>(gx), N_ - 1);
        const int j = std::min(static_cast<int>(gy), N_ - 1);
        const double fx = gx - i, fy = gy - j;
        std::array<double, 4> wx, wy;
        catmull_rom_weights(fx, wx);
        catmull_rom_weights(fy, wy);
        double vx = 0.0, vy = 0.0;
        for (int b = 0; b < 4; ++b) {
            if (wy[b] == 0.0) continue;
            const int jj = j - 1 + b;
            double rowx = 0.0, rowy = 0.0;
            for (int a = 0; a < 4; ++a) {
                if (wx[a] == 0.0) continue;
                const int ii = i - 1 + a;
                rowx += wx[a] * fetch(Xx_, ii, jj);
                rowy += wx[a] * fetch(Xy_, ii, jj);
            }
            vx += wy[b] * rowx;
            vy += wy[b] * rowy;
        }
        return {vx, vy};
    }

    // max |div_h X + 1| by central differences over interior nodes outside
    // the disk r < r0 + 2h.
    double divergence_check() const {
        double worst = 0.0;
        const double rmin = r0_ + 2.0 * h_;
        for (int i = 1; i < N_; ++i)
            for (int j = 1; j < N_; ++j) {
                if (node(i, j).norm() < rmin) continue;
                const double div = (Xx_(i + 1, j) - Xx_(i - 1, j) + Xy_(i, j + 1) - Xy_(i, j - 1)) / (2.0 * h_);
                worst = std::max(worst, std::abs(div + 1.0));
            }
        return worst;
    }

    void write_csv(std::ostream& os, int stride = 1) const {
        os << "x,y,X_x,X_y,H\n";
        for (int i = 0; i <= N_; i += stride)
            for (int j = 0; j <= N_; j += stride) {
                const Vec2 p = node(i, j);
                os << p[0] << ',' << p[1] << ',' << Xx_(i, j) << ',' << Xy_(i, j) << ',' << H_(i, j)
                   << '\n';
            }
    }

    Vec2 node(int i, int j) const { return {-0.5 + i * h_, -0.5 + j * h_}; }

  private:
    CellField() = default;

    static void catmull_rom_weights(double t, std::array<double, 4>& w) {
        const double t2 = t * t, t3 = t2 * t;
        w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
        w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
        w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
        w[3] = 0.5 * (t3 - t2);
    }

    // Node access with linear-extrapolation ghosts one step past each side
    // (the interpolation stencil never reaches further).
    double fetch(const Mat& G, int i, int j) const {
        if (i < 0) return 2.0 * fetch(G, 0, j) - fetch(G, 1, j);
        if (i > N_) return 2.0 * fetch(G, N_, j) - fetch(G, N_ - 1, j);
        if (j < 0) return 2.0 * G(i, 0) - G(i, 1);
        if (j > N_) return 2.0 * G(i, N_) - G(i, N_ - 1);
        return G(i, j);
    }

    int N_ = 0;
    double h_ = 0.0, r0_ = 0.0, r1_ = 0.0;
    Mat H_, Xx_, Xy_;
    CellFieldDiagnostics diag_;
};

namespace detail {

// f'(x_k) over samples f with spacing h; fourth order, stencil shifted as
// needed near the ends.  Used only for construction diagnostics.
inline double deriv4(const std::vector<double>& f, int k, double h) {
    const int n = static_cast<int>(f.size());
    auto at = [&](int i) { return f[i]; };
    if (k >= 2 && k + 2 < n)
        return (-at(k + 2) + 8.0 * at(k + 1) - 8.0 * at(k - 1) + at(k - 2)) / (12.0 * h);
    if (k == 0)
        return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * h);
    if (k == 1)
        return (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / (12.0 * h);
    if (k == n - 2)
        return (3.0 * at(n - 1) + 10.0 * at(n - 2) - 18.0 * at(n - 3) + 6.0 * at(n - 4) - at(n - 5)) /
               (12.0 * h);
    return (25.0 * at(n - 1) - 48.0 * at(n - 2) + 36.0 * at(n - 3) - 16.0 * at(n - 4) +
            3.0 * at(n - 5)) / (12.0 * h);
}

}  // namespace detail

inline CellField CellField::build(const CellFieldParams& params) {
    const int N = params.resolution;
    require(N >= 32 && N % 2 == 0, "CellField: resolution must be even and >= 32");
    const double r0 = params.puncture_radius, r1 = params.blend_radius;
    require(r0 > 0.0 && r1 > r0 && r1 < 0.5, "CellField: need 0 < puncture_radius < blend_radius < 1/2");

    CellField F;
    F.N_ = N;
    F.h_ = 1.0 / N;
    F.r0_ = r0;
    F.r1_ = r1;
    const double h = F.h_;

    // Dirichlet data for the stream correction.
    const BoundaryStreamData bc = boundary_stream_data(N);
    F.diag_.loop_gap = bc.loop_gap;
    if (!(bc.loop_gap < 1e-8))
        throw std::runtime_error("CellField: boundary stream data failed to close (gap " +
                                 std::to_string(bc.loop_gap) + ")");

    Mat G = Mat::Zero(N + 1, N + 1);
    for (int k = 0; k <= N; ++k) {
        G(k, N) = bc.edge[0][k];      // top, x increasing
        G(N, N - k) = bc.edge[1][k];  // right, y decreasing
        G(N - k, 0) = bc.edge[2][k];  // bottom, x decreasing
        G(0, k) = bc.edge[3][k];      // left, y increasing
    }

    auto solve = solve_dirichlet_laplace(G);
    F.diag_.solve_residual = solve.residual_max;
    if (!(solve.residual_max < 1e-8))
        throw std::runtime_error("CellField: stream solve residual too large (" +
                                 std::to_string(solve.residual_max) + ")");

    // Taper the correction to zero inside the blend annulus; the boundary
    // trace is untouched because the annulus is strictly interior.
    F.H_ = std::move(solve.grid);
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j)
            F.H_(i, j) *= smoothstep5((F.node(i, j).norm() - r0) / (r1 - r0));

    // X = Y + grad^perp H with second order stencils (central inside,
    // one-sided on the rim).  The divergence of the grad^perp part cancels
    // exactly under the matching central-difference divergence check.
    const Mat& H = F.H_;
    auto ddx = [&](int i, int j) {
        if (i == 0) return (-3.0 * H(0, j) + 4.0 * H(1, j) - H(2, j)) / (2.0 * h);
        if (i == N) return (3.0 * H(N, j) - 4.0 * H(N - 1, j) + H(N - 2, j)) / (2.0 * h);
        return (H(i + 1, j) - H(i - 1, j)) / (2.0 * h);
    };
    auto ddy = [&](int i, int j) {
        if (j == 0) return (-3.0 * H(i, 0) + 4.0 * H(i, 1) - H(i, 2)) / (2.0 * h);
        if (j == N) return (3.0 * H(i, N) - 4.0 * H(i, N - 1) + H(i, N - 2)) / (2.0 * h);
        return (H(i, j + 1) - H(i, j - 1)) / (2.0 * h);
    };
    F.Xx_.resize(N + 1, N + 1);
    F.Xy_.resize(N + 1, N + 1);
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j) {
            const Vec2 p = F.node(i, j);
            // The exact center node (even N) never feeds the evaluator, which
            // switches to the analytic radial field inside r0.
            const Vec2 Y = p.squaredNorm() < 1e-24 ? Vec2(0.0, 0.0) : puncture_field(p);
            F.Xx_(i, j) = Y[0] - ddy(i, j);
            F.Xy_(i, j) = Y[1] + ddx(i, j);
        }

    // Diagnostics with fourth order tangential stencils: the rim carries the
    // exact Dirichlet data, so these residuals measure how well that data
    // encodes tangency and corner rest before both are pinned.  H along each
    // edge, as a function of the increasing grid coordinate:
    std::array<std::vector<double>, 4> prof;  // 0 top, 1 right, 2 bottom, 3 left
    for (int e = 0; e < 4; ++e) prof[e].resize(N + 1);
    for (int k = 0; k <= N; ++k) {
        prof[0][k] = H(k, N);
        prof[1][k] = H(N, k);
        prof[2][k] = H(k, 0);
        prof[3][k] = H(0, k);
    }
    auto tangential4 = [&](int e, int k) { return detail::deriv4(prof[e], k, h); };

    double edge_res = 0.0;
    for (int k = 0; k <= N; ++k) {
        // top/bottom: |X.n| = |Y_y + dH/dx|; right/left: |X.n| = |Y_x - dH/dy|.
        edge_res = std::max(edge_res, std::abs(puncture_field(F.node(k, N))[1] + tangential4(0, k)));
        edge_res = std::max(edge_res, std::abs(puncture_field(F.node(k, 0))[1] + tangential4(2, k)));
        edge_res = std::max(edge_res, std::abs(puncture_field(F.node(N, k))[0] - tangential4(1, k)));
        edge_res = std::max(edge_res, std::abs(puncture_field(F.node(0, k))[0] - tangential4(3, k)));
    }
    F.diag_.edge_normal_residual = edge_res;

    double corner_res = 0.0;
    for (int ci : {0, N})
        for (int cj : {0, N}) {
            const Vec2 Y = puncture_field(F.node(ci, cj));
            const double hy = tangential4(ci == 0 ? 3 : 1, cj);
            const double hx = tangential4(cj == 0 ? 2 : 0, ci);
            corner_res = std::max(corner_res, Vec2(Y[0] - hy, Y[1] + hx).norm());
        }
    F.diag_.corner_speed_residual = corner_res;

    // Pin the exact structural zeros: no normal velocity on edges, rest at
    // the corners.  Bilinear interpolation then preserves edges exactly.
    for (int k = 0; k <= N; ++k) {
        F.Xx_(0, k) = 0.0;
        F.Xx_(N, k) = 0.0;
        F.Xy_(k, 0) = 0.0;
        F.Xy_(k, N) = 0.0;
    }

    F.diag_.divergence_deviation = F.divergence_check();
    return F;
}

}  // namespace sympb
