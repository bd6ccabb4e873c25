#pragma once

// Direct solver for the 5-point Dirichlet Laplace system on a square grid.
//
// For the (N-1)^2 interior unknowns of an (N+1)x(N+1) grid the second
// difference operator is diagonalized by the discrete sine basis
// sin(pi k i / N) with eigenvalues 4 sin^2(pi k / 2N), so the system is
// solved exactly (to rounding) by two dense sine transforms per direction.

#include "sympb/common.hpp"

#include <cmath>

namespace sympb {

struct DirichletLaplaceResult {
    Mat grid;            // full (N+1)x(N+1) grid, boundary rows/cols as given
    double residual_max; // max |4u - sum of neighbours| over interior nodes
};

// `boundary` is an (N+1)x(N+1) grid whose first/last rows and columns hold
// the Dirichlet data; interior entries are ignored.
inline DirichletLaplaceResult solve_dirichlet_laplace(const Mat& boundary) {
    require(boundary.rows() == boundary.cols() && boundary.rows() >= 3,
            "solve_dirichlet_laplace: grid must be square with N >= 2");
    if (!boundary.allFinite())
        throw std::invalid_argument("solve_dirichlet_laplace: boundary data is not finite");
    const int N = static_cast<int>(boundary.rows()) - 1;
    const int m = N - 1;

    // Interior right-hand side from the boundary contributions.
    Mat B = Mat::Zero(m, m);
    for (int j = 1; j < N; ++j) {
        B(0, j - 1) += boundary(0, j);
        B(m - 1, j - 1) += boundary(N, j);
    }
    for (int i = 1; i < N; ++i) {
        B(i - 1, 0) += boundary(i, 0);
        B(i - 1, m - 1) += boundary(i, N);
    }

    Mat S(m, m);
    for (int k = 1; k <= m; ++k)
        for (int i = 1; i <= m; ++i) S(k - 1, i - 1) = std::sin(M_PI * k * i / N);
    Vec lam(m);
    for (int k = 1; k <= m; ++k) {
        const double s = std::sin(0.5 * M_PI * k / N);
        lam[k - 1] = 4.0 * s * s;
    }

    Mat Bhat = S * B * S;
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) Bhat(k, l) /= lam[k] + lam[l];
    const double scale = 2.0 / N;
    const Mat U = (scale * scale) * (S * Bhat * S);

    DirichletLaplaceResult out;
    out.grid = boundary;
    out.grid.block(1, 1, m, m) = U;
    out.residual_max = 0.0;
    for (int i = 1; i < N; ++i)
        for (int j = 1; j < N; ++j) {
            const double r = 4.0 * out.grid(i, j) - out.grid(i - 1, j) - out.grid(i + 1, j) -
                             out.grid(i, j - 1) - out.grid(i, j + 1);
            out.residual_max = std::max(out.residual_max, std::abs(r));
        }
    return out;
}

}  // namespace sympb
