#pragma once

// Shared helpers for the test suites: seeded random symplectic matrices and
// random vectors.  Random symplectic matrices are products of generators that
// are symplectic by construction (block scalings, single-plane rotations and
// shears), kept well conditioned so 1e-8 scale assertions stay meaningful.

#include "sympb/common.hpp"
#include "sympb/symplectic.hpp"

#include <random>

namespace sympb::testing {

inline Vec random_unit_vector(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec u(dim);
    do {
        for (int i = 0; i < dim; ++i) u[i] = gauss(rng);
    } while (u.norm() < 1e-8);
    return u / u.norm();
}

// Uniform point in the unit ball of R^dim.
inline Vec random_ball_point(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Vec u = random_unit_vector(rng, dim);
    return u * std::pow(unif(rng), 1.0 / dim);
}

// Rotation by theta in the (x_i, y_i) plane, identity elsewhere.
inline Mat plane_rotation(int n, int plane, double theta) {
    Mat R = Mat::Identity(2 * n, 2 * n);
    const int k = 2 * plane;
    R(k, k) = std::cos(theta);
    R(k, k + 1) = -std::sin(theta);
    R(k + 1, k) = std::sin(theta);
    R(k + 1, k + 1) = std::cos(theta);
    return R;
}

// Shear within the (x_i, y_i) plane: unit determinant on that block.
inline Mat plane_shear(int n, int plane, double s, bool upper) {
    Mat S = Mat::Identity(2 * n, 2 * n);
    const int k = 2 * plane;
    if (upper)
        S(k, k + 1) = s;
    else
        S(k + 1, k) = s;
    return S;
}

// Product of symplectic generators; for n = 2 the Polterovich matrices join
// the mix so the factors do not commute.
inline Mat random_symplectic(std::mt19937_64& rng, int n, int factors = 6) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> pick_plane(0, n - 1);
    Mat M = Mat::Identity(2 * n, 2 * n);
    for (int f = 0; f < factors; ++f) {
        const int kind = static_cast<int>(unif(rng) * (n == 2 ? 3 : 2));
        if (kind == 0) {
            M = M * plane_rotation(n, pick_plane(rng), 2.0 * M_PI * unif(rng));
        } else if (kind == 1) {
            M = M * plane_shear(n, pick_plane(rng), 2.0 * unif(rng) - 1.0, unif(rng) < 0.5);
        } else {
            M = M * polterovich_matrix(0.4 + 1.2 * unif(rng));
        }
    }
    return M;
}

}  // namespace sympb::testing
