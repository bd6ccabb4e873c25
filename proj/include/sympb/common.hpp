#pragma once

// Shared aliases and small utilities used across the toolkit.

#include <Eigen/Core>
#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sympb {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;

// Checks that M is square with even size 2n, n >= 1.  Returns n.
inline int require_even_square(const Mat& M, const char* what) {
    if (M.rows() != M.cols() || M.rows() < 2 || M.rows() % 2 != 0) {
        throw std::invalid_argument(std::string(what) + ": expected a 2n x 2n matrix, got " +
                                    std::to_string(M.rows()) + " x " + std::to_string(M.cols()));
    }
    return static_cast<int>(M.rows()) / 2;
}

inline void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Quintic smoothstep: 0 at u<=0, 1 at u>=1, with vanishing first and second
// derivatives at both ends (C^2 across the joins).
inline double smoothstep5(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (u * (u * 6.0 - 15.0) + 10.0);
}

// splitmix64, used to decorrelate per-chunk RNG streams from one base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// RNG for the k-th fixed-size work chunk of a sampling job.  Chunk boundaries
// are independent of the worker count, which keeps aggregates reproducible.
inline std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(chunk + 1)));
}

// Central-difference Jacobian of a map R^m -> R^k.
template <typename Fn>
Mat fd_jacobian(Fn&& f, const Vec& x, double h) {
    require(h > 0.0, "fd_jacobian: step must be > 0");
    const auto m = x.size();
    Mat J;
    for (Eigen::Index c = 0; c < m; ++c) {
        Vec xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        const Vec col = (f(xp) - f(xm)) / (2.0 * h);
        if (c == 0) J.resize(col.size(), m);
        J.col(c) = col;
    }
    return J;
}

// Fourth-order variant (5-point stencil): truncation O(h^4 f^(5)), which
// matters when sampling maps whose higher derivatives grow near a point the
// samples may approach.
template <typename Fn>
Mat fd_jacobian4(Fn&& f, const Vec& x, double h) {
    require(h > 0.0, "fd_jacobian4: step must be > 0");
    const auto m = x.size();
    Mat J;
    for (Eigen::Index c = 0; c < m; ++c) {
        Vec a = x, b = x, d = x, e = x;
        a[c] += 2.0 * h;
        b[c] += h;
        d[c] -= h;
        e[c] -= 2.0 * h;
        const Vec col = (-f(a) + 8.0 * f(b) - 8.0 * f(d) + f(e)) / (12.0 * h);
        if (c == 0) J.resize(col.size(), m);
        J.col(c) = col;
    }
    return J;
}

}  // namespace sympb
