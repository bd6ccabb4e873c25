#pragma once

// Symplectic linear algebra over R^{2n} in interleaved coordinates
// (x_1, y_1, ..., x_n, y_n).  The standard form is
//
//     omega(u, v) = sum_i (u_{x_i} v_{y_i} - u_{y_i} v_{x_i}) = u^T J v,
//
// with J block diagonal, one 2x2 block [[0, 1], [-1, 0]] per (x_i, y_i)
// plane.  J^2 = -I.  A matrix M is symplectic iff M^T J M = J.
//
// The complex structure (multiplication by i on C^n = R^{2n}) is the other
// sign, J_c = -J, so that omega(u, J_c u) = |u|^2 > 0.

#include "sympb/common.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

namespace sympb {

// J: matrix of the standard form in interleaved coordinates.
inline Mat standard_form_matrix(int n) {
    require(n >= 1, "standard_form_matrix: n must be >= 1");
    Mat J = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        J(2 * i, 2 * i + 1) = 1.0;
        J(2 * i + 1, 2 * i) = -1.0;
    }
    return J;
}

// J_c = -J: multiplication by i, omega(u, J_c u) = |u|^2.
inline Mat complex_structure_matrix(int n) {
    return -standard_form_matrix(n);
}

inline double omega(const Vec& u, const Vec& v) {
    require(u.size() == v.size() && u.size() % 2 == 0, "omega: vectors must share even dimension");
    double s = 0.0;
    for (int i = 0; i + 1 < u.size(); i += 2)
        s += u[i] * v[i + 1] - u[i + 1] * v[i];
    return s;
}

// max-norm of M^T J M - J; zero exactly when M is symplectic.
inline double symplectic_defect(const Mat& M) {
    const int n = require_even_square(M, "symplectic_defect");
    const Mat J = standard_form_matrix(n);
    return (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
}

inline bool is_symplectic(const Mat& M, double tol = 1e-12) {
    return symplectic_defect(M) <= tol;
}

// A^L: scales the (x_n, y_n) plane by L, identity on the others.  Symplectic
// only for L = 1; it inflates omega on the last plane by L^2.
inline Mat scaling_map(double L, int n) {
    require(n >= 1, "scaling_map: n must be >= 1");
    if (L < 1.0) throw std::domain_error("scaling_map: L must be >= 1");
    Mat A = Mat::Identity(2 * n, 2 * n);
    A(2 * n - 2, 2 * n - 2) = L;
    A(2 * n - 1, 2 * n - 1) = L;
    return A;
}

// The 4x4 symplectic matrix M_alpha whose image of the ball has thin
// z_2-slices; rows are written in (x1, y1, x2, y2) order.
inline Mat polterovich_matrix(double alpha) {
    if (alpha <= 0.0) throw std::domain_error("polterovich_matrix: alpha must be > 0");
    Mat M(4, 4);
    M << alpha, 0.0, 0.0, -1.0,
         0.0, 1.0 / alpha, 0.0, 0.0,
         0.0, -1.0, alpha, 0.0,
         0.0, 0.0, 0.0, 1.0 / alpha;
    return M;
}

inline void require_symmetric_positive_definite(const Mat& P, const char* what) {
    const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
    if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument(std::string(what) + ": matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (P + P.transpose()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument(std::string(what) + ": matrix is not positive definite");
}

namespace detail {

// Pairs 2n sorted candidates (d_1, d_1, ..., d_n, d_n) into n values,
// averaging each pair to absorb eigensolver splitting.
inline std::vector<double> collapse_pairs(std::vector<double> d, const char* what) {
    std::sort(d.begin(), d.end());
    std::vector<double> out;
    out.reserve(d.size() / 2);
    for (std::size_t k = 0; k + 1 < d.size(); k += 2) {
        const double a = d[k], b = d[k + 1];
        if (b - a > 1e-6 * std::max(1.0, b))
            throw std::runtime_error(std::string(what) + ": eigenvalues failed to pair up");
        out.push_back(0.5 * (a + b));
    }
    return out;
}

}  // namespace detail

// Symplectic (Williamson) spectrum of a symmetric positive definite P:
// the n positive numbers d_1 <= ... <= d_n such that a symplectic basis
// diagonalizes P to diag(d_1, d_1, ..., d_n, d_n).
//
// Primary route: (JP)^2 is a real matrix with eigenvalues -d_j^2, each of
// multiplicity two, so one real eigensolve recovers the spectrum.
inline std::vector<double> symplectic_spectrum(const Mat& P) {
    const int n = require_even_square(P, "symplectic_spectrum");
    require_symmetric_positive_definite(P, "symplectic_spectrum");
    const Mat K = standard_form_matrix(n) * P;
    Eigen::EigenSolver<Mat> es(K * K, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("symplectic_spectrum: eigensolver failed");
    const double scale = P.cwiseAbs().maxCoeff();
    std::vector<double> d;
    d.reserve(2 * n);
    for (int i = 0; i < 2 * n; ++i) {
        const auto lam = es.eigenvalues()[i];
        if (std::abs(lam.imag()) > 1e-7 * std::max(1.0, scale * scale) || lam.real() > 0.0)
            throw std::runtime_error("symplectic_spectrum: (JP)^2 eigenvalue not real negative");
        d.push_back(std::sqrt(-lam.real()));
    }
    return detail::collapse_pairs(std::move(d), "symplectic_spectrum");
}

// Cross-check route: the eigenvalues of JP itself are +/- i d_j.  Kept as an
// independent path for validation; results must agree with the primary route.
inline std::vector<double> symplectic_spectrum_via_jp(const Mat& P) {
    const int n = require_even_square(P, "symplectic_spectrum_via_jp");
    require_symmetric_positive_definite(P, "symplectic_spectrum_via_jp");
    const Mat K = standard_form_matrix(n) * P;
    Eigen::EigenSolver<Mat> es(K, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("symplectic_spectrum_via_jp: eigensolver failed");
    const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
    std::vector<double> d;
    d.reserve(2 * n);
    for (int i = 0; i < 2 * n; ++i) {
        const auto lam = es.eigenvalues()[i];
        if (std::abs(lam.real()) > 1e-8 * scale)
            throw std::runtime_error("symplectic_spectrum_via_jp: JP eigenvalue not purely imaginary");
        d.push_back(std::abs(lam.imag()));
    }
    return detail::collapse_pairs(std::move(d), "symplectic_spectrum_via_jp");
}

}  // namespace sympb
