#pragma once

// Flow of the cell field and the grid-periodic maps built from it.
//
// The time-t flow phi_t of X contracts area by e^{-t} (div X = -1), keeps
// the closed cell invariant (X is tangent to the edges, zero at the
// corners), and never reaches the puncture (X is radially outward inside the
// puncture radius).  Running for t = 2 ln L gives det D(phi_t) = 1/L^2, so
// the L-dilated map psi = L phi_t is area (hence symplectic) preserving.
// Applied cell by cell on the eps-grid, psi maps each grid square G_a of
// side eps into the square L G_a of side L eps.

#include "sympb/cell_field.hpp"
#include "sympb/common.hpp"
#include "sympb/ellipsoid.hpp"
#include "sympb/parallel.hpp"
#include "sympb/symplectic.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

namespace sympb {

struct FlowParams {
    double step_scale = 1e-3;  // RK4 step = step_scale * min(1, 1/t)
};

// RK4 integration of xdot = X(x) on the closed unit cell.  Steps are clamped
// to the cell; anything beyond a hair of overshoot means the field broke its
// tangency contract, which is an error, not something to hide.
inline Vec2 flow(const CellField& F, const Vec2& x0, double t, const FlowParams& params = {}) {
    if (t < 0.0) throw std::domain_error("flow: t must be >= 0");
    require(std::abs(x0[0]) <= 0.5 + 1e-12 && std::abs(x0[1]) <= 0.5 + 1e-12,
            "flow: start point outside the closed cell");
    if (x0.squaredNorm() < 1e-24)
        throw std::domain_error("flow: start point at the puncture");
    if (t == 0.0) return x0;
    const double dt_target = params.step_scale * std::min(1.0, 1.0 / t);
    const long steps = std::max(1L, static_cast<long>(std::ceil(t / dt_target)));
    const double dt = t / static_cast<double>(steps);
    // The field speed grows like 1/(2 pi r) toward the puncture, so a point
    // starting very close would overshoot at the nominal step.  Cap the
    // per-substep displacement; away from the puncture this never triggers.
    constexpr double kMaxMove = 0.02;
    Vec2 x = x0;
    auto rk4 = [&F](Vec2& y, double hstep) {
        const Vec2 k1 = F.eval(y);
        const Vec2 k2 = F.eval(y + 0.5 * hstep * k1);
        const Vec2 k3 = F.eval(y + 0.5 * hstep * k2);
        const Vec2 k4 = F.eval(y + hstep * k3);
        y += hstep / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };
    for (long s = 0; s < steps; ++s) {
        const double speed = F.eval(x).norm();
        if (speed * dt > kMaxMove) {
            double rem = dt;
            while (rem > 0.0) {
                const double sub =
                    std::min(rem, kMaxMove / std::max(F.eval(x).norm(), 1e-12));
                rk4(x, sub);
                rem -= sub;
            }
        } else {
            rk4(x, dt);
        }
        for (int c = 0; c < 2; ++c) {
            if (std::abs(x[c]) > 0.5) {
                if (std::abs(x[c]) > 0.5 + 1e-6)
                    throw std::runtime_error("flow: trajectory left the cell; field bug");
                x[c] = std::copysign(0.5, x[c]);
            }
        }
    }
    return x;
}

// The grid-periodic map pair (phi, psi).  phi applies the cell flow for
// t = 2 ln L within each eps-cell; psi = L phi is its symplectic dilate.
class LemmaMap {
  public:
    LemmaMap(std::shared_ptr<const CellField> field, double eps, double L, FlowParams params = {})
        : field_(std::move(field)), cells_(eps), L_(L), t_(2.0 * std::log(L)), params_(params) {
        require(field_ != nullptr, "LemmaMap: missing cell field");
        if (L < 1.0) throw std::domain_error("LemmaMap: L must be >= 1");
    }

    double eps() const { return cells_.eps; }
    double scale() const { return L_; }
    double flow_time() const { return t_; }
    const CellField& field() const { return *field_; }

    // phi(z) = c + eps * phi_cell((z - c)/eps), c the center of z's cell.
    Vec2 phi(const Vec2& z) const {
        const auto idx = cells_.cell_index(z);
        const Vec2 u = cells_.local_coordinate(z);
        if (u.squaredNorm() < 1e-28)
            throw std::domain_error("LemmaMap: point lies on the eps-lattice");
        return cells_.cell_center(idx) + cells_.eps * flow(*field_, u, t_, params_);
    }

    Vec2 psi(const Vec2& z) const { return L_ * phi(z); }

  private:
    std::shared_ptr<const CellField> field_;
    GridCellFamily cells_;
    double L_, t_;
    FlowParams params_;
};

struct FlowVerifyParams {
    std::uint64_t samples = 1000;  // random (x0, t) contraction checks
    std::uint64_t seed = 3;
    double t_max = 3.0;
    double fd_step = 1e-5;
    double det_tol = 1e-3;         // |det Dphi - e^{-t}|
    double symplectic_tol = 1e-3;  // |Dpsi^T J Dpsi - J| max entry
    // Finite differences cannot resolve the map this close to the puncture:
    // derivatives of the flow grow like 1/|x0|^k there, so sampled Jacobian
    // checks keep this clearance (the map itself is fine arbitrarily close).
    double puncture_clearance = 0.01;
    int threads = 0;
};

struct FlowVerifyReport {
    CellFieldDiagnostics diagnostics;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double max_det_residual = 0.0;
    std::uint64_t det_failures = 0;
    double max_vertex_motion = 0.0;        // corners must be fixed points
    double max_edge_normal_drift = 0.0;    // edge points must stay on their edge
    double max_symplectic_residual = 0.0;  // psi on the eps-grid
    bool passed = false;
};

// Samples the contraction, boundary-preservation, and symplecticity claims
// of the cell flow and the grid map built from it.
inline FlowVerifyReport flow_verify(const std::shared_ptr<const CellField>& field, double eps,
                                    double L, const FlowVerifyParams& p = {}) {
    require(field != nullptr, "flow_verify: missing cell field");
    require(p.samples > 0, "flow_verify: samples must be > 0");
    FlowVerifyReport rep;
    rep.diagnostics = field->diagnostics();
    rep.samples = p.samples;
    rep.seed = p.seed;
    const double h = p.fd_step;
    const FlowParams fp;

    // Jacobian determinant of the cell flow at random points and times.
    constexpr std::uint64_t kChunk = 64;
    const std::uint64_t nchunks = (p.samples + kChunk - 1) / kChunk;
    struct Slot {
        double max_resid = 0.0;
        std::uint64_t failures = 0;
    };
    std::vector<Slot> slots(nchunks);
    parallel_chunks(p.samples, kChunk, p.threads,
                    [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                        auto rng = chunk_rng(p.seed, chunk);
                        std::uniform_real_distribution<double> unif(0.0, 1.0);
                        Slot& s = slots[chunk];
                        for (std::uint64_t i = begin; i < end; ++i) {
                            Vec2 x0;
                            do {
                                x0[0] = (unif(rng) - 0.5) * (1.0 - 10.0 * h);
                                x0[1] = (unif(rng) - 0.5) * (1.0 - 10.0 * h);
                            } while (x0.norm() < p.puncture_clearance);
                            const double t = p.t_max * unif(rng);
                            const Mat D = fd_jacobian4(
                                [&](const Vec& q) -> Vec {
                                    return flow(*field, Vec2(q[0], q[1]), t, fp);
                                },
                                Vec(x0), h);
                            const double resid =
                                std::abs(D(0, 0) * D(1, 1) - D(0, 1) * D(1, 0) - std::exp(-t));
                            s.max_resid = std::max(s.max_resid, resid);
                            if (resid > p.det_tol) ++s.failures;
                        }
                    });
    for (const Slot& s : slots) {
        rep.max_det_residual = std::max(rep.max_det_residual, s.max_resid);
        rep.det_failures += s.failures;
    }

    // Corners are zeros of the field; edges are invariant.
    const double t_lemma = 2.0 * std::log(std::max(L, 1.0 + 1e-12));
    for (const double t : {t_lemma, p.t_max}) {
        for (const double sx : {-0.5, 0.5})
            for (const double sy : {-0.5, 0.5}) {
                const Vec2 v(sx, sy);
                rep.max_vertex_motion =
                    std::max(rep.max_vertex_motion, (flow(*field, v, t, fp) - v).norm());
            }
        auto rng = chunk_rng(p.seed, 0xED6Eull);
        std::uniform_real_distribution<double> unif(-0.5, 0.5);
        for (int e = 0; e < 4; ++e)
            for (int i = 0; i < 16; ++i) {
                const double s0 = unif(rng);
                Vec2 x0;
                if (e == 0) x0 = Vec2(s0, 0.5);
                else if (e == 1) x0 = Vec2(0.5, s0);
                else if (e == 2) x0 = Vec2(s0, -0.5);
                else x0 = Vec2(-0.5, s0);
                const Vec2 y = flow(*field, x0, t, fp);
                const int c = (e == 0 || e == 2) ? 1 : 0;
                rep.max_edge_normal_drift =
                    std::max(rep.max_edge_normal_drift, std::abs(std::abs(y[c]) - 0.5));
            }
    }

    // Symplecticity of psi across several grid cells.
    const LemmaMap lm(field, eps, L, fp);
    const Mat J2 = standard_form_matrix(1);
    auto rng = chunk_rng(p.seed, 0x51D5ull);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 32; ++i) {
        const double mx = std::floor(unif(rng) * 5.0) - 2.0;
        const double my = std::floor(unif(rng) * 5.0) - 2.0;
        Vec2 u;
        do {
            u[0] = (unif(rng) - 0.5) * (1.0 - 10.0 * (h / eps));
            u[1] = (unif(rng) - 0.5) * (1.0 - 10.0 * (h / eps));
        } while (u.norm() < std::max(p.puncture_clearance, 0.05));
        const Vec z = Vec2(eps * (mx + u[0]), eps * (my + u[1]));
        const Mat D = fd_jacobian4(
            [&](const Vec& q) -> Vec { return lm.psi(Vec2(q[0], q[1])); }, z, h);
        const double resid = (D.transpose() * J2 * D - J2).cwiseAbs().maxCoeff();
        rep.max_symplectic_residual = std::max(rep.max_symplectic_residual, resid);
    }

    rep.passed = rep.det_failures == 0 && rep.max_vertex_motion < 1e-9 &&
                 rep.max_edge_normal_drift < 1e-6 &&
                 rep.max_symplectic_residual < p.symplectic_tol;
    return rep;
}

}  // namespace sympb
