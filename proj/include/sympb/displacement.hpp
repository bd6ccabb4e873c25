#pragma once

// Radial displacement flow on the open unit ball.
//
// The flow of zdot = chi(|z|) z stretches radii by e^t while chi = 1, slows
// smoothly to a halt at the unit sphere (chi and chi' vanish there), and is
// conformal-on-rays: its derivative maps a unit radial vector to alpha rhat
// and a unit tangential vector to (rho/s) that vector, where alpha is the
// radial stretch.  Pairing a direction with its rotation by the complex
// structure therefore keeps the symplectic pairing positive, which is the
// holomorphic-positivity certificate the checks below sample.

#include "sympb/common.hpp"
#include "sympb/parallel.hpp"
#include "sympb/symplectic.hpp"

#include <cmath>
#include <cstdint>

namespace sympb {

// Cutoff profile: 1 on [0, r], quintic taper to 0 at 1, flat at both joins.
struct DisplacementProfile {
    double r;

    explicit DisplacementProfile(double r_) : r(r_) {
        require(r_ > 0.0 && r_ < 1.0, "DisplacementProfile: need 0 < r < 1");
    }
    double chi(double s) const { return 1.0 - smoothstep5((s - r) / (1.0 - r)); }
    double chi_prime(double s) const {
        const double u = (s - r) / (1.0 - r);
        if (u <= 0.0 || u >= 1.0) return 0.0;
        const double v = u * (1.0 - u);
        return -30.0 * v * v / (1.0 - r);
    }
};

struct RadialState {
    double rho;      // |G_t(x)| for |x| = s0
    double stretch;  // d rho / d s0, from the variational equation
};

// RK4 on the coupled radius / radial-stretch system.
inline RadialState displacement_radial(double t, double r, double s0, double dt = 1e-3) {
    if (t < 0.0) throw std::domain_error("displacement_radial: t must be >= 0");
    if (s0 < 0.0 || s0 >= 1.0)
        throw std::domain_error("displacement_radial: radius must lie in [0, 1)");
    require(dt > 0.0, "displacement_radial: dt must be > 0");
    const DisplacementProfile prof(r);
    RadialState st{s0, 1.0};
    if (t == 0.0) return st;
    const long steps = std::max(1L, static_cast<long>(std::ceil(t / dt)));
    const double h = t / static_cast<double>(steps);
    auto deriv = [&](const RadialState& y) {
        const double c = prof.chi(y.rho);
        const double cp = prof.chi_prime(y.rho);
        return RadialState{c * y.rho, (c + cp * y.rho) * y.stretch};
    };
    for (long k = 0; k < steps; ++k) {
        const RadialState k1 = deriv(st);
        const RadialState k2 = deriv({st.rho + 0.5 * h * k1.rho, st.stretch + 0.5 * h * k1.stretch});
        const RadialState k3 = deriv({st.rho + 0.5 * h * k2.rho, st.stretch + 0.5 * h * k2.stretch});
        const RadialState k4 = deriv({st.rho + h * k3.rho, st.stretch + h * k3.stretch});
        st.rho += h / 6.0 * (k1.rho + 2.0 * k2.rho + 2.0 * k3.rho + k4.rho);
        st.stretch += h / 6.0 * (k1.stretch + 2.0 * k2.stretch + 2.0 * k3.stretch + k4.stretch);
    }
    return st;
}

// G_t(x): push x radially outward, freezing at the unit sphere.
inline Vec displacement_flow(double t, double r, const Vec& x) {
    require(x.size() >= 1, "displacement_flow: empty vector");
    const double s = x.norm();
    if (s >= 1.0) throw std::domain_error("displacement_flow: point outside the open unit ball");
    if (s == 0.0) {
        if (t < 0.0) throw std::domain_error("displacement_flow: t must be >= 0");
        return x;
    }
    return (displacement_radial(t, r, s).rho / s) * x;
}

struct PositivityParams {
    std::uint64_t samples = 2000;
    std::uint64_t seed = 7;
    double sample_radius = 0.9;  // points drawn from this closed ball
    double fd_step = 1e-5;
    int threads = 0;
};

struct PositivityReport {
    double min_value = 0.0;           // min over samples of omega(G_* u, G_* J u)
    double max_radial_mismatch = 0.0; // |omega(G_* x, G_* Jx) - alpha beta |x|^2|
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    bool positive = false;
};

// Sample omega(G_* u, G_* J_c u) over points and directions; also cross-check
// the finite-difference value along rays against the variational-equation
// prediction alpha * beta * |x|^2.
inline PositivityReport holomorphic_positivity_check(double t, double r,
                                                     const PositivityParams& p = {}) {
    require(p.samples > 0, "holomorphic_positivity_check: samples must be > 0");
    require(p.sample_radius > 0.0 && p.sample_radius + 2.0 * p.fd_step < 1.0,
            "holomorphic_positivity_check: sample radius too large for the finite-difference step");
    const int dim = 4;
    const Mat Jc = complex_structure_matrix(dim / 2);
    const double h = p.fd_step;

    constexpr std::uint64_t kChunk = 256;
    const std::uint64_t nchunks = (p.samples + kChunk - 1) / kChunk;
    struct Slot {
        double min_val = std::numeric_limits<double>::infinity();
        double max_mis = 0.0;
    };
    std::vector<Slot> slots(nchunks);
    parallel_chunks(p.samples, kChunk, p.threads,
                    [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                        auto rng = chunk_rng(p.seed, chunk);
                        std::normal_distribution<double> gauss(0.0, 1.0);
                        std::uniform_real_distribution<double> unif(0.0, 1.0);
                        Slot& s = slots[chunk];
                        for (std::uint64_t i = begin; i < end; ++i) {
                            Vec x(dim), u(dim);
                            for (int c = 0; c < dim; ++c) x[c] = gauss(rng);
                            x *= p.sample_radius * std::pow(unif(rng), 0.25) / x.norm();
                            for (int c = 0; c < dim; ++c) u[c] = gauss(rng);
                            u /= u.norm();
                            const Vec v = Jc * u;
                            auto push = [&](const Vec& dir) {
                                return Vec((displacement_flow(t, r, x + h * dir) -
                                            displacement_flow(t, r, x - h * dir)) /
                                           (2.0 * h));
                            };
                            s.min_val = std::min(s.min_val, omega(push(u), push(v)));
                            // Radial cross-check with u = x itself.
                            const double lhs = omega(push(x), push(Vec(Jc * x)));
                            const RadialState rs = displacement_radial(t, r, x.norm());
                            const double rhs = rs.stretch * (rs.rho / x.norm()) * x.squaredNorm();
                            s.max_mis = std::max(s.max_mis, std::abs(lhs - rhs));
                        }
                    });
    PositivityReport rep;
    rep.samples = p.samples;
    rep.seed = p.seed;
    double mn = std::numeric_limits<double>::infinity(), mm = 0.0;
    for (const Slot& s : slots) {
        mn = std::min(mn, s.min_val);
        mm = std::max(mm, s.max_mis);
    }
    rep.min_value = mn;
    rep.max_radial_mismatch = mm;
    rep.positive = mn > 0.0;
    return rep;
}

struct PlaneClearReport {
    double min_image_radius = 0.0;  // sampled min |G_t(x)| over the plane slab
    double infimum = 0.0;           // exact value rho(dist): the nearest plane point
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// The codimension-two plane {(x1, y1) = (dist, 0)} meets the ball in a disc;
// the flow pushes every point of that disc at least as far out as it pushes
// the nearest one.  Sample the disc and report the minimum image radius.
inline PlaneClearReport displace_plane_check(double t, double r, double dist,
                                             std::uint64_t samples = 2000,
                                             std::uint64_t seed = 7) {
    require(dist > 0.0 && dist < 1.0, "displace_plane_check: need 0 < dist < 1");
    require(samples > 0, "displace_plane_check: samples must be > 0");
    PlaneClearReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.infimum = displacement_radial(t, r, dist).rho;
    auto rng = chunk_rng(seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double cap = std::sqrt(1.0 - dist * dist) * (1.0 - 1e-9);
    double mn = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < samples; ++i) {
        Vec2 z(gauss(rng), gauss(rng));
        z *= cap * std::sqrt(unif(rng)) / z.norm();
        Vec x(4);
        x << dist, 0.0, z[0], z[1];
        if (x.norm() >= 1.0) continue;
        mn = std::min(mn, displacement_flow(t, r, x).norm());
    }
    rep.min_image_radius = mn;
    return rep;
}

}  // namespace sympb
