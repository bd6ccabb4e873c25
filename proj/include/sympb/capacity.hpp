#pragma once

// Ball capacities of ellipsoids and certified grid barriers.
//
// The capacity of an ellipsoid is pi times its smallest symplectic-spectrum
// value: the largest pi delta^2 such that a ball of radius delta embeds.
// A barrier certificate for a target radius delta is a triple (alpha, L, eps)
// whose transformed grid blocks every embedded ball of radius delta: any
// ball missing the grid would fit inside the inflated image ellipsoid, so it
// suffices that the inflated capacity stays below pi delta^2.

#include "sympb/common.hpp"
#include "sympb/ellipsoid.hpp"
#include "sympb/grid_planes.hpp"
#include "sympb/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace sympb {

inline double ellipsoid_capacity(const Ellipsoid& E) {
    const Mat G = E.generator();
    const std::vector<double> d = symplectic_spectrum(G * G.transpose());
    const double pi = std::acos(-1.0);
    return pi * *std::min_element(d.begin(), d.end());
}

// Combined transform of a barrier candidate: squeeze by alpha, dilate by L.
inline Mat barrier_transform(double alpha, double L) {
    return scaling_map(L, 2) * polterovich_matrix(alpha);
}

// Capacity of the inflated image of the unit ball: the quantity a grid
// barrier (alpha, L, eps) certifies as an upper bound for balls avoiding it.
inline double barrier_bound(double alpha, double L, double eps) {
    const Ellipsoid image(barrier_transform(alpha, L));
    const double inflate = 1.0 + std::sqrt(2.0) * eps * L / width_min(image);
    return inflate * inflate * ellipsoid_capacity(image);
}

struct BarrierCertificate {
    double target_delta = 0.0;
    double alpha = 1.0;
    double L = 1.0;
    double eps = 0.0;
    double bound_value = 0.0;       // certified capacity bound for grid-avoiding balls
    std::uint64_t plane_count = 0;  // grid planes meeting the relevant region
    bool trivial = false;           // target exceeds the capacity of the whole space region
};

// Recompute the certified bound from the certificate parameters alone.
inline double recompute_bound(const BarrierCertificate& c) {
    if (c.trivial) return std::acos(-1.0);
    return barrier_bound(c.alpha, c.L, c.eps);
}

// Planes of the (alpha, L, eps) grid meeting the unit ball in the original
// coordinates: pull the grid back through the barrier transform.
inline std::uint64_t certificate_plane_count(const BarrierCertificate& c) {
    if (c.trivial) return 0;
    const GridHyperplanes grid(c.eps, Mat::Identity(4, 4));
    // Planes live in the image coordinates; the ball of interest is the image
    // of the unit ball under the barrier transform.
    return grid.count_planes_meeting(Ellipsoid(barrier_transform(c.alpha, c.L)));
}

inline bool certificate_valid(const BarrierCertificate& c, double tol = 1e-12) {
    const double pi = std::acos(-1.0);
    if (c.target_delta <= 0.0) return false;
    if (c.trivial) return c.target_delta > 1.0 && c.bound_value <= pi + tol;
    if (c.alpha <= 0.0 || c.L < 1.0 || c.eps <= 0.0) return false;
    const double bound = recompute_bound(c);
    if (std::abs(bound - c.bound_value) > 1e-9 * std::max(1.0, std::abs(c.bound_value)))
        return false;
    return bound < pi * c.target_delta * c.target_delta + tol;
}

struct BarrierSearchResult {
    bool found = false;
    BarrierCertificate certificate;
    double best_bound = std::numeric_limits<double>::infinity();  // best value seen
    std::string failure_reason;
};

// Deterministic scan for a certificate blocking balls of radius delta.
// L runs over doublings, alpha descends on a fixed lattice; the first pair
// whose un-inflated capacity clears the margin fixes the grid spacing as the
// largest power of ten keeping the inflated bound under pi delta^2.
inline BarrierSearchResult find_barrier(double delta, double margin = 0.05) {
    if (delta <= 0.0) throw std::domain_error("find_barrier: delta must be > 0");
    require(margin >= 0.0 && margin < 1.0, "find_barrier: margin must lie in [0, 1)");
    const double pi = std::acos(-1.0);
    const double target = pi * delta * delta;
    BarrierSearchResult res;
    if (delta > 1.0) {
        // A unit ball already fails to embed: no planes needed.
        res.found = true;
        res.certificate = BarrierCertificate{delta, 1.0, 1.0, 0.0, pi, 0, true};
        res.best_bound = pi;
        return res;
    }
    for (double L = 2.0; L <= 64.0; L *= 2.0) {
        for (int k = 20; k >= 1; --k) {
            const double alpha = static_cast<double>(k) / 20.0;
            const double cap = ellipsoid_capacity(Ellipsoid(barrier_transform(alpha, L)));
            res.best_bound = std::min(res.best_bound, cap);
            if (cap > target * (1.0 - margin)) continue;
            for (int p = 1; p <= 8; ++p) {
                const double eps = std::pow(10.0, -p);
                const double bound = barrier_bound(alpha, L, eps);
                if (bound < target) {
                    BarrierCertificate c{delta, alpha, L, eps, bound, 0, false};
                    c.plane_count = certificate_plane_count(c);
                    res.found = true;
                    res.certificate = c;
                    res.best_bound = bound;
                    return res;
                }
            }
        }
    }
    res.failure_reason =
        "no (alpha, L, eps) in the scan range certifies a bound below pi delta^2 for delta = " +
        std::to_string(delta);
    return res;
}

}  // namespace sympb
