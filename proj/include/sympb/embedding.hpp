#pragma once

// The ball-avoiding embedding Psi = id^{2n-2} (+) psi and its verification.
//
// psi acts on the distinguished plane cell by cell, so Psi is defined away
// from the grid planes, maps the domain ellipsoid D into the inflated dilate
// of D, is symplectic where defined, and its image misses the center points
// of the dilated grid cells.  Verification samples the domain, checks
// membership of the image in the inflated target, measures the symplectic
// defect of finite-difference Jacobians, and tracks how closely the image
// approaches the scaled lattice.

#include "sympb/common.hpp"
#include "sympb/ellipsoid.hpp"
#include "sympb/flow.hpp"
#include "sympb/parallel.hpp"
#include "sympb/symplectic.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace sympb {

class EmbeddingMap {
  public:
    EmbeddingMap(Ellipsoid domain, LemmaMap lemma)
        : domain_(std::move(domain)), lemma_(std::move(lemma)), n_(domain_.half_dim()) {
        require(n_ >= 1, "EmbeddingMap: domain must have dimension >= 2");
    }

    const Ellipsoid& domain() const { return domain_; }
    const LemmaMap& lemma() const { return lemma_; }
    int half_dim() const { return n_; }

    // Inflation factor 1 + sqrt(2) eps L / width of the scaled domain.
    double inflation() const {
        return grid_inflation(lemma_.eps(), lemma_.scale(), domain_);
    }

    // Target ellipsoid: the inflated L-dilate of the domain.
    Ellipsoid target() const {
        const Mat G = inflation() * scaling_map(lemma_.scale(), n_) * domain_.generator();
        return Ellipsoid(G);
    }

    // Identity on the first 2n-2 coordinates, psi on the last plane.
    Vec apply(const Vec& x) const {
        require(x.size() == 2 * n_, "EmbeddingMap::apply: wrong dimension");
        Vec y = x;
        const Vec2 z(x[2 * n_ - 2], x[2 * n_ - 1]);
        const Vec2 w = lemma_.psi(z);
        y[2 * n_ - 2] = w[0];
        y[2 * n_ - 1] = w[1];
        return y;
    }

    // Distance from the distinguished-plane part of x to the eps-lattice,
    // i.e. to the grid planes the embedding must avoid.
    double grid_clearance(const Vec& x) const {
        require(x.size() == 2 * n_, "EmbeddingMap::grid_clearance: wrong dimension");
        const double eps = lemma_.eps();
        const Vec2 z(x[2 * n_ - 2], x[2 * n_ - 1]);
        const Vec2 r(z[0] - eps * std::round(z[0] / eps), z[1] - eps * std::round(z[1] / eps));
        return r.norm();
    }

  private:
    Ellipsoid domain_;
    LemmaMap lemma_;
    int n_;
};

struct EmbedVerifyParams {
    std::uint64_t samples = 100000;          // membership samples
    std::uint64_t jacobian_samples = 1000;   // symplecticity / injectivity samples
    std::uint64_t seed = 1;
    double membership_slack = 1e-6;          // |G^-1 y| <= 1 + slack
    double grid_clearance = 1e-6;            // domain points closer to the grid are skipped
    double symplectic_tol = 1e-3;            // max |Dpsi^T J Dpsi - J|
    double fd_step = 1e-5;
    int threads = 0;                         // 0: hardware default
};

struct EmbedVerifyReport {
    std::uint64_t samples = 0;             // points drawn
    std::uint64_t skipped_near_grid = 0;   // too close to the grid planes to evaluate
    std::uint64_t failures = 0;            // membership violations
    double max_membership_residual = 0.0;  // max(|G^-1 y| - 1) over checked points
    double min_image_clearance = 0.0;      // min distance of image z-part to the L eps lattice
    std::uint64_t jacobian_samples = 0;
    std::uint64_t jacobian_failures = 0;   // symplectic defect above tolerance
    double max_symplectic_residual = 0.0;
    double min_image_separation = 0.0;     // injectivity: min pairwise image distance
    std::uint64_t seed = 0;
    double membership_slack = 0.0;
    double fd_step = 0.0;
    bool passed = false;
};

inline EmbedVerifyReport embed_verify(const EmbeddingMap& Psi, const EmbedVerifyParams& p = {}) {
    require(p.samples > 0, "embed_verify: samples must be > 0");
    const int dim = 2 * Psi.half_dim();
    const Ellipsoid& D = Psi.domain();
    const Ellipsoid T = Psi.target();
    const Mat Tinv = T.inverse();
    const double Leps = Psi.lemma().scale() * Psi.lemma().eps();

    EmbedVerifyReport rep;
    rep.samples = p.samples;
    rep.seed = p.seed;
    rep.membership_slack = p.membership_slack;
    rep.fd_step = p.fd_step;

    constexpr std::uint64_t kChunk = 4096;
    const std::uint64_t nchunks = (p.samples + kChunk - 1) / kChunk;
    struct Slot {
        std::uint64_t skipped = 0, failures = 0;
        double max_resid = -std::numeric_limits<double>::infinity();
        double min_clear = std::numeric_limits<double>::infinity();
    };
    std::vector<Slot> slots(nchunks);

    parallel_chunks(p.samples, kChunk, p.threads,
                    [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
                        auto rng = chunk_rng(p.seed, chunk);
                        std::normal_distribution<double> gauss(0.0, 1.0);
                        std::uniform_real_distribution<double> unif(0.0, 1.0);
                        Slot& s = slots[chunk];
                        for (std::uint64_t i = begin; i < end; ++i) {
                            Vec u(dim);
                            for (int c = 0; c < dim; ++c) u[c] = gauss(rng);
                            u *= std::pow(unif(rng), 1.0 / dim) / u.norm();
                            const Vec x = D.generator() * u;
                            if (Psi.grid_clearance(x) <= p.grid_clearance) {
                                ++s.skipped;
                                continue;
                            }
                            const Vec y = Psi.apply(x);
                            const double r = (Tinv * y).norm() - 1.0;
                            s.max_resid = std::max(s.max_resid, r);
                            if (r > p.membership_slack) ++s.failures;
                            const Vec2 w(y[dim - 2], y[dim - 1]);
                            const Vec2 g(w[0] - Leps * std::round(w[0] / Leps),
                                         w[1] - Leps * std::round(w[1] / Leps));
                            s.min_clear = std::min(s.min_clear, g.norm());
                        }
                    });
    double max_resid = -std::numeric_limits<double>::infinity();
    double min_clear = std::numeric_limits<double>::infinity();
    for (const Slot& s : slots) {
        rep.skipped_near_grid += s.skipped;
        rep.failures += s.failures;
        max_resid = std::max(max_resid, s.max_resid);
        min_clear = std::min(min_clear, s.min_clear);
    }
    rep.max_membership_residual = max_resid;
    rep.min_image_clearance = min_clear;

    // Symplecticity and injectivity on a separate deterministic subsample,
    // kept clear of the cell seams where the flow's derivative jumps.
    const Mat J = standard_form_matrix(Psi.half_dim());
    auto rng = chunk_rng(p.seed, 0x51C0FFEEull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double eps = Psi.lemma().eps();
    const double seam_clear = 6.0 * p.fd_step;
    // Finite differences cannot resolve Dpsi right next to a lattice point
    // (flow derivatives blow up toward the puncture), so the Jacobian
    // subsample keeps a clearance proportional to the cell size.
    const double fd_clear = std::max({p.grid_clearance, 0.05 * eps, seam_clear});
    std::vector<Vec> images;
    images.reserve(p.jacobian_samples);
    rep.max_symplectic_residual = 0.0;
    std::uint64_t found = 0, attempts = 0;
    while (found < p.jacobian_samples && attempts < 100 * (p.jacobian_samples + 1)) {
        ++attempts;
        Vec u(dim);
        for (int c = 0; c < dim; ++c) u[c] = gauss(rng);
        u *= std::pow(unif(rng), 1.0 / dim) / u.norm();
        const Vec x = D.generator() * u;
        if (Psi.grid_clearance(x) <= fd_clear) continue;
        bool near_seam = false;
        for (int c = dim - 2; c < dim; ++c) {
            const double frac = x[c] / eps - std::floor(x[c] / eps + 0.5);
            if (std::abs(std::abs(frac) - 0.5) * eps <= seam_clear) near_seam = true;
        }
        if (near_seam) continue;
        const Mat Dm = fd_jacobian4([&](const Vec& q) { return Psi.apply(q); }, x, p.fd_step);
        const double resid = (Dm.transpose() * J * Dm - J).cwiseAbs().maxCoeff();
        rep.max_symplectic_residual = std::max(rep.max_symplectic_residual, resid);
        if (resid > p.symplectic_tol) ++rep.jacobian_failures;
        images.push_back(Psi.apply(x));
        ++found;
    }
    rep.jacobian_samples = found;
    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a + 1 < images.size(); ++a)
        for (std::size_t b = a + 1; b < images.size(); ++b)
            min_sep = std::min(min_sep, (images[a] - images[b]).norm());
    rep.min_image_separation = images.size() > 1 ? min_sep : 0.0;

    rep.passed = rep.failures == 0 && rep.jacobian_failures == 0 &&
                 rep.jacobian_samples == p.jacobian_samples && rep.min_image_clearance > 0.0 &&
                 (images.size() < 2 || rep.min_image_separation > 0.0);
    return rep;
}

}  // namespace sympb
