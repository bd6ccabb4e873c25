// Acceptance gate: one line per criterion, [PASS]/[FAIL], with the measured
// values, tolerances, seeds, and timings that justify the verdict.  Exit
// status is 0 only if every criterion passes.

#include "sympb/io.hpp"

#include "support/checks.hpp"

#include <chrono>
#include <iomanip>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

using namespace sympb;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string num(double v, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

std::string sci(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << v;
    return os.str();
}

struct Gate {
    bool all = true;
    void line(int idx, bool ok, const std::string& label, const std::string& detail) {
        all = all && ok;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << idx << ". " << label << " | " << detail
                  << '\n'
                  << std::flush;
    }
};

double rel_err(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

}  // namespace

int main() {
    const double pi = std::acos(-1.0);
    Gate gate;
    std::cout << "acceptance run, sympb " << version() << "\n";

    // Shared reference configuration: squeeze 0.5, dilate 2, grid 0.01.
    const double kAlpha = 0.5, kL = 2.0, kEps = 0.01;
    const Ellipsoid image(barrier_transform(kAlpha, kL));

    // --- 1: capacity anchor ----------------------------------------------
    {
        (void)ellipsoid_capacity(image);  // warm up
        const auto t0 = Clock::now();
        const double cap = ellipsoid_capacity(image);
        const double ms = ms_since(t0);
        const double expect = pi * 0.7423 * 0.7423;
        const double re = rel_err(cap, expect);
        gate.line(1, re <= 1e-3 && ms < 1.0, "capacity anchor",
                  "capacity=" + num(cap, 13) + " reference=" + num(expect, 8) +
                      " rel_err=" + sci(re) + " (tol 1e-3), time=" + num(ms, 3) +
                      "ms (limit 1ms)");
    }

    // --- 2: width anchor ---------------------------------------------------
    {
        (void)width_min(image);
        const auto t0 = Clock::now();
        const double w = width_min(image);
        const double ms = ms_since(t0);
        const double dev = std::abs(w - 0.4849);
        gate.line(2, dev <= 1e-3 && ms < 1.0, "width anchor",
                  "width_min=" + num(w, 13) + " reference=0.4849 abs_err=" + sci(dev) +
                      " (tol 1e-3), time=" + num(ms, 3) + "ms (limit 1ms)");
    }

    // --- 3: inflation slack anchor ------------------------------------------
    {
        const double slack = grid_inflation(1.0, kL, Ellipsoid(polterovich_matrix(kAlpha))) - 1.0;
        const double dev = std::abs(slack - 5.8335);
        gate.line(3, dev <= 1e-3, "inflation slack anchor",
                  "sqrt(2)L/width=" + num(slack, 13) + " reference=5.8335 abs_err=" + sci(dev) +
                      " (tol 1e-3) at (alpha,L)=(0.5,2)");
    }

    // --- 4: barrier search certificate ---------------------------------------
    {
        const auto t0 = Clock::now();
        const BarrierSearchResult res = find_barrier(0.75);
        const double ms = ms_since(t0);
        bool ok = res.found && !res.certificate.trivial;
        std::string detail;
        if (ok) {
            const BarrierCertificate& c = res.certificate;
            const double recomputed = recompute_bound(c);
            const double re = rel_err(recomputed, c.bound_value);
            const double target = pi * 0.75 * 0.75;
            ok = c.alpha > 0.0 && c.alpha <= 1.0 && c.L >= 1.0 && c.eps > 0.0 &&
                 re <= 1e-9 && c.bound_value < target && certificate_valid(c) &&
                 ms < 10000.0;
            detail = "alpha=" + num(c.alpha, 4) + " L=" + num(c.L, 4) + " eps=" + num(c.eps, 4) +
                     " bound=" + num(c.bound_value, 13) + " < pi*0.5625=" + num(target, 8) +
                     ", recompute rel_err=" + sci(re) + " (tol 1e-9), planes=" +
                     std::to_string(c.plane_count) + ", valid=" +
                     (certificate_valid(c) ? "yes" : "no") + ", time=" + num(ms, 1) +
                     "ms (limit 10s)";
        } else {
            detail = "search failed: " + res.failure_reason;
        }
        gate.line(4, ok, "barrier search certificate", detail);
    }

    // --- 5 & 6 need the built field --------------------------------------
    const auto tb = Clock::now();
    CellFieldParams fp512;
    fp512.resolution = 512;
    const auto field512 = std::make_shared<const CellField>(CellField::build(fp512));
    std::cout << "  (cell field at h=1/512 built in " << num(ms_since(tb), 1) << "ms)\n";

    FlowVerifyReport flow_rep;
    // --- 5: flow contraction ----------------------------------------------
    {
        const auto t0 = Clock::now();
        FlowVerifyParams p;  // samples=1000, seed=3, t in [0,3], det tol 1e-3
        flow_rep = flow_verify(field512, kEps, kL, p);

        CellFieldParams fp1024;
        fp1024.resolution = 1024;
        const CellField field1024 = CellField::build(fp1024);
        const double d512 = field512->diagnostics().divergence_deviation;
        const double d1024 = field1024.diagnostics().divergence_deviation;
        const double ratio = d512 / d1024;
        const double ms = ms_since(t0);

        const bool ok = flow_rep.det_failures == 0 && flow_rep.max_det_residual < 1e-3 &&
                        ratio >= 3.0 && ms < 60000.0;
        gate.line(5, ok, "flow contraction",
                  "max |det Dphi_t - e^-t|=" + sci(flow_rep.max_det_residual) +
                      " (tol 1e-3) over " + std::to_string(flow_rep.samples) +
                      " samples (seed=" + std::to_string(flow_rep.seed) +
                      ", t in [0,3]), det_failures=" + std::to_string(flow_rep.det_failures) +
                      "; divergence deviation " + sci(d512) + " -> " + sci(d1024) +
                      " (ratio " + num(ratio, 4) + " >= 3), time=" + num(ms, 1) +
                      "ms (limit 60s)");
    }

    // --- 6: grid preservation and cell mapping -----------------------------
    {
        const std::uint64_t seed6 = 0x5eedacce97ull;
        const auto t0 = Clock::now();
        const LemmaMap lm(field512, kEps, kL);
        std::mt19937_64 rng(seed6);
        std::uniform_real_distribution<double> unif(-0.5, 0.5);
        const double lim = 0.5 * kL * kEps + 1e-15;
        std::uint64_t bad = 0;
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < 1000; ++i) {
            const Vec2 z(kEps * unif(rng), kEps * unif(rng));
            if (z.squaredNorm() < 1e-28) continue;
            const Vec2 w = lm.psi(z);
            const double excess = std::max(std::abs(w[0]), std::abs(w[1])) - lim;
            worst = std::max(worst, excess);
            if (excess > 0.0) ++bad;
        }
        const double ms = ms_since(t0);
        const bool ok = flow_rep.max_edge_normal_drift <= 1e-6 &&
                        flow_rep.max_vertex_motion < 1e-9 && bad == 0;
        gate.line(6, ok, "grid preservation and cell mapping",
                  "edge drift=" + sci(flow_rep.max_edge_normal_drift) +
                      " (tol 1e-6), vertex motion=" + sci(flow_rep.max_vertex_motion) +
                      " (tol 1e-9); psi kept " + std::to_string(1000 - bad) +
                      "/1000 cell samples inside the L-cell (worst boundary excess=" + sci(worst) +
                      ", seed=" + std::to_string(seed6) + "), time=" + num(ms, 1) + "ms");
    }

    // --- 7: embedding verification ------------------------------------------
    {
        const auto t0 = Clock::now();
        const EmbeddingMap Psi(Ellipsoid(polterovich_matrix(kAlpha)), LemmaMap(field512, kEps, kL));
        EmbedVerifyParams p;  // samples=1e5, jacobian_samples=1e3, seed=1
        const EmbedVerifyReport r = embed_verify(Psi, p);
        const double ms = ms_since(t0);
        const bool ok = r.failures == 0 && r.jacobian_failures == 0 &&
                        r.max_symplectic_residual < 1e-3 && r.passed && ms < 120000.0;
        gate.line(7, ok, "embedding verification",
                  std::to_string(r.samples) + " membership samples (seed=" +
                      std::to_string(r.seed) + ", slack=" + sci(r.membership_slack) +
                      "): failures=" + std::to_string(r.failures) + ", max residual=" +
                      sci(r.max_membership_residual) + ", image grid clearance=" +
                      sci(r.min_image_clearance) + "; " + std::to_string(r.jacobian_samples) +
                      " derivative samples: max |DPsi^T J DPsi - J|=" +
                      sci(r.max_symplectic_residual) + " (tol 1e-3), failures=" +
                      std::to_string(r.jacobian_failures) + ", time=" + num(ms, 1) +
                      "ms (limit 120s)");
    }

    // --- 8: slice-area adjudication ------------------------------------------
    {
        const std::uint64_t seed8 = 0x5eedc0de8ull;
        const auto t0 = Clock::now();
        bool ok = true;
        std::string detail;
        double prev = 0.0;
        for (double alpha : {0.25, 0.5, 1.0}) {
            const Ellipsoid E(polterovich_matrix(alpha));
            const double closed = slice_area(E, Vec2::Zero());
            const double mc = slice_area_monte_carlo(E, Vec2::Zero(), 10000000ull, seed8);
            const double re = rel_err(mc, closed);
            ok = ok && re <= 1e-2 && closed > prev;
            prev = closed;
            detail += "alpha=" + num(alpha, 3) + ": closed=" + num(closed, 8) + " mc=" +
                      num(mc, 8) + " rel=" + sci(re) + "; ";
        }
        // Maximizing offset sits at the origin within the scan resolution.
        const Ellipsoid Eref(polterovich_matrix(0.5));
        const SliceSup sup = slice_area_sup(Eref, 41);
        const Mat C2 = Eref.generator().bottomRows(2) * Eref.generator().bottomRows(2).transpose();
        const double step_x = 2.0 * std::sqrt(C2(0, 0)) / 40.0;
        const double step_y = 2.0 * std::sqrt(C2(1, 1)) / 40.0;
        const bool centered =
            std::abs(sup.argmax[0]) <= step_x && std::abs(sup.argmax[1]) <= step_y;
        ok = ok && centered;
        detail += "argmax=(" + sci(sup.argmax[0]) + "," + sci(sup.argmax[1]) +
                  ") within grid step (" + num(step_x, 3) + "," + num(step_y, 3) + "); ";
        // Vanishing limit along alpha = 10^-k.
        double prev_small = std::numeric_limits<double>::infinity();
        bool vanishing = true;
        for (int k = 1; k <= 3; ++k) {
            const double a = std::pow(10.0, -k);
            const double area = slice_area(Ellipsoid(polterovich_matrix(a)), Vec2::Zero());
            vanishing = vanishing && area < prev_small;
            prev_small = area;
        }
        vanishing = vanishing && prev_small < 0.005;
        ok = ok && vanishing;
        detail += "area(10^-1..10^-3)->" + sci(prev_small) + " decreasing; ";
        // Alternate closed form: reported and flagged, never failed.
        const double ours = slice_area(Eref, Vec2::Zero());
        const double alt = pi * 0.5 / (0.5 * 0.5 + 1.0);
        detail += "alternate form pi*alpha/(alpha^2+1)=" + num(alt, 8) + " vs " + num(ours, 8) +
                  (rel_err(alt, ours) > 1e-2 ? " -> MISMATCH FLAGGED (reported, not failed)"
                                             : " -> agrees");
        detail += ", seed=" + std::to_string(seed8) + ", time=" + num(ms_since(t0), 1) + "ms";
        gate.line(8, ok, "slice-area adjudication", detail);
    }

    // --- 9: displacement checks ---------------------------------------------
    {
        const std::uint64_t seed9 = 0x5eedd15ull;
        const auto t0 = Clock::now();
        const PlaneClearReport plane = displace_plane_check(6.0, 0.9, 0.1, 2000, seed9);
        bool ok = plane.infimum > 0.9 && plane.min_image_radius > 0.9;
        std::string detail = "plane at distance 0.1: min image radius=" +
                             num(plane.min_image_radius, 8) + " (infimum " +
                             num(plane.infimum, 8) + ") > 0.9 at t=6 (seed=" +
                             std::to_string(seed9) + "); positivity min: ";
        for (double t : {0.5, 1.0, 2.0}) {
            PositivityParams p;
            p.samples = 1000;
            p.seed = seed9;
            const PositivityReport r = holomorphic_positivity_check(t, 0.9, p);
            ok = ok && r.positive && r.min_value > 0.0;
            detail += "t=" + num(t, 2) + ":" + sci(r.min_value) + " ";
        }
        const double ms = ms_since(t0);
        ok = ok && ms < 30000.0;
        detail += "(all > 0, 1000 samples each), time=" + num(ms, 1) + "ms (limit 30s)";
        gate.line(9, ok, "displacement checks", detail);
    }

    // --- 10: property suites --------------------------------------------------
    {
        const std::uint64_t seed10 = 0x5eedfacadeull;
        std::mt19937_64 rng(seed10);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        const Mat J = standard_form_matrix(2);
        const Mat Jc = complex_structure_matrix(2);
        double worst_symp = 0.0, worst_spec = 0.0, worst_omega = 0.0;
        Mat P = Mat::Zero(4, 4);
        P.diagonal() << 1.44, 0.64, 2.25, 0.81;
        const std::vector<double> base = symplectic_spectrum(P);
        for (int it = 0; it < 25; ++it) {
            const Mat T = testing::random_symplectic(rng, 2);
            worst_symp = std::max(worst_symp, (T.transpose() * J * T - J).cwiseAbs().maxCoeff());
            const std::vector<double> spectrum = symplectic_spectrum(T.transpose() * P * T);
            for (std::size_t i = 0; i < base.size(); ++i)
                worst_spec = std::max(worst_spec, rel_err(spectrum[i], base[i]));
            Vec u(4);
            for (int c = 0; c < 4; ++c) u[c] = unif(rng);
            worst_omega = std::max(worst_omega,
                                   std::abs(omega(u, Vec(Jc * u)) - u.squaredNorm()));
        }
        const bool ok = worst_symp < 1e-12 && worst_spec < 1e-8 && worst_omega < 1e-12;
        gate.line(10, ok, "property suites",
                  "spot checks (seed=" + std::to_string(seed10) +
                      "): form preservation=" + sci(worst_symp) +
                      " (tol 1e-12), spectrum congruence rel=" + sci(worst_spec) +
                      " (tol 1e-8), pairing identity=" + sci(worst_omega) +
                      " (tol 1e-12); full property suites with recorded seeds run as the"
                      " eight test binaries under ctest");
    }

    std::cout << (gate.all ? "acceptance: ALL CRITERIA PASSED" : "acceptance: FAILURES PRESENT")
              << '\n';
    return gate.all ? 0 : 1;
}
