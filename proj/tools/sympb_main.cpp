// Command-line driver for the symplectic barrier toolkit.
//
// Subcommands compute capacities and grid bounds, search for barrier
// certificates, build and verify the cell vector field, verify the grid
// embedding, and check the displacement flow.  Every verification writes its
// JSON report into the output directory; exit status is 0 only when all
// requested checks pass, 1 when a verification fails, and 2 on usage or
// input errors.  Randomized commands print the seed they ran with, and all
// artifacts are byte-for-byte reproducible for a fixed seed and config.

#include "sympb/io.hpp"

#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <utility>

namespace {

using namespace sympb;
using io::json;

struct Driver {
    RunConfig cfg;
    bool as_json = false;
};

json value_json(const Driver& d, const std::string& name, json params, double value) {
    return json{{"kind", "value"},
                {"version", SYMPB_VERSION},
                {"config_hash", d.cfg.hash()},
                {"name", name},
                {"parameters", std::move(params)},
                {"value", value}};
}

void print_value(const Driver& d, const std::string& name, json params, double value) {
    if (d.as_json) {
        std::cout << value_json(d, name, std::move(params), value).dump(2) << '\n';
    } else {
        std::cout.precision(15);
        std::cout << name << " = " << value << '\n';
    }
}

// Reports land in the configured output directory, created on demand.
std::string out_path(const Driver& d, const std::string& file) {
    std::filesystem::create_directories(d.cfg.outdir);
    return (std::filesystem::path(d.cfg.outdir) / file).string();
}

std::shared_ptr<const CellField> build_field(const RunConfig& cfg) {
    CellFieldParams p;
    p.resolution = cfg.resolution;
    p.puncture_radius = cfg.puncture_radius;
    p.blend_radius = cfg.blend_radius;
    return std::make_shared<const CellField>(CellField::build(p));
}

int run(int argc, char** argv) {
    Driver drv;

    // Pre-scan for --config so file values become the defaults every flag
    // can then override.
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) config_path = argv[i + 1];
        else if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
    }
    if (!config_path.empty()) drv.cfg = load_run_config(config_path);

    CLI::App app{"symplectic barrier toolkit: capacities, grid bounds, and embedding checks"};
    app.fallthrough();
    app.require_subcommand(1);
    std::string config_opt;
    app.add_option("--config", config_opt, "INI config file; explicit flags override its values");
    app.add_option("--seed", drv.cfg.seed, "base RNG seed for randomized checks");
    app.add_option("--threads", drv.cfg.threads, "worker threads (0: hardware default)");
    app.add_option("--outdir", drv.cfg.outdir, "directory for JSON reports and artifacts");
    app.add_flag("--json", drv.as_json, "print machine-readable JSON to stdout");

    // --- capacity ---------------------------------------------------------
    double cap_alpha = 0.5, cap_L = 1.0;
    auto* c_cap = app.add_subcommand("capacity", "Gromov width of the transformed unit ball");
    c_cap->add_option("--alpha", cap_alpha, "shear parameter of the plane family")->required();
    c_cap->add_option("--L", cap_L, "dilation of the distinguished plane")->capture_default_str();

    // --- lambda -----------------------------------------------------------
    double lam_alpha = 0.5, lam_L = 1.0;
    auto* c_lam = app.add_subcommand("lambda", "minimal linear width of the transformed ball");
    c_lam->add_option("--alpha", lam_alpha, "shear parameter of the plane family")->required();
    c_lam->add_option("--L", lam_L, "dilation of the distinguished plane")->capture_default_str();

    // --- slice-area -------------------------------------------------------
    double sa_alpha = 0.5, sa_bx = 0.0, sa_by = 0.0;
    bool sa_scan = false;
    int sa_grid = 41;
    std::uint64_t sa_mc = 0;
    auto* c_sa = app.add_subcommand("slice-area", "area of a distinguished-plane slice");
    c_sa->add_option("--alpha", sa_alpha, "shear parameter of the plane family")->required();
    c_sa->add_option("--bx", sa_bx, "slice offset, first coordinate")->capture_default_str();
    c_sa->add_option("--by", sa_by, "slice offset, second coordinate")->capture_default_str();
    c_sa->add_flag("--scan", sa_scan, "emit a CSV scan over slice offsets instead");
    c_sa->add_option("--grid", sa_grid, "scan grid points per axis")->capture_default_str();
    c_sa->add_option("--mc", sa_mc, "Monte Carlo cross-check with this many samples");

    // --- bound ------------------------------------------------------------
    double bd_alpha = 0.5, bd_L = 2.0, bd_eps = 0.01;
    auto* c_bd = app.add_subcommand("bound", "certified capacity bound for grid-avoiding balls");
    c_bd->add_option("--alpha", bd_alpha, "shear parameter of the plane family")->required();
    c_bd->add_option("--L", bd_L, "dilation of the distinguished plane")->required();
    c_bd->add_option("--eps", bd_eps, "grid spacing")->required();

    // --- search -----------------------------------------------------------
    double se_delta = 0.0, se_margin = 0.05;
    std::string se_out = "barrier_certificate.json";
    auto* c_se = app.add_subcommand("search", "find a grid certificate for a target radius");
    c_se->add_option("--delta", se_delta, "target ball radius to obstruct")->required();
    c_se->add_option("--margin", se_margin, "capacity headroom before inflation")
        ->capture_default_str();
    c_se->add_option("--out", se_out, "certificate file name inside the output directory")
        ->capture_default_str();

    // --- flow build | verify ----------------------------------------------
    auto* c_flow = app.add_subcommand("flow", "cell vector field construction and checks");
    c_flow->require_subcommand(1);
    auto* c_fb = c_flow->add_subcommand("build", "build the field and report its diagnostics");
    double fv_eps = 0.01, fv_L = 2.0, fv_tmax = 3.0;
    std::uint64_t fv_samples = 1000;
    auto* c_fv = c_flow->add_subcommand("verify", "contraction and cell-map checks of the flow");
    c_fv->add_option("--eps", fv_eps, "grid spacing for the cell map")->capture_default_str();
    c_fv->add_option("--L", fv_L, "dilation of the distinguished plane")->capture_default_str();
    c_fv->add_option("--samples", fv_samples, "random (point, time) checks")
        ->capture_default_str();
    c_fv->add_option("--t-max", fv_tmax, "largest flow time sampled")->capture_default_str();

    // --- embed verify -------------------------------------------------------
    auto* c_embed = app.add_subcommand("embed", "grid-avoiding embedding checks");
    c_embed->require_subcommand(1);
    double ev_alpha = 0.5, ev_L = 2.0, ev_eps = 0.01;
    std::uint64_t ev_samples = 0, ev_jac = 0;  // 0: take the config value
    auto* c_ev = c_embed->add_subcommand("verify", "sample the embedding against its target");
    c_ev->add_option("--alpha", ev_alpha, "shear parameter of the plane family")
        ->capture_default_str();
    c_ev->add_option("--L", ev_L, "dilation of the distinguished plane")->capture_default_str();
    c_ev->add_option("--eps", ev_eps, "grid spacing")->capture_default_str();
    c_ev->add_option("--samples", ev_samples, "membership samples (default from config)");
    c_ev->add_option("--jacobian-samples", ev_jac, "Jacobian samples (default from config)");

    // --- displace verify ----------------------------------------------------
    auto* c_disp = app.add_subcommand("displace", "radial displacement flow checks");
    c_disp->require_subcommand(1);
    double dv_t = 6.0, dv_r = 0.9, dv_dist = 0.1;
    std::uint64_t dv_samples = 0;  // 0: take the config value
    auto* c_dv = c_disp->add_subcommand("verify", "positivity and plane-clearing checks");
    c_dv->add_option("--t", dv_t, "flow time")->capture_default_str();
    c_dv->add_option("--r", dv_r, "cutoff radius of the displacement profile")
        ->capture_default_str();
    c_dv->add_option("--dist", dv_dist, "distance of the displaced plane from the origin")
        ->capture_default_str();
    c_dv->add_option("--samples", dv_samples, "sample count (default from config)");

    // --- export-field -------------------------------------------------------
    int xf_stride = 8;
    std::string xf_out = "cell_field.csv";
    auto* c_xf = app.add_subcommand("export-field", "write the cell field as CSV");
    c_xf->add_option("--stride", xf_stride, "write every stride-th grid node")
        ->capture_default_str();
    c_xf->add_option("--out", xf_out, "CSV file name inside the output directory")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // Help requests exit 0; anything else is a usage error.
        return code == 0 ? 0 : 2;
    }

    std::cout.precision(15);
    int rc = 0;

    if (*c_cap) {
        const Ellipsoid E(barrier_transform(cap_alpha, cap_L));
        print_value(drv, "capacity", json{{"alpha", cap_alpha}, {"L", cap_L}},
                    ellipsoid_capacity(E));
    } else if (*c_lam) {
        const Ellipsoid E(barrier_transform(lam_alpha, lam_L));
        print_value(drv, "lambda", json{{"alpha", lam_alpha}, {"L", lam_L}}, width_min(E));
    } else if (*c_sa) {
        const Ellipsoid E(polterovich_matrix(sa_alpha));
        if (sa_scan) {
            const auto rows = slice_area_scan(E, sa_grid);
            if (drv.as_json) {
                std::cout << io::slice_scan_to_json(E, rows).dump(2) << '\n';
            } else {
                std::cout << "bx,by,area\n";
                for (const auto& r : rows)
                    std::cout << r.bx << ',' << r.by << ',' << r.area << '\n';
            }
        } else {
            const Vec2 b(sa_bx, sa_by);
            const double closed = slice_area(E, b);
            if (sa_mc > 0) {
                const double mc = slice_area_monte_carlo(E, b, sa_mc, drv.cfg.seed,
                                                         static_cast<unsigned>(drv.cfg.threads));
                if (drv.as_json) {
                    json j = value_json(drv, "slice_area",
                                        json{{"alpha", sa_alpha}, {"bx", sa_bx}, {"by", sa_by}},
                                        closed);
                    j["monte_carlo"] = json{{"samples", sa_mc}, {"seed", drv.cfg.seed},
                                            {"value", mc}};
                    std::cout << j.dump(2) << '\n';
                } else {
                    std::cout << "slice_area = " << closed << '\n';
                    std::cout << "monte_carlo = " << mc << " (samples=" << sa_mc
                              << ", seed=" << drv.cfg.seed << ")\n";
                }
            } else {
                print_value(drv, "slice_area",
                            json{{"alpha", sa_alpha}, {"bx", sa_bx}, {"by", sa_by}}, closed);
            }
        }
    } else if (*c_bd) {
        print_value(drv, "bound",
                    json{{"alpha", bd_alpha}, {"L", bd_L}, {"eps", bd_eps}},
                    barrier_bound(bd_alpha, bd_L, bd_eps));
    } else if (*c_se) {
        const BarrierSearchResult res = find_barrier(se_delta, se_margin);
        if (!res.found) {
            std::cerr << "search: no certificate found for delta=" << se_delta << '\n';
            return 1;
        }
        const json cert = io::certificate_to_json(res.certificate, drv.cfg.hash());
        const std::string path = out_path(drv, se_out);
        io::write_json_file(path, cert);
        const bool ok = certificate_valid(res.certificate);
        if (drv.as_json) {
            std::cout << cert.dump(2) << '\n';
        } else {
            const BarrierCertificate& c = res.certificate;
            std::cout << "certificate written to " << path << '\n';
            if (c.trivial) {
                std::cout << "trivial: target radius exceeds 1, no planes needed\n";
            } else {
                std::cout << "alpha = " << c.alpha << ", L = " << c.L << ", eps = " << c.eps
                          << '\n';
                std::cout << "bound = " << c.bound_value << " < pi*delta^2 = "
                          << std::acos(-1.0) * se_delta * se_delta << '\n';
                std::cout << "planes meeting the unit ball: " << c.plane_count << '\n';
            }
            std::cout << (ok ? "certificate valid\n" : "certificate INVALID\n");
        }
        rc = ok ? 0 : 1;
    } else if (*c_fb) {
        const auto field = build_field(drv.cfg);
        const CellFieldDiagnostics& d = field->diagnostics();
        const bool ok = d.divergence_deviation < drv.cfg.tol("divergence") &&
                        d.edge_normal_residual < drv.cfg.tol("edge_tangency") &&
                        d.corner_speed_residual < drv.cfg.tol("corner_speed");
        json j{{"kind", "field_diagnostics"},
               {"version", SYMPB_VERSION},
               {"resolution", field->resolution()},
               {"puncture_radius", field->puncture_radius()},
               {"blend_radius", drv.cfg.blend_radius},
               {"diagnostics",
                json{{"loop_gap", d.loop_gap},
                     {"solve_residual", d.solve_residual},
                     {"edge_normal_residual", d.edge_normal_residual},
                     {"corner_speed_residual", d.corner_speed_residual},
                     {"divergence_deviation", d.divergence_deviation}}},
               {"passed", ok}};
        io::write_json_file(out_path(drv, "field_diagnostics.json"), j);
        if (drv.as_json) {
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "resolution = " << field->resolution() << '\n';
            std::cout << "divergence_deviation = " << d.divergence_deviation << '\n';
            std::cout << "edge_normal_residual = " << d.edge_normal_residual << '\n';
            std::cout << "corner_speed_residual = " << d.corner_speed_residual << '\n';
            std::cout << (ok ? "field diagnostics PASS\n" : "field diagnostics FAIL\n");
        }
        rc = ok ? 0 : 1;
    } else if (*c_fv) {
        const auto field = build_field(drv.cfg);
        FlowVerifyParams p;
        p.samples = fv_samples;
        p.seed = drv.cfg.seed;
        p.t_max = fv_tmax;
        p.fd_step = drv.cfg.fd_step;
        p.det_tol = drv.cfg.tol("jacobian_det");
        p.symplectic_tol = drv.cfg.tol("symplectic");
        p.threads = drv.cfg.threads;
        const FlowVerifyReport rep = flow_verify(field, fv_eps, fv_L, p);
        const json j = io::flow_report_to_json(rep);
        io::write_json_file(out_path(drv, "flow_report.json"), j);
        if (drv.as_json) {
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "seed = " << rep.seed << ", samples = " << rep.samples << '\n';
            std::cout << "max |det Dphi - e^-t| = " << rep.max_det_residual << " ("
                      << rep.det_failures << " failures)\n";
            std::cout << "max vertex motion = " << rep.max_vertex_motion << '\n';
            std::cout << "max edge drift = " << rep.max_edge_normal_drift << '\n';
            std::cout << "max symplectic defect = " << rep.max_symplectic_residual << '\n';
            std::cout << (rep.passed ? "flow verify PASS\n" : "flow verify FAIL\n");
        }
        rc = rep.passed ? 0 : 1;
    } else if (*c_ev) {
        const auto field = build_field(drv.cfg);
        FlowParams fp;
        fp.step_scale = drv.cfg.step_scale;
        const EmbeddingMap Psi(Ellipsoid(barrier_transform(ev_alpha, ev_L)),
                               LemmaMap(field, ev_eps, ev_L, fp));
        EmbedVerifyParams p;
        p.samples = ev_samples > 0 ? ev_samples : drv.cfg.embed_samples;
        p.jacobian_samples = ev_jac > 0 ? ev_jac : drv.cfg.jacobian_samples;
        p.seed = drv.cfg.seed;
        p.membership_slack = drv.cfg.tol("membership_slack");
        p.grid_clearance = drv.cfg.tol("grid_clearance");
        p.symplectic_tol = drv.cfg.tol("symplectic");
        p.fd_step = drv.cfg.fd_step;
        p.threads = drv.cfg.threads;
        const EmbedVerifyReport rep = embed_verify(Psi, p);
        const json j = io::embed_report_to_json(rep);
        io::write_json_file(out_path(drv, "embed_report.json"), j);
        if (drv.as_json) {
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "seed = " << rep.seed << ", samples = " << rep.samples << " ("
                      << rep.skipped_near_grid << " skipped near the grid)\n";
            std::cout << "membership failures = " << rep.failures
                      << ", max residual = " << rep.max_membership_residual << '\n';
            std::cout << "jacobian failures = " << rep.jacobian_failures
                      << ", max symplectic defect = " << rep.max_symplectic_residual << '\n';
            std::cout << "min image clearance = " << rep.min_image_clearance
                      << ", min separation from cell centers = " << rep.min_image_separation
                      << '\n';
            std::cout << (rep.passed ? "embed verify PASS\n" : "embed verify FAIL\n");
        }
        rc = rep.passed ? 0 : 1;
    } else if (*c_dv) {
        const std::uint64_t n = dv_samples > 0 ? dv_samples : drv.cfg.displace_samples;
        PositivityParams pp;
        pp.samples = n;
        pp.seed = drv.cfg.seed;
        pp.fd_step = drv.cfg.fd_step;
        pp.threads = drv.cfg.threads;
        const PositivityReport pos = holomorphic_positivity_check(dv_t, dv_r, pp);
        const PlaneClearReport plane =
            displace_plane_check(dv_t, dv_r, dv_dist, n, drv.cfg.seed);
        const bool cleared = plane.infimum > dv_r && plane.min_image_radius > dv_r;
        const bool ok = pos.positive && cleared;
        const json j = io::displace_report_to_json(dv_t, dv_r, pos, plane, dv_dist, dv_r);
        io::write_json_file(out_path(drv, "displace_report.json"), j);
        if (drv.as_json) {
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "seed = " << pos.seed << ", samples = " << n << ", t = " << dv_t
                      << ", cutoff r = " << dv_r << '\n';
            std::cout << "positivity min = " << pos.min_value
                      << ", radial mismatch = " << pos.max_radial_mismatch << '\n';
            std::cout << "plane at distance " << dv_dist << ": image radius >= "
                      << plane.infimum << " (sampled min " << plane.min_image_radius << ")\n";
            std::cout << (ok ? "displace verify PASS\n" : "displace verify FAIL\n");
        }
        rc = ok ? 0 : 1;
    } else if (*c_xf) {
        const auto field = build_field(drv.cfg);
        const std::string path = out_path(drv, xf_out);
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open for writing: " + path);
        out.precision(17);
        field->write_csv(out, xf_stride);
        std::cout << "field written to " << path << '\n';
    }

    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
