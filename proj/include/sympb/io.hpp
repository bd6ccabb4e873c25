#pragma once

// JSON artifacts and their validation.
//
// Every artifact is reproducible byte for byte from the same inputs: no
// timestamps, no environment capture, ordered keys, fixed shapes.  Matrices
// carry an explicit "coordinate_order" marker because nothing else in a flat
// array says which convention the entries use.

#include "sympb/capacity.hpp"
#include "sympb/cell_field.hpp"
#include "sympb/common.hpp"
#include "sympb/config.hpp"
#include "sympb/displacement.hpp"
#include "sympb/ellipsoid.hpp"
#include "sympb/embedding.hpp"
#include "sympb/flow.hpp"
#include "sympb/version.hpp"

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace sympb::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kCoordinateOrder = "interleaved_xy";

inline json matrix_to_json(const Mat& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return json{{"coordinate_order", kCoordinateOrder},
                {"rows", M.rows()},
                {"cols", M.cols()},
                {"entries", std::move(rows)}};
}

inline Mat matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("entries") || !j.contains("coordinate_order"))
        throw std::invalid_argument("matrix_from_json: not a matrix object");
    if (j.at("coordinate_order").get<std::string>() != kCoordinateOrder)
        throw std::invalid_argument("matrix_from_json: unsupported coordinate order '" +
                                    j.at("coordinate_order").get<std::string>() + "'");
    const auto& rows = j.at("entries");
    if (!rows.is_array() || rows.empty())
        throw std::invalid_argument("matrix_from_json: entries must be a nonempty array");
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows.at(0).size());
    Mat M(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const auto& row = rows.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c)
            throw std::invalid_argument("matrix_from_json: ragged entries");
        for (Eigen::Index k = 0; k < c; ++k) M(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    if (j.contains("rows") && j.at("rows").get<Eigen::Index>() != r)
        throw std::invalid_argument("matrix_from_json: row count mismatch");
    if (j.contains("cols") && j.at("cols").get<Eigen::Index>() != c)
        throw std::invalid_argument("matrix_from_json: column count mismatch");
    return M;
}

inline json certificate_to_json(const BarrierCertificate& c, std::uint64_t config_hash = 0) {
    const double pi = std::acos(-1.0);
    return json{{"kind", "barrier_certificate"},
                {"version", SYMPB_VERSION},
                {"config_hash", config_hash},
                {"target_delta", c.target_delta},
                {"target_capacity", pi * c.target_delta * c.target_delta},
                {"alpha", c.alpha},
                {"L", c.L},
                {"eps", c.eps},
                {"bound_value", c.bound_value},
                {"plane_count", c.plane_count},
                {"trivial", c.trivial},
                {"transform", c.trivial ? json() : matrix_to_json(barrier_transform(c.alpha, c.L))}};
}

inline BarrierCertificate certificate_from_json(const json& j) {
    if (!j.is_object() || j.value("kind", "") != std::string("barrier_certificate"))
        throw std::invalid_argument("certificate_from_json: not a barrier_certificate");
    BarrierCertificate c;
    c.target_delta = j.at("target_delta").get<double>();
    c.alpha = j.at("alpha").get<double>();
    c.L = j.at("L").get<double>();
    c.eps = j.at("eps").get<double>();
    c.bound_value = j.at("bound_value").get<double>();
    c.plane_count = j.at("plane_count").get<std::uint64_t>();
    c.trivial = j.at("trivial").get<bool>();
    return c;
}

inline json embed_report_to_json(const EmbedVerifyReport& r) {
    return json{{"kind", "embed_report"},
                {"version", SYMPB_VERSION},
                {"samples", r.samples},
                {"skipped_near_grid", r.skipped_near_grid},
                {"failures", r.failures},
                {"max_membership_residual", r.max_membership_residual},
                {"min_image_clearance", r.min_image_clearance},
                {"jacobian_samples", r.jacobian_samples},
                {"jacobian_failures", r.jacobian_failures},
                {"max_symplectic_residual", r.max_symplectic_residual},
                {"min_image_separation", r.min_image_separation},
                {"seed", r.seed},
                {"membership_slack", r.membership_slack},
                {"fd_step", r.fd_step},
                {"passed", r.passed}};
}

inline json flow_report_to_json(const FlowVerifyReport& r) {
    const CellFieldDiagnostics& d = r.diagnostics;
    return json{{"kind", "flow_report"},
                {"version", SYMPB_VERSION},
                {"diagnostics",
                 json{{"loop_gap", d.loop_gap},
                      {"solve_residual", d.solve_residual},
                      {"edge_normal_residual", d.edge_normal_residual},
                      {"corner_speed_residual", d.corner_speed_residual},
                      {"divergence_deviation", d.divergence_deviation}}},
                {"samples", r.samples},
                {"seed", r.seed},
                {"max_det_residual", r.max_det_residual},
                {"det_failures", r.det_failures},
                {"max_vertex_motion", r.max_vertex_motion},
                {"max_edge_normal_drift", r.max_edge_normal_drift},
                {"max_symplectic_residual", r.max_symplectic_residual},
                {"passed", r.passed}};
}

inline json displace_report_to_json(double t, double r, const PositivityReport& pos,
                                    const PlaneClearReport& plane, double plane_dist,
                                    double clear_target) {
    return json{{"kind", "displace_report"},
                {"version", SYMPB_VERSION},
                {"t", t},
                {"cutoff_radius", r},
                {"positivity",
                 json{{"samples", pos.samples},
                      {"seed", pos.seed},
                      {"min_value", pos.min_value},
                      {"max_radial_mismatch", pos.max_radial_mismatch},
                      {"positive", pos.positive}}},
                {"plane",
                 json{{"distance", plane_dist},
                      {"samples", plane.samples},
                      {"seed", plane.seed},
                      {"min_image_radius", plane.min_image_radius},
                      {"infimum", plane.infimum},
                      {"clear_target", clear_target},
                      {"cleared", plane.infimum > clear_target &&
                                      plane.min_image_radius > clear_target}}}};
}

inline json slice_scan_to_json(const Ellipsoid& E, const std::vector<SliceScanRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back(json{{"b", json::array({r.bx, r.by})}, {"area", r.area}});
    return json{{"kind", "slice_scan"},
                {"version", SYMPB_VERSION},
                {"generator", matrix_to_json(E.generator())},
                {"rows", std::move(arr)}};
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return json::parse(in);
}

// Minimal structural validator covering the subset of JSON Schema the
// artifact schemas use: type, properties, required, items, enum, const.
inline void validate_schema(const json& value, const json& schema, const std::string& where,
                            std::vector<std::string>& errors) {
    if (schema.contains("const") && value != schema.at("const")) {
        errors.push_back(where + ": expected constant " + schema.at("const").dump());
        return;
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& v : schema.at("enum")) ok = ok || v == value;
        if (!ok) {
            errors.push_back(where + ": value not in enum");
            return;
        }
    }
    if (schema.contains("type")) {
        const std::string t = schema.at("type").get<std::string>();
        const bool ok = (t == "object" && value.is_object()) ||
                        (t == "array" && value.is_array()) ||
                        (t == "string" && value.is_string()) ||
                        (t == "number" && value.is_number()) ||
                        (t == "integer" && value.is_number_integer()) ||
                        (t == "boolean" && value.is_boolean()) || (t == "null" && value.is_null());
        if (!ok) {
            errors.push_back(where + ": expected type " + t);
            return;
        }
    }
    if (schema.contains("required"))
        for (const auto& k : schema.at("required"))
            if (!value.contains(k.get<std::string>()))
                errors.push_back(where + ": missing required key '" + k.get<std::string>() + "'");
    if (schema.contains("properties") && value.is_object())
        for (const auto& [k, sub] : schema.at("properties").items())
            if (value.contains(k)) validate_schema(value.at(k), sub, where + "/" + k, errors);
    if (schema.contains("items") && value.is_array())
        for (std::size_t i = 0; i < value.size(); ++i)
            validate_schema(value.at(i), schema.at("items"), where + "[" + std::to_string(i) + "]",
                            errors);
}

inline std::vector<std::string> validate_against_schema(const json& value, const json& schema) {
    std::vector<std::string> errors;
    validate_schema(value, schema, "$", errors);
    return errors;
}

}  // namespace sympb::io
