#pragma once

// Run configuration: one struct holding the seed, discretization choices,
// sample counts, and named tolerances, with an INI-style loader (sections,
// key = value, '#' or ';' comments) and a canonical hash so reports can
// state exactly which configuration produced them.

#include "sympb/common.hpp"

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>

namespace sympb {

struct RunConfig {
    // [run]
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware default
    std::string outdir = ".";
    // [field]
    int resolution = 512;
    double puncture_radius = 0.15;
    double blend_radius = 0.35;
    double step_scale = 1e-3;
    // [sampling]
    std::uint64_t mc_samples = 1000000;
    std::uint64_t embed_samples = 100000;
    std::uint64_t jacobian_samples = 1000;
    std::uint64_t displace_samples = 2000;
    double fd_step = 1e-5;
    // [tolerances]
    std::map<std::string, double> tolerances = default_tolerances();

    static std::map<std::string, double> default_tolerances() {
        return {
            {"membership_slack", 1e-6}, {"grid_clearance", 1e-6}, {"symplectic", 1e-3},
            {"divergence", 5e-3},       {"edge_tangency", 1e-6},  {"corner_speed", 1e-6},
            {"jacobian_det", 1e-3},
        };
    }

    double tol(const std::string& name) const {
        const auto it = tolerances.find(name);
        if (it == tolerances.end())
            throw std::invalid_argument("RunConfig: unknown tolerance '" + name + "'");
        return it->second;
    }

    // Canonical key = value rendering with fixed order; the basis of the hash.
    std::string canonical() const {
        std::ostringstream os;
        os.precision(17);
        os << "run.seed=" << seed << '\n'
           << "run.threads=" << threads << '\n'
           << "run.outdir=" << outdir << '\n'
           << "field.resolution=" << resolution << '\n'
           << "field.puncture_radius=" << puncture_radius << '\n'
           << "field.blend_radius=" << blend_radius << '\n'
           << "field.step_scale=" << step_scale << '\n'
           << "sampling.mc_samples=" << mc_samples << '\n'
           << "sampling.embed_samples=" << embed_samples << '\n'
           << "sampling.jacobian_samples=" << jacobian_samples << '\n'
           << "sampling.displace_samples=" << displace_samples << '\n'
           << "sampling.fd_step=" << fd_step << '\n';
        for (const auto& [k, v] : tolerances) os << "tolerances." << k << '=' << v << '\n';
        return os.str();
    }

    std::uint64_t hash() const {
        // FNV-1a, 64 bit.
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : canonical()) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

inline RunConfig parse_run_config(std::istream& in) {
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;
        bool known = true;
        try {
            if (full == "run.seed") cfg.seed = std::stoull(val);
            else if (full == "run.threads") cfg.threads = std::stoi(val);
            else if (full == "run.outdir") cfg.outdir = val;
            else if (full == "field.resolution") cfg.resolution = std::stoi(val);
            else if (full == "field.puncture_radius") cfg.puncture_radius = std::stod(val);
            else if (full == "field.blend_radius") cfg.blend_radius = std::stod(val);
            else if (full == "field.step_scale") cfg.step_scale = std::stod(val);
            else if (full == "sampling.mc_samples") cfg.mc_samples = std::stoull(val);
            else if (full == "sampling.embed_samples") cfg.embed_samples = std::stoull(val);
            else if (full == "sampling.jacobian_samples") cfg.jacobian_samples = std::stoull(val);
            else if (full == "sampling.displace_samples") cfg.displace_samples = std::stoull(val);
            else if (full == "sampling.fd_step") cfg.fd_step = std::stod(val);
            else if (section == "tolerances") cfg.tolerances[key] = std::stod(val);
            else known = false;
        } catch (const std::exception&) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": bad value for '" + full + "'");
        }
        if (!known)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + full + "'");
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return parse_run_config(in);
}

}  // namespace sympb
