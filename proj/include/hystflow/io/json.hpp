#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hystflow/errors.hpp"
#include "hystflow/experiments/comparison.hpp"
#include "hystflow/experiments/front_bound.hpp"
#include "hystflow/experiments/regimes.hpp"
#include "hystflow/hysteresis/density.hpp"
#include "hystflow/hysteresis/memory_curve.hpp"
#include "hystflow/io/csv.hpp"
#include "hystflow/report.hpp"
#include "hystflow/solver/state.hpp"

namespace hystflow::io {

using json = nlohmann::json;

/// JSON has no infinities; they travel as the strings "inf" / "-inf".
inline json number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return nullptr;
    return v;
}

inline double to_number(const json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
    }
    throw IoError(what + ": expected a number");
}

inline json to_json(const MemoryCurve& m) {
    json corners = json::array();
    for (const auto& c : m.corners()) corners.push_back({c.r, c.xi});
    return {{"lambda_max", m.lambda_max()}, {"corners", corners}};
}

inline MemoryCurve memory_from_json(const json& j) {
    try {
        std::vector<Corner> corners;
        for (const auto& c : j.at("corners")) corners.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
        return MemoryCurve(std::move(corners), j.at("lambda_max").get<double>());
    } catch (const json::exception& e) {
        throw IoError(std::string("memory curve: ") + e.what());
    }
}

inline json to_json(const PreisachDensity& d) {
    json j = std::visit(
        [](const auto& k) -> json {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantDensity>)
                return {{"kind", "constant"}, {"value", k.value}, {"r_max", number(k.r_max)}, {"v_max", number(k.v_max)}};
            else if constexpr (std::is_same_v<T, SeparableDensity>)
                return {{"kind", "separable"}, {"amplitude", k.amplitude}, {"r_scale", k.r_scale},
                        {"v_scale", k.v_scale}, {"r_max", number(k.r_max)}, {"v_max", number(k.v_max)}};
            else
                return {{"kind", "grid"}, {"r_max", k.r_max()}, {"v_max", k.v_max()}, {"nr", k.nr()},
                        {"nv", k.nv()}, {"values", k.values()}};
        },
        d.kind());
    j["gbar"] = d.gbar();
    j["rho1"] = number(d.rho1());
    j["saturation_required"] = d.saturation_required();
    return j;
}

inline PreisachDensity density_from_json(const json& j) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        const double gbar = j.value("gbar", 0.0);
        const std::optional<double> rho1 =
            j.contains("rho1") ? std::optional<double>(to_number(j.at("rho1"), "rho1")) : std::nullopt;
        const bool sat = j.value("saturation_required", false);
        if (kind == "constant")
            return PreisachDensity(ConstantDensity{j.at("value").get<double>(), to_number(j.at("r_max"), "r_max"),
                                                   to_number(j.at("v_max"), "v_max")},
                                   gbar, rho1, sat);
        if (kind == "separable")
            return PreisachDensity(SeparableDensity{j.at("amplitude").get<double>(), j.at("r_scale").get<double>(),
                                                    j.at("v_scale").get<double>(), to_number(j.at("r_max"), "r_max"),
                                                    to_number(j.at("v_max"), "v_max")},
                                   gbar, rho1, sat);
        if (kind == "grid")
            return PreisachDensity(GridDensity(j.at("r_max").get<double>(), j.at("v_max").get<double>(),
                                               j.at("nr").get<std::size_t>(), j.at("nv").get<std::size_t>(),
                                               j.at("values").get<std::vector<double>>()),
                                   gbar, rho1, sat);
        throw IoError("density: unknown kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw IoError(std::string("density: ") + e.what());
    }
}

inline json to_json(const ValidationReport& r) {
    json a = json::array();
    for (const auto& c : r.items()) a.push_back({{"check", c.name}, {"status", to_string(c.status)}, {"detail", c.witness}});
    return a;
}

inline json to_json(const FrontBoundReport& r) {
    return {{"passed", r.passed},
            {"failure", r.failure},
            {"first_violation_step", r.first_violation_step ? json(*r.first_violation_step) : json(nullptr)},
            {"steps", r.steps_run},
            {"C_p", r.C_p},
            {"lambda_bar", r.lambda_bar},
            {"wave_speed", r.wave_speed},
            {"wave_offset", r.wave_offset},
            {"R1", r.R1},
            {"slack", r.slack},
            {"min_margin", number(r.min_margin)},
            {"max_comparison", number(r.max_comparison)},
            {"max_energy_balance", number(r.max_energy_balance)},
            {"max_abs_u", r.max_abs_u},
            {"max_mass_drift", r.max_mass_drift},
            {"max_inner_iterations", r.max_inner_iterations},
            {"runtime_seconds", r.runtime_seconds},
            {"validation", to_json(r.validation)}};
}

inline json to_json(const ComparisonReport& r) {
    return {{"passed", r.passed},
            {"failure", r.failure},
            {"initially_ordered", r.initially_ordered},
            {"ordered", r.ordered},
            {"deterministic", r.deterministic},
            {"first_violation_step", r.first_violation_step ? json(*r.first_violation_step) : json(nullptr)},
            {"max_violation", number(r.max_violation)},
            {"steps", r.steps_run},
            {"runtime_seconds", r.runtime_seconds}};
}

inline json to_json(const std::vector<RegimeRow>& rows) {
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"p", r.p},
                     {"F", r.F.is_finite() ? json(r.F.value) : json("divergent")},
                     {"classification", r.classification},
                     {"note", r.note}});
    return a;
}

inline void write_json(const json& j, const std::filesystem::path& path) { write_text(path, j.dump(2) + "\n"); }

// Snapshot: one JSON header line, then CSV x,u,theta. The header carries
// the memory curves so the file doubles as a restart point.

struct Snapshot {
    json header;
    std::vector<double> x, u, theta;
    std::vector<MemoryCurve> memories;
};

inline std::string snapshot_text(const Model& model, const SimulationState& s) {
    const auto& g = model.mesh.geometry();
    json h;
    h["format"] = "hystflow-snapshot";
    h["version"] = 1;
    h["geometry"] = {{"kind", to_string(g.kind)}, {"L", g.L}, {"dimension", g.dimension}, {"M", g.M}};
    h["p"] = model.p;
    h["kappa"] = {{"x", model.permeability.x_table()},
                  {"k", model.permeability.k_table()},
                  {"beta", model.permeability.beta()}};
    h["omega"] = model.bc.omega;
    h["lambda_max"] = model.lambda_max;
    h["tau"] = s.tau;
    h["step"] = s.step;
    h["time"] = s.time;
    json mem = json::array();
    for (const auto& m : s.memories) mem.push_back(to_json(m));
    h["memories"] = mem;
    std::string out = h.dump() + "\n";
    Series body({"x", "u", "theta"});
    for (std::size_t j = 0; j < s.u.size(); ++j) body.push({model.mesh.x(j), s.u[j], s.theta[j]});
    out += to_csv(body);
    return out;
}

inline void write_snapshot(const Model& model, const SimulationState& s, const std::filesystem::path& path) {
    write_text(path, snapshot_text(model, s));
}

inline Snapshot read_snapshot(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    const auto nl = text.find('\n');
    if (nl == std::string::npos) throw IoError(path.string() + ": not a snapshot (no header line)");
    Snapshot snap;
    try {
        snap.header = json::parse(text.substr(0, nl));
    } catch (const json::exception& e) {
        throw IoError(path.string() + ":1: bad snapshot header: " + e.what());
    }
    if (snap.header.value("format", "") != "hystflow-snapshot") throw IoError(path.string() + ": not a snapshot");
    const Series body = parse_csv(text.substr(nl + 1), path.string());
    try {
        snap.x = body.column("x");
        snap.u = body.column("u");
        snap.theta = body.column("theta");
    } catch (const std::out_of_range& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    if (snap.header.contains("memories"))
        for (const auto& m : snap.header.at("memories")) snap.memories.push_back(memory_from_json(m));
    if (!snap.memories.empty() && snap.memories.size() != snap.u.size())
        throw IoError(path.string() + ": memory count does not match the node count");
    return snap;
}

/// State on `model` from a snapshot; theta is recomputed from the memories
/// and must agree with the stored column.
inline SimulationState restore_state(const Model& model, const Snapshot& snap, const SolverOptions& opt = {}) {
    if (snap.u.size() != model.mesh.size())
        throw IoError("snapshot has " + std::to_string(snap.u.size()) + " nodes, mesh has "
                      + std::to_string(model.mesh.size()));
    if (snap.memories.empty()) throw IoError("snapshot carries no memory curves, cannot restart");
    SimulationState s = make_state(model, snap.u, snap.memories, opt);
    for (std::size_t j = 0; j < s.theta.size(); ++j)
        if (std::abs(s.theta[j] - snap.theta[j]) > 1e-12)
            throw IoError("snapshot theta at node " + std::to_string(j) + " disagrees with its memory");
    s.step = snap.header.value("step", std::size_t{0});
    s.time = snap.header.value("time", 0.0);
    s.tau = snap.header.value("tau", 0.0);
    s.diagnostics = compute_diagnostics(model, s, opt);
    return s;
}

}  // namespace hystflow::io
