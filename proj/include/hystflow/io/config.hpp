#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "hystflow/errors.hpp"
#include "hystflow/experiments/front_bound.hpp"
#include "hystflow/experiments/scenario.hpp"
#include "hystflow/io/csv.hpp"
#include "hystflow/io/json.hpp"
#include "hystflow/wave/wave_integral.hpp"

namespace hystflow::io {

enum class Scenario { simulate, front_bound, regimes, loops, comparison, wave };

inline const char* to_string(Scenario s) {
    switch (s) {
    case Scenario::simulate: return "simulate";
    case Scenario::front_bound: return "front-bound";
    case Scenario::regimes: return "regimes";
    case Scenario::loops: return "loops";
    case Scenario::comparison: return "comparison";
    case Scenario::wave: return "wave";
    }
    return "?";
}

struct RegimesConfig {
    std::vector<double> p_list{2.5, 3.0, 3.5, 4.0, 6.0};
    std::size_t growth_steps = 0;  // > 0 adds a descriptive support-growth run per p
};

struct LoopsConfig {
    std::vector<double> path{0.0, 1.0, 0.0, 1.0};
    std::size_t points_per_leg = 200;
};

struct ComparisonConfig {
    double factor = 1.1;
    double order_tol = 1e-9;
    bool determinism = true;
};

struct WaveConfig {
    std::optional<double> c;  // otherwise the minimal speed for offset R
    double R0 = 1.0;
    std::optional<double> R;  // default (R0 + L) / 2
    std::size_t points = 401;
    double t_end = 2.0;  // envelope series
};

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool json = true;
    bool svg = true;
    std::size_t snapshot_every = 0;  // 0: final snapshot only
};

struct RunConfig {
    SimulationSetup setup;
    Scenario scenario = Scenario::simulate;
    FrontBoundOptions front;
    RegimesConfig regimes;
    LoopsConfig loops;
    ComparisonConfig comparison;
    WaveConfig wave;
    OutputConfig output;
    std::uint64_t seed = 0;
    std::size_t property_samples = 10000;  // randomized checks in `validate`
    std::filesystem::path base_dir;  // relative file references resolve here
};

namespace detail {

class Reader {
  public:
    Reader(std::string origin) : origin_(std::move(origin)) {}

    [[noreturn]] void fail(const YAML::Node& n, const std::string& where, const std::string& msg) const {
        const auto mark = n.Mark();
        std::string loc = origin_;
        if (!mark.is_null()) loc += ":" + std::to_string(mark.line + 1);
        throw ConfigError(loc + ": " + where + ": " + msg);
    }

    void expect_map(const YAML::Node& n, const std::string& where) const {
        if (!n.IsMap()) fail(n, where, "expected a mapping");
    }

    void only_keys(const YAML::Node& n, const std::string& section, const std::set<std::string>& allowed,
                   const std::string& context = {}) const {
        for (auto it = n.begin(); it != n.end(); ++it) {
            const auto key = it->first.as<std::string>();
            if (!allowed.count(key))
                fail(it->first, "[" + section + "]." + key, "unknown key" + (context.empty() ? "" : " " + context));
        }
    }

    double num(const YAML::Node& n, const std::string& where) const {
        try {
            return n.as<double>();
        } catch (const YAML::Exception&) {
            fail(n, where, "expected a number, got '" + scalar(n) + "'");
        }
    }

    double num(const YAML::Node& parent, const std::string& section, const std::string& key, double fallback) const {
        const auto n = parent[key];
        return n ? num(n, "[" + section + "]." + key) : fallback;
    }

    double required_num(const YAML::Node& parent, const std::string& section, const std::string& key) const {
        const auto n = parent[key];
        if (!n) fail(parent, "[" + section + "]." + key, "required key missing");
        return num(n, "[" + section + "]." + key);
    }

    std::size_t count(const YAML::Node& parent, const std::string& section, const std::string& key,
                      std::size_t fallback) const {
        const auto n = parent[key];
        if (!n) return fallback;
        const std::string where = "[" + section + "]." + key;
        const double v = num(n, where);
        if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) fail(n, where, "expected a non-negative integer");
        return static_cast<std::size_t>(v);
    }

    bool flag(const YAML::Node& parent, const std::string& section, const std::string& key, bool fallback) const {
        const auto n = parent[key];
        if (!n) return fallback;
        try {
            return n.as<bool>();
        } catch (const YAML::Exception&) {
            fail(n, "[" + section + "]." + key, "expected true or false");
        }
    }

    std::string text(const YAML::Node& parent, const std::string& section, const std::string& key,
                     const std::string& fallback) const {
        const auto n = parent[key];
        if (!n) return fallback;
        if (!n.IsScalar()) fail(n, "[" + section + "]." + key, "expected a string");
        return n.as<std::string>();
    }

    std::vector<double> list(const YAML::Node& n, const std::string& where) const {
        if (!n.IsSequence()) fail(n, where, "expected a list of numbers");
        std::vector<double> out;
        for (const auto& e : n) out.push_back(num(e, where));
        return out;
    }

    static std::string scalar(const YAML::Node& n) { return n.IsScalar() ? n.Scalar() : "<" + kind(n) + ">"; }
    static std::string kind(const YAML::Node& n) {
        if (n.IsMap()) return "mapping";
        if (n.IsSequence()) return "list";
        return "value";
    }

    const std::string& origin() const { return origin_; }

  private:
    std::string origin_;
};

}  // namespace detail

/// Parses and validates a YAML run configuration. `expected` is the scenario
/// implied by the command; a conflicting experiment.scenario is an error.
inline RunConfig parse_config(const std::string& text, const std::string& origin = "<config>",
                              std::optional<Scenario> expected = std::nullopt,
                              const std::filesystem::path& base_dir = {}) {
    detail::Reader rd(origin);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": parse error: " + e.msg);
    }
    if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    rd.expect_map(root, "document");
    rd.only_keys(root, "document", {"geometry", "material", "scheme", "initial", "experiment", "output"});

    RunConfig cfg;
    cfg.base_dir = base_dir;
    auto resolve = [&](const std::string& p) {
        const std::filesystem::path path(p);
        return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };

    // experiment first: it decides which sections are required
    const YAML::Node ex = root["experiment"];
    if (ex) rd.expect_map(ex, "[experiment]");
    {
        std::optional<Scenario> from_doc;
        if (ex && ex["scenario"]) {
            const auto s = rd.text(ex, "experiment", "scenario", "");
            if (s == "simulate") from_doc = Scenario::simulate;
            else if (s == "front-bound") from_doc = Scenario::front_bound;
            else if (s == "regimes") from_doc = Scenario::regimes;
            else if (s == "loops") from_doc = Scenario::loops;
            else if (s == "comparison") from_doc = Scenario::comparison;
            else if (s == "wave") from_doc = Scenario::wave;
            else
                rd.fail(ex["scenario"], "[experiment].scenario",
                        "unknown scenario '" + s + "' (simulate, front-bound, regimes, loops, comparison, wave)");
        }
        if (expected && from_doc && *expected != *from_doc) {
            const bool solver_pair = *expected == Scenario::simulate && *from_doc == Scenario::comparison;
            if (!solver_pair)
                rd.fail(ex["scenario"], "[experiment].scenario",
                        std::string("scenario '") + to_string(*from_doc) + "' does not match this command ("
                            + to_string(*expected) + ")");
        }
        cfg.scenario = from_doc.value_or(expected.value_or(Scenario::simulate));
    }
    const bool simulates =
        cfg.scenario == Scenario::simulate || cfg.scenario == Scenario::front_bound || cfg.scenario == Scenario::comparison;

    auto& S = cfg.setup;

    // [geometry]
    {
        const YAML::Node g = root["geometry"];
        if (!g) {
            if (simulates) rd.fail(root, "[geometry]", "required section missing");
        } else {
            rd.expect_map(g, "[geometry]");
            rd.only_keys(g, "geometry", {"kind", "L", "M", "dimension"});
            const auto kind = rd.text(g, "geometry", "kind", "interval");
            if (kind == "interval") S.geometry.kind = GeometryKind::interval;
            else if (kind == "radial") S.geometry.kind = GeometryKind::radial;
            else rd.fail(g["kind"], "[geometry].kind", "expected interval or radial, got '" + kind + "'");
            S.geometry.L = simulates ? rd.required_num(g, "geometry", "L") : rd.num(g, "geometry", "L", S.geometry.L);
            if (!(S.geometry.L > 0.0) || !std::isfinite(S.geometry.L))
                rd.fail(g["L"], "[geometry].L", "must be positive and finite");
            S.geometry.M = rd.count(g, "geometry", "M", S.geometry.M);
            if (S.geometry.M < 2) rd.fail(g["M"], "[geometry].M", "need at least 2 nodes");
            const auto N = rd.count(g, "geometry", "dimension", 1);
            if (N < 1) rd.fail(g["dimension"], "[geometry].dimension", "must be >= 1");
            if (S.geometry.kind == GeometryKind::interval && N != 1)
                rd.fail(g["dimension"], "[geometry].dimension", "interval geometry is one-dimensional");
            S.geometry.dimension = static_cast<int>(N);
        }
    }

    // [material]
    {
        const YAML::Node m = root["material"];
        double kappa_value = 1.0;
        std::vector<double> kx, kk;
        double beta = 0.0;
        std::string kkind = "constant";
        double gbar = 0.0;
        std::optional<double> rho1;
        bool saturation = false;
        PreisachDensity::Kind dkind = ConstantDensity{2.0};
        if (m) {
            rd.expect_map(m, "[material]");
            rd.only_keys(m, "material", {"permeability", "density", "gbar", "rho1", "saturation_required", "lambda"});
            S.lambda_max = rd.num(m, "material", "lambda", S.lambda_max);
            if (!(S.lambda_max > 0.0) || !std::isfinite(S.lambda_max))
                rd.fail(m["lambda"], "[material].lambda", "must be positive and finite");
            gbar = rd.num(m, "material", "gbar", 0.0);
            if (!(gbar >= 0.0 && gbar <= 1.0)) rd.fail(m["gbar"], "[material].gbar", "must lie in [0, 1]");
            if (m["rho1"]) {
                rho1 = rd.num(m["rho1"], "[material].rho1");
                if (!(*rho1 > 0.0)) rd.fail(m["rho1"], "[material].rho1", "must be positive");
            }
            saturation = rd.flag(m, "material", "saturation_required", false);

            if (const YAML::Node k = m["permeability"]) {
                const std::string sec = "material.permeability";
                rd.expect_map(k, "[" + sec + "]");
                kkind = rd.text(k, sec, "kind", "constant");
                if (kkind == "constant") {
                    rd.only_keys(k, sec, {"kind", "value"}, "for kind constant");
                    kappa_value = rd.num(k, sec, "value", 1.0);
                    if (!(kappa_value > 0.0) || !std::isfinite(kappa_value))
                        rd.fail(k["value"], "[" + sec + "].value", "must be positive and finite");
                } else if (kkind == "x" || kkind == "x-theta") {
                    rd.only_keys(k, sec, kkind == "x" ? std::set<std::string>{"kind", "x", "k"}
                                                       : std::set<std::string>{"kind", "x", "k", "beta"},
                                 "for kind " + kkind);
                    if (!k["x"] || !k["k"]) rd.fail(k, "[" + sec + "]", "kind " + kkind + " needs x and k lists");
                    kx = rd.list(k["x"], "[" + sec + "].x");
                    kk = rd.list(k["k"], "[" + sec + "].k");
                    if (kx.size() != kk.size() || kx.empty())
                        rd.fail(k["k"], "[" + sec + "].k", "must have as many entries as x");
                    for (std::size_t i = 0; i < kk.size(); ++i) {
                        if (!(kk[i] > 0.0)) rd.fail(k["k"], "[" + sec + "].k", "values must be positive");
                        if (i && !(kx[i] > kx[i - 1])) rd.fail(k["x"], "[" + sec + "].x", "must increase strictly");
                    }
                    beta = rd.num(k, sec, "beta", 0.0);
                } else {
                    rd.fail(k["kind"], "[" + sec + "].kind", "expected constant, x or x-theta, got '" + kkind + "'");
                }
            }

            if (const YAML::Node d = m["density"]) {
                const std::string sec = "material.density";
                rd.expect_map(d, "[" + sec + "]");
                const auto kind = rd.text(d, sec, "kind", "constant");
                auto positive = [&](const char* key, double fallback) {
                    const double v = rd.num(d, sec, key, fallback);
                    if (!(v > 0.0)) rd.fail(d[key], "[" + sec + "]." + key, "must be positive");
                    return v;
                };
                if (kind == "constant") {
                    rd.only_keys(d, sec, {"kind", "value", "r_max", "v_max"}, "for kind constant");
                    const double v = rd.num(d, sec, "value", 2.0);
                    if (!(v >= 0.0) || !std::isfinite(v)) rd.fail(d["value"], "[" + sec + "].value", "must be >= 0");
                    dkind = ConstantDensity{v, positive("r_max", kInf), positive("v_max", kInf)};
                } else if (kind == "separable") {
                    rd.only_keys(d, sec, {"kind", "amplitude", "r_scale", "v_scale", "r_max", "v_max"},
                                 "for kind separable");
                    dkind = SeparableDensity{positive("amplitude", 1.0), positive("r_scale", 1.0),
                                             positive("v_scale", 1.0), positive("r_max", kInf), positive("v_max", kInf)};
                } else if (kind == "grid") {
                    rd.only_keys(d, sec, {"kind", "r_max", "v_max", "nr", "nv", "values", "file"}, "for kind grid");
                    const double rmax = positive("r_max", 1.0), vmax = positive("v_max", 1.0);
                    const auto nr = rd.count(d, sec, "nr", 0), nv = rd.count(d, sec, "nv", 0);
                    std::vector<double> values;
                    if (d["values"] && d["file"]) rd.fail(d, "[" + sec + "]", "give either values or file, not both");
                    if (d["values"]) {
                        values = rd.list(d["values"], "[" + sec + "].values");
                    } else if (d["file"]) {
                        const auto path = resolve(rd.text(d, sec, "file", ""));
                        const Series grid = read_timeseries(path);
                        for (std::size_t i = 0; i < grid.rows(); ++i)
                            for (const auto& col : grid.columns) values.push_back(col[i]);
                    } else {
                        rd.fail(d, "[" + sec + "]", "kind grid needs values or file");
                    }
                    if (nr < 2 || nv < 2 || values.size() != nr * nv)
                        rd.fail(d, "[" + sec + "]",
                                "need nr, nv >= 2 and nr*nv = " + std::to_string(nr * nv) + " samples, got "
                                    + std::to_string(values.size()));
                    try {
                        dkind = GridDensity(rmax, vmax, nr, nv, std::move(values));
                    } catch (const DomainError& e) {
                        rd.fail(d, "[" + sec + "]", e.what());
                    }
                } else {
                    rd.fail(d["kind"], "[" + sec + "].kind", "expected constant, separable or grid, got '" + kind + "'");
                }
            }
        }
        try {
            S.density = PreisachDensity(std::move(dkind), gbar, rho1, saturation);
            if (kkind == "constant") S.permeability = Permeability::constant(kappa_value);
            else S.permeability = Permeability::piecewise_x(kx, kk, kkind == "x-theta" ? beta : 0.0);
        } catch (const DomainError& e) {
            rd.fail(m, "[material]", e.what());
        }
    }

    // [scheme]
    {
        const YAML::Node s = root["scheme"];
        if (!s && simulates) rd.fail(root, "[scheme]", "required section missing");
        if (s) {
            rd.expect_map(s, "[scheme]");
            rd.only_keys(s, "scheme",
                         {"p", "tau", "steps", "omega", "tol", "step_tol", "max_iters", "polish_sweeps", "energy_tol",
                          "linf_tol", "support_threshold", "check_invariants"});
            S.p = simulates ? rd.required_num(s, "scheme", "p") : rd.num(s, "scheme", "p", S.p);
            if (!(S.p > 2.0) || !std::isfinite(S.p)) rd.fail(s["p"], "[scheme].p", "flux exponent must satisfy p > 2");
            S.tau = simulates ? rd.required_num(s, "scheme", "tau") : rd.num(s, "scheme", "tau", S.tau);
            if (!(S.tau > 0.0) || !std::isfinite(S.tau)) rd.fail(s["tau"], "[scheme].tau", "must be positive");
            S.steps = rd.count(s, "scheme", "steps", 100);
            S.omega = rd.num(s, "scheme", "omega", 0.0);
            if (!(S.omega >= 0.0 && S.omega <= 1.0))
                rd.fail(s["omega"], "[scheme].omega", "must lie in [0, 1], got " + rd.scalar(s["omega"]));
            auto& o = S.solver;
            auto positive = [&](const char* key, double& dst) {
                dst = rd.num(s, "scheme", key, dst);
                if (!(dst > 0.0)) rd.fail(s[key], std::string("[scheme].") + key, "must be positive");
            };
            positive("tol", o.tol);
            o.step_tol = rd.num(s, "scheme", "step_tol", o.step_tol);
            if (!(o.step_tol >= 0.0)) rd.fail(s["step_tol"], "[scheme].step_tol", "must be >= 0");
            o.max_iters = static_cast<int>(rd.count(s, "scheme", "max_iters", static_cast<std::size_t>(o.max_iters)));
            o.polish_sweeps =
                static_cast<int>(rd.count(s, "scheme", "polish_sweeps", static_cast<std::size_t>(o.polish_sweeps)));
            o.energy_tol = rd.num(s, "scheme", "energy_tol", o.energy_tol);
            positive("linf_tol", o.linf_tol);
            positive("support_threshold", o.support_threshold);
            o.check_invariants = rd.flag(s, "scheme", "check_invariants", o.check_invariants);
        }
    }

    // [initial]
    {
        const YAML::Node in = root["initial"];
        auto& I = S.initial;
        if (in) {
            rd.expect_map(in, "[initial]");
            rd.only_keys(in, "initial", {"profile", "R0", "amplitude", "file", "memory"});
            const auto profile = rd.text(in, "initial", "profile", "zero");
            const auto memory = rd.text(in, "initial", "memory", "wedge");
            if (memory == "wedge") I.memory = InitialMemoryMode::wedge;
            else if (memory == "virgin") I.memory = InitialMemoryMode::virgin;
            else rd.fail(in["memory"], "[initial].memory", "expected wedge or virgin, got '" + memory + "'");
            if (profile == "zero") {
                I.kind = InitialSpec::Kind::zero;
            } else if (profile == "bump") {
                I.kind = InitialSpec::Kind::bump;
                I.R0 = rd.required_num(in, "initial", "R0");
                if (!(I.R0 > 0.0)) rd.fail(in["R0"], "[initial].R0", "must be positive");
                if (!(I.R0 < S.geometry.L))
                    rd.fail(in["R0"], "[initial].R0", "bump radius must be smaller than the domain extent L = "
                                                          + format_double(S.geometry.L));
                I.amplitude = rd.num(in, "initial", "amplitude", S.lambda_max);
                if (!(std::abs(I.amplitude) <= S.lambda_max))
                    rd.fail(in["amplitude"], "[initial].amplitude", "|amplitude| must not exceed lambda");
                if (I.memory == InitialMemoryMode::virgin)
                    rd.fail(in["memory"], "[initial].memory", "virgin memory requires zero initial data");
            } else if (profile == "file") {
                if (!in["file"]) rd.fail(in, "[initial].file", "profile file needs a file path");
                const auto path = resolve(rd.text(in, "initial", "file", ""));
                Series t;
                try {
                    t = read_timeseries(path);
                    I.table_x = t.column("x");
                    I.table_u = t.column("u");
                } catch (const std::exception& e) {
                    rd.fail(in["file"], "[initial].file", e.what());
                }
                I.kind = InitialSpec::Kind::table;
                for (double v : I.table_u)
                    if (!(std::abs(v) <= S.lambda_max)) rd.fail(in["file"], "[initial].file", "|u0| exceeds lambda");
            } else if (profile == "snapshot") {
                if (!in["file"]) rd.fail(in, "[initial].file", "profile snapshot needs a file path");
                try {
                    const auto snap = read_snapshot(resolve(rd.text(in, "initial", "file", "")));
                    if (snap.memories.empty()) throw IoError("snapshot has no memory curves");
                    I.kind = InitialSpec::Kind::nodal;
                    I.table_u = snap.u;
                    I.memories = snap.memories;
                } catch (const IoError& e) {
                    rd.fail(in["file"], "[initial].file", e.what());
                }
            } else {
                rd.fail(in["profile"], "[initial].profile", "expected zero, bump, file or snapshot, got '" + profile + "'");
            }
        }
    }

    // [experiment]
    if (ex) {
        std::set<std::string> keys{"scenario", "seed", "samples"};
        switch (cfg.scenario) {
        case Scenario::front_bound: keys.insert({"R0", "R1", "R", "envelope_scale", "comparison_tol", "slack_cells"}); break;
        case Scenario::regimes: keys.insert({"p_list", "growth_steps"}); break;
        case Scenario::loops: keys.insert({"path", "points_per_leg"}); break;
        case Scenario::comparison: keys.insert({"factor", "order_tol", "determinism"}); break;
        case Scenario::wave: keys.insert({"c", "R0", "R", "points", "t_end"}); break;
        case Scenario::simulate: break;
        }
        rd.only_keys(ex, "experiment", keys, std::string("for scenario ") + to_string(cfg.scenario));
        const double seed = rd.num(ex, "experiment", "seed", 0.0);
        if (!(seed >= 0.0) || seed != std::floor(seed)) rd.fail(ex["seed"], "[experiment].seed", "must be a non-negative integer");
        cfg.seed = static_cast<std::uint64_t>(seed);
        cfg.property_samples = rd.count(ex, "experiment", "samples", cfg.property_samples);
    }
    switch (cfg.scenario) {
    case Scenario::front_bound: {
        if (!wave_integral_converges(S.p))
            rd.fail(root["scheme"] ? root["scheme"]["p"] : root, "[scheme].p",
                    "front-bound requires p > 3 (got " + format_double(S.p) + "): no travelling wave otherwise");
        auto& F = cfg.front;
        const double default_R0 = S.initial.kind == InitialSpec::Kind::bump ? S.initial.R0 : F.R0;
        if (ex) {
            F.R0 = rd.num(ex, "experiment", "R0", default_R0);
            if (ex["R1"]) F.R1 = rd.num(ex["R1"], "[experiment].R1");
            if (ex["R"]) F.R = rd.num(ex["R"], "[experiment].R");
            F.envelope_scale = rd.num(ex, "experiment", "envelope_scale", F.envelope_scale);
            F.comparison_tol = rd.num(ex, "experiment", "comparison_tol", F.comparison_tol);
            F.slack_cells = rd.num(ex, "experiment", "slack_cells", F.slack_cells);
        } else {
            F.R0 = default_R0;
        }
        const double R1 = F.R1.value_or(S.geometry.L);
        if (!(F.R0 > 0.0 && F.R0 < R1 && R1 <= S.geometry.L))
            rd.fail(ex ? ex : root, "[experiment].R0", "need 0 < R0 < R1 <= L");
        if (F.R && !(*F.R > F.R0 && *F.R < R1)) rd.fail(ex["R"], "[experiment].R", "must lie in (R0, R1)");
        if (!(F.envelope_scale > 0.0)) rd.fail(ex["envelope_scale"], "[experiment].envelope_scale", "must be positive");
        if (S.permeability.kind() != Permeability::Kind::constant)
            rd.fail(root["material"], "[material].permeability", "front-bound requires a constant permeability");
        break;
    }
    case Scenario::regimes:
        if (ex && ex["p_list"]) cfg.regimes.p_list = rd.list(ex["p_list"], "[experiment].p_list");
        for (double p : cfg.regimes.p_list)
            if (!(p > 2.0)) rd.fail(ex["p_list"], "[experiment].p_list", "every exponent must satisfy p > 2");
        if (ex) cfg.regimes.growth_steps = rd.count(ex, "experiment", "growth_steps", 0);
        break;
    case Scenario::loops:
        if (ex && ex["path"]) cfg.loops.path = rd.list(ex["path"], "[experiment].path");
        if (cfg.loops.path.empty()) rd.fail(ex, "[experiment].path", "must not be empty");
        for (double v : cfg.loops.path)
            if (!(std::abs(v) <= S.lambda_max))
                rd.fail(ex["path"], "[experiment].path", "values must lie in [-lambda, lambda]");
        if (ex) cfg.loops.points_per_leg = rd.count(ex, "experiment", "points_per_leg", cfg.loops.points_per_leg);
        if (cfg.loops.points_per_leg < 1) rd.fail(ex["points_per_leg"], "[experiment].points_per_leg", "must be >= 1");
        break;
    case Scenario::comparison:
        if (ex) {
            cfg.comparison.factor = rd.num(ex, "experiment", "factor", cfg.comparison.factor);
            cfg.comparison.order_tol = rd.num(ex, "experiment", "order_tol", cfg.comparison.order_tol);
            cfg.comparison.determinism = rd.flag(ex, "experiment", "determinism", cfg.comparison.determinism);
        }
        if (!(cfg.comparison.factor >= 1.0)) rd.fail(ex["factor"], "[experiment].factor", "must be >= 1 (upper state)");
        if (S.permeability.depends_on_theta())
            rd.fail(root["material"], "[material].permeability", "comparison requires kappa independent of theta");
        break;
    case Scenario::wave:
        if (!wave_integral_converges(S.p))
            rd.fail(root["scheme"] ? root["scheme"]["p"] : root, "[scheme].p",
                    "wave requires p > 3 (got " + format_double(S.p) + ")");
        if (ex) {
            if (ex["c"]) {
                cfg.wave.c = rd.num(ex["c"], "[experiment].c");
                if (!(*cfg.wave.c > 0.0)) rd.fail(ex["c"], "[experiment].c", "must be positive");
            }
            cfg.wave.R0 = rd.num(ex, "experiment", "R0", cfg.wave.R0);
            if (ex["R"]) cfg.wave.R = rd.num(ex["R"], "[experiment].R");
            cfg.wave.points = rd.count(ex, "experiment", "points", cfg.wave.points);
            cfg.wave.t_end = rd.num(ex, "experiment", "t_end", cfg.wave.t_end);
            if (cfg.wave.points < 2) rd.fail(ex["points"], "[experiment].points", "need at least 2 points");
        }
        if (S.permeability.kind() != Permeability::Kind::constant)
            rd.fail(root["material"], "[material].permeability", "wave requires a constant permeability");
        break;
    case Scenario::simulate: break;
    }

    // [output]
    if (const YAML::Node o = root["output"]) {
        rd.expect_map(o, "[output]");
        rd.only_keys(o, "output", {"directory", "formats", "snapshot_every"});
        cfg.output.directory = rd.text(o, "output", "directory", cfg.output.directory);
        if (o["formats"]) {
            if (!o["formats"].IsSequence()) rd.fail(o["formats"], "[output].formats", "expected a list");
            cfg.output.csv = cfg.output.json = cfg.output.svg = false;
            for (const auto& f : o["formats"]) {
                const auto v = f.as<std::string>();
                if (v == "csv") cfg.output.csv = true;
                else if (v == "json") cfg.output.json = true;
                else if (v == "svg") cfg.output.svg = true;
                else rd.fail(f, "[output].formats", "unknown format '" + v + "' (csv, json, svg)");
            }
        }
        cfg.output.snapshot_every = rd.count(o, "output", "snapshot_every", 0);
    }
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path, std::optional<Scenario> expected = std::nullopt) {
    std::string text;
    try {
        text = read_text(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text, path.string(), expected, path.parent_path());
}

}  // namespace hystflow::io
