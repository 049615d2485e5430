#include "wavefront/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace wavefront {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path, what);
}

void expect_keys(const json& j, const std::string& path, std::set<std::string> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown field");
}

double need_number(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail(path + "." + key, "missing required field");
    if (!j[key].is_number()) fail(path + "." + key, "expected a number");
    return j[key].get<double>();
}

double opt_number(const json& j, const std::string& path, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) fail(path + "." + key, "expected a number");
    return j[key].get<double>();
}

std::string need_string(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail(path + "." + key, "missing required field");
    if (!j[key].is_string()) fail(path + "." + key, "expected a string");
    return j[key].get<std::string>();
}

}  // namespace

SpatialKernel parse_spatial(const json& j, const std::string& path) {
    const std::string type = need_string(j, path, "type");
    try {
        if (type == "gaussian") {
            expect_keys(j, path, {"type", "variance", "mean"});
            return GaussianSpatial{need_number(j, path, "variance"),
                                   opt_number(j, path, "mean", 0.0)};
        }
        if (type == "two_sided_exponential") {
            expect_keys(j, path, {"type", "rate"});
            return TwoSidedExponentialSpatial{need_number(j, path, "rate")};
        }
        if (type == "point_mass") {
            expect_keys(j, path, {"type", "a"});
            return PointMassSpatial{need_number(j, path, "a")};
        }
        if (type == "one_sided_exponential") {
            expect_keys(j, path, {"type", "rate", "side"});
            const std::string side = need_string(j, path, "side");
            if (side != "left" && side != "right")
                fail(path + ".side", "expected \"left\" or \"right\"");
            return OneSidedExponentialSpatial{need_number(j, path, "rate"),
                                              side == "left" ? Side::Left : Side::Right};
        }
    } catch (const IllFormedKernel& e) {
        fail(path, e.what());
    }
    fail(path + ".type", "unknown spatial kernel \"" + type + "\"");
}

TemporalKernel parse_temporal(const json& j, const std::string& path) {
    const std::string type = need_string(j, path, "type");
    if (type == "point_mass") {
        expect_keys(j, path, {"type", "h"});
        return PointMassTemporal{need_number(j, path, "h")};
    }
    if (type == "exponential") {
        expect_keys(j, path, {"type", "rate", "delay"});
        return ExponentialTemporal{need_number(j, path, "rate"), opt_number(j, path, "delay", 0.0)};
    }
    if (type == "serial_exponential") {
        expect_keys(j, path, {"type", "rate1", "rate2"});
        return SerialExponentialTemporal{need_number(j, path, "rate1"),
                                         need_number(j, path, "rate2")};
    }
    fail(path + ".type", "unknown temporal kernel \"" + type + "\"");
}

SpatioTemporalKernel parse_kernel(const json& j, const std::string& path) {
    const std::string family = need_string(j, path, "family");
    try {
        if (family == "point_mass") {
            expect_keys(j, path, {"family", "h", "a"});
            return make_point_mass(need_number(j, path, "h"), need_number(j, path, "a"));
        }
        if (family == "delta_time") {
            expect_keys(j, path, {"family", "h", "spatial"});
            if (!j.contains("spatial")) fail(path + ".spatial", "missing required field");
            return make_delta_time(need_number(j, path, "h"),
                                   parse_spatial(j["spatial"], path + ".spatial"));
        }
        if (family == "product") {
            expect_keys(j, path, {"family", "temporal", "spatial"});
            if (!j.contains("temporal")) fail(path + ".temporal", "missing required field");
            if (!j.contains("spatial")) fail(path + ".spatial", "missing required field");
            return make_product(parse_temporal(j["temporal"], path + ".temporal"),
                                parse_spatial(j["spatial"], path + ".spatial"));
        }
        if (family == "mixture") {
            expect_keys(j, path, {"family", "components"});
            if (!j.contains("components") || !j["components"].is_array())
                fail(path + ".components", "expected an array");
            std::vector<std::pair<double, SpatioTemporalKernel>> parts;
            int i = 0;
            for (const auto& comp : j["components"]) {
                const std::string cpath = path + ".components[" + std::to_string(i++) + "]";
                expect_keys(comp, cpath, {"weight", "kernel"});
                if (!comp.contains("kernel")) fail(cpath + ".kernel", "missing required field");
                parts.emplace_back(need_number(comp, cpath, "weight"),
                                   parse_kernel(comp["kernel"], cpath + ".kernel"));
            }
            return make_mixture(std::move(parts));
        }
    } catch (const IllFormedKernel& e) {
        fail(path, e.what());
    }
    fail(path + ".family", "unknown kernel family \"" + family + "\"");
}

DelayMeasure parse_measure(const json& j, const std::string& path) {
    const std::string type = need_string(j, path, "type");
    DelayMeasure m;
    if (type == "point_mass") {
        expect_keys(j, path, {"type", "tau"});
        m = point_delay(need_number(j, path, "tau"));
    } else if (type == "exponential") {
        expect_keys(j, path, {"type", "rate"});
        m = exponential_delay(need_number(j, path, "rate"));
    } else if (type == "mixture") {
        expect_keys(j, path, {"type", "components"});
        if (!j.contains("components") || !j["components"].is_array())
            fail(path + ".components", "expected an array");
        int i = 0;
        for (const auto& comp : j["components"]) {
            const std::string cpath = path + ".components[" + std::to_string(i++) + "]";
            expect_keys(comp, cpath, {"weight", "measure"});
            if (!comp.contains("measure")) fail(cpath + ".measure", "missing required field");
            const double w = need_number(comp, cpath, "weight");
            DelayMeasure part = parse_measure(comp["measure"], cpath + ".measure");
            for (auto& a : part.atoms) m.atoms.push_back({w * a.weight, a.tau});
            for (auto& e : part.exps) m.exps.push_back({w * e.weight, e.rate});
        }
    } else {
        fail(path + ".type", "unknown delay measure \"" + type + "\"");
    }
    try {
        m.validate();
    } catch (const IllFormedKernel& e) {
        fail(path, e.what());
    }
    return m;
}

ReactionTerm parse_reaction(const json& j, const std::string& path) {
    const std::string name = need_string(j, path, "name");
    try {
        if (name == "linear") {
            expect_keys(j, path, {"name", "a"});
            return reaction_linear(need_number(j, path, "a"));
        }
        if (name == "quadratic") {
            expect_keys(j, path, {"name", "a", "b"});
            return reaction_quadratic(need_number(j, path, "a"), need_number(j, path, "b"));
        }
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    fail(path + ".name", "unknown reaction term \"" + name + "\"");
}

Nonlinearity parse_birth(const json& j, const std::string& path) {
    const std::string name = need_string(j, path, "name");
    try {
        if (name == "linear") {
            expect_keys(j, path, {"name", "a"});
            return birth_linear(need_number(j, path, "a"));
        }
        if (name == "saturating") {
            expect_keys(j, path, {"name", "a"});
            return birth_saturating(need_number(j, path, "a"));
        }
        if (name == "mackey_glass") {
            expect_keys(j, path, {"name", "a", "k", "L"});
            std::optional<double> L;
            if (j.contains("L")) L = need_number(j, path, "L");
            return birth_mackey_glass(need_number(j, path, "a"), need_number(j, path, "k"), L);
        }
        if (name == "ricker") {
            expect_keys(j, path, {"name", "a"});
            return birth_ricker(need_number(j, path, "a"));
        }
        if (name == "quadratic") {
            expect_keys(j, path, {"name", "a", "b", "L"});
            return birth_quadratic(need_number(j, path, "a"), need_number(j, path, "b"),
                                   need_number(j, path, "L"));
        }
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    fail(path + ".name", "unknown birth function \"" + name + "\"");
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) fail("$", "expected a JSON object");
    expect_keys(doc, "$", {"model", "command", "seed"});
    if (!doc.contains("model")) fail("$.model", "missing required field");
    const json& m = doc["model"];
    RunConfig cfg;

    const std::string type = need_string(m, "$.model", "type");
    if (type == "scalar") {
        cfg.type = ModelType::Scalar;
        expect_keys(m, "$.model", {"type", "f", "g", "kernel"});
        if (!m.contains("kernel")) fail("$.model.kernel", "missing required field");
        cfg.kernel_spec = m["kernel"];
        parse_kernel(cfg.kernel_spec, "$.model.kernel");
    } else if (type == "epidemic") {
        cfg.type = ModelType::Epidemic;
        expect_keys(m, "$.model", {"type", "f", "g", "alpha", "P", "spatial"});
        cfg.alpha = need_number(m, "$.model", "alpha");
        if (!(cfg.alpha > 0.0)) fail("$.model.alpha", "must be > 0");
        if (!m.contains("P")) fail("$.model.P", "missing required field");
        if (!m.contains("spatial")) fail("$.model.spatial", "missing required field");
        cfg.p_spec = m["P"];
        cfg.spatial_spec = m["spatial"];
        parse_measure(cfg.p_spec, "$.model.P");
        parse_spatial(cfg.spatial_spec, "$.model.spatial");
    } else if (type == "population") {
        cfg.type = ModelType::Population;
        expect_keys(m, "$.model", {"type", "f", "g", "kernel", "D", "gamma"});
        cfg.D = need_number(m, "$.model", "D");
        cfg.gamma = need_number(m, "$.model", "gamma");
        if (!(cfg.D > 0.0)) fail("$.model.D", "must be > 0");
        if (!(cfg.gamma > 0.0)) fail("$.model.gamma", "must be > 0");
        if (!m.contains("kernel")) fail("$.model.kernel", "missing required field");
        cfg.kernel_spec = m["kernel"];
        parse_kernel(cfg.kernel_spec, "$.model.kernel");
    } else {
        fail("$.model.type", "unknown model type \"" + type + "\"");
    }

    if (!m.contains("f")) fail("$.model.f", "missing required field");
    if (!m.contains("g")) fail("$.model.g", "missing required field");
    cfg.f_spec = m["f"];
    cfg.g_spec = m["g"];
    parse_reaction(cfg.f_spec, "$.model.f");
    parse_birth(cfg.g_spec, "$.model.g");

    if (doc.contains("command")) {
        const json& c = doc["command"];
        expect_keys(c, "$.command", {"speeds", "c", "grid", "solver"});
        if (c.contains("speeds")) {
            if (!c["speeds"].is_array()) fail("$.command.speeds", "expected an array");
            for (const auto& s : c["speeds"]) {
                if (!s.is_number()) fail("$.command.speeds", "expected numbers");
                cfg.command.speeds.push_back(s.get<double>());
            }
            if (!std::is_sorted(cfg.command.speeds.begin(), cfg.command.speeds.end()))
                fail("$.command.speeds", "speed grid must be sorted");
            for (double s : cfg.command.speeds)
                if (!std::isfinite(s)) fail("$.command.speeds", "speed grid must be finite");
        }
        if (c.contains("c")) cfg.command.c = need_number(c, "$.command", "c");
        if (c.contains("grid")) {
            expect_keys(c["grid"], "$.command.grid", {"T", "h"});
            if (c["grid"].contains("T"))
                cfg.command.grid.T = need_number(c["grid"], "$.command.grid", "T");
            if (c["grid"].contains("h"))
                cfg.command.grid.h = need_number(c["grid"], "$.command.grid", "h");
        }
        if (c.contains("solver")) {
            expect_keys(c["solver"], "$.command.solver", {"tol", "max_iter"});
            if (c["solver"].contains("tol"))
                cfg.command.solver.tol = need_number(c["solver"], "$.command.solver", "tol");
            if (c["solver"].contains("max_iter")) {
                if (!c["solver"]["max_iter"].is_number_integer())
                    fail("$.command.solver.max_iter", "expected an integer");
                cfg.command.solver.max_iter = c["solver"]["max_iter"].get<int>();
            }
        }
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
            fail("$.seed", "expected an integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("$", "cannot open config file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        fail("$", std::string("JSON parse error: ") + e.what());
    }
    return parse_config(doc);
}

json to_json(const RunConfig& cfg) {
    json m;
    switch (cfg.type) {
        case ModelType::Scalar:
            m["type"] = "scalar";
            m["kernel"] = cfg.kernel_spec;
            break;
        case ModelType::Epidemic:
            m["type"] = "epidemic";
            m["alpha"] = cfg.alpha;
            m["P"] = cfg.p_spec;
            m["spatial"] = cfg.spatial_spec;
            break;
        case ModelType::Population:
            m["type"] = "population";
            m["kernel"] = cfg.kernel_spec;
            m["D"] = cfg.D;
            m["gamma"] = cfg.gamma;
            break;
    }
    m["f"] = cfg.f_spec;
    m["g"] = cfg.g_spec;

    json c;
    if (!cfg.command.speeds.empty()) c["speeds"] = cfg.command.speeds;
    if (cfg.command.c) c["c"] = *cfg.command.c;
    json grid;
    if (cfg.command.grid.T) grid["T"] = *cfg.command.grid.T;
    if (cfg.command.grid.h) grid["h"] = *cfg.command.grid.h;
    if (!grid.empty()) c["grid"] = grid;
    json solver;
    if (cfg.command.solver.tol) solver["tol"] = *cfg.command.solver.tol;
    if (cfg.command.solver.max_iter) solver["max_iter"] = *cfg.command.solver.max_iter;
    if (!solver.empty()) c["solver"] = solver;

    json doc;
    doc["model"] = m;
    if (!c.empty()) doc["command"] = c;
    doc["seed"] = cfg.seed;
    return doc;
}

WaveModel RunConfig::scalar_model() const {
    return make_wave_model(parse_reaction(f_spec, "$.model.f"), parse_birth(g_spec, "$.model.g"),
                           parse_kernel(kernel_spec, "$.model.kernel"));
}

EpidemicModel RunConfig::epidemic_model() const {
    return EpidemicModel{alpha, parse_measure(p_spec, "$.model.P"),
                         parse_spatial(spatial_spec, "$.model.spatial"),
                         parse_reaction(f_spec, "$.model.f"), parse_birth(g_spec, "$.model.g")};
}

PopulationModel RunConfig::population_model() const {
    return PopulationModel{D, gamma, parse_kernel(kernel_spec, "$.model.kernel"),
                           parse_reaction(f_spec, "$.model.f"), parse_birth(g_spec, "$.model.g")};
}

SolverConfig RunConfig::solver_config() const {
    SolverConfig sc;
    if (command.solver.tol) sc.tol = *command.solver.tol;
    if (command.solver.max_iter) sc.max_iter = *command.solver.max_iter;
    sc.window_T = command.grid.T;
    sc.step_h = command.grid.h;
    return sc;
}

}  // namespace wavefront
