#include "ddfrac/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ddfrac {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double require_number(const json& j, const char* key, const char* where) {
    const json* v = find(j, key);
    if (!v || !v->is_number()) {
        throw ConfigError(std::string("config: ") + where + " needs numeric '" + key + "'");
    }
    return v->get<double>();
}

}  // namespace

SpecimenModel ExperimentConfig::specimen_model() const {
    if (specimen_kind == SpecimenKind::TaperedDcb) {
        return SpecimenModel::tapered_dcb(params, taper);
    }
    return SpecimenModel::standard_dcb(params);
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    if (!find(j, "schema") || !j["schema"].is_number_integer()) {
        throw ConfigError("config: missing integer 'schema' field");
    }
    cfg.schema = j["schema"].get<int>();
    if (cfg.schema != 1) throw ConfigError("config: unsupported schema version");

    // --- specimen ---------------------------------------------------------
    const json* spec = find(j, "specimen");
    if (!spec) throw ConfigError("config: missing 'specimen' block");
    const std::string kind = spec->value("kind", "standard-dcb");
    if (kind == "standard-dcb") {
        cfg.specimen_kind = SpecimenKind::StandardDcb;
    } else if (kind == "tapered-dcb") {
        cfg.specimen_kind = SpecimenKind::TaperedDcb;
    } else {
        throw ConfigError("config: unknown specimen kind '" + kind + "'");
    }

    const json* phys = find(*spec, "physical");
    const json* dimless = find(*spec, "dimensionless");
    if (phys && dimless) {
        throw ConfigError("config: specimen block mixes physical and dimensionless input");
    }
    if (phys) {
        cfg.from_physical = true;
        cfg.physical.Y = require_number(*phys, "Y", "specimen.physical");
        cfg.physical.L = require_number(*phys, "L", "specimen.physical");
        cfg.physical.h = require_number(*phys, "h", "specimen.physical");
        cfg.physical.b = require_number(*phys, "b", "specimen.physical");
        cfg.physical.a0 = require_number(*phys, "a0", "specimen.physical");
        cfg.physical.deltaT = require_number(*phys, "deltaT", "specimen.physical");
        cfg.physical.C_M = require_number(*phys, "C_M", "specimen.physical");
        cfg.physical.gamma = require_number(*phys, "gamma", "specimen.physical");
        if (find(j, "machine")) {
            throw ConfigError("config: machine block conflicts with physical specimen input");
        }
        cfg.params = nondimensionalize(cfg.physical);
        cfg.machine.CMbar = cfg.params.CMbar;
    } else if (dimless) {
        cfg.params.hbar = require_number(*dimless, "hbar", "specimen.dimensionless");
        cfg.params.abar0 = require_number(*dimless, "abar0", "specimen.dimensionless");
        cfg.params.bbar = require_number(*dimless, "bbar", "specimen.dimensionless");
        cfg.params.Ybar = require_number(*dimless, "Ybar", "specimen.dimensionless");
        cfg.params.deltaTbar = dimless->value("deltaTbar", 0.0);
        if (find(*dimless, "CMbar")) {
            throw ConfigError("config: CMbar belongs in the machine block");
        }
        const json* machine = find(j, "machine");
        cfg.machine.CMbar = machine ? machine->value("CMbar", 0.0) : 0.0;
        cfg.params.CMbar = cfg.machine.CMbar;
    } else {
        throw ConfigError("config: specimen block needs 'physical' or 'dimensionless'");
    }

    if (cfg.specimen_kind == SpecimenKind::TaperedDcb) {
        const json* taper = find(*spec, "taper");
        if (!taper) throw ConfigError("config: tapered specimen needs a 'taper' block");
        cfg.taper.hbar1 = require_number(*taper, "hbar1", "specimen.taper");
        cfg.taper.hbar2 = require_number(*taper, "hbar2", "specimen.taper");
        cfg.taper.Lbar1 = require_number(*taper, "Lbar1", "specimen.taper");
        cfg.taper.LbarT = require_number(*taper, "LbarT", "specimen.taper");
        cfg.taper.Lbar2 = require_number(*taper, "Lbar2", "specimen.taper");
        cfg.taper.m = require_number(*taper, "m", "specimen.taper");
    }
    cfg.specimen_model();  // validates geometry

    // --- resistance ---------------------------------------------------------
    if (const json* res = find(j, "resistance")) {
        const std::string rkind = res->value("kind", "griffith");
        if (rkind == "griffith") {
            cfg.resistance = ResistanceModel::griffith();
        } else if (rkind == "r-curve") {
            cfg.resistance = ResistanceModel::r_curve();
        } else if (rkind == "piecewise") {
            const json* levels = find(*res, "levels");
            if (!levels || !levels->is_array()) {
                throw ConfigError("config: piecewise resistance needs a 'levels' array");
            }
            std::vector<PiecewiseLevel> lv;
            for (const auto& e : *levels) {
                lv.push_back({require_number(e, "upper", "resistance.levels"),
                              require_number(e, "G_R", "resistance.levels")});
            }
            cfg.resistance = ResistanceModel::piecewise(std::move(lv));
        } else {
            throw ConfigError("config: unknown resistance kind '" + rkind + "'");
        }
    }

    // --- dataset ------------------------------------------------------------
    if (const json* ds = find(j, "dataset")) {
        cfg.dataset_N = ds->value("N", 50);
        if (const json* iv = find(*ds, "interval")) {
            if (!iv->is_array() || iv->size() != 2) {
                throw ConfigError("config: dataset interval must be [lo, hi]");
            }
            cfg.dataset_lo = (*iv)[0].get<double>();
            cfg.dataset_hi = (*iv)[1].get<double>();
        }
        cfg.noise_amplitude = ds->value("noise_amplitude", 0.0);
        cfg.seed = ds->value("seed", std::uint64_t{0});
        const std::string sampling = ds->value("sampling", "random");
        if (sampling == "random") {
            cfg.sampling = SamplingMode::Random;
        } else if (sampling == "stratified") {
            cfg.sampling = SamplingMode::Stratified;
        } else if (sampling == "grid") {
            cfg.sampling = SamplingMode::Grid;
        } else {
            throw ConfigError("config: unknown sampling mode '" + sampling + "'");
        }
    }

    // --- solver ---------------------------------------------------------
    if (const json* sol = find(j, "solver")) {
        const std::string skind = sol->value("kind", "cpp");
        const auto parsed = parse_solver(skind);
        if (!parsed) throw ConfigError("config: unknown solver '" + skind + "'");
        cfg.run.solver = *parsed;
        if (const json* tol = find(*sol, "tol")) {
            if (tol->is_number()) {
                cfg.run.cpp_tol = tol->get<double>();
                cfg.cpp_tol_auto = false;
            } else if (!(tol->is_string() && tol->get<std::string>() == "auto")) {
                throw ConfigError("config: solver tol must be a number or \"auto\"");
            }
        }
        const std::string gr0 = sol->value("g_r0", "bracket-average");
        if (gr0 == "bracket-average") {
            cfg.run.gr0 = GR0Rule::BracketAverage;
        } else if (gr0 == "zero") {
            cfg.run.gr0 = GR0Rule::Zero;
        } else {
            throw ConfigError("config: unknown g_r0 rule '" + gr0 + "'");
        }
        cfg.run.projection_accuracy = sol->value("projection_accuracy", 1e-8);
        cfg.run.reference.grid_size = sol->value("grid_size", 1000);
        cfg.run.reference.root_tol = sol->value("root_tol", 1e-10);
    }

    // --- program ---------------------------------------------------------
    {
        double increment = cfg.params.deltaTbar > 0.0 ? cfg.params.deltaTbar : 5e-5;
        std::vector<double> targets;
        bool targets_given = false;
        if (const json* prog = find(j, "program")) {
            increment = prog->value("increment", increment);
            if (const json* tg = find(*prog, "targets")) {
                targets_given = true;  // an explicit empty list means a zero-step program
                for (const auto& t : *tg) targets.push_back(t.get<double>());
            }
        }
        if (!targets_given) targets = {400 * increment};
        cfg.program = LoadProgram(increment, std::move(targets));
    }

    // --- converge ---------------------------------------------------------
    if (const json* cv = find(j, "converge")) {
        cfg.converge.mode = cv->value("mode", "points");
        if (cfg.converge.mode != "points" && cfg.converge.mode != "noise") {
            throw ConfigError("config: converge mode must be 'points' or 'noise'");
        }
        if (const json* counts = find(*cv, "counts")) {
            cfg.converge.counts.clear();
            for (const auto& n : *counts) cfg.converge.counts.push_back(n.get<int>());
        }
        if (const json* amps = find(*cv, "amplitudes")) {
            cfg.converge.amplitudes.clear();
            for (const auto& a : *amps) cfg.converge.amplitudes.push_back(a.get<double>());
        }
        cfg.converge.N = cv->value("N", 5000);
        cfg.converge.replications = cv->value("replications", 100);
        cfg.converge.threads = cv->value("threads", 0);
    }

    if (const json* out = find(j, "output")) {
        cfg.out_dir = out->value("dir", std::string("out"));
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    ordered_json j;
    j["schema"] = cfg.schema;

    ordered_json spec;
    spec["kind"] = cfg.specimen_kind == SpecimenKind::TaperedDcb ? "tapered-dcb" : "standard-dcb";
    if (cfg.from_physical) {
        ordered_json p;
        p["Y"] = cfg.physical.Y;
        p["L"] = cfg.physical.L;
        p["h"] = cfg.physical.h;
        p["b"] = cfg.physical.b;
        p["a0"] = cfg.physical.a0;
        p["deltaT"] = cfg.physical.deltaT;
        p["C_M"] = cfg.physical.C_M;
        p["gamma"] = cfg.physical.gamma;
        spec["physical"] = p;
    } else {
        ordered_json d;
        d["hbar"] = cfg.params.hbar;
        d["abar0"] = cfg.params.abar0;
        d["bbar"] = cfg.params.bbar;
        d["Ybar"] = cfg.params.Ybar;
        d["deltaTbar"] = cfg.params.deltaTbar;
        spec["dimensionless"] = d;
    }
    if (cfg.specimen_kind == SpecimenKind::TaperedDcb) {
        ordered_json t;
        t["hbar1"] = cfg.taper.hbar1;
        t["hbar2"] = cfg.taper.hbar2;
        t["Lbar1"] = cfg.taper.Lbar1;
        t["LbarT"] = cfg.taper.LbarT;
        t["Lbar2"] = cfg.taper.Lbar2;
        t["m"] = cfg.taper.m;
        spec["taper"] = t;
    }
    j["specimen"] = spec;
    if (!cfg.from_physical) {
        j["machine"]["CMbar"] = cfg.machine.CMbar;
    }

    ordered_json res;
    res["kind"] = cfg.resistance.name();
    if (cfg.resistance.kind() == ResistanceKind::Piecewise) {
        ordered_json levels = ordered_json::array();
        for (const auto& lvl : cfg.resistance.levels()) {
            levels.push_back({{"upper", lvl.upper}, {"G_R", lvl.G_R}});
        }
        res["levels"] = levels;
    }
    j["resistance"] = res;

    j["dataset"]["N"] = cfg.dataset_N;
    j["dataset"]["interval"] = {cfg.dataset_lo, cfg.dataset_hi};
    j["dataset"]["noise_amplitude"] = cfg.noise_amplitude;
    j["dataset"]["seed"] = cfg.seed;
    j["dataset"]["sampling"] = cfg.sampling == SamplingMode::Random     ? "random"
                               : cfg.sampling == SamplingMode::Stratified ? "stratified"
                                                                          : "grid";

    j["solver"]["kind"] = solver_name(cfg.run.solver);
    if (cfg.cpp_tol_auto || !cfg.run.cpp_tol.has_value()) {
        j["solver"]["tol"] = "auto";
    } else {
        j["solver"]["tol"] = *cfg.run.cpp_tol;
    }
    j["solver"]["g_r0"] = cfg.run.gr0 == GR0Rule::Zero ? "zero" : "bracket-average";
    j["solver"]["projection_accuracy"] = cfg.run.projection_accuracy;
    j["solver"]["grid_size"] = cfg.run.reference.grid_size;
    j["solver"]["root_tol"] = cfg.run.reference.root_tol;

    j["program"]["increment"] = cfg.program.increment();
    j["program"]["targets"] = cfg.program.targets();

    j["converge"]["mode"] = cfg.converge.mode;
    j["converge"]["counts"] = cfg.converge.counts;
    j["converge"]["amplitudes"] = cfg.converge.amplitudes;
    j["converge"]["N"] = cfg.converge.N;
    j["converge"]["replications"] = cfg.converge.replications;
    j["converge"]["threads"] = cfg.converge.threads;

    j["output"]["dir"] = cfg.out_dir.string();
    return j.dump(2) + "\n";
}

}  // namespace ddfrac
