// hetplan -- heterogeneous cellular network planning toolkit
//
// Copyright 2026 The hetplan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hetplan/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hetplan/errors.hpp"

namespace hetplan {

using json = nlohmann::ordered_json;

namespace {

constexpr int kInstanceSchema = 1;
constexpr int kSolutionSchema = 1;

const json& require(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key))
        throw ParseError(std::string("missing field '") + key + "'");
    return obj.at(key);
}

double number_or_null(const json& v, const char* key) {
    if (v.is_null()) return kInf; // null encodes "unconstrained"
    if (!v.is_number())
        throw ParseError(std::string("field '") + key + "' must be a number or null");
    return v.get<double>();
}

double number(const json& v, const char* key) {
    if (!v.is_number())
        throw ParseError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

json capacity_to_json(double v) {
    if (std::isinf(v)) return nullptr;
    return v;
}

void check_header(const json& doc, const char* format, int schema) {
    const std::string fmt = require(doc, "format").get<std::string>();
    if (fmt != format)
        throw ParseError("expected a '" + std::string(format) + "' document, got '" +
                         fmt + "'");
    const int version = require(doc, "schema_version").get<int>();
    if (version != schema) {
        std::ostringstream os;
        os << "unsupported schema_version " << version << " (expected " << schema
           << ")";
        throw ParseError(os.str());
    }
}

json parse_stream(std::istream& in) {
    try {
        return json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("JSON parse failure: ") + e.what());
    }
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const char* what) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw ParseError(std::string("unknown key '") + item.key() + "' in " +
                             what);
    }
}

} // namespace

// ---- instance ------------------------------------------------------------

void save_instance(const ProblemInstance& inst, std::ostream& out) {
    json doc;
    doc["format"] = "hetplan_instance";
    doc["schema_version"] = kInstanceSchema;
    doc["bias_w"] = inst.bias_w;
    doc["big_m"] = inst.big_m;
    json sites = json::array();
    for (const Site& s : inst.sites) {
        json js;
        js["x"] = s.x;
        js["y"] = s.y;
        js["is_macro"] = s.is_macro;
        js["backhaul_capacity"] = capacity_to_json(s.backhaul_capacity);
        json cat = json::array();
        for (const FacilitySpec& fs : s.catalog) {
            json jf;
            jf["kind"] = to_string(fs.kind);
            jf["cost"] = fs.cost;
            jf["tx_power_dbm"] = fs.tx_power_dbm;
            jf["access_capacity"] = capacity_to_json(fs.access_capacity);
            jf["interference_suppression"] = fs.interference_suppression;
            cat.push_back(std::move(jf));
        }
        js["catalog"] = std::move(cat);
        sites.push_back(std::move(js));
    }
    doc["sites"] = std::move(sites);
    json users = json::array();
    for (const User& u : inst.users) {
        json ju;
        ju["x"] = u.x;
        ju["y"] = u.y;
        ju["demand"] = u.demand;
        ju["sir_threshold"] = u.sir_threshold;
        users.push_back(std::move(ju));
    }
    doc["users"] = std::move(users);
    json gains;
    gains["layout"] = "facility_major";
    gains["values"] = inst.gains;
    doc["gains"] = std::move(gains);
    out << doc.dump(1) << '\n';
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    save_instance(inst, out);
}

ProblemInstance load_instance(std::istream& in) {
    const json doc = parse_stream(in);
    check_header(doc, "hetplan_instance", kInstanceSchema);
    ProblemInstance inst;
    try {
        inst.bias_w = number(require(doc, "bias_w"), "bias_w");
        inst.big_m = number(require(doc, "big_m"), "big_m");
        for (const json& js : require(doc, "sites")) {
            Site s;
            s.x = number(require(js, "x"), "x");
            s.y = number(require(js, "y"), "y");
            s.is_macro = require(js, "is_macro").get<bool>();
            s.backhaul_capacity =
                number_or_null(require(js, "backhaul_capacity"), "backhaul_capacity");
            for (const json& jf : require(js, "catalog")) {
                FacilitySpec fs;
                fs.kind = facility_kind_from_string(
                    require(jf, "kind").get<std::string>());
                fs.cost = number(require(jf, "cost"), "cost");
                fs.tx_power_dbm = number(require(jf, "tx_power_dbm"), "tx_power_dbm");
                fs.access_capacity =
                    number_or_null(require(jf, "access_capacity"), "access_capacity");
                fs.interference_suppression =
                    number(require(jf, "interference_suppression"),
                           "interference_suppression");
                s.catalog.push_back(fs);
            }
            inst.sites.push_back(std::move(s));
        }
        for (const json& ju : require(doc, "users")) {
            User u;
            u.x = number(require(ju, "x"), "x");
            u.y = number(require(ju, "y"), "y");
            u.demand = number(require(ju, "demand"), "demand");
            u.sir_threshold = number(require(ju, "sir_threshold"), "sir_threshold");
            inst.users.push_back(u);
        }
        const json& gains = require(doc, "gains");
        const std::string layout = require(gains, "layout").get<std::string>();
        if (layout != "facility_major")
            throw ParseError("unsupported gains layout '" + layout + "'");
        inst.gains = require(gains, "values").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("instance decode failure: ") + e.what());
    }
    inst.finalize();
    validate_instance(inst);
    return inst;
}

ProblemInstance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file '" + path + "'");
    return load_instance(in);
}

// ---- solutions -----------------------------------------------------------

namespace {

json sir_to_json(double sir) {
    if (std::isnan(sir)) return nullptr;   // unserved
    if (std::isinf(sir)) return "inf";     // no interference at all
    return sir;
}

json solution_to_json(const ProblemInstance& inst, const Deployment& y,
                      const Assignment& x) {
    const ObjectiveReport rep = objective_report(inst, y, x);
    json doc;
    doc["format"] = "hetplan_solution";
    doc["schema_version"] = kSolutionSchema;
    doc["deployment"]["open"] = y.open;
    doc["assignment"]["serving"] = x.serving;
    json obj;
    obj["cost"] = rep.cost;
    obj["covered_demand"] = rep.covered_demand;
    obj["objective"] = rep.objective;
    obj["coverage_fraction"] = rep.coverage_fraction;
    json sirs = json::array();
    for (double s : rep.per_user_sir) sirs.push_back(sir_to_json(s));
    obj["per_user_sir"] = std::move(sirs);
    doc["objective"] = std::move(obj);
    return doc;
}

} // namespace

void write_solution(const ProblemInstance& inst, const Deployment& y,
                    const Assignment& x, std::ostream& out) {
    out << solution_to_json(inst, y, x).dump(1) << '\n';
}

SolutionFile load_solution(std::istream& in) {
    const json doc = parse_stream(in);
    check_header(doc, "hetplan_solution", kSolutionSchema);
    SolutionFile sf;
    try {
        sf.open = require(require(doc, "deployment"), "open").get<std::vector<int>>();
        sf.serving =
            require(require(doc, "assignment"), "serving").get<std::vector<int>>();
        if (doc.contains("objective")) {
            sf.has_objective = true;
            sf.objective = number(require(doc.at("objective"), "objective"), "objective");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("solution decode failure: ") + e.what());
    }
    return sf;
}

SolutionFile load_solution_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open solution file '" + path + "'");
    return load_solution(in);
}

Assignment make_assignment(const ProblemInstance& inst,
                           const std::vector<int>& serving) {
    if (static_cast<int>(serving.size()) != inst.n_users())
        throw ValidationError("solution serving map length does not match instance");
    Assignment x;
    x.serving = serving;
    x.served_demand.assign(inst.fac_site.size(), 0.0);
    for (int j = 0; j < inst.n_users(); ++j) {
        const int f = serving[j];
        if (f < 0) continue;
        if (f >= inst.n_facilities())
            throw ValidationError("solution serving id out of facility range");
        x.served_demand[f] += inst.users[j].demand;
    }
    return x;
}

void write_solve_result(const ProblemInstance& inst, const SolveResult& result,
                        std::ostream& out) {
    json doc;
    doc["format"] = "hetplan_solve_result";
    doc["schema_version"] = kSolutionSchema;
    doc["seed"] = result.seed;
    doc["iterations"] = result.iterations;
    doc["termination_reason"] = to_string(result.reason);
    doc["lower"] = result.lower;
    doc["upper"] = result.upper;
    doc["gap"] = result.gap;
    doc["small_cells_opened"] = result.small_cells_opened;
    doc["macro_upgrades"] = result.macro_upgrades;
    doc["solution"] = solution_to_json(inst, result.best_y, result.best_x);
    out << doc.dump(1) << '\n';
}

void write_oracle_result(const ProblemInstance& inst, const OracleResult& result,
                         std::ostream& out) {
    json doc;
    doc["format"] = "hetplan_oracle_result";
    doc["schema_version"] = kSolutionSchema;
    doc["optimum"] = result.best_objective;
    doc["covered_demand"] = result.best_covered;
    doc["enumerated"] = result.enumerated;
    doc["solution"] = solution_to_json(inst, result.best_y, result.best_x);
    out << doc.dump(1) << '\n';
}

// ---- CSV -----------------------------------------------------------------

std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_bounds_csv(const std::vector<BoundTraceRow>& rows, std::ostream& out) {
    out << "t,lower_t,lower,upper,gap,norm_g,step_scale,halved,reinit\n";
    for (const BoundTraceRow& r : rows) {
        out << r.t << ',' << fmt_g17(r.lower_t) << ',' << fmt_g17(r.lower) << ','
            << fmt_g17(r.upper) << ',' << fmt_g17(r.gap) << ','
            << fmt_g17(r.norm_g) << ',' << fmt_g17(r.step_scale) << ','
            << (r.halved ? 1 : 0) << ',' << (r.reinit ? 1 : 0) << '\n';
    }
}

void write_tabu_csv(const std::vector<TabuIterationRow>& rows, std::ostream& out) {
    out << "solver_t,level,iteration,move,candidate_value,best_value,tabu_hits,"
           "diversifications\n";
    for (const TabuIterationRow& tr : rows) {
        const TabuTraceRow& r = tr.row;
        out << tr.solver_t << ',' << r.level << ',' << r.iteration << ','
            << to_string(r.kind) << ',' << fmt_g17(r.candidate_value) << ','
            << fmt_g17(r.best_value) << ',' << r.tabu_hits << ','
            << r.diversifications << '\n';
    }
}

void write_deployment_map_csv(const ProblemInstance& inst, const Deployment& y,
                              const Assignment& x, std::ostream& out) {
    const ObjectiveReport rep = objective_report(inst, y, x);
    out << "record,id,x,y,is_macro,open_kind,serving_site,serving_k,sir_db,demand\n";
    for (int i = 0; i < inst.n_sites(); ++i) {
        const Site& s = inst.sites[i];
        out << "site," << i << ',' << fmt_g17(s.x) << ',' << fmt_g17(s.y) << ','
            << (s.is_macro ? 1 : 0) << ','
            << (y.open[i] >= 0 ? to_string(s.catalog[y.open[i]].kind) : "none")
            << ",,,,\n";
    }
    for (int j = 0; j < inst.n_users(); ++j) {
        const User& u = inst.users[j];
        const int f = x.serving[j];
        out << "user," << j << ',' << fmt_g17(u.x) << ',' << fmt_g17(u.y) << ",,,";
        if (f >= 0) {
            out << inst.fac_site[f] << ',' << inst.fac_k[f] << ',';
            const double sir = rep.per_user_sir[j];
            if (std::isinf(sir))
                out << "inf";
            else
                out << fmt_g17(linear_to_db(sir));
        } else {
            out << "-1,-1,";
        }
        out << ',' << fmt_g17(u.demand) << '\n';
    }
}

// ---- config blocks -------------------------------------------------------

GeneratorConfig generator_config_from_json(std::istream& in) {
    const json doc = parse_stream(in);
    if (!doc.is_object()) throw ParseError("generator config must be a JSON object");
    reject_unknown_keys(
        doc,
        {"area_width", "area_height", "macro_positions", "n_small_sites",
         "n_users", "grid_small_sites", "seed", "frequency_mhz",
         "macro_antenna_m", "small_antenna_m", "user_antenna_m", "demand_lo",
         "demand_hi", "small_backhaul_lo", "small_backhaul_hi",
         "sir_threshold_db", "bias_w", "macro_conv_cost", "macro_massive_cost",
         "small_cost", "macro_power_dbm", "small_power_dbm", "macro_conv_access",
         "macro_massive_access", "small_access", "massive_suppression_db"},
        "generator config");
    GeneratorConfig cfg;
    try {
        if (doc.contains("area_width")) cfg.area_width = doc["area_width"].get<double>();
        if (doc.contains("area_height")) cfg.area_height = doc["area_height"].get<double>();
        if (doc.contains("macro_positions")) {
            cfg.macro_positions.clear();
            for (const json& p : doc["macro_positions"]) {
                if (!p.is_array() || p.size() != 2)
                    throw ParseError("macro_positions entries must be [x, y] pairs");
                cfg.macro_positions.emplace_back(p[0].get<double>(), p[1].get<double>());
            }
        }
        if (doc.contains("n_small_sites")) cfg.n_small_sites = doc["n_small_sites"].get<int>();
        if (doc.contains("n_users")) cfg.n_users = doc["n_users"].get<int>();
        if (doc.contains("grid_small_sites"))
            cfg.grid_small_sites = doc["grid_small_sites"].get<bool>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("frequency_mhz")) cfg.frequency_mhz = doc["frequency_mhz"].get<double>();
        if (doc.contains("macro_antenna_m")) cfg.macro_antenna_m = doc["macro_antenna_m"].get<double>();
        if (doc.contains("small_antenna_m")) cfg.small_antenna_m = doc["small_antenna_m"].get<double>();
        if (doc.contains("user_antenna_m")) cfg.user_antenna_m = doc["user_antenna_m"].get<double>();
        if (doc.contains("demand_lo")) cfg.demand_lo = doc["demand_lo"].get<double>();
        if (doc.contains("demand_hi")) cfg.demand_hi = doc["demand_hi"].get<double>();
        if (doc.contains("small_backhaul_lo")) cfg.small_backhaul_lo = doc["small_backhaul_lo"].get<double>();
        if (doc.contains("small_backhaul_hi")) cfg.small_backhaul_hi = doc["small_backhaul_hi"].get<double>();
        if (doc.contains("sir_threshold_db")) cfg.sir_threshold_db = doc["sir_threshold_db"].get<double>();
        if (doc.contains("bias_w")) cfg.bias_w = doc["bias_w"].get<double>();
        if (doc.contains("macro_conv_cost")) cfg.macro_conv_cost = doc["macro_conv_cost"].get<double>();
        if (doc.contains("macro_massive_cost")) cfg.macro_massive_cost = doc["macro_massive_cost"].get<double>();
        if (doc.contains("small_cost")) cfg.small_cost = doc["small_cost"].get<double>();
        if (doc.contains("macro_power_dbm")) cfg.macro_power_dbm = doc["macro_power_dbm"].get<double>();
        if (doc.contains("small_power_dbm")) cfg.small_power_dbm = doc["small_power_dbm"].get<double>();
        if (doc.contains("macro_conv_access")) cfg.macro_conv_access = doc["macro_conv_access"].get<double>();
        if (doc.contains("macro_massive_access")) cfg.macro_massive_access = doc["macro_massive_access"].get<double>();
        if (doc.contains("small_access")) cfg.small_access = doc["small_access"].get<double>();
        if (doc.contains("massive_suppression_db"))
            cfg.massive_suppression_db = doc["massive_suppression_db"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("generator config decode failure: ") + e.what());
    }
    return cfg;
}

SolverParams solver_params_from_json(std::istream& in) {
    const json doc = parse_stream(in);
    if (!doc.is_object()) throw ParseError("solver params must be a JSON object");
    reject_unknown_keys(doc,
                        {"n_max", "n1", "n2", "epsilon", "s0",
                         "warm_start_from_best", "single_level", "tabu",
                         "relaxation"},
                        "solver params");
    SolverParams p;
    try {
        if (doc.contains("n_max")) p.n_max = doc["n_max"].get<int>();
        if (doc.contains("n1")) p.n1 = doc["n1"].get<int>();
        if (doc.contains("n2")) p.n2 = doc["n2"].get<int>();
        if (doc.contains("epsilon")) p.epsilon = doc["epsilon"].get<double>();
        if (doc.contains("s0")) p.s0 = doc["s0"].get<double>();
        if (doc.contains("warm_start_from_best"))
            p.warm_start_from_best = doc["warm_start_from_best"].get<bool>();
        if (doc.contains("single_level")) p.single_level = doc["single_level"].get<bool>();
        if (doc.contains("tabu")) {
            const json& t = doc["tabu"];
            reject_unknown_keys(
                t, {"tenure", "max_outer", "max_inner", "n_swap", "n_div", "n_ni"},
                "tabu params");
            if (t.contains("tenure")) p.tabu.tenure = t["tenure"].get<int>();
            if (t.contains("max_outer")) p.tabu.max_outer = t["max_outer"].get<int>();
            if (t.contains("max_inner")) p.tabu.max_inner = t["max_inner"].get<int>();
            if (t.contains("n_swap")) p.tabu.n_swap = t["n_swap"].get<int>();
            if (t.contains("n_div")) p.tabu.n_div = t["n_div"].get<int>();
            if (t.contains("n_ni")) p.tabu.n_ni = t["n_ni"].get<int>();
        }
        if (doc.contains("relaxation")) {
            const json& r = doc["relaxation"];
            reject_unknown_keys(r, {"knapsack_skip_and_continue"}, "relaxation params");
            if (r.contains("knapsack_skip_and_continue"))
                p.relaxation.knapsack_skip_and_continue =
                    r["knapsack_skip_and_continue"].get<bool>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("solver params decode failure: ") + e.what());
    }
    return p;
}

namespace {

json generator_config_json(const GeneratorConfig& cfg) {
    json doc;
    doc["area_width"] = cfg.area_width;
    doc["area_height"] = cfg.area_height;
    json pos = json::array();
    for (const auto& [x, y] : cfg.macro_positions) pos.push_back(json::array({x, y}));
    doc["macro_positions"] = std::move(pos);
    doc["n_small_sites"] = cfg.n_small_sites;
    doc["n_users"] = cfg.n_users;
    doc["grid_small_sites"] = cfg.grid_small_sites;
    doc["seed"] = cfg.seed;
    doc["frequency_mhz"] = cfg.frequency_mhz;
    doc["macro_antenna_m"] = cfg.macro_antenna_m;
    doc["small_antenna_m"] = cfg.small_antenna_m;
    doc["user_antenna_m"] = cfg.user_antenna_m;
    doc["demand_lo"] = cfg.demand_lo;
    doc["demand_hi"] = cfg.demand_hi;
    doc["small_backhaul_lo"] = cfg.small_backhaul_lo;
    doc["small_backhaul_hi"] = cfg.small_backhaul_hi;
    doc["sir_threshold_db"] = cfg.sir_threshold_db;
    doc["bias_w"] = cfg.bias_w;
    doc["macro_conv_cost"] = cfg.macro_conv_cost;
    doc["macro_massive_cost"] = cfg.macro_massive_cost;
    doc["small_cost"] = cfg.small_cost;
    doc["macro_power_dbm"] = cfg.macro_power_dbm;
    doc["small_power_dbm"] = cfg.small_power_dbm;
    doc["macro_conv_access"] = cfg.macro_conv_access;
    doc["macro_massive_access"] = cfg.macro_massive_access;
    doc["small_access"] = cfg.small_access;
    doc["massive_suppression_db"] = cfg.massive_suppression_db;
    return doc;
}

json solver_params_json(const SolverParams& p) {
    json doc;
    doc["n_max"] = p.n_max;
    doc["n1"] = p.n1;
    doc["n2"] = p.n2;
    doc["epsilon"] = p.epsilon;
    doc["s0"] = p.s0;
    doc["warm_start_from_best"] = p.warm_start_from_best;
    doc["single_level"] = p.single_level;
    doc["tabu"]["tenure"] = p.tabu.tenure;
    doc["tabu"]["max_outer"] = p.tabu.max_outer;
    doc["tabu"]["max_inner"] = p.tabu.max_inner;
    doc["tabu"]["n_swap"] = p.tabu.n_swap;
    doc["tabu"]["n_div"] = p.tabu.n_div;
    doc["tabu"]["n_ni"] = p.tabu.n_ni;
    doc["relaxation"]["knapsack_skip_and_continue"] =
        p.relaxation.knapsack_skip_and_continue;
    return doc;
}

} // namespace

std::string generator_config_to_json(const GeneratorConfig& cfg) {
    return generator_config_json(cfg).dump(1) + "\n";
}

std::string solver_params_to_json(const SolverParams& params) {
    return solver_params_json(params).dump(1) + "\n";
}

std::string run_config_json(const std::string& command, std::uint64_t seed,
                            unsigned threads, const SolverParams& params,
                            const std::string& instance_label,
                            std::uint64_t instance_hash, int n_sites,
                            int n_users) {
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(instance_hash));
    json doc;
    doc["format"] = "hetplan_run_config";
    doc["schema_version"] = 1;
    doc["command"] = command;
    doc["seed"] = seed;
    doc["threads"] = threads;
    doc["params"] = solver_params_json(params);
    doc["instance"]["source"] = instance_label;
    doc["instance"]["fnv1a64"] = hash_hex;
    doc["instance"]["n_sites"] = n_sites;
    doc["instance"]["n_users"] = n_users;
    return doc.dump(1) + "\n";
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace hetplan
