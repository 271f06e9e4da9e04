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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "hetplan/errors.hpp"
#include "hetplan/evaluation.hpp"
#include "hetplan/instance.hpp"
#include "hetplan/oracle.hpp"
#include "hetplan/serialize.hpp"
#include "hetplan/solver.hpp"

namespace {

namespace fs = std::filesystem;
using namespace hetplan;

// Exit-code contract: 0 success, 1 infeasibility/violation, 2 resource
// refusal, 3 bad input.  `solve` additionally exits 10 when it stops on the
// iteration cap rather than a convergence test, so scripts can tell the
// termination reasons apart.
constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitRefused = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitIterationCap = 10;

std::string read_all(std::istream& in) {
    return std::string(std::istreambuf_iterator<char>(in), {});
}

// "-" means stdin; the raw bytes are kept for content hashing.
std::string slurp_input(const std::string& path) {
    if (path == "-") return read_all(std::cin);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open input file '" + path + "'");
    return read_all(in);
}

ProblemInstance parse_instance(const std::string& bytes) {
    std::istringstream in(bytes);
    return load_instance(in);
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
    return out;
}

unsigned default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

struct GenerateArgs {
    std::string preset = "table1";
    std::string config_path;
    std::string out = "-";
    int users = -1;
    int small_sites = -1;
    std::uint64_t seed = 1;
    bool seed_given = false;
    bool grid = false;
};

int cmd_generate(const GenerateArgs& a) {
    if (a.preset != "table1")
        throw ConfigError("unknown preset '" + a.preset +
                          "' (available: table1)");
    GeneratorConfig cfg; // table1 preset == the constructor defaults
    if (!a.config_path.empty()) {
        std::ifstream in(a.config_path);
        if (!in) throw ParseError("cannot open config file '" + a.config_path + "'");
        cfg = generator_config_from_json(in);
    }
    if (a.users >= 0) cfg.n_users = a.users;
    if (a.small_sites >= 0) cfg.n_small_sites = a.small_sites;
    if (a.seed_given) cfg.seed = a.seed;
    if (a.grid) cfg.grid_small_sites = true;

    const ProblemInstance inst = generate_instance(cfg);
    if (a.out == "-") {
        save_instance(inst, std::cout);
    } else {
        auto out = open_out(a.out);
        save_instance(inst, out);
    }
    return kExitOk;
}

struct SolveArgs {
    std::string instance = "-";
    std::string params_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool single_level = false;
    bool warm_start = false;
    bool knapsack_skip = false;
    // direct numeric overrides; -1 / NaN mean "not given"
    int n_max = -1, n1 = -1, n2 = -1;
    double epsilon = -1.0, s0 = -1.0;
    int tenure = -1, max_outer = -1, max_inner = -1, n_swap = -1, n_div = -1,
        n_ni = -1;
};

SolverParams resolve_params(const SolveArgs& a) {
    SolverParams p;
    if (!a.params_path.empty()) {
        std::ifstream in(a.params_path);
        if (!in) throw ParseError("cannot open params file '" + a.params_path + "'");
        p = solver_params_from_json(in);
    }
    if (a.n_max >= 0) p.n_max = a.n_max;
    if (a.n1 >= 0) p.n1 = a.n1;
    if (a.n2 >= 0) p.n2 = a.n2;
    if (a.epsilon >= 0.0) p.epsilon = a.epsilon;
    if (a.s0 >= 0.0) p.s0 = a.s0;
    if (a.tenure >= 0) p.tabu.tenure = a.tenure;
    if (a.max_outer >= 0) p.tabu.max_outer = a.max_outer;
    if (a.max_inner >= 0) p.tabu.max_inner = a.max_inner;
    if (a.n_swap >= 0) p.tabu.n_swap = a.n_swap;
    if (a.n_div >= 0) p.tabu.n_div = a.n_div;
    if (a.n_ni >= 0) p.tabu.n_ni = a.n_ni;
    if (a.single_level) p.single_level = true;
    if (a.warm_start) p.warm_start_from_best = true;
    if (a.knapsack_skip) p.relaxation.knapsack_skip_and_continue = true;
    return p;
}

int cmd_solve(const SolveArgs& a) {
    const std::string bytes = slurp_input(a.instance);
    const ProblemInstance inst = parse_instance(bytes);

    SolverParams params = resolve_params(a);
    const unsigned threads = a.threads ? a.threads : default_threads();
    params.tabu.threads = threads;
    params.relaxation.threads = threads;

    // --out-dir wins; otherwise the environment override; otherwise ./run
    std::string out_dir = a.out_dir;
    if (out_dir.empty()) {
        if (const char* env = std::getenv("HETPLAN_OUT_DIR")) out_dir = env;
        if (out_dir.empty()) out_dir = "run";
    }
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    {
        auto out = open_out(dir / "run_config.json");
        out << run_config_json("solve", a.seed, threads, params,
                               a.instance == "-" ? "<stdin>" : a.instance,
                               fnv1a64(bytes), inst.n_sites(), inst.n_users());
    }

    const SolveResult result = solve(inst, params, a.seed);

    {
        auto out = open_out(dir / "solve_result.json");
        write_solve_result(inst, result, out);
    }
    {
        auto out = open_out(dir / "solution.json");
        write_solution(inst, result.best_y, result.best_x, out);
    }
    {
        auto out = open_out(dir / "bounds.csv");
        write_bounds_csv(result.bounds, out);
    }
    {
        auto out = open_out(dir / "tabu_trace.csv");
        write_tabu_csv(result.tabu_trace, out);
    }
    {
        auto out = open_out(dir / "deployment_map.csv");
        write_deployment_map_csv(inst, result.best_y, result.best_x, out);
    }

    std::cout << "upper=" << fmt_g17(result.upper)
              << " lower=" << fmt_g17(result.lower)
              << " gap=" << fmt_g17(result.gap)
              << " iterations=" << result.iterations
              << " reason=" << to_string(result.reason)
              << " small_cells_opened=" << result.small_cells_opened
              << " macro_upgrades=" << result.macro_upgrades << '\n';

    return result.reason == TerminationReason::max_iterations ? kExitIterationCap
                                                              : kExitOk;
}

struct VerifyArgs {
    std::string instance;
    std::string solution;
    bool strict = false;
};

int cmd_verify(const VerifyArgs& a) {
    const ProblemInstance inst = parse_instance(slurp_input(a.instance));
    SolutionFile sf;
    {
        std::istringstream in(slurp_input(a.solution));
        sf = load_solution(in);
    }
    if (static_cast<int>(sf.open.size()) != inst.n_sites())
        throw ValidationError("solution deployment length does not match instance");
    for (int i = 0; i < inst.n_sites(); ++i)
        if (sf.open[i] < -1 ||
            sf.open[i] >= static_cast<int>(inst.sites[i].catalog.size()))
            throw ValidationError("deployment entry out of catalog range at site " +
                                  std::to_string(i));
    Deployment y{sf.open};
    Assignment x = make_assignment(inst, sf.serving);

    const FeasibilityReport rep = check_feasibility(inst, y, x, a.strict);
    int issues = 0;
    for (const Violation& v : rep.violations) {
        std::cout << "violation: " << v.describe() << '\n';
        ++issues;
    }
    if (sf.has_objective) {
        const double actual = objective_value(inst, y, x);
        const double scale = std::max({1.0, std::abs(actual), std::abs(sf.objective)});
        if (std::abs(actual - sf.objective) > 1e-9 * scale) {
            std::cout << "violation: objective_mismatch stored="
                      << fmt_g17(sf.objective) << " recomputed=" << fmt_g17(actual)
                      << '\n';
            ++issues;
        }
    }
    if (issues == 0) {
        std::cout << "ok: no violations\n";
        return kExitOk;
    }
    std::cout << issues << " violation(s)\n";
    return kExitViolation;
}

struct OracleArgs {
    std::string instance = "-";
    std::string out = "-";
    double max_deployments = 1e5;
    int max_users = 10;
    bool compare = false;
};

int cmd_oracle(const OracleArgs& a) {
    const ProblemInstance inst = parse_instance(slurp_input(a.instance));
    OracleLimits limits;
    limits.max_deployments = a.max_deployments;
    limits.max_users = a.max_users;

    const OracleResult res = exhaustive_best(inst, limits);
    if (a.out == "-") {
        write_oracle_result(inst, res, std::cout);
    } else {
        auto out = open_out(a.out);
        write_oracle_result(inst, res, out);
    }

    if (a.compare) {
        SolverParams params;
        params.tabu.threads = default_threads();
        params.relaxation.threads = params.tabu.threads;
        const SolveResult sr = solve(inst, params, 0);
        const bool lower_ok = sr.lower - 1e-6 <= res.best_objective;
        const bool upper_ok = res.best_objective <= sr.upper + 1e-9;
        std::cout << "compare: lower=" << fmt_g17(sr.lower)
                  << " optimum=" << fmt_g17(res.best_objective)
                  << " upper=" << fmt_g17(sr.upper)
                  << ((lower_ok && upper_ok) ? " sandwich=ok" : " sandwich=FAIL")
                  << '\n';
        if (!(lower_ok && upper_ok)) return kExitViolation;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"heterogeneous cellular network deployment planner"};
    app.require_subcommand(1);

    GenerateArgs ga;
    CLI::App* gen = app.add_subcommand(
        "generate", "Draw a random planning instance and write it as JSON");
    gen->add_option("--preset", ga.preset,
                    "Named scenario preset (table1: 2x2 km urban square, "
                    "4 fibre macros, 120 pole sites)");
    gen->add_option("--config", ga.config_path,
                    "JSON file overriding individual generator knobs");
    gen->add_option("--users", ga.users, "Number of users");
    gen->add_option("--small-sites", ga.small_sites,
                    "Number of candidate small-cell sites");
    gen->add_option("--seed", ga.seed, "Generator seed")
        ->each([&](const std::string&) { ga.seed_given = true; });
    gen->add_flag("--grid", ga.grid,
                  "Place small-cell sites on a regular grid instead of i.i.d.");
    gen->add_option("--out", ga.out, "Output file, '-' for stdout");

    SolveArgs sa;
    CLI::App* sol = app.add_subcommand(
        "solve", "Run the bounding loop on an instance file ('-' = stdin)");
    sol->add_option("instance", sa.instance, "Instance JSON file, '-' for stdin");
    sol->add_option("--params", sa.params_path, "Solver parameter JSON file");
    sol->add_option("--out-dir", sa.out_dir,
                    "Run directory (default: $HETPLAN_OUT_DIR or ./run)");
    sol->add_option("--seed", sa.seed, "Recorded run seed");
    sol->add_option("--threads", sa.threads,
                    "Worker threads (default: available parallelism)");
    sol->add_flag("--single-level", sa.single_level,
                  "Small-cell search only; macros stay conventional");
    sol->add_flag("--warm-start-from-best", sa.warm_start,
                  "Start each tabu run from the incumbent instead of the "
                  "relaxed deployment");
    sol->add_flag("--knapsack-skip", sa.knapsack_skip,
                  "Greedy subproblem keeps scanning after a rejected candidate");
    sol->add_option("--n-max", sa.n_max, "Outer iteration budget");
    sol->add_option("--n1", sa.n1, "Stalls before the step scale halves");
    sol->add_option("--n2", sa.n2, "Step-scale reset period");
    sol->add_option("--epsilon", sa.epsilon, "Relative gap target");
    sol->add_option("--s0", sa.s0, "Initial step scale");
    sol->add_option("--tenure", sa.tenure, "Tabu tenure");
    sol->add_option("--max-outer", sa.max_outer, "Macro-level iterations");
    sol->add_option("--max-inner", sa.max_inner,
                    "Small-cell iterations per macro pass");
    sol->add_option("--n-swap", sa.n_swap, "Swap targets per open small cell");
    sol->add_option("--n-div", sa.n_div, "Facilities opened per restart");
    sol->add_option("--n-ni", sa.n_ni, "Stall length triggering a restart");

    VerifyArgs va;
    CLI::App* ver = app.add_subcommand(
        "verify", "Replay every constraint of a solution against an instance");
    ver->add_option("--instance", va.instance, "Instance JSON file")->required();
    ver->add_option("--solution", va.solution, "Solution JSON file")->required();
    ver->add_flag("--strict", va.strict, "Additionally require full coverage");

    OracleArgs oa;
    CLI::App* ora = app.add_subcommand(
        "oracle", "Exhaustive exact solve of a tiny instance ('-' = stdin)");
    ora->add_option("instance", oa.instance, "Instance JSON file, '-' for stdin");
    ora->add_option("--out", oa.out, "Output file, '-' for stdout");
    ora->add_option("--max-deployments", oa.max_deployments,
                    "Refuse above this many deployments");
    ora->add_option("--max-users", oa.max_users, "Refuse above this many users");
    ora->add_flag("--compare", oa.compare,
                  "Also run the solver and check lower <= optimum <= upper");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (gen->parsed()) return cmd_generate(ga);
        if (sol->parsed()) return cmd_solve(sa);
        if (ver->parsed()) return cmd_verify(va);
        if (ora->parsed()) return cmd_oracle(oa);
        return kExitBadInput;
    } catch (const LimitError& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kExitRefused;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
}
