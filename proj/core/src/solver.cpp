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

#include "hetplan/solver.hpp"

#include <cmath>

#include "hetplan/errors.hpp"

namespace hetplan {

const char* to_string(TerminationReason reason) {
    switch (reason) {
    case TerminationReason::gap: return "gap";
    case TerminationReason::complementary_slackness:
        return "complementary_slackness";
    case TerminationReason::max_iterations: return "max_iterations";
    }
    return "unknown";
}

double relative_gap(double upper, double lower) {
    if (upper == lower) return 0.0;
    if (upper == 0.0) return kInf;
    return (upper - lower) / std::abs(upper);
}

namespace {

void validate_params(const SolverParams& p) {
    if (p.n_max < 1) throw ConfigError("solver: n_max must be >= 1");
    if (p.n1 < 1) throw ConfigError("solver: n1 must be >= 1");
    if (p.n2 < 1) throw ConfigError("solver: n2 must be >= 1");
    if (!(p.epsilon > 0.0) || !(p.epsilon < 1.0))
        throw ConfigError("solver: epsilon must lie in (0, 1)");
    if (!(p.s0 > 0.0)) throw ConfigError("solver: s0 must be positive");
}

void force_conventional_macros(const ProblemInstance& inst, Deployment& y) {
    for (int i = 0; i < inst.n_sites(); ++i) {
        if (!inst.sites[i].is_macro) continue;
        y.open[i] = -1;
    }
    repair_macro_sites(inst, y);
}

} // namespace

SolveResult solve(const ProblemInstance& inst, const SolverParams& params,
                  std::uint64_t seed) {
    validate_params(params);
    validate_instance(inst);

    TabuParams tabu_params = params.tabu;
    tabu_params.single_level = tabu_params.single_level || params.single_level;

    SolveResult res;
    res.seed = seed;

    EvalWorkspace ws;
    EvalCache cache;

    // Feasible incumbent before any search: conventional macros, no small
    // cells.
    res.best_y = baseline_deployment(inst);
    res.upper = evaluate(inst, res.best_y, ws);

    Multipliers lam = Multipliers::zeros(inst.n_users());
    double s = params.s0;
    double lower = -kInf;
    int q = 0;

    int t = 1;
    for (;;) {
        RelaxedSolution relaxed = solve_relaxed_master(inst, lam, params.relaxation);
        const double lower_t = relaxed.lower_bound;

        bool halved = false;
        if (lower_t > lower) {
            lower = lower_t;
            q = 0;
        } else if (++q == params.n1) {
            s *= 0.5;
            q = 0;
            halved = true;
        }

        Deployment y_start = params.warm_start_from_best ? res.best_y : relaxed.y;
        if (params.single_level) force_conventional_macros(inst, y_start);
        TabuResult tabu = two_level_search(inst, y_start, tabu_params, &cache);
        for (TabuTraceRow& row : tabu.trace)
            res.tabu_trace.push_back({t, row});
        if (tabu.best_value < res.upper) {
            res.upper = tabu.best_value;
            res.best_y = tabu.best_y;
        }

        const Subgradients g = subgradients(inst, relaxed);
        const double gap_now = relative_gap(res.upper, lower);

        BoundTraceRow row;
        row.t = t;
        row.lower_t = lower_t;
        row.lower = lower;
        row.upper = res.upper;
        row.gap = gap_now;
        row.norm_g = std::sqrt(g.norm_sq);
        row.step_scale = s;
        row.halved = halved;

        if (gap_now < params.epsilon) {
            res.bounds.push_back(row);
            res.reason = TerminationReason::gap;
            res.iterations = t;
            break;
        }
        if (complementary_slackness(inst, lam, g, lower_t)) {
            res.bounds.push_back(row);
            res.reason = TerminationReason::complementary_slackness;
            res.iterations = t;
            break;
        }

        if (!g.zero()) {
            const double step = subgradient_step_size(s, res.upper, lower_t, g.norm_sq);
            apply_subgradient_step(lam, g, step);
        }
        const int t_next = t + 1;
        if (t_next % params.n2 == 0) {
            s = params.s0;
            row.reinit = true;
        }
        res.bounds.push_back(row);
        if (t_next > params.n_max) {
            res.reason = TerminationReason::max_iterations;
            res.iterations = t;
            break;
        }
        t = t_next;
    }

    res.lower = lower;
    res.gap = relative_gap(res.upper, lower);
    res.best_x = assign_users(inst, res.best_y, ws);
    for (int i = 0; i < inst.n_sites(); ++i) {
        if (res.best_y.open[i] < 0) continue;
        const FacilitySpec& spec = inst.sites[i].catalog[res.best_y.open[i]];
        if (!inst.sites[i].is_macro)
            ++res.small_cells_opened;
        else if (spec.kind == FacilityKind::macro_massive_mimo)
            ++res.macro_upgrades;
    }
    return res;
}

} // namespace hetplan
