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

#ifndef HETPLAN_SOLVER_HPP
#define HETPLAN_SOLVER_HPP

#include <cstdint>
#include <vector>

#include "hetplan/evaluation.hpp"
#include "hetplan/instance.hpp"
#include "hetplan/relaxation.hpp"
#include "hetplan/tabu.hpp"

namespace hetplan {

struct SolverParams {
    int n_max = 200;        // outer iteration budget
    int n1 = 5;             // halve the step scale after n1 stalls
    int n2 = 50;            // reset the step scale every n2 iterations
    double epsilon = 0.01;  // relative gap target
    double s0 = 2.0;        // initial step scale
    bool warm_start_from_best = false; // start tabu from best_y, not y_t
    bool single_level = false;         // small-cell search only, macros conventional
    TabuParams tabu;
    RelaxationParams relaxation;
};

enum class TerminationReason { gap, complementary_slackness, max_iterations };

const char* to_string(TerminationReason reason);

struct BoundTraceRow {
    int t = 0;             // 1-based outer iteration
    double lower_t = 0.0;  // this iteration's dual value
    double lower = 0.0;    // best dual value so far
    double upper = 0.0;    // incumbent after this iteration's tabu run
    double gap = 0.0;      // (upper - lower) / |upper|
    double norm_g = 0.0;   // subgradient norm
    double step_scale = 0.0; // s in effect when the multipliers were updated
    bool halved = false;   // s was halved this iteration (q reached n1)
    bool reinit = false;   // s was reset to s0 at the end of this iteration
};

struct TabuIterationRow {
    int solver_t = 0;
    TabuTraceRow row;
};

struct SolveResult {
    Deployment best_y;
    Assignment best_x;
    double lower = 0.0;
    double upper = 0.0;
    double gap = 0.0;
    int iterations = 0;
    TerminationReason reason = TerminationReason::max_iterations;
    std::uint64_t seed = 0;
    int small_cells_opened = 0;
    int macro_upgrades = 0; // macro sites on a massive-MIMO entry
    std::vector<BoundTraceRow> bounds;
    std::vector<TabuIterationRow> tabu_trace;
};

// (upper - lower) / |upper|; exact-zero upper degenerates to 0 when the
// bounds coincide and +infinity otherwise.
double relative_gap(double upper, double lower);

// Alternates the dual bound and the tabu search:
//   per iteration: evaluate the relaxation at the current multipliers;
//   update the best lower bound and the stall counter (halving the step
//   scale after n1 stalls); run the two-level search from the relaxed
//   deployment and update the incumbent; stop on relative gap < epsilon or
//   complementary slackness; otherwise take a projected subgradient step,
//   advance t, and reset the step scale whenever t lands on a multiple of
//   n2.  The incumbent starts from the all-conventional-macro baseline,
//   which is feasible on every valid instance.  Fully deterministic; `seed`
//   is recorded for provenance but no step draws randomness.
SolveResult solve(const ProblemInstance& inst, const SolverParams& params,
                  std::uint64_t seed = 0);

} // namespace hetplan

#endif // HETPLAN_SOLVER_HPP
