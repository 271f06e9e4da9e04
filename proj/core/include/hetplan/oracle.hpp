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

#ifndef HETPLAN_ORACLE_HPP
#define HETPLAN_ORACLE_HPP

#include <utility>

#include "hetplan/evaluation.hpp"
#include "hetplan/instance.hpp"

namespace hetplan {

// Budget guard for the exhaustive reference solver.  The enumeration space
// is estimated up front; anything over budget is refused with a LimitError
// carrying the estimate, never silently truncated.
struct OracleLimits {
    double max_deployments = 1e5;
    int max_users = 10;
};

struct OracleResult {
    Deployment best_y;
    Assignment best_x;
    double best_objective = 0.0;
    double best_covered = 0.0;    // bit/s under best_y's optimal assignment
    double enumerated = 0.0;      // deployments visited
};

// Exact maximum covered demand for a fixed deployment: branch-and-bound over
// users, honoring per-user SIR admissibility and per-facility
// min(access, backhaul) capacity.  Returns the assignment and its covered
// demand.  Deliberately independent of the greedy association heuristic.
std::pair<Assignment, double> exact_assignment(const ProblemInstance& inst,
                                               const Deployment& y);

// Full enumeration of deployments (macro sites range over their catalog,
// small-cell sites additionally over "closed"), each scored with
// exact_assignment.  Ties keep the first optimum in lexicographic
// deployment order, "closed" ordering before catalog entry 0.
OracleResult exhaustive_best(const ProblemInstance& inst,
                             const OracleLimits& limits = {});

// Number of deployments exhaustive_best would visit, as a double so
// overflow-prone products stay representable.
double deployment_space_size(const ProblemInstance& inst);

} // namespace hetplan

#endif // HETPLAN_ORACLE_HPP
