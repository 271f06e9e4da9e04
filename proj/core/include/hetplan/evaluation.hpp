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

#ifndef HETPLAN_EVALUATION_HPP
#define HETPLAN_EVALUATION_HPP

#include <string>
#include <vector>

#include "hetplan/instance.hpp"

namespace hetplan {

// Which catalog entry is built at each site; -1 keeps the site empty.  At
// most one facility per site is structural here, which is exactly the
// single-deployment rule of the model.
struct Deployment {
    std::vector<int> open; // per site: catalog index or -1

    bool is_open(int site) const { return open[site] >= 0; }
    friend bool operator==(const Deployment& a, const Deployment& b) {
        return a.open == b.open;
    }
};

// Which facility serves each user (-1 = unserved) plus the per-facility
// served traffic the assignment implies.  `serving` holds global facility
// ids (see ProblemInstance::facility).
struct Assignment {
    std::vector<int> serving;          // per user: facility id or -1
    std::vector<double> served_demand; // per facility: bit/s

    friend bool operator==(const Assignment& a, const Assignment& b) {
        return a.serving == b.serving && a.served_demand == b.served_demand;
    }
};

// Scratch buffers reused across evaluations; the search loops call
// assign_users millions of times and must not allocate on each call.
struct EvalWorkspace {
    std::vector<int> open_facs;
    std::vector<double> best_power;
    std::vector<int> best_fac;
    std::vector<double> interference; // per user: sum of P*E over open facs
    std::vector<double> own_term;     // per user: serving facility's P*E
    std::vector<int> serving;
    std::vector<double> load;
    std::vector<std::pair<double, int>> trim;
};

// Greedy user-association heuristic, three passes:
//   1. attach every user to the open facility with the strongest received
//      power (ties: lowest site index, then lowest catalog index);
//   2. detach users whose SIR falls strictly below their threshold
//      (equality still serves);
//   3. for each facility over min(access, backhaul) capacity, detach users
//      in nondecreasing demand order (ties: highest user index first) until
//      it fits.
// Interference depends only on which facilities are open, never on who is
// attached where, so pass 3 cannot invalidate pass 2.
Assignment assign_users(const ProblemInstance& inst, const Deployment& y,
                        EvalWorkspace& ws);

// Build cost minus bias_w times covered demand; the solver minimizes this.
double objective_value(const ProblemInstance& inst, const Deployment& y,
                       const Assignment& x);

// Convenience: assign + objective in one call.
double evaluate(const ProblemInstance& inst, const Deployment& y,
                EvalWorkspace& ws);

// SIR of user `user` when served from (site, k) under deployment y: received
// power over the P*E sum of every other open facility.  +infinity when the
// user hears no interferer at all.  The facility must be open.
double sir_of(const ProblemInstance& inst, const Deployment& y, int site,
              int k, int user);

struct ObjectiveReport {
    double cost = 0.0;
    double covered_demand = 0.0;     // bit/s
    double objective = 0.0;          // cost - bias_w * covered_demand
    double coverage_fraction = 0.0;  // covered / total demand
    std::vector<double> per_user_sir; // linear; NaN when unserved
};

ObjectiveReport objective_report(const ProblemInstance& inst,
                                 const Deployment& y, const Assignment& x);

// --------------------------------------------------------------------------
// Feasibility checking
// --------------------------------------------------------------------------

enum class ViolationKind {
    macro_site_empty,         // macro sites must build something
    serving_closed_facility,  // assignment points at an unbuilt facility
    sir_below_threshold,      // served user below its SIR floor
    big_m_too_small,          // unserved user's linearized SIR bound broken
    access_capacity_exceeded,
    backhaul_exceeded,
    served_demand_mismatch,   // bookkeeping disagrees with the serving map
    user_unserved             // strict mode only: full coverage required
};

const char* to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    int site = -1;
    int k = -1;
    int user = -1;
    double slack = 0.0; // how far on the wrong side; <= 0 means violated

    std::string describe() const;
};

struct FeasibilityReport {
    std::vector<Violation> violations;
    bool feasible() const { return violations.empty(); }
};

// Replays every model constraint against (y, x).  Single-deployment and
// single-server rules hold by construction of Deployment/Assignment; the
// index ranges are still asserted and everything else is recomputed from the
// instance.  `strict` additionally requires every user to be served.
FeasibilityReport check_feasibility(const ProblemInstance& inst,
                                    const Deployment& y, const Assignment& x,
                                    bool strict = false);

// Every macro on its cheapest conventional entry, all small sites closed.
// Feasible on any valid instance, which makes it the canonical initial
// incumbent.
Deployment baseline_deployment(const ProblemInstance& inst);

// Fills empty macro sites with their lowest-cost entry (ties: lowest catalog
// index) so downstream evaluation always sees a legal deployment.  Returns
// the number of repairs.
int repair_macro_sites(const ProblemInstance& inst, Deployment& y);

} // namespace hetplan

#endif // HETPLAN_EVALUATION_HPP
