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

#ifndef HETPLAN_RELAXATION_HPP
#define HETPLAN_RELAXATION_HPP

#include <vector>

#include "hetplan/evaluation.hpp"
#include "hetplan/instance.hpp"

namespace hetplan {

// Nonnegative multipliers: l1 prices the one-server-per-user rule, l2 the
// linearized per-user SIR inequality.  Both indexed by user.
struct Multipliers {
    std::vector<double> l1, l2;

    static Multipliers zeros(int n_users) {
        Multipliers m;
        m.l1.assign(n_users, 0.0);
        m.l2.assign(n_users, 0.0);
        return m;
    }
};

struct RelaxationParams {
    // Greedy knapsack variant: false stops at the first user that does not
    // fit, true keeps scanning the sorted candidates for smaller ones.
    bool knapsack_skip_and_continue = false;
    unsigned threads = 1;
};

// Price of dual candidate user j at one facility, and the facility's opening
// constant.  A user is worth taking iff its coefficient is <= 0.
void knapsack_terms(const ProblemInstance& inst, int fac, const Multipliers& lam,
                    std::vector<double>& coeff, double& const_term);

struct SubproblemResult {
    double value = 0.0;         // greedy (whole-user) contribution if opened
    // Linear-relaxation contribution: same ratio-sorted scan completed with a
    // fractional share of the first overflowing candidate.  Never above
    // `value`, equal to it whenever the whole candidate set fits, and -- unlike
    // the greedy value -- a certified underestimate of the exact selection
    // optimum, which keeps the assembled dual bound an actual lower bound.
    double bound_value = 0.0;
    double const_term = 0.0;
    std::vector<int> selected;  // ascending user ids
    bool all_candidates_fit = false; // candidate set fit capacity outright
};

// Per-facility pricing problem: take the candidate users (coefficient <= 0)
// if they all fit under min(access, backhaul); otherwise admit them in
// nondecreasing coefficient/demand ratio order (ties: lower user index).
SubproblemResult solve_subproblem(const ProblemInstance& inst, int fac,
                                  const Multipliers& lam,
                                  bool skip_and_continue = false);

struct RelaxedSolution {
    Deployment y;
    std::vector<double> value;              // per facility, greedy
    std::vector<double> bound_value;        // per facility, fractional
    std::vector<std::vector<int>> selected; // per facility, ascending users
    std::vector<int> serve_count;           // per user, over open facilities
    double lower_bound = 0.0;
};

// Dual function evaluation.  The deployment guidance (y, selected users,
// serve counts) comes from the greedy whole-user values: the best catalog
// entry opens per macro site (ties: lowest index) and a non-macro site opens
// only when its best greedy value is strictly negative.  The reported
// lower_bound performs the same site-by-site minimization over the
// fractional values instead -- the greedy ones can overshoot the exact
// selection optimum and would not give a true bound -- and subtracts
// sum_j (l1_j + big_m * l2_j).
RelaxedSolution solve_relaxed_master(const ProblemInstance& inst,
                                     const Multipliers& lam,
                                     const RelaxationParams& params = {});

struct Subgradients {
    std::vector<double> g1, g2; // per user; <= 0 means relaxed-feasible
    double norm_sq = 0.0;

    bool zero() const { return norm_sq == 0.0; }
};

// Constraint residuals of a relaxed solution, used both to steer the
// multiplier updates and to detect complementary slackness.
Subgradients subgradients(const ProblemInstance& inst,
                          const RelaxedSolution& relaxed);

// Polyak-style step length s * (upper - lower_t) / ||g||^2.
double subgradient_step_size(double step_scale, double upper, double lower_t,
                             double norm_sq);

// lam <- max(0, lam + step * g), componentwise.
void apply_subgradient_step(Multipliers& lam, const Subgradients& g, double step);

// True when the relaxed solution is feasible for the dualized constraints
// and the multipliers are (numerically) orthogonal to the residuals:
// |lam . g| <= tol * (1 + |lower_t|).  At that point the bound is tight and
// iterating further cannot help.
bool complementary_slackness(const ProblemInstance& inst, const Multipliers& lam,
                             const Subgradients& g, double lower_t,
                             double tol = 1e-6);

} // namespace hetplan

#endif // HETPLAN_RELAXATION_HPP
