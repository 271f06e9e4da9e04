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

#include "hetplan/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hetplan/parallel.hpp"

namespace hetplan {

void knapsack_terms(const ProblemInstance& inst, int fac, const Multipliers& lam,
                    std::vector<double>& coeff, double& const_term) {
    const std::size_t nu = inst.users.size();
    if (lam.l1.size() != nu || lam.l2.size() != nu)
        throw std::invalid_argument("multiplier size does not match instance");
    const FacilitySpec& spec = inst.spec_of(fac);
    const double e = spec.interference_suppression;
    const double* rp = inst.received_power.data() + static_cast<std::size_t>(fac) * nu;

    coeff.resize(nu);
    const_term = spec.cost;
    for (std::size_t j = 0; j < nu; ++j) {
        const User& u = inst.users[j];
        const double p = rp[j];
        // Price of serving j here: the one-server price, minus the coverage
        // reward, minus what serving removes from the dualized SIR
        // inequality (own signal, own scaled self-interference, big-M
        // activation).
        coeff[j] = lam.l1[j] - u.demand * inst.bias_w -
                   (p + u.sir_threshold * p * e - inst.big_m) * lam.l2[j];
        // Opening the facility injects scaled interference everywhere.
        const_term += lam.l2[j] * u.sir_threshold * p * e;
    }
}

SubproblemResult solve_subproblem(const ProblemInstance& inst, int fac,
                                  const Multipliers& lam,
                                  bool skip_and_continue) {
    SubproblemResult res;
    std::vector<double> coeff;
    knapsack_terms(inst, fac, lam, coeff, res.const_term);

    const double cap = inst.min_capacity[fac];
    std::vector<int> candidates;
    double candidate_demand = 0.0;
    for (int j = 0; j < inst.n_users(); ++j) {
        if (coeff[j] <= 0.0) {
            candidates.push_back(j);
            candidate_demand += inst.users[j].demand;
        }
    }

    res.value = res.const_term;
    if (candidate_demand <= cap) {
        // Every worthwhile user fits: no knapsack needed, and the greedy
        // selection is the exact optimum.
        res.all_candidates_fit = true;
        res.selected = std::move(candidates);
        for (int j : res.selected) res.value += coeff[j];
        res.bound_value = res.value;
        return res;
    }

    // Greedy on coefficient/demand, most negative first (ties: lower user
    // index).  Default admits in order and stops at the first candidate
    // that does not fit; the skip variant keeps scanning for smaller ones.
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        const double ra = coeff[a] / inst.users[a].demand;
        const double rb = coeff[b] / inst.users[b].demand;
        if (ra != rb) return ra < rb;
        return a < b;
    });
    // The bound side relaxes whole-user service: fill in the same ratio
    // order and finish with a fractional share of the first candidate that
    // no longer fits.  That is the linear-relaxation optimum, so it cannot
    // sit above the exact whole-user optimum the way the greedy value can.
    res.bound_value = res.const_term;
    double bound_load = 0.0;
    for (int j : candidates) {
        const double r = inst.users[j].demand;
        if (bound_load + r <= cap) {
            bound_load += r;
            res.bound_value += coeff[j];
        } else {
            res.bound_value += coeff[j] * (cap - bound_load) / r;
            break;
        }
    }
    double load = 0.0;
    for (int j : candidates) {
        if (load + inst.users[j].demand <= cap) {
            load += inst.users[j].demand;
            res.selected.push_back(j);
            res.value += coeff[j];
        } else if (!skip_and_continue) {
            break;
        }
    }
    std::sort(res.selected.begin(), res.selected.end());
    return res;
}

RelaxedSolution solve_relaxed_master(const ProblemInstance& inst,
                                     const Multipliers& lam,
                                     const RelaxationParams& params) {
    const int nf = inst.n_facilities();
    RelaxedSolution sol;
    sol.value.resize(nf);
    sol.bound_value.resize(nf);
    sol.selected.resize(nf);

    parallel_for(static_cast<std::size_t>(nf), params.threads, [&](std::size_t f) {
        SubproblemResult sub = solve_subproblem(inst, static_cast<int>(f), lam,
                                                params.knapsack_skip_and_continue);
        sol.value[f] = sub.value;
        sol.bound_value[f] = sub.bound_value;
        sol.selected[f] = std::move(sub.selected);
    });

    // Deployment guidance minimizes greedy values; the bound minimizes the
    // fractional ones independently, since argmins can differ and only the
    // fractional sum is a certified lower bound.
    sol.y.open.assign(inst.sites.size(), -1);
    double open_bound = 0.0;
    for (int i = 0; i < inst.n_sites(); ++i) {
        const Site& s = inst.sites[i];
        int best_k = 0;
        double best_b = sol.bound_value[inst.facility(i, 0)];
        for (int k = 1; k < static_cast<int>(s.catalog.size()); ++k) {
            const int f = inst.facility(i, k);
            if (sol.value[f] < sol.value[inst.facility(i, best_k)]) best_k = k;
            best_b = std::min(best_b, sol.bound_value[f]);
        }
        const double best_v = sol.value[inst.facility(i, best_k)];
        if (s.is_macro) {
            sol.y.open[i] = best_k; // a macro site always builds something
            open_bound += best_b;
        } else {
            if (best_v < 0.0) sol.y.open[i] = best_k;
            open_bound += std::min(0.0, best_b);
        }
    }

    sol.serve_count.assign(inst.users.size(), 0);
    for (int i = 0; i < inst.n_sites(); ++i) {
        if (sol.y.open[i] < 0) continue;
        for (int j : sol.selected[inst.facility(i, sol.y.open[i])])
            ++sol.serve_count[j];
    }

    double dual_constant = 0.0;
    for (std::size_t j = 0; j < inst.users.size(); ++j)
        dual_constant += lam.l1[j] + inst.big_m * lam.l2[j];
    sol.lower_bound = open_bound - dual_constant;
    return sol;
}

Subgradients subgradients(const ProblemInstance& inst,
                          const RelaxedSolution& relaxed) {
    const std::size_t nu = inst.users.size();
    Subgradients g;
    g.g1.resize(nu);
    g.g2.resize(nu);

    std::vector<double> interference(nu, 0.0); // sum of P*E over open facs
    std::vector<double> own_pe(nu, 0.0);       // P*E over facs serving j
    std::vector<double> own_p(nu, 0.0);        // P over facs serving j
    for (int i = 0; i < inst.n_sites(); ++i) {
        if (relaxed.y.open[i] < 0) continue;
        const int f = inst.facility(i, relaxed.y.open[i]);
        const double* rp = inst.received_power.data() + static_cast<std::size_t>(f) * nu;
        const double* ip = inst.interference_power.data() + static_cast<std::size_t>(f) * nu;
        const std::vector<int>& sel = relaxed.selected[f];
        std::size_t ptr = 0;
        for (std::size_t j = 0; j < nu; ++j) {
            interference[j] += ip[j];
            if (ptr < sel.size() && sel[ptr] == static_cast<int>(j)) {
                own_pe[j] += ip[j];
                own_p[j] += rp[j];
                ++ptr;
            }
        }
    }

    for (std::size_t j = 0; j < nu; ++j) {
        const int served = relaxed.serve_count[j];
        g.g1[j] = static_cast<double>(served) - 1.0;
        g.g2[j] = inst.users[j].sir_threshold * (interference[j] - own_pe[j]) -
                  own_p[j] - (1.0 - static_cast<double>(served)) * inst.big_m;
        g.norm_sq += g.g1[j] * g.g1[j] + g.g2[j] * g.g2[j];
    }
    return g;
}

double subgradient_step_size(double step_scale, double upper, double lower_t,
                             double norm_sq) {
    if (norm_sq <= 0.0) return 0.0;
    return step_scale * (upper - lower_t) / norm_sq;
}

void apply_subgradient_step(Multipliers& lam, const Subgradients& g, double step) {
    for (std::size_t j = 0; j < lam.l1.size(); ++j) {
        lam.l1[j] = std::max(0.0, lam.l1[j] + step * g.g1[j]);
        lam.l2[j] = std::max(0.0, lam.l2[j] + step * g.g2[j]);
    }
}

bool complementary_slackness(const ProblemInstance& inst, const Multipliers& lam,
                             const Subgradients& g, double lower_t, double tol) {
    // Residual feasibility first; g1 is integer-valued so exact, g2 gets a
    // scale-aware slack for summation rounding.
    const double g2_tol = 1e-9 * (1.0 + inst.big_m);
    for (std::size_t j = 0; j < g.g1.size(); ++j) {
        if (g.g1[j] > 0.0) return false;
        if (g.g2[j] > g2_tol) return false;
    }
    double inner = 0.0;
    for (std::size_t j = 0; j < g.g1.size(); ++j)
        inner += lam.l1[j] * g.g1[j] + lam.l2[j] * g.g2[j];
    return std::abs(inner) <= tol * (1.0 + std::abs(lower_t));
}

} // namespace hetplan
