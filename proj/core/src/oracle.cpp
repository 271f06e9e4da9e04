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

#include "hetplan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "hetplan/errors.hpp"

namespace hetplan {

namespace {

struct SearchState {
    const ProblemInstance* inst;
    std::vector<int> open_facs;
    // candidate facilities per DFS position (users reordered by demand)
    std::vector<std::vector<int>> candidates;
    std::vector<int> order;          // DFS position -> user index
    std::vector<double> suffix;      // remaining demand from position p on
    std::vector<double> residual;    // per facility: remaining capacity
    std::vector<int> pick;           // per position: chosen facility or -1
    std::vector<int> best_pick;
    double covered = 0.0;
    double best_covered = -1.0;
};

void dfs(SearchState& st, std::size_t pos) {
    if (st.covered + st.suffix[pos] <= st.best_covered) return; // cannot beat
    if (pos == st.order.size()) {
        // strict improvement only: first-found optimum is kept
        st.best_covered = st.covered;
        st.best_pick = st.pick;
        return;
    }
    const int user = st.order[pos];
    const double demand = st.inst->users[user].demand;
    for (int f : st.candidates[pos]) {
        if (st.residual[f] < demand) continue;
        st.residual[f] -= demand;
        st.covered += demand;
        st.pick[pos] = f;
        dfs(st, pos + 1);
        st.pick[pos] = -1;
        st.covered -= demand;
        st.residual[f] += demand;
    }
    dfs(st, pos + 1); // leave the user unserved
}

} // namespace

std::pair<Assignment, double> exact_assignment(const ProblemInstance& inst,
                                               const Deployment& y) {
    const std::size_t nu = inst.users.size();
    SearchState st;
    st.inst = &inst;
    for (int i = 0; i < inst.n_sites(); ++i)
        if (y.open[i] >= 0) st.open_facs.push_back(inst.facility(i, y.open[i]));

    // Per-user admissible facilities under the SIR rule.  The interference
    // seen from facility f is summed directly over the other open
    // facilities; this reference path shares no arithmetic with the greedy
    // heuristic it is used to judge.
    std::vector<std::vector<int>> admissible(nu);
    for (std::size_t j = 0; j < nu; ++j) {
        for (int f : st.open_facs) {
            double interference = 0.0;
            for (int g : st.open_facs)
                if (g != f)
                    interference += inst.interference_power[static_cast<std::size_t>(g) * nu + j];
            const double signal = inst.received_power[static_cast<std::size_t>(f) * nu + j];
            const bool ok = interference <= 0.0
                                ? true
                                : signal / interference >= inst.users[j].sir_threshold;
            if (ok) admissible[j].push_back(f);
        }
    }

    // Big demands first tightens the suffix bound early.
    st.order.resize(nu);
    for (std::size_t j = 0; j < nu; ++j) st.order[j] = static_cast<int>(j);
    std::sort(st.order.begin(), st.order.end(), [&](int a, int b) {
        if (inst.users[a].demand != inst.users[b].demand)
            return inst.users[a].demand > inst.users[b].demand;
        return a < b;
    });
    st.candidates.resize(nu);
    for (std::size_t p = 0; p < nu; ++p) st.candidates[p] = admissible[st.order[p]];
    st.suffix.assign(nu + 1, 0.0);
    for (std::size_t p = nu; p-- > 0;)
        st.suffix[p] = st.suffix[p + 1] + inst.users[st.order[p]].demand;

    st.residual.assign(inst.fac_site.size(), 0.0);
    for (int f : st.open_facs) {
        const Site& site = inst.sites[inst.fac_site[f]];
        const FacilitySpec& spec = site.catalog[inst.fac_k[f]];
        st.residual[f] = std::min(spec.access_capacity, site.backhaul_capacity);
    }
    st.pick.assign(nu, -1);
    st.best_pick.assign(nu, -1);

    dfs(st, 0);

    Assignment x;
    x.serving.assign(nu, -1);
    x.served_demand.assign(inst.fac_site.size(), 0.0);
    for (std::size_t p = 0; p < nu; ++p) {
        const int f = st.best_pick[p];
        if (f < 0) continue;
        x.serving[st.order[p]] = f;
        x.served_demand[f] += inst.users[st.order[p]].demand;
    }
    return {std::move(x), std::max(st.best_covered, 0.0)};
}

double deployment_space_size(const ProblemInstance& inst) {
    double size = 1.0;
    for (const Site& s : inst.sites) {
        const double digits =
            static_cast<double>(s.catalog.size()) + (s.is_macro ? 0.0 : 1.0);
        size *= digits;
    }
    return size;
}

OracleResult exhaustive_best(const ProblemInstance& inst,
                             const OracleLimits& limits) {
    if (inst.n_users() > limits.max_users) {
        std::ostringstream os;
        os << "exhaustive search refused: " << inst.n_users()
           << " users exceed the limit of " << limits.max_users;
        throw LimitError(os.str(), inst.n_users(), limits.max_users);
    }
    const double space = deployment_space_size(inst);
    if (space > limits.max_deployments) {
        std::ostringstream os;
        os << "exhaustive search refused: " << space
           << " deployments exceed the limit of " << limits.max_deployments;
        throw LimitError(os.str(), space, limits.max_deployments);
    }

    // Odometer over sites, site 0 most significant, "closed" (-1) below
    // catalog entry 0 at small-cell sites; macro sites are never closed.
    // Visiting order is therefore increasing lexicographic order, and only
    // strict improvements replace the incumbent, so ties resolve to the
    // lexicographically smallest deployment.
    OracleResult res;
    Deployment y;
    y.open.assign(inst.sites.size(), 0);
    for (int i = 0; i < inst.n_sites(); ++i)
        y.open[i] = inst.sites[i].is_macro ? 0 : -1;

    bool done = false;
    while (!done) {
        auto [x, covered] = exact_assignment(inst, y);
        double cost = 0.0;
        for (int i = 0; i < inst.n_sites(); ++i)
            if (y.open[i] >= 0) cost += inst.sites[i].catalog[y.open[i]].cost;
        const double objective = cost - inst.bias_w * covered;
        res.enumerated += 1.0;
        if (res.enumerated == 1.0 || objective < res.best_objective) {
            res.best_objective = objective;
            res.best_covered = covered;
            res.best_y = y;
            res.best_x = std::move(x);
        }

        // increment odometer, rightmost site fastest
        done = true;
        for (int i = inst.n_sites(); i-- > 0;) {
            const int hi = static_cast<int>(inst.sites[i].catalog.size()) - 1;
            if (y.open[i] < hi) {
                ++y.open[i];
                done = false;
                break;
            }
            y.open[i] = inst.sites[i].is_macro ? 0 : -1;
        }
    }
    return res;
}

} // namespace hetplan
