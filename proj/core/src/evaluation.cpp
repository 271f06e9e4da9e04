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

#include "hetplan/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hetplan {

namespace {

void collect_open(const ProblemInstance& inst, const Deployment& y,
                  std::vector<int>& out) {
    if (y.open.size() != inst.sites.size())
        throw std::invalid_argument("deployment size does not match instance");
    out.clear();
    for (int i = 0; i < inst.n_sites(); ++i) {
        const int k = y.open[i];
        if (k < 0) continue;
        if (k >= static_cast<int>(inst.sites[i].catalog.size()))
            throw std::invalid_argument("deployment catalog index out of range");
        out.push_back(inst.facility(i, k));
    }
}

// Interference sum a user sees from a set of open facilities, accumulated in
// ascending facility order.  Every SIR in this module is derived from this
// one accumulation so that assignment, spot checks and the feasibility
// replay agree bit for bit.
double interference_sum(const ProblemInstance& inst,
                        const std::vector<int>& open_facs, int user) {
    const std::size_t nu = inst.users.size();
    double total = 0.0;
    for (int f : open_facs)
        total += inst.interference_power[static_cast<std::size_t>(f) * nu + user];
    return total;
}

double sir_from_parts(double signal, double interference_total,
                      double own_term) {
    const double denom = interference_total - own_term;
    if (denom <= 0.0) return kInf;
    return signal / denom;
}

} // namespace

Assignment assign_users(const ProblemInstance& inst, const Deployment& y,
                        EvalWorkspace& ws) {
    const std::size_t nu = inst.users.size();
    const std::size_t nf = inst.fac_site.size();

    collect_open(inst, y, ws.open_facs);
    ws.best_power.assign(nu, 0.0);
    ws.best_fac.assign(nu, -1);
    ws.interference.assign(nu, 0.0);
    ws.serving.assign(nu, -1);
    ws.load.assign(nf, 0.0);

    // Pass 1: strongest received power wins; strict > keeps the lowest
    // (site, catalog) index on exact ties because facilities are visited in
    // ascending order.
    for (int f : ws.open_facs) {
        const double* rp = inst.received_power.data() + static_cast<std::size_t>(f) * nu;
        const double* ip = inst.interference_power.data() + static_cast<std::size_t>(f) * nu;
        for (std::size_t j = 0; j < nu; ++j) {
            ws.interference[j] += ip[j];
            if (rp[j] > ws.best_power[j]) {
                ws.best_power[j] = rp[j];
                ws.best_fac[j] = f;
            }
        }
    }

    // Pass 2: drop users that fall strictly below their SIR threshold.
    for (std::size_t j = 0; j < nu; ++j) {
        const int f = ws.best_fac[j];
        if (f < 0) continue;
        const double own = inst.interference_power[static_cast<std::size_t>(f) * nu + j];
        const double sir = sir_from_parts(ws.best_power[j], ws.interference[j], own);
        if (sir >= inst.users[j].sir_threshold) {
            ws.serving[j] = f;
            ws.load[f] += inst.users[j].demand;
        }
    }

    // Pass 3: enforce min(access, backhaul) per facility by shedding the
    // smallest demands first (ties: highest user index).  Interference is a
    // function of the open set only, so this cannot disturb pass 2.
    for (int f : ws.open_facs) {
        const double cap = inst.min_capacity[f];
        if (ws.load[f] <= cap) continue;
        ws.trim.clear();
        for (std::size_t j = 0; j < nu; ++j)
            if (ws.serving[j] == f)
                ws.trim.emplace_back(inst.users[j].demand, static_cast<int>(j));
        std::sort(ws.trim.begin(), ws.trim.end(),
                  [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
                      if (a.first != b.first) return a.first < b.first;
                      return a.second > b.second;
                  });
        for (const auto& [demand, j] : ws.trim) {
            if (ws.load[f] <= cap) break;
            ws.serving[j] = -1;
            ws.load[f] -= demand;
        }
    }

    Assignment x;
    x.serving = ws.serving;
    x.served_demand = ws.load;
    return x;
}

double objective_value(const ProblemInstance& inst, const Deployment& y,
                       const Assignment& x) {
    double cost = 0.0;
    for (int i = 0; i < inst.n_sites(); ++i)
        if (y.open[i] >= 0) cost += inst.sites[i].catalog[y.open[i]].cost;
    double covered = 0.0;
    for (int j = 0; j < inst.n_users(); ++j)
        if (x.serving[j] >= 0) covered += inst.users[j].demand;
    return cost - inst.bias_w * covered;
}

double evaluate(const ProblemInstance& inst, const Deployment& y,
                EvalWorkspace& ws) {
    const Assignment x = assign_users(inst, y, ws);
    return objective_value(inst, y, x);
}

double sir_of(const ProblemInstance& inst, const Deployment& y, int site,
              int k, int user) {
    if (site < 0 || site >= inst.n_sites() || y.open[site] != k)
        throw std::logic_error("sir_of: facility is not open under y");
    std::vector<int> open_facs;
    collect_open(inst, y, open_facs);
    const std::size_t nu = inst.users.size();
    const int f = inst.facility(site, k);
    const double total = interference_sum(inst, open_facs, user);
    const double own = inst.interference_power[static_cast<std::size_t>(f) * nu + user];
    return sir_from_parts(inst.received_power[static_cast<std::size_t>(f) * nu + user],
                          total, own);
}

ObjectiveReport objective_report(const ProblemInstance& inst,
                                 const Deployment& y, const Assignment& x) {
    ObjectiveReport rep;
    for (int i = 0; i < inst.n_sites(); ++i)
        if (y.open[i] >= 0) rep.cost += inst.sites[i].catalog[y.open[i]].cost;
    double total_demand = 0.0;
    std::vector<int> open_facs;
    collect_open(inst, y, open_facs);
    const std::size_t nu = inst.users.size();
    rep.per_user_sir.assign(nu, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t j = 0; j < nu; ++j) {
        total_demand += inst.users[j].demand;
        const int f = x.serving[j];
        if (f < 0) continue;
        rep.covered_demand += inst.users[j].demand;
        const double total = interference_sum(inst, open_facs, static_cast<int>(j));
        const double own = inst.interference_power[static_cast<std::size_t>(f) * nu + j];
        rep.per_user_sir[j] = sir_from_parts(
            inst.received_power[static_cast<std::size_t>(f) * nu + j], total, own);
    }
    rep.objective = rep.cost - inst.bias_w * rep.covered_demand;
    rep.coverage_fraction =
        total_demand > 0.0 ? rep.covered_demand / total_demand : 0.0;
    return rep;
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::macro_site_empty: return "macro_site_empty";
    case ViolationKind::serving_closed_facility: return "serving_closed_facility";
    case ViolationKind::sir_below_threshold: return "sir_below_threshold";
    case ViolationKind::big_m_too_small: return "big_m_too_small";
    case ViolationKind::access_capacity_exceeded: return "access_capacity_exceeded";
    case ViolationKind::backhaul_exceeded: return "backhaul_exceeded";
    case ViolationKind::served_demand_mismatch: return "served_demand_mismatch";
    case ViolationKind::user_unserved: return "user_unserved";
    }
    return "unknown";
}

std::string Violation::describe() const {
    std::ostringstream os;
    os << to_string(kind);
    if (site >= 0) os << " site=" << site;
    if (k >= 0) os << " k=" << k;
    if (user >= 0) os << " user=" << user;
    os << " slack=" << slack;
    return os.str();
}

FeasibilityReport check_feasibility(const ProblemInstance& inst,
                                    const Deployment& y, const Assignment& x,
                                    bool strict) {
    if (x.serving.size() != inst.users.size())
        throw std::invalid_argument("assignment size does not match instance");
    if (x.served_demand.size() != inst.fac_site.size())
        throw std::invalid_argument("served_demand size does not match instance");

    FeasibilityReport rep;
    std::vector<int> open_facs;
    collect_open(inst, y, open_facs);
    const std::size_t nu = inst.users.size();

    // Macro sites must not stay empty.
    for (int i = 0; i < inst.n_sites(); ++i)
        if (inst.sites[i].is_macro && y.open[i] < 0)
            rep.violations.push_back({ViolationKind::macro_site_empty, i, -1, -1, 0.0});

    // Serving facilities must be built, and the per-user SIR inequality must
    // hold: served users need SIR >= threshold, unserved users need the
    // linearization constant to dominate their scaled interference.
    for (std::size_t j = 0; j < nu; ++j) {
        const int f = x.serving[j];
        if (f >= 0) {
            if (f >= static_cast<int>(inst.fac_site.size()))
                throw std::invalid_argument("assignment facility id out of range");
            const int site = inst.fac_site[f];
            if (y.open[site] != inst.fac_k[f]) {
                rep.violations.push_back({ViolationKind::serving_closed_facility,
                                          site, inst.fac_k[f], static_cast<int>(j), 0.0});
                continue;
            }
            const double total = interference_sum(inst, open_facs, static_cast<int>(j));
            const double own =
                inst.interference_power[static_cast<std::size_t>(f) * nu + j];
            const double sir = sir_from_parts(
                inst.received_power[static_cast<std::size_t>(f) * nu + j], total, own);
            if (sir < inst.users[j].sir_threshold)
                rep.violations.push_back({ViolationKind::sir_below_threshold,
                                          site, inst.fac_k[f], static_cast<int>(j),
                                          sir - inst.users[j].sir_threshold});
        } else {
            const double scaled =
                inst.users[j].sir_threshold * interference_sum(inst, open_facs, static_cast<int>(j));
            if (scaled > inst.big_m)
                rep.violations.push_back({ViolationKind::big_m_too_small, -1, -1,
                                          static_cast<int>(j), inst.big_m - scaled});
        }
    }

    // Capacity replay from the serving map itself.
    std::vector<double> load(inst.fac_site.size(), 0.0);
    for (std::size_t j = 0; j < nu; ++j)
        if (x.serving[j] >= 0) load[x.serving[j]] += inst.users[j].demand;
    for (int f : open_facs) {
        const Site& site = inst.sites[inst.fac_site[f]];
        const FacilitySpec& spec = site.catalog[inst.fac_k[f]];
        if (load[f] > spec.access_capacity)
            rep.violations.push_back({ViolationKind::access_capacity_exceeded,
                                      inst.fac_site[f], inst.fac_k[f], -1,
                                      spec.access_capacity - load[f]});
        if (load[f] > site.backhaul_capacity)
            rep.violations.push_back({ViolationKind::backhaul_exceeded,
                                      inst.fac_site[f], inst.fac_k[f], -1,
                                      site.backhaul_capacity - load[f]});
    }

    // The assignment's own bookkeeping must agree with its serving map
    // (tolerance covers summation-order rounding only).
    for (std::size_t f = 0; f < inst.fac_site.size(); ++f) {
        const double diff = std::abs(x.served_demand[f] - load[f]);
        const double scale = std::max({1.0, std::abs(load[f]), std::abs(x.served_demand[f])});
        if (diff > 1e-9 * scale)
            rep.violations.push_back({ViolationKind::served_demand_mismatch,
                                      inst.fac_site[f], inst.fac_k[f], -1,
                                      -diff});
    }

    if (strict)
        for (std::size_t j = 0; j < nu; ++j)
            if (x.serving[j] < 0)
                rep.violations.push_back({ViolationKind::user_unserved, -1, -1,
                                          static_cast<int>(j), 0.0});

    return rep;
}

Deployment baseline_deployment(const ProblemInstance& inst) {
    Deployment y;
    y.open.assign(inst.sites.size(), -1);
    repair_macro_sites(inst, y);
    return y;
}

int repair_macro_sites(const ProblemInstance& inst, Deployment& y) {
    int repairs = 0;
    for (int i = 0; i < inst.n_sites(); ++i) {
        const Site& s = inst.sites[i];
        if (!s.is_macro || y.open[i] >= 0) continue;
        // Prefer the conventional entry; otherwise fall back to the
        // cheapest one (ties: lowest catalog index).
        int pick = -1;
        for (int k = 0; k < static_cast<int>(s.catalog.size()); ++k) {
            if (s.catalog[k].kind == FacilityKind::macro_conventional) {
                pick = k;
                break;
            }
        }
        if (pick < 0) {
            for (int k = 0; k < static_cast<int>(s.catalog.size()); ++k)
                if (pick < 0 || s.catalog[k].cost < s.catalog[pick].cost) pick = k;
        }
        y.open[i] = pick;
        ++repairs;
    }
    return repairs;
}

} // namespace hetplan
