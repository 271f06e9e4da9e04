// Shared builders for the test suite: hand-built instances with explicit
// gain tables (exact goldens) and a family of randomized tiny instances
// whose cost/coverage scales actually compete, so optimizer decisions are
// non-trivial.
#ifndef HETPLAN_TESTS_SUPPORT_HPP
#define HETPLAN_TESTS_SUPPORT_HPP

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "hetplan/evaluation.hpp"
#include "hetplan/instance.hpp"

namespace hetplan::testing {

struct SiteSpec {
    double x, y;
    bool is_macro;
    double backhaul;
    std::vector<FacilitySpec> catalog;
};

// Builds a finalized instance from explicit parts.  `gains` is
// facility-major, facilities numbered site by site in catalog order; pass
// big_m <= 0 to use the tight value.
inline ProblemInstance build_instance(const std::vector<SiteSpec>& sites,
                                      const std::vector<User>& users,
                                      const std::vector<double>& gains,
                                      double bias_w = 0.2, double big_m = -1.0) {
    ProblemInstance inst;
    inst.bias_w = bias_w;
    for (const SiteSpec& s : sites) {
        Site site;
        site.x = s.x;
        site.y = s.y;
        site.is_macro = s.is_macro;
        site.backhaul_capacity = s.backhaul;
        site.catalog = s.catalog;
        inst.sites.push_back(std::move(site));
    }
    inst.users = users;
    inst.gains = gains;
    inst.finalize();
    inst.big_m = big_m > 0.0 ? big_m : inst.tight_big_m();
    return inst;
}

inline FacilitySpec small_fac(double cost, double power_dbm, double access,
                              double suppression = 1.0) {
    return {FacilityKind::small_cell, cost, power_dbm, access, suppression};
}

inline FacilitySpec conv_fac(double cost, double power_dbm, double access) {
    return {FacilityKind::macro_conventional, cost, power_dbm, access, 1.0};
}

inline FacilitySpec massive_fac(double cost, double power_dbm, double access,
                                double suppression) {
    return {FacilityKind::macro_massive_mimo, cost, power_dbm, access, suppression};
}

// Randomized tiny instance: 2 macro sites (conventional + massive entries),
// 1-3 small-cell sites, 4-8 users in a 1 km square.  Gains follow the urban
// path-loss curve; demands and capacities live on an abstract scale where
// build costs genuinely compete with coverage reward, so optima are not
// "open everything".  Access caps clear any plausible attached load, so the
// economics are SIR- and cost-driven (upgrades buy interference suppression,
// small cells buy local coverage) and only the heaviest draws ever trim.
inline ProblemInstance random_tiny_instance(Rng& rng) {
    const int n_small = 1 + static_cast<int>(rng.uniform(0.0, 3.0));
    const int n_users = 4 + static_cast<int>(rng.uniform(0.0, 5.0));
    const double massive_cost = rng.uniform(2.0, 9.0);
    const double gamma = db_to_linear(8.0);

    ProblemInstance inst;
    inst.bias_w = 0.2;
    for (int m = 0; m < 2; ++m) {
        Site s;
        s.x = m == 0 ? 250.0 : 750.0;
        s.y = 500.0;
        s.is_macro = true;
        s.backhaul_capacity = kInf;
        s.catalog = {conv_fac(0.0, 46.0, rng.uniform(45.0, 90.0)),
                     massive_fac(massive_cost, 46.0, rng.uniform(100.0, 200.0),
                                 db_to_linear(-20.0))};
        inst.sites.push_back(std::move(s));
    }
    for (int i = 0; i < n_small; ++i) {
        Site s;
        s.x = rng.uniform(0.0, 1000.0);
        s.y = rng.uniform(0.0, 1000.0);
        s.is_macro = false;
        s.backhaul_capacity = rng.uniform(20.0, 45.0);
        s.catalog = {small_fac(rng.uniform(0.2, 1.5), 30.0, rng.uniform(25.0, 50.0))};
        inst.sites.push_back(std::move(s));
    }
    // Hotspot placement: most users huddle near some site (macro or small)
    // and carry the heavy demand; the rest roam the whole square with light
    // demand.  Roamers land in the contested band between cells often
    // enough to keep SIR economics interesting without dominating value.
    for (int j = 0; j < n_users; ++j) {
        User u;
        if (rng.uniform01() < 0.75) {
            const auto& near =
                inst.sites[static_cast<std::size_t>(rng.uniform(0.0, 1.0) *
                                                    static_cast<double>(inst.sites.size()))];
            u.x = std::clamp(near.x + rng.uniform(-140.0, 140.0), 0.0, 1000.0);
            u.y = std::clamp(near.y + rng.uniform(-140.0, 140.0), 0.0, 1000.0);
            u.demand = 8.0 + std::floor(rng.uniform(0.0, 8.0));
        } else {
            u.x = rng.uniform(0.0, 1000.0);
            u.y = rng.uniform(0.0, 1000.0);
            u.demand = 1.0 + std::floor(rng.uniform(0.0, 2.0));
        }
        u.sir_threshold = gamma;
        inst.users.push_back(u);
    }

    const std::size_t nu = inst.users.size();
    std::size_t nf = 0;
    for (const auto& s : inst.sites) nf += s.catalog.size();
    inst.gains.resize(nf * nu);
    std::size_t f = 0;
    for (const auto& s : inst.sites) {
        const double hb = s.is_macro ? 30.0 : 10.0;
        for (std::size_t k = 0; k < s.catalog.size(); ++k, ++f) {
            for (std::size_t j = 0; j < nu; ++j) {
                const double d = std::hypot(inst.users[j].x - s.x, inst.users[j].y - s.y);
                inst.gains[f * nu + j] =
                    db_to_linear(-hata_path_loss_db(d, 1500.0, hb, 1.5));
            }
        }
    }
    inst.finalize();
    inst.big_m = inst.tight_big_m();
    return inst;
}

// A random legal deployment: macro sites always pick an entry, non-macro
// sites open with probability p_open.
inline Deployment random_deployment(const ProblemInstance& inst, Rng& rng,
                                    double p_open = 0.5) {
    Deployment y;
    y.open.assign(inst.sites.size(), -1);
    for (int i = 0; i < inst.n_sites(); ++i) {
        const int nk = static_cast<int>(inst.sites[i].catalog.size());
        if (inst.sites[i].is_macro) {
            y.open[i] = static_cast<int>(rng.uniform(0.0, static_cast<double>(nk)));
            if (y.open[i] >= nk) y.open[i] = nk - 1;
        } else if (rng.uniform01() < p_open) {
            y.open[i] = static_cast<int>(rng.uniform(0.0, static_cast<double>(nk)));
            if (y.open[i] >= nk) y.open[i] = nk - 1;
        }
    }
    return y;
}

// ---- subprocess helper for CLI tests -------------------------------------

struct CommandResult {
    int exit_code = -1;
    std::string output; // stdout+stderr interleaved
};

// Runs a shell command, capturing combined output.  Used only by tests.
inline CommandResult run_command(const std::string& cmd) {
    CommandResult res;
    const std::string full = cmd + " 2>&1";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) return res;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.output.append(buf.data(), n);
    const int status = pclose(pipe);
    res.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return res;
}

// Path of the installed CLI binary, provided by the build via environment.
inline std::string cli_path() {
    const char* p = std::getenv("HETPLAN_CLI");
    return p ? p : "";
}

} // namespace hetplan::testing

#endif // HETPLAN_TESTS_SUPPORT_HPP
