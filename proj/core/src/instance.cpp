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

#include "hetplan/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hetplan/errors.hpp"

namespace hetplan {

double hata_path_loss_db(double distance_m, double frequency_mhz,
                         double base_height_m, double mobile_height_m) {
    if (!(frequency_mhz >= 150.0 && frequency_mhz <= 1500.0)) {
        std::ostringstream os;
        os << "hata_path_loss_db: frequency " << frequency_mhz
           << " MHz outside the 150-1500 MHz model band";
        throw ConfigError(os.str());
    }
    if (!(base_height_m > 0.0) || !(mobile_height_m > 0.0) ||
        !(distance_m >= 0.0)) {
        throw ConfigError("hata_path_loss_db: heights must be positive and "
                          "distance non-negative");
    }
    const double d_km = std::max(distance_m, 10.0) / 1000.0;
    const double lf = std::log10(frequency_mhz);
    const double lhb = std::log10(base_height_m);
    const double a_hm =
        (1.1 * lf - 0.7) * mobile_height_m - (1.56 * lf - 0.8);
    return 69.55 + 26.16 * lf - 13.82 * lhb - a_hm +
           (44.9 - 6.55 * lhb) * std::log10(d_km);
}

const char* to_string(FacilityKind kind) {
    switch (kind) {
    case FacilityKind::small_cell: return "small_cell";
    case FacilityKind::macro_conventional: return "macro_conventional";
    case FacilityKind::macro_massive_mimo: return "macro_massive_mimo";
    }
    return "unknown";
}

FacilityKind facility_kind_from_string(const std::string& name) {
    if (name == "small_cell") return FacilityKind::small_cell;
    if (name == "macro_conventional") return FacilityKind::macro_conventional;
    if (name == "macro_massive_mimo") return FacilityKind::macro_massive_mimo;
    throw ParseError("unknown facility kind '" + name + "'");
}

void ProblemInstance::finalize() {
    const int ns = n_sites();
    const std::size_t nu = users.size();
    fac_offset.assign(ns + 1, 0);
    fac_site.clear();
    fac_k.clear();
    for (int i = 0; i < ns; ++i) {
        fac_offset[i] = static_cast<int>(fac_site.size());
        for (int k = 0; k < static_cast<int>(sites[i].catalog.size()); ++k) {
            fac_site.push_back(i);
            fac_k.push_back(k);
        }
    }
    fac_offset[ns] = static_cast<int>(fac_site.size());

    const std::size_t nf = fac_site.size();
    if (gains.size() != nf * nu) {
        std::ostringstream os;
        os << "gain table has " << gains.size() << " entries, expected "
           << nf * nu << " (" << nf << " facilities x " << nu << " users)";
        throw ValidationError(os.str());
    }
    received_power.resize(nf * nu);
    interference_power.resize(nf * nu);
    min_capacity.resize(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        const Site& site = sites[fac_site[f]];
        const FacilitySpec& spec = site.catalog[fac_k[f]];
        const double p_mw = spec.tx_power_mw();
        const double e = spec.interference_suppression;
        min_capacity[f] = std::min(spec.access_capacity, site.backhaul_capacity);
        for (std::size_t j = 0; j < nu; ++j) {
            const double rp = p_mw * gains[f * nu + j];
            received_power[f * nu + j] = rp;
            interference_power[f * nu + j] = rp * e;
        }
    }
}

double ProblemInstance::tight_big_m() const {
    const std::size_t nu = users.size();
    const std::size_t nf = fac_site.size();
    double worst = 0.0;
    for (std::size_t j = 0; j < nu; ++j) {
        double total = 0.0;
        for (std::size_t f = 0; f < nf; ++f)
            total += interference_power[f * nu + j];
        worst = std::max(worst, users[j].sir_threshold * total);
    }
    return worst;
}

void ProblemInstance::set_tight_big_m() {
    if (!finalized()) finalize();
    big_m = tight_big_m();
}

namespace {

void fail(const std::string& msg) { throw ValidationError(msg); }

std::string at(const char* what, int idx) {
    std::ostringstream os;
    os << what << " " << idx;
    return os.str();
}

} // namespace

void validate_instance(const ProblemInstance& inst) {
    if (!inst.finalized())
        fail("instance not finalized (internal error)");
    if (!(inst.bias_w > 0.0) || !std::isfinite(inst.bias_w))
        fail("bias_w must be a positive finite real");
    if (!(inst.big_m >= 0.0) || std::isnan(inst.big_m))
        fail("big_m must be non-negative");
    if (inst.sites.empty()) fail("instance has no sites");

    for (int i = 0; i < inst.n_sites(); ++i) {
        const Site& s = inst.sites[i];
        const std::string where = at("site", i);
        if (!std::isfinite(s.x) || !std::isfinite(s.y))
            fail(where + ": position must be finite");
        if (s.catalog.empty()) fail(where + ": catalog is empty");
        if (!(s.backhaul_capacity > 0.0))
            fail(where + ": backhaul capacity must be positive");
        for (int k = 0; k < static_cast<int>(s.catalog.size()); ++k) {
            const FacilitySpec& fs = s.catalog[k];
            const std::string fwhere = where + ", catalog entry " + std::to_string(k);
            const bool macro_kind = fs.kind != FacilityKind::small_cell;
            if (macro_kind != s.is_macro)
                fail(fwhere + ": facility kind " + to_string(fs.kind) +
                     (s.is_macro ? " not allowed at a macro site"
                                 : " not allowed at a small-cell site"));
            if (!(fs.cost >= 0.0) || !std::isfinite(fs.cost))
                fail(fwhere + ": cost must be a non-negative finite real");
            if (!std::isfinite(fs.tx_power_dbm))
                fail(fwhere + ": transmit power must be finite");
            if (!(fs.access_capacity > 0.0))
                fail(fwhere + ": access capacity must be positive");
            if (!(fs.interference_suppression > 0.0) ||
                !(fs.interference_suppression <= 1.0))
                fail(fwhere + ": interference suppression must lie in (0, 1]");
        }
    }
    for (int j = 0; j < inst.n_users(); ++j) {
        const User& u = inst.users[j];
        const std::string where = at("user", j);
        if (!std::isfinite(u.x) || !std::isfinite(u.y))
            fail(where + ": position must be finite");
        if (!(u.demand > 0.0) || !std::isfinite(u.demand))
            fail(where + ": demand must be a positive finite real");
        if (!(u.sir_threshold > 0.0) || !std::isfinite(u.sir_threshold))
            fail(where + ": SIR threshold must be a positive finite real");
    }
    for (std::size_t g = 0; g < inst.gains.size(); ++g) {
        if (!(inst.gains[g] > 0.0) || !std::isfinite(inst.gains[g])) {
            std::ostringstream os;
            os << "gain entry " << g << " must be a positive finite real";
            fail(os.str());
        }
    }
    // The linearization constant must dominate every user's scaled worst-case
    // interference or the coverage model silently loosens.
    const double floor_m = inst.tight_big_m();
    if (inst.big_m < floor_m * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "big_m " << inst.big_m << " is below its safe floor " << floor_m;
        fail(os.str());
    }
    if (!std::isfinite(inst.big_m)) fail("big_m must be finite");
}

ProblemInstance generate_instance(const GeneratorConfig& cfg) {
    if (cfg.n_users <= 0) throw ConfigError("generator: n_users must be >= 1");
    if (cfg.n_small_sites < 0)
        throw ConfigError("generator: n_small_sites must be >= 0");
    if (cfg.macro_positions.empty() && cfg.n_small_sites == 0)
        throw ConfigError("generator: no sites at all");
    if (!(cfg.area_width > 0.0) || !(cfg.area_height > 0.0))
        throw ConfigError("generator: area dimensions must be positive");
    if (!(cfg.demand_lo > 0.0) || !(cfg.demand_hi >= cfg.demand_lo))
        throw ConfigError("generator: demand range must satisfy 0 < lo <= hi");
    if (!(cfg.small_backhaul_lo > 0.0) ||
        !(cfg.small_backhaul_hi >= cfg.small_backhaul_lo))
        throw ConfigError("generator: backhaul range must satisfy 0 < lo <= hi");

    ProblemInstance inst;
    inst.bias_w = cfg.bias_w;

    const FacilitySpec macro_conv{FacilityKind::macro_conventional,
                                  cfg.macro_conv_cost, cfg.macro_power_dbm,
                                  cfg.macro_conv_access, 1.0};
    const FacilitySpec macro_massive{
        FacilityKind::macro_massive_mimo, cfg.macro_massive_cost,
        cfg.macro_power_dbm, cfg.macro_massive_access,
        db_to_linear(cfg.massive_suppression_db)};
    const FacilitySpec small_cell{FacilityKind::small_cell, cfg.small_cost,
                                  cfg.small_power_dbm, cfg.small_access, 1.0};

    for (const auto& [mx, my] : cfg.macro_positions) {
        Site s;
        s.x = mx;
        s.y = my;
        s.is_macro = true;
        s.backhaul_capacity = kInf;
        s.catalog = {macro_conv, macro_massive};
        inst.sites.push_back(std::move(s));
    }

    Rng rng(cfg.seed);
    if (cfg.grid_small_sites) {
        const int cols = static_cast<int>(
            std::ceil(std::sqrt(static_cast<double>(cfg.n_small_sites))));
        const int rows =
            cols > 0 ? (cfg.n_small_sites + cols - 1) / cols : 0;
        for (int n = 0; n < cfg.n_small_sites; ++n) {
            Site s;
            s.is_macro = false;
            s.x = (n % cols + 0.5) * cfg.area_width / cols;
            s.y = (n / cols + 0.5) * cfg.area_height / rows;
            s.catalog = {small_cell};
            inst.sites.push_back(std::move(s));
            // Burn the two position draws so the layout flag changes
            // positions and nothing else downstream.
            rng.uniform(0.0, 1.0);
            rng.uniform(0.0, 1.0);
        }
    } else {
        for (int n = 0; n < cfg.n_small_sites; ++n) {
            Site s;
            s.is_macro = false;
            s.x = rng.uniform(0.0, cfg.area_width);
            s.y = rng.uniform(0.0, cfg.area_height);
            s.catalog = {small_cell};
            inst.sites.push_back(std::move(s));
        }
    }
    // Backhaul draws come after all position draws so grid and i.i.d.
    // layouts consume the stream identically from here on.
    for (int n = 0; n < cfg.n_small_sites; ++n) {
        inst.sites[cfg.macro_positions.size() + n].backhaul_capacity =
            rng.uniform(cfg.small_backhaul_lo, cfg.small_backhaul_hi);
    }

    const double gamma = db_to_linear(cfg.sir_threshold_db);
    inst.users.resize(cfg.n_users);
    for (auto& u : inst.users) {
        u.x = rng.uniform(0.0, cfg.area_width);
        u.y = rng.uniform(0.0, cfg.area_height);
        u.sir_threshold = gamma;
    }
    for (auto& u : inst.users) u.demand = rng.uniform(cfg.demand_lo, cfg.demand_hi);

    // Channel gains from Hata path loss; both catalog entries of a macro
    // share an antenna, so they share a gain column too.
    const std::size_t nu = inst.users.size();
    std::size_t nf = 0;
    for (const auto& s : inst.sites) nf += s.catalog.size();
    inst.gains.resize(nf * nu);
    std::size_t f = 0;
    for (const auto& s : inst.sites) {
        const double hb = s.is_macro ? cfg.macro_antenna_m : cfg.small_antenna_m;
        for (std::size_t k = 0; k < s.catalog.size(); ++k, ++f) {
            for (std::size_t j = 0; j < nu; ++j) {
                const User& u = inst.users[j];
                const double d = std::hypot(u.x - s.x, u.y - s.y);
                const double loss = hata_path_loss_db(
                    d, cfg.frequency_mhz, hb, cfg.user_antenna_m);
                inst.gains[f * nu + j] = db_to_linear(-loss);
            }
        }
    }

    inst.finalize();
    inst.big_m = inst.tight_big_m();
    validate_instance(inst);
    return inst;
}

} // namespace hetplan
