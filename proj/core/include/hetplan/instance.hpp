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

#ifndef HETPLAN_INSTANCE_HPP
#define HETPLAN_INSTANCE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace hetplan {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// --------------------------------------------------------------------------
// Radio helpers
// --------------------------------------------------------------------------

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

// Okumura-Hata median path loss, urban small/medium-city variant, in dB.
//
//   L = 69.55 + 26.16 log10 f - 13.82 log10 hb - a(hm)
//       + (44.9 - 6.55 log10 hb) log10 d
//   a(hm) = (1.1 log10 f - 0.7) hm - (1.56 log10 f - 0.8)
//
// with f in MHz, hb/hm in metres and d in km.  Distances below 10 m are
// clamped to 10 m so co-located points stay finite.  The frequency must lie
// in the model's 150-1500 MHz band; antenna heights are deliberately not
// range-checked (the planning scenarios drive 10 m pole sites through the
// same curve).
double hata_path_loss_db(double distance_m, double frequency_mhz,
                         double base_height_m, double mobile_height_m);

// --------------------------------------------------------------------------
// Problem data
// --------------------------------------------------------------------------

enum class FacilityKind { small_cell, macro_conventional, macro_massive_mimo };

const char* to_string(FacilityKind kind);
FacilityKind facility_kind_from_string(const std::string& name);

// One buildable option at a site: what it costs, how loud it is, how much
// traffic it can serve and how strongly its signal leaks into other cells'
// SIR denominators (interference_suppression is a linear factor in (0,1];
// beamformed arrays sit well below 1, everything else at exactly 1).
struct FacilitySpec {
    FacilityKind kind = FacilityKind::small_cell;
    double cost = 0.0;
    double tx_power_dbm = 0.0;
    double access_capacity = 0.0;          // bit/s
    double interference_suppression = 1.0; // linear

    double tx_power_mw() const { return dbm_to_mw(tx_power_dbm); }

    friend bool operator==(const FacilitySpec& a, const FacilitySpec& b) {
        return a.kind == b.kind && a.cost == b.cost &&
               a.tx_power_dbm == b.tx_power_dbm &&
               a.access_capacity == b.access_capacity &&
               a.interference_suppression == b.interference_suppression;
    }
};

struct Site {
    double x = 0.0, y = 0.0; // metres
    bool is_macro = false;
    double backhaul_capacity = kInf; // bit/s; fibre macros are unconstrained
    std::vector<FacilitySpec> catalog;

    friend bool operator==(const Site& a, const Site& b) {
        return a.x == b.x && a.y == b.y && a.is_macro == b.is_macro &&
               a.backhaul_capacity == b.backhaul_capacity &&
               a.catalog == b.catalog;
    }
};

struct User {
    double x = 0.0, y = 0.0;
    double demand = 0.0;        // bit/s
    double sir_threshold = 1.0; // linear

    friend bool operator==(const User& a, const User& b) {
        return a.x == b.x && a.y == b.y && a.demand == b.demand &&
               a.sir_threshold == b.sir_threshold;
    }
};

// Full planning input.  `gains` is facility-major: the channel gain from
// catalog entry k of site i to user j lives at
//     gains[(fac_offset[i] + k) * n_users() + j]
// where facilities are numbered site by site in catalog order.  finalize()
// derives that numbering plus flat power tables; call it after building an
// instance by hand (generate/load do it for you).
struct ProblemInstance {
    double bias_w = 0.2; // objective weight on covered demand
    double big_m = 0.0;  // SIR linearization constant
    std::vector<Site> sites;
    std::vector<User> users;
    std::vector<double> gains;

    // Derived by finalize(); not serialized, not compared.
    std::vector<int> fac_offset; // size n_sites()+1
    std::vector<int> fac_site;   // facility -> site
    std::vector<int> fac_k;      // facility -> catalog index
    std::vector<double> received_power;     // mW, [fac * n_users() + j]
    std::vector<double> interference_power; // received_power * E
    std::vector<double> min_capacity;       // min(access, backhaul) per fac

    int n_sites() const { return static_cast<int>(sites.size()); }
    int n_users() const { return static_cast<int>(users.size()); }
    int n_facilities() const { return static_cast<int>(fac_site.size()); }
    bool finalized() const { return fac_offset.size() == sites.size() + 1; }

    int facility(int site, int k) const { return fac_offset[site] + k; }
    const FacilitySpec& spec_of(int fac) const {
        return sites[fac_site[fac]].catalog[fac_k[fac]];
    }
    double gain(int site, int k, int user) const {
        return gains[static_cast<std::size_t>(facility(site, k)) * users.size() + user];
    }

    // Builds the derived tables above.  Throws ValidationError if the gain
    // table does not match the site catalogs times the user count.
    void finalize();

    // Smallest constant that keeps the SIR linearization exact:
    //   max_j  gamma_j * sum over all (i,k) of P_ki * h_ij^k * E_ki.
    // Requires finalize().
    double tight_big_m() const;
    void set_tight_big_m();

    friend bool operator==(const ProblemInstance& a, const ProblemInstance& b) {
        return a.bias_w == b.bias_w && a.big_m == b.big_m &&
               a.sites == b.sites && a.users == b.users && a.gains == b.gains;
    }
};

// Checks every model invariant on a finalized instance and throws
// ValidationError naming the first offending field.
void validate_instance(const ProblemInstance& inst);

// --------------------------------------------------------------------------
// Random instance generation
// --------------------------------------------------------------------------

// Thin deterministic wrapper over mt19937_64.  The uniform mapping is fixed
// here (53-bit mantissa scaling) instead of going through
// std::uniform_real_distribution, whose output is implementation-defined;
// identical seeds must mean identical instances on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 eng_;
};

// Scenario knobs.  Defaults reproduce the reference evaluation scenario:
// a 2 km x 2 km urban square, four fibre macro sites on a half-offset grid,
// 120 candidate pole sites, and mixed-rate users.
struct GeneratorConfig {
    double area_width = 2000.0;
    double area_height = 2000.0;
    std::vector<std::pair<double, double>> macro_positions = {
        {500.0, 500.0}, {1500.0, 500.0}, {500.0, 1500.0}, {1500.0, 1500.0}};
    int n_small_sites = 120;
    int n_users = 500;
    bool grid_small_sites = false; // true: regular grid instead of i.i.d.
    std::uint64_t seed = 1;

    double frequency_mhz = 1500.0;
    double macro_antenna_m = 30.0;
    double small_antenna_m = 10.0;
    double user_antenna_m = 1.5;

    double demand_lo = 100e3; // bit/s
    double demand_hi = 8e6;
    double small_backhaul_lo = 50e6;
    double small_backhaul_hi = 150e6;
    double sir_threshold_db = 8.0;
    double bias_w = 0.2;

    double macro_conv_cost = 0.0;
    double macro_massive_cost = 30.0;
    double small_cost = 1.0;
    double macro_power_dbm = 46.0;
    double small_power_dbm = 30.0;
    double macro_conv_access = 100e6;
    double macro_massive_access = 5e9;
    double small_access = 100e6;
    double massive_suppression_db = -20.0;
};

// Draws an instance from `cfg` (validated, finalized, big-M set tight).
// Draw order is part of the format: small-site positions (x then y, site by
// site), small-site backhaul capacities, user positions (x then y), user
// demands.  Grid placement still consumes the position draws (their values
// are unused) so everything after them matches i.i.d. placement seed-for-seed.
ProblemInstance generate_instance(const GeneratorConfig& cfg);

} // namespace hetplan

#endif // HETPLAN_INSTANCE_HPP
