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

#include "hetplan/tabu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "hetplan/errors.hpp"

namespace hetplan {

bool EvalCache::lookup(const Deployment& y, double& value) const {
    auto it = map_.find(key(y));
    if (it == map_.end()) return false;
    value = it->second;
    return true;
}

void EvalCache::store(const Deployment& y, double value) {
    if (map_.size() >= cap_) map_.clear();
    map_.emplace(key(y), value);
}

std::string EvalCache::key(const Deployment& y) {
    std::string k;
    k.reserve(y.open.size());
    for (int v : y.open) k.push_back(static_cast<char>(v + 1));
    return k;
}

const char* to_string(MoveKind kind) {
    switch (kind) {
    case MoveKind::small_close: return "small_close";
    case MoveKind::small_open: return "small_open";
    case MoveKind::small_swap: return "small_swap";
    case MoveKind::macro_same_site_swap: return "macro_same_site_swap";
    case MoveKind::macro_cross_site_swap: return "macro_cross_site_swap";
    case MoveKind::none: return "none";
    }
    return "unknown";
}

std::vector<Move> neighborhood_small(const ProblemInstance& inst,
                                     const Deployment& y, int n_swap) {
    std::vector<Move> moves;
    // close moves
    for (int i = 0; i < inst.n_sites(); ++i)
        if (!inst.sites[i].is_macro && y.open[i] >= 0)
            moves.push_back({MoveKind::small_close, i, y.open[i], -1, -1});
    // open moves, every catalog entry of every empty non-macro site
    for (int i = 0; i < inst.n_sites(); ++i)
        if (!inst.sites[i].is_macro && y.open[i] < 0)
            for (int k = 0; k < static_cast<int>(inst.sites[i].catalog.size()); ++k)
                moves.push_back({MoveKind::small_open, i, k, -1, -1});
    // swap moves to the n_swap nearest empty sites
    std::vector<std::pair<double, int>> near; // (squared distance, site)
    for (int i = 0; i < inst.n_sites(); ++i) {
        if (inst.sites[i].is_macro || y.open[i] < 0) continue;
        near.clear();
        for (int j = 0; j < inst.n_sites(); ++j) {
            if (j == i || inst.sites[j].is_macro || y.open[j] >= 0) continue;
            const double dx = inst.sites[j].x - inst.sites[i].x;
            const double dy = inst.sites[j].y - inst.sites[i].y;
            near.emplace_back(dx * dx + dy * dy, j);
        }
        const std::size_t keep = std::min<std::size_t>(near.size(),
                                                       std::max(n_swap, 0));
        std::partial_sort(near.begin(), near.begin() + keep, near.end());
        for (std::size_t t = 0; t < keep; ++t) {
            const int target = near[t].second;
            for (int k = 0; k < static_cast<int>(inst.sites[target].catalog.size()); ++k)
                moves.push_back({MoveKind::small_swap, i, y.open[i], target, k});
        }
    }
    return moves;
}

std::vector<Move> neighborhood_macro(const ProblemInstance& inst,
                                     const Deployment& y) {
    std::vector<Move> moves;
    for (int i = 0; i < inst.n_sites(); ++i) {
        if (!inst.sites[i].is_macro) continue;
        for (int k = 0; k < static_cast<int>(inst.sites[i].catalog.size()); ++k)
            if (k != y.open[i])
                moves.push_back({MoveKind::macro_same_site_swap, i, y.open[i], i, k});
    }
    for (int i1 = 0; i1 < inst.n_sites(); ++i1) {
        if (!inst.sites[i1].is_macro) continue;
        for (int i2 = i1 + 1; i2 < inst.n_sites(); ++i2) {
            if (!inst.sites[i2].is_macro) continue;
            const int k1 = y.open[i1], k2 = y.open[i2];
            if (k1 == k2) continue; // identity exchange
            if (k2 >= static_cast<int>(inst.sites[i1].catalog.size()) ||
                k1 >= static_cast<int>(inst.sites[i2].catalog.size()))
                continue; // entries not exchangeable between these catalogs
            moves.push_back({MoveKind::macro_cross_site_swap, i1, k1, i2, k2});
        }
    }
    return moves;
}

void apply_move(Deployment& y, const Move& move) {
    switch (move.kind) {
    case MoveKind::small_close: y.open[move.site1] = -1; break;
    case MoveKind::small_open: y.open[move.site1] = move.k1; break;
    case MoveKind::small_swap:
        y.open[move.site1] = -1;
        y.open[move.site2] = move.k2;
        break;
    case MoveKind::macro_same_site_swap: y.open[move.site1] = move.k2; break;
    case MoveKind::macro_cross_site_swap:
        y.open[move.site1] = move.k2;
        y.open[move.site2] = move.k1;
        break;
    case MoveKind::none: break;
    }
}

namespace {

// An elementary open/close a move performs at one (site, entry).
struct Change {
    int site, k;
    bool opens;
};

void changes_of(const Move& m, std::vector<Change>& out) {
    out.clear();
    switch (m.kind) {
    case MoveKind::small_close:
        out.push_back({m.site1, m.k1, false});
        break;
    case MoveKind::small_open:
        out.push_back({m.site1, m.k1, true});
        break;
    case MoveKind::small_swap:
        out.push_back({m.site1, m.k1, false});
        out.push_back({m.site2, m.k2, true});
        break;
    case MoveKind::macro_same_site_swap:
        out.push_back({m.site1, m.k1, false});
        out.push_back({m.site1, m.k2, true});
        break;
    case MoveKind::macro_cross_site_swap:
        out.push_back({m.site1, m.k1, false});
        out.push_back({m.site1, m.k2, true});
        out.push_back({m.site2, m.k2, false});
        out.push_back({m.site2, m.k1, true});
        break;
    case MoveKind::none: break;
    }
}

// A forbidden elementary change.  Performing close(site, k) pushes the
// attribute that forbids open(site, k) and vice versa ("prevent opposite
// moves"); each attribute lives for `tenure` iterations of its own level.
struct TabuEntry {
    int site, k;
    bool forbids_open;
    int level;
    long expiry; // last iteration (of `level`) the entry is active
};

class Search {
public:
    Search(const ProblemInstance& inst, const TabuParams& p, EvalCache* cache)
        : inst_(inst), p_(p), cache_(cache),
          open_freq_(inst.fac_site.size(), 0) {}

    TabuResult run(const Deployment& y0) {
        cur_ = y0;
        repair_macro_sites(inst_, cur_);
        best_y_ = cur_;
        best_value_ = eval_one(cur_);

        for (int t1 = 0; t1 < p_.max_outer; ++t1) {
            if (!p_.single_level) {
                auto moves = neighborhood_macro(inst_, cur_);
                iterate(1, moves);
            }
            for (int t2 = 0; t2 < p_.max_inner; ++t2) {
                auto moves = neighborhood_small(inst_, cur_, p_.n_swap);
                iterate(2, moves);
                maybe_diversify();
            }
        }
        return {std::move(best_y_), best_value_, std::move(trace_)};
    }

private:
    long& clock(int level) { return level == 1 ? clock1_ : clock2_; }

    // Liveness from the viewpoint of `current_level` mid-iteration: the
    // running level sits at its incremented counter, the idle level at its
    // next iteration number.
    bool live(const TabuEntry& e, int current_level) const {
        const long now = e.level == 1 ? clock1_ : clock2_;
        return (e.level == current_level ? now : now + 1) <= e.expiry;
    }

    bool is_tabu(const Move& m, std::vector<Change>& scratch) const {
        changes_of(m, scratch);
        for (const Change& c : scratch)
            for (const TabuEntry& e : list_)
                if (e.site == c.site && e.k == c.k && e.forbids_open == c.opens)
                    return true;
        return false;
    }

    double eval_one(const Deployment& y) {
        double v;
        if (cache_ && cache_->lookup(y, v)) return v;
        v = evaluate(inst_, y, ws_);
        if (cache_) cache_->store(y, v);
        return v;
    }

    void eval_moves(const std::vector<Move>& moves, std::vector<double>& values) {
        const std::size_t n = moves.size();
        values.assign(n, 0.0);
        miss_.clear();
        for (std::size_t i = 0; i < n; ++i) {
            scratch_ = cur_;
            apply_move(scratch_, moves[i]);
            if (!(cache_ && cache_->lookup(scratch_, values[i]))) miss_.push_back(i);
        }
        if (p_.threads > 1 && miss_.size() > 32) {
            const unsigned nt =
                std::min<std::size_t>(p_.threads, (miss_.size() + 7) / 8);
            const std::size_t chunk = (miss_.size() + nt - 1) / nt;
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < nt; ++t) {
                const std::size_t lo = t * chunk;
                const std::size_t hi = std::min(miss_.size(), lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back([&, lo, hi] {
                    EvalWorkspace ws;
                    Deployment tmp;
                    for (std::size_t m = lo; m < hi; ++m) {
                        tmp = cur_;
                        apply_move(tmp, moves[miss_[m]]);
                        values[miss_[m]] = evaluate(inst_, tmp, ws);
                    }
                });
            }
            for (auto& th : pool) th.join();
        } else {
            for (std::size_t m : miss_) {
                scratch_ = cur_;
                apply_move(scratch_, moves[m]);
                values[m] = evaluate(inst_, scratch_, ws_);
            }
        }
        if (cache_)
            for (std::size_t m : miss_) {
                scratch_ = cur_;
                apply_move(scratch_, moves[m]);
                cache_->store(scratch_, values[m]);
            }
    }

    void prune_dead(int current_level) {
        list_.erase(std::remove_if(list_.begin(), list_.end(),
                                   [&](const TabuEntry& e) {
                                       return !live(e, current_level);
                                   }),
                    list_.end());
    }

    void iterate(int level, const std::vector<Move>& moves) {
        const long it = ++clock(level);
        prune_dead(level);

        TabuTraceRow row;
        row.level = level;
        row.iteration = it;

        if (moves.empty()) {
            row.kind = MoveKind::none;
            row.candidate_value = std::numeric_limits<double>::quiet_NaN();
            ++no_improve_;
            finish_iteration(row);
            return;
        }

        eval_moves(moves, values_);
        tabu_.assign(moves.size(), 0);
        int hits = 0;
        for (std::size_t i = 0; i < moves.size(); ++i) {
            tabu_[i] = is_tabu(moves[i], chg_) ? 1 : 0;
            hits += tabu_[i];
        }
        row.tabu_hits = hits;

        std::size_t best_all = 0;
        for (std::size_t i = 1; i < moves.size(); ++i)
            if (values_[i] < values_[best_all]) best_all = i;

        std::size_t chosen;
        if (values_[best_all] < best_value_) {
            // aspiration: a strict incumbent improvement is taken even if tabu
            chosen = best_all;
        } else {
            for (;;) {
                std::size_t best_nt = moves.size();
                for (std::size_t i = 0; i < moves.size(); ++i)
                    if (!tabu_[i] &&
                        (best_nt == moves.size() || values_[i] < values_[best_nt]))
                        best_nt = i;
                if (best_nt < moves.size()) {
                    chosen = best_nt;
                    break;
                }
                // stall: every candidate is tabu and none aspirates; evict
                // the oldest live entry and retry
                list_.erase(list_.begin());
                for (std::size_t i = 0; i < moves.size(); ++i)
                    tabu_[i] = is_tabu(moves[i], chg_) ? 1 : 0;
            }
        }

        apply_move(cur_, moves[chosen]);
        changes_of(moves[chosen], chg_);
        for (const Change& c : chg_)
            list_.push_back({c.site, c.k, !c.opens, level, it + p_.tenure});

        row.kind = moves[chosen].kind;
        row.candidate_value = values_[chosen];
        if (values_[chosen] < best_value_) {
            best_value_ = values_[chosen];
            best_y_ = cur_;
            no_improve_ = 0;
        } else {
            ++no_improve_;
        }
        finish_iteration(row);
    }

    void finish_iteration(TabuTraceRow& row) {
        for (int i = 0; i < inst_.n_sites(); ++i)
            if (cur_.open[i] >= 0) ++open_freq_[inst_.facility(i, cur_.open[i])];
        row.best_value = best_value_;
        row.diversifications = diversifications_;
        trace_.push_back(row);
    }

    void maybe_diversify() {
        if (no_improve_ < p_.n_ni) return;
        // open the n_div least-frequently-open entries at empty non-macro
        // sites (ties: lowest facility index, i.e. lowest site then entry)
        div_cand_.clear();
        for (int i = 0; i < inst_.n_sites(); ++i) {
            if (inst_.sites[i].is_macro || cur_.open[i] >= 0) continue;
            for (int k = 0; k < static_cast<int>(inst_.sites[i].catalog.size()); ++k) {
                const int f = inst_.facility(i, k);
                div_cand_.emplace_back(open_freq_[f], f);
            }
        }
        std::sort(div_cand_.begin(), div_cand_.end());
        int opened = 0;
        for (const auto& [freq, f] : div_cand_) {
            if (opened >= p_.n_div) break;
            const int site = inst_.fac_site[f];
            if (cur_.open[site] >= 0) continue; // filled by an earlier pick
            cur_.open[site] = inst_.fac_k[f];
            ++opened;
        }
        list_.clear();
        no_improve_ = 0;
        ++diversifications_;
        if (!trace_.empty())
            trace_.back().diversifications = diversifications_;
        // the restart point is itself a visited deployment
        const double v = eval_one(cur_);
        if (v < best_value_) {
            best_value_ = v;
            best_y_ = cur_;
        }
    }

    const ProblemInstance& inst_;
    const TabuParams& p_;
    EvalCache* cache_;
    EvalWorkspace ws_;
    Deployment cur_, scratch_, best_y_;
    double best_value_ = 0.0;
    std::vector<TabuEntry> list_;
    long clock1_ = 0, clock2_ = 0;
    long no_improve_ = 0;
    int diversifications_ = 0;
    std::vector<long> open_freq_;
    std::vector<double> values_;
    std::vector<char> tabu_;
    std::vector<std::size_t> miss_;
    std::vector<Change> chg_;
    std::vector<std::pair<long, int>> div_cand_;
    std::vector<TabuTraceRow> trace_;
};

} // namespace

TabuResult two_level_search(const ProblemInstance& inst, const Deployment& y0,
                            const TabuParams& params, EvalCache* cache) {
    if (params.tenure < 0) throw ConfigError("tabu: tenure must be >= 0");
    if (params.max_outer < 0 || params.max_inner < 0)
        throw ConfigError("tabu: iteration budgets must be >= 0");
    if (params.n_swap < 0) throw ConfigError("tabu: n_swap must be >= 0");
    if (params.n_div < 0) throw ConfigError("tabu: n_div must be >= 0");
    if (params.n_ni < 1) throw ConfigError("tabu: n_ni must be >= 1");
    Search search(inst, params, cache);
    return search.run(y0);
}

} // namespace hetplan
