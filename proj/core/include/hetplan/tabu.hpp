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

#ifndef HETPLAN_TABU_HPP
#define HETPLAN_TABU_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hetplan/evaluation.hpp"
#include "hetplan/instance.hpp"

namespace hetplan {

// Memoizes evaluate() by exact deployment; purely a speed device, the search
// is value-identical with or without it.  When the map reaches its cap it is
// cleared outright, which keeps eviction deterministic.
class EvalCache {
public:
    explicit EvalCache(std::size_t max_entries = 200000) : cap_(max_entries) {}

    bool lookup(const Deployment& y, double& value) const;
    void store(const Deployment& y, double value);
    std::size_t size() const { return map_.size(); }

private:
    static std::string key(const Deployment& y);
    std::size_t cap_;
    std::unordered_map<std::string, double> map_;
};

enum class MoveKind {
    small_close,
    small_open,
    small_swap,
    macro_same_site_swap,
    macro_cross_site_swap,
    none // trace marker for iterations with an empty neighborhood
};

const char* to_string(MoveKind kind);

// One candidate step.  Interpretations per kind:
//   small_close:           close (site1, k1), k1 being the open entry
//   small_open:            open (site1, k1) at an empty non-macro site
//   small_swap:            close (site1, k1), open (site2, k2)
//   macro_same_site_swap:  site1 changes type k1 -> k2
//   macro_cross_site_swap: site1 (k1) and site2 (k2) exchange types
struct Move {
    MoveKind kind = MoveKind::none;
    int site1 = -1, k1 = -1;
    int site2 = -1, k2 = -1;
};

// Inner-level moves: close any open small cell, open any entry at an empty
// non-macro site, or swap an open small cell to one of its n_swap nearest
// empty sites (Euclidean distance, site index as tie-break).
std::vector<Move> neighborhood_small(const ProblemInstance& inst,
                                     const Deployment& y, int n_swap);

// Outer-level moves: per macro site a type change to each alternative
// catalog entry, plus pairwise type exchanges between macro sites (identity
// exchanges between same-entry sites are dropped).  Macro sites stay open
// under every move.
std::vector<Move> neighborhood_macro(const ProblemInstance& inst,
                                     const Deployment& y);

void apply_move(Deployment& y, const Move& move);

struct TabuParams {
    int tenure = 7;      // iterations a reverse attribute stays forbidden
    int max_outer = 20;  // macro-level iterations
    int max_inner = 50;  // small-cell iterations per outer pass
    int n_swap = 5;      // nearest empty sites considered per swap source
    int n_div = 3;       // facilities opened by a diversification restart
    int n_ni = 10;       // stall length that triggers diversification
    bool single_level = false; // skip the macro level entirely
    unsigned threads = 1;
};

struct TabuTraceRow {
    int level = 2;             // 1 macro, 2 small
    long iteration = 0;        // cumulative count of this level's iterations
    MoveKind kind = MoveKind::none;
    double candidate_value = 0.0; // accepted candidate; NaN if none existed
    double best_value = 0.0;      // U after this iteration
    int tabu_hits = 0;            // tabu-flagged candidates this iteration
    int diversifications = 0;     // restarts so far
};

struct TabuResult {
    Deployment best_y;
    double best_value = 0.0;
    std::vector<TabuTraceRow> trace;
};

// Two-level tabu search: the outer level reshapes macro types, the inner
// level opens/closes/swaps small cells.  One shared tabu list holds reverse
// attributes (site, entry, direction) for `tenure` iterations of their own
// level; a tabu candidate is admitted only when it strictly improves on the
// incumbent.  When every candidate is tabu the oldest live entry is evicted
// until one is admissible.  A restart opens the n_div least-frequently-open
// small cells after n_ni stalled iterations and clears the list.  `cache`
// (optional) memoizes deployment evaluations across calls.
TabuResult two_level_search(const ProblemInstance& inst, const Deployment& y0,
                            const TabuParams& params,
                            EvalCache* cache = nullptr);

} // namespace hetplan

#endif // HETPLAN_TABU_HPP
