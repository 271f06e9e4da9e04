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

#ifndef HETPLAN_PARALLEL_HPP
#define HETPLAN_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hetplan {

// Deterministic work sharing: body(i) must touch only state owned by index i.
// Results are then identical for any thread count, including 1, so solver
// output never depends on the machine it ran on.  Exceptions are collected
// and the first one (by index order) is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
    if (n == 0) return;
    unsigned hw = std::max(1u, threads);
    if (hw == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    hw = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    const std::size_t chunk = (n + hw - 1) / hw;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(hw);
    pool.reserve(hw);
    for (unsigned t = 0; t < hw; ++t) {
        const std::size_t lo = static_cast<std::size_t>(t) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi, t] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

} // namespace hetplan

#endif // HETPLAN_PARALLEL_HPP
