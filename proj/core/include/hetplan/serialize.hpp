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

#ifndef HETPLAN_SERIALIZE_HPP
#define HETPLAN_SERIALIZE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hetplan/evaluation.hpp"
#include "hetplan/instance.hpp"
#include "hetplan/oracle.hpp"
#include "hetplan/solver.hpp"

namespace hetplan {

// All JSON emitters are deterministic: keys are ordered, doubles use the
// shortest round-trip form, and nothing clock- or host-dependent is written.
// Identical inputs therefore produce byte-identical files.

// ---- instance files (schema_version 1) -----------------------------------

void save_instance(const ProblemInstance& inst, std::ostream& out);
void save_instance(const ProblemInstance& inst, const std::string& path);

// Parses, finalizes and validates.  ParseError for malformed or truncated
// documents, ValidationError for well-formed documents that break a model
// invariant.
ProblemInstance load_instance(std::istream& in);
ProblemInstance load_instance_file(const std::string& path);

// ---- solutions and solver results ----------------------------------------

void write_solution(const ProblemInstance& inst, const Deployment& y,
                    const Assignment& x, std::ostream& out);

// Raw decoded solution file; index sanity against a concrete instance
// happens in make_assignment / check_feasibility.
struct SolutionFile {
    std::vector<int> open;
    std::vector<int> serving;
    bool has_objective = false;
    double objective = 0.0;
};

SolutionFile load_solution(std::istream& in);
SolutionFile load_solution_file(const std::string& path);

// Rebuilds per-facility served demand from a serving map.  Throws
// ValidationError when indices are out of range for the instance.
Assignment make_assignment(const ProblemInstance& inst,
                           const std::vector<int>& serving);

void write_solve_result(const ProblemInstance& inst, const SolveResult& result,
                        std::ostream& out);
void write_oracle_result(const ProblemInstance& inst, const OracleResult& result,
                         std::ostream& out);

// ---- CSV emitters --------------------------------------------------------

// bounds.csv: t,lower_t,lower,upper,gap,norm_g,step_scale,halved,reinit
void write_bounds_csv(const std::vector<BoundTraceRow>& rows, std::ostream& out);

// tabu_trace.csv:
//   solver_t,level,iteration,move,candidate_value,best_value,tabu_hits,
//   diversifications
void write_tabu_csv(const std::vector<TabuIterationRow>& rows, std::ostream& out);

// deployment_map.csv, one file with two record types:
//   record,id,x,y,is_macro,open_kind,serving_site,serving_k,sir_db,demand
// site rows fill the first six columns; user rows fill everything except
// is_macro/open_kind.  sir_db is empty for unserved users and "inf" when the
// user hears no interference.
void write_deployment_map_csv(const ProblemInstance& inst, const Deployment& y,
                              const Assignment& x, std::ostream& out);

// ---- config blocks -------------------------------------------------------

// Strict decoders: unknown keys are rejected so typos cannot silently fall
// back to defaults.  Both accept partial documents.
GeneratorConfig generator_config_from_json(std::istream& in);
SolverParams solver_params_from_json(std::istream& in);

std::string generator_config_to_json(const GeneratorConfig& cfg);
std::string solver_params_to_json(const SolverParams& params);

// Resolved run provenance written next to every solve: command, seed,
// thread count, full parameter block, and the input instance's size and
// 64-bit FNV-1a content hash.
std::string run_config_json(const std::string& command, std::uint64_t seed,
                            unsigned threads, const SolverParams& params,
                            const std::string& instance_label,
                            std::uint64_t instance_hash, int n_sites,
                            int n_users);

// FNV-1a 64-bit content hash (provenance fingerprinting, not cryptographic).
std::uint64_t fnv1a64(const std::string& bytes);

// Shortest-precision-preserving text form used in every CSV ("%.17g").
std::string fmt_g17(double v);

} // namespace hetplan

#endif // HETPLAN_SERIALIZE_HPP
