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

#ifndef HETPLAN_ERRORS_HPP
#define HETPLAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hetplan {

// Malformed or truncated input (JSON/CSV that cannot be decoded into the
// expected shape).  Distinct from ValidationError: a file can parse fine and
// still describe an impossible problem.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally sound input whose values break a model invariant (negative
// demand, gain table of the wrong size, big-M below its safe floor, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Bad generator or solver configuration (zero users, negative tenure, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a bounded-exhaustive routine refuses to start because the
// instance exceeds its configured enumeration budget.  Carries the estimate
// so callers can report how far over budget the request was.
class LimitError : public std::runtime_error {
public:
    LimitError(const std::string& what, double estimate, double limit)
        : std::runtime_error(what), estimate_(estimate), limit_(limit) {}

    double estimate() const noexcept { return estimate_; }
    double limit() const noexcept { return limit_; }

private:
    double estimate_;
    double limit_;
};

} // namespace hetplan

#endif // HETPLAN_ERRORS_HPP
