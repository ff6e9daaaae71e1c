// Copyright 2026 The phasecert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PHASECERT_ERRORS_H
#define PHASECERT_ERRORS_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phasecert {

/// Argument outside the documented domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A quantity is mathematically undefined for the given input (e.g. Mandel Q of the vacuum).
struct UndefinedValueError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Fock-space truncation lost more probability mass than allowed.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Real-valued output of a complex sum carried a non-negligible imaginary part.
struct NumericalConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The binned POVM does not resolve the truncated Fock space (range or cutoff misconfigured).
struct CompletenessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed dataset file. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
   public:
    ParseError(std::size_t line, const std::string &detail, const std::string &source = "")
        : std::runtime_error(format(line, detail, source)), line_(line), detail_(detail) {
    }
    std::size_t line() const {
        return line_;
    }
    const std::string &detail() const {
        return detail_;
    }

   private:
    static std::string format(std::size_t line, const std::string &detail, const std::string &source) {
        std::string out = source.empty() ? "" : source + ": ";
        if (line != 0) {
            out += "line " + std::to_string(line) + ": ";
        }
        return out + detail;
    }
    std::size_t line_;
    std::string detail_;
};

}  // namespace phasecert

#endif
