// Copyright 2026 The Fockrec Authors
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

#pragma once

#include <string>
#include <vector>

#include "fockrec/ast.hpp"
#include "fockrec/spaces.hpp"

namespace fockrec {

    struct Violation {
        std::string code;     // stable identifier, e.g. "guard-coin-in-branch"
        std::string message;  // human-readable detail
    };

    struct ValidationReport {
        std::vector<Violation> violations;
        bool ok() const { return violations.empty(); }
        std::string summary() const;
    };

    /// Checks a parsed program against its gate library and declared spaces.
    /// Collects every violation; an empty report means the program is
    /// well-formed.
    ValidationReport validate(const Declaration& d, const GateLibrary& gates,
                              const Spaces& spaces);

}  // namespace fockrec
