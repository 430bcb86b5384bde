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

#include <optional>
#include <stdexcept>
#include <string>

#include "fockrec/ast.hpp"
#include "fockrec/spaces.hpp"

namespace fockrec {

    struct SourceFile {
        std::string text;
        std::string path;  // optional, for diagnostics
    };

    class ParseError : public std::runtime_error {
    public:
        ParseError(const std::string& message, int line, int col)
            : std::runtime_error(message + " at " + std::to_string(line) + ":" +
                                 std::to_string(col)),
              line(line),
              col(col),
              rawMessage(message) {}
        int line;
        int col;
        std::string rawMessage;
    };

    struct ParsedProgram {
        Declaration declaration;
        GateLibrary gates;
        SpacesPtr spaces;
    };

    /// Parses a full source file: space declarations, gate declarations,
    /// procedure declarations and the main statement. Quantum choices are
    /// desugared into coin program + case statement; powers into nested
    /// sequencing. Throws ParseError with a location on malformed input.
    ParsedProgram parse(const SourceFile& src);

    /// Canonical text for a whole program; reparses to an equal AST.
    std::string prettyPrint(const ParsedProgram& p);

}  // namespace fockrec
