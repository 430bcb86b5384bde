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

#include "fockrec/oracles.hpp"
#include "fockrec/states.hpp"

#include <nlohmann/json_fwd.hpp>

namespace fockrec {

    /// Block dump: a list of {"occ": {"d": 2}, "dim": n, "entries":
    /// [[row, col, re, im], ...]} objects, occupations ascending, entries
    /// row-major. Deterministic for identical inputs.
    nlohmann::json blocksToJson(const FockOperator& op);

    /// {"trace": t, "probs": {"-1": p, ...}}
    nlohmann::json distributionToJson(const PartialDensityOperator& rho, const Spaces& spaces);

    std::string distributionToCsv(const PartialDensityOperator& rho, const Spaces& spaces);

    /// List of steps; each step lists {amplitude: [re, im], coins: [...],
    /// position, residual}.
    nlohmann::json traceToJson(const SimulationResult& sim);

}  // namespace fockrec
