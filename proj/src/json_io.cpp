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

#include "fockrec/json_io.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fockrec {

    using nlohmann::json;

    json blocksToJson(const FockOperator& op) {
        const Spaces& spaces = op.spaces();
        json out = json::array();
        for (const auto& [occ, m] : op.blocks()) {
            json occJson = json::object();
            for (int c = 0; c < spaces.coinCount(); ++c)
                occJson[spaces.coins[c].name] = occ.counts[c];
            json entries = json::array();
            std::vector<Eigen::Triplet<Complex>> trips;
            for (int k = 0; k < m.outerSize(); ++k)
                for (SparseMatrix::InnerIterator it(m, k); it; ++it)
                    trips.emplace_back(it.row(), it.col(), it.value());
            std::sort(trips.begin(), trips.end(), [](const auto& a, const auto& b) {
                return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
            });
            for (const auto& t : trips)
                entries.push_back(
                    json::array({t.row(), t.col(), t.value().real(), t.value().imag()}));
            out.push_back(json{{"occ", occJson},
                               {"dim", m.rows()},
                               {"truncation_shell", op.onTruncationShell(occ)},
                               {"entries", entries}});
        }
        return out;
    }

    json distributionToJson(const PartialDensityOperator& rho, const Spaces& spaces) {
        json probs = json::object();
        for (const auto& [label, p] : positionDistribution(rho, spaces))
            probs[label] = p;
        return json{{"trace", rho.trace}, {"probs", probs}};
    }

    std::string distributionToCsv(const PartialDensityOperator& rho, const Spaces& spaces) {
        std::ostringstream oss;
        oss << "position,probability\n";
        oss.precision(17);
        for (const auto& [label, p] : positionDistribution(rho, spaces))
            oss << label << "," << p << "\n";
        return oss.str();
    }

    json traceToJson(const SimulationResult& sim) {
        json steps = json::array();
        for (size_t s = 0; s < sim.steps.size(); ++s) {
            json configs = json::array();
            for (const auto& wc : sim.steps[s]) {
                json coins = json::array();
                for (const auto& [coin, copy, label] : wc.coins) {
                    (void)coin;
                    (void)copy;
                    coins.push_back(label);
                }
                json entry = {{"amplitude", json::array({wc.amplitude.real(),
                                                         wc.amplitude.imag()})},
                              {"coins", coins},
                              {"residual", wc.residual}};
                // Ring positions serialise as integers when possible.
                try {
                    size_t used = 0;
                    int p = std::stoi(wc.position, &used);
                    if (used == wc.position.size())
                        entry["position"] = p;
                    else
                        entry["position"] = wc.position;
                } catch (...) {
                    entry["position"] = wc.position;
                }
                configs.push_back(std::move(entry));
            }
            steps.push_back(json{{"step", s + 1},
                                 {"total_weight", sim.stepWeights[s]},
                                 {"configurations", configs}});
        }
        return steps;
    }

}  // namespace fockrec
