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

#include <map>
#include <string>
#include <vector>

#include "fockrec/ast.hpp"
#include "fockrec/fock_operator.hpp"

namespace fockrec {

    // ---------------------------------------------------------------------
    // Configuration-transition simulator. Deliberately a different algorithm
    // from the block semantics: programs are rewritten on explicit copy
    // registers, recursion unfolds by body insertion with fresh copies, and
    // case statements split paths. Used as ground truth against the engine.
    // ---------------------------------------------------------------------

    struct SimInit {
        /// Initial single-particle state per coin; fresh copies of a coin
        /// start in the same state. Defaults to the first basis label.
        std::map<std::string, std::string> coinLabels;
        /// Initial principal basis label (joint, comma-separated when there
        /// are several registers). Defaults to label 0 of each register.
        std::string principalLabel;
    };

    /// One basis component of a configuration superposition.
    struct WeightedConfig {
        Complex amplitude;
        /// Collapsed or measured coin copies: (coin, copy, label), ordered
        /// by coin then copy index.
        std::vector<std::tuple<std::string, int, std::string>> coins;
        std::string position;  // principal basis label
        std::string residual;  // "E" when terminated, else remaining program
    };

    struct SimulationResult {
        /// Snapshot after each consumed case statement: terminated
        /// components so far plus the paused superposition.
        std::vector<std::vector<WeightedConfig>> steps;
        std::vector<WeightedConfig> terminated;
        std::vector<WeightedConfig> residual;
        /// Sum of squared amplitudes per step (terminated + residual).
        std::vector<double> stepWeights;
    };

    /// Runs the declaration's main statement for `depth` case-statement
    /// consumptions from the given initial configuration.
    SimulationResult configSimulate(const Declaration& d, const GateLibrary& gates,
                                    const Spaces& spaces, const SimInit& init, int depth);

    // ---------------------------------------------------------------------
    // Closed-form block families for the bundled walk and loop programs,
    // built directly from fixed matrices rather than through the semantics
    // engine.
    // ---------------------------------------------------------------------

    struct WalkOracleConfig {
        FockContext ctx;
        std::string coin;  // direction coin, 2-dimensional, labels (L, R)
    };

    /// One-sided recursive walk: the block at {d:i+1} projects the first i
    /// copies on R and the last on L after a Hadamard on every copy, and
    /// shifts the walker by T_L T_R^i; terms for i < n.
    FockOperator unidirectionalClosedForm(int n, const WalkOracleConfig& cfg);

    /// Two-procedure walk: blocks project onto the alternating strings
    /// (RL)^k L and (RL)^k RR (and their duals for the second procedure),
    /// with net shifts -1 and +2 (dually +1 and -2).
    struct BidirectionalForms {
        FockOperator x;
        FockOperator y;
    };
    BidirectionalForms bidirectionalClosedForm(const WalkOracleConfig& cfg);

    /// Symmetrised families: averaged projector strings tensored with the
    /// same shifts, composed with the lifted Hadamard.
    struct SymmetrisedForms {
        FockOperator uni;
        FockOperator bidX;
        FockOperator bidY;
    };
    SymmetrisedForms symmetrisedClosedForms(const WalkOracleConfig& cfg);

    struct LoopOracleConfig {
        FockContext ctx;
        std::string coin;       // 2-dimensional guard coin, labels (0, 1)
        int exitLabelIndex = 0; // basis position whose branch terminates
    };

    /// Guarded-loop closed forms: the block at {c:k} applies the coin-system
    /// interaction W at every level with the body unitary U between levels,
    /// then projects the first k-1 copies on "continue" and the last on
    /// "exit". The symmetrised variant averages the projector string; it is
    /// exact when W is of product form V (x) I.
    struct LoopForms {
        FockOperator plain;
        FockOperator symmetrised;
    };
    LoopForms loopClosedForm(const DenseMatrix& w, const DenseMatrix& u,
                             const LoopOracleConfig& cfg);

    struct CompareEntry {
        OccVec occ;
        double diff;
        bool truncationShell;
    };

    struct CompareReport {
        double maxDiff = 0.0;
        OccVec worstOcc;
        bool pass = false;
        std::vector<CompareEntry> entries;
    };

    /// Per-occupation max-abs entry difference over the union of supports.
    CompareReport compare(const FockOperator& a, const FockOperator& b, double tol);

}  // namespace fockrec
