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
#include "fockrec/fock_operator.hpp"
#include "fockrec/states.hpp"

namespace fockrec {

    /// Interpretation of `skip`. The full-identity reading assigns the
    /// identity at every occupation; the restricted reading assigns it only
    /// where every declared coin has at least one copy. Both sides of the
    /// semantics must agree on the choice.
    enum class SkipConvention { Paper, FullIdentity };

    struct SemanticsConfig {
        SkipConvention skip = SkipConvention::Paper;
        double tolerance = 1e-12;
    };

    /// One operator per declared procedure, in declaration order.
    using ProcEnvironment = std::vector<FockOperator>;

    FockOperator skipOperator(const FockContext& ctx, SkipConvention convention,
                              const std::set<std::string>& declCoins);

    /// Semantic functional of a program scheme: procedure identifiers read
    /// from `env`; each case statement consumes a fresh copy of its guard
    /// coin (the branch operators are pushed one copy slot rightward).
    FockOperator semanticFunctional(const ProgPtr& p, const Declaration& d,
                                    const ProcEnvironment& env, const GateLibrary& gates,
                                    const FockContext& ctx, const SemanticsConfig& cfg);

    /// One application of the declaration's induced functional to an
    /// environment, componentwise over the equations.
    ProcEnvironment declFunctional(const Declaration& d, const ProcEnvironment& env,
                                   const GateLibrary& gates, const FockContext& ctx,
                                   const SemanticsConfig& cfg);

    struct FixpointResult {
        ProcEnvironment env;
        int iterations = 0;
        bool converged = false;
    };

    /// Kleene iteration of declFunctional from the all-zero environment
    /// until the stored blocks repeat exactly; capped at sum(caps) + 2.
    FixpointResult kleeneFixpoint(const Declaration& d, const GateLibrary& gates,
                                  const FockContext& ctx, const SemanticsConfig& cfg);

    /// Direct interpretation of an identifier-free generalised program: each
    /// coin copy is a distinct tensor slot, and every execution path lands
    /// at the occupation counting the copies it consumed.
    FockOperator interpretGeneralised(const ProgPtr& q, const GateLibrary& gates,
                                      const FockContext& ctx, const SemanticsConfig& cfg,
                                      const std::set<std::string>& declCoins);

    struct OperationalResult {
        ProcEnvironment env;
        FockOperator main;
        int depth = 0;  // unfolding depth at which blocks stabilised
    };

    /// Interprets syntactic approximations of increasing depth, joins the
    /// chain, and applies the main statement's functional to the limit.
    OperationalResult operationalSemantics(const Declaration& d, const GateLibrary& gates,
                                           const FockContext& ctx, const SemanticsConfig& cfg);

    struct EquivalenceEntry {
        std::string name;  // procedure name or "main"
        double maxDiff = 0.0;
    };

    struct EquivalenceReport {
        std::vector<EquivalenceEntry> entries;
        double maxDiff = 0.0;
        bool pass = false;
        int fixpointIterations = 0;
        int operationalDepth = 0;
    };

    /// Blockwise comparison of the fixed-point and syntactic-approximation
    /// semantics on interior occupations (strictly inside the caps). The
    /// two sides may be given different skip conventions to demonstrate
    /// that mismatched conventions break the equivalence.
    EquivalenceReport checkEquivalence(const Declaration& d, const GateLibrary& gates,
                                       const FockContext& ctx, const SemanticsConfig& cfgFix,
                                       const SemanticsConfig& cfgOp);
    EquivalenceReport checkEquivalence(const Declaration& d, const GateLibrary& gates,
                                       const FockContext& ctx, const SemanticsConfig& cfg);

    /// Density operator on the principal registers after running the main
    /// statement on coinInit (x) psi: symmetrise the program semantics,
    /// apply, trace out the coins.
    PartialDensityOperator principalSemantics(const Declaration& d, const GateLibrary& gates,
                                              const FockContext& ctx,
                                              const SemanticsConfig& cfg,
                                              const FockState& coinInit,
                                              const DenseVector& psi);

}  // namespace fockrec
