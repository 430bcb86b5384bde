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

#include "fockrec/fock_operator.hpp"
#include "fockrec/symmetry.hpp"

namespace fockrec {

    /// Occupation-indexed family of complex vectors. States either span the
    /// coin copies only, or the coin copies tensored with the principal
    /// registers (componentwise, principal factor rightmost).
    struct FockState {
        FockContext ctx;
        bool includesPrincipal = false;
        std::map<std::string, Statistics> statistics;
        std::map<OccVec, DenseVector> components;

        long componentDim(const OccVec& occ) const;
        double squaredNorm() const;
        DenseVector componentAt(const OccVec& occ) const;
        void addComponent(const OccVec& occ, const DenseVector& v);
        void prune(double tol = 1e-15);
    };

    /// The vacuum (coin-only unless asked otherwise).
    FockState vacuumState(const FockContext& ctx,
                          const std::map<std::string, Statistics>& stats);

    /// Coin-only state with the listed copies of one coin in the given basis
    /// labels, symmetrised per the statistics and normalised. Fermionic
    /// repetitions make the state vanish, which is an error here.
    FockState basisCoinState(const FockContext& ctx, const std::string& coin,
                             const std::vector<std::string>& labels, Statistics v);

    /// a^dag(psi): adds one particle in state psi on the copy-0 slot, with
    /// the sqrt(n+1) normalisation; components pushed past the caps are
    /// dropped and reported through droppedWeight.
    FockState creationOp(const DenseVector& psi, const FockState& s, const std::string& coin,
                         double* droppedWeight = nullptr);

    /// a(psi): the adjoint of creationOp on (anti)symmetric states.
    FockState annihilationOp(const DenseVector& psi, const FockState& s,
                             const std::string& coin);

    /// Coherent bosonic state over one coin, truncated at occupation `cap`;
    /// tailWeight receives the discarded Poisson tail.
    FockState coherentState(const DenseVector& psi, const std::string& coin,
                            const FockContext& ctx, int cap, double* tailWeight = nullptr);

    /// Attaches a fixed principal vector to every component of a coin-only
    /// state.
    FockState tensorWithPrincipal(const FockState& coinState, const DenseVector& principal);

    /// Blockwise application of the stored operator blocks.
    FockState applyOperator(const FockOperator& a, const FockState& s);

    /// S_v applied componentwise over the copies of every coin, using the
    /// per-coin statistics of the state. Computed by multiset bucketing, so
    /// it scales past the factorial budget of the operator symmetriser. On
    /// (anti)symmetric inputs v, S_v(A v) equals the symmetrised operator
    /// applied to v.
    FockState symmetriseState(const FockState& s);

    struct PartialDensityOperator {
        DenseMatrix matrix;
        double trace = 0.0;
    };

    /// Traces out all coin copies of every component.
    PartialDensityOperator partialTraceCoins(const FockState& s);

    /// Diagonal of the density operator in the principal basis, keyed by
    /// basis label.
    std::map<std::string, double> positionDistribution(const PartialDensityOperator& rho,
                                                       const Spaces& spaces);

}  // namespace fockrec
