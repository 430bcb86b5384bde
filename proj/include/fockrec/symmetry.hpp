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

#include "fockrec/fock_operator.hpp"

namespace fockrec {

    enum class Statistics { Boson, Fermion };

    /// A permutation of {0,...,n-1} with its parity.
    struct PermutationSpec {
        std::vector<int> mapping;

        int size() const { return static_cast<int>(mapping.size()); }
        int sign() const;  // (-1)^inversions
        static PermutationSpec identity(int n);
        /// Apply `this` after `other`, so that the operators compose as
        /// matrices: P_this * P_other = P_compose(this, other).
        PermutationSpec composedAfter(const PermutationSpec& other) const;
        bool operator==(const PermutationSpec& o) const { return mapping == o.mapping; }
    };

    std::vector<PermutationSpec> allPermutations(int n);

    /// Permutation of the copy factors of one coin inside a block, identity
    /// on everything else: P |psi_0 ... psi_{n-1}> = |psi_{pi(0)} ... >.
    SparseMatrix permutationOperator(const PermutationSpec& pi, const std::string& coin,
                                     const OccVec& occ, const FockContext& ctx);

    /// S+ or S- applied to the tensor product of the given single-particle
    /// vectors: the average over all permutations, signed for fermions.
    DenseVector symmetriseStateVector(const std::vector<DenseVector>& factors,
                                      Statistics v);

    /// Average of conjugations by all per-coin copy permutation families.
    /// Throws when any coin has more copies than `factorialCap`.
    SparseMatrix symmetriseBlock(const SparseMatrix& block, const OccVec& occ,
                                 const FockContext& ctx, int factorialCap = 8);

    /// Blockwise symmetrisation of the stored blocks.
    FockOperator symmetriseOperator(const FockOperator& a, int factorialCap = 8);

    /// True when every stored block commutes with every adjacent swap of
    /// copies of every coin (which generates all permutations).
    bool isSymmetric(const FockOperator& a, double tol = 1e-12);

    /// One-body observable built from a single-particle operator on one
    /// coin: the block at {c:n} sums the action on each copy; the vacuum
    /// block is zero.
    FockOperator oneBodyObservable(const DenseMatrix& single, const std::string& coin,
                                   const FockContext& ctx);

}  // namespace fockrec
