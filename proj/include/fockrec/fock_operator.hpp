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
#include <stdexcept>
#include <vector>

#include "fockrec/occupation.hpp"
#include "fockrec/spaces.hpp"

namespace fockrec {

    class TruncationError : public std::runtime_error {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Shared shape information for a family of operators: the declared
    /// spaces and the per-coin occupation caps.
    struct FockContext {
        SpacesPtr spaces;
        std::vector<int> caps;

        int coinCount() const { return spaces->coinCount(); }
        void requireCompatible(const FockContext& o) const;
    };

    /// Tensor-slot layout of one occupation block: for each coin, copies in
    /// ascending index order (copy 0 leftmost), then the principal registers.
    struct BlockShape {
        std::vector<long> dims;
        std::vector<int> coinSlotStart;
        std::vector<int> copies;
        int principalSlotStart = 0;
        long totalDim = 1;

        static BlockShape at(const Spaces& spaces, const OccVec& occ,
                             bool withPrincipals = true);
        int coinSlot(int coinIdx, int copy) const;
        int principalSlot(int principalIdx) const;
        int slotCount() const { return static_cast<int>(dims.size()); }
    };

    /// Mixed-radix index helpers (slot 0 most significant).
    std::vector<int> digitsOf(long index, const std::vector<long>& dims);
    long indexOf(const std::vector<int>& digits, const std::vector<long>& dims);

    /// Embeds `op`, an operator over the listed slots (in that order), into
    /// the full space described by `dims`, acting as identity elsewhere.
    SparseMatrix embedOnSlots(const SparseMatrix& op, const std::vector<long>& dims,
                              const std::vector<int>& slots);
    SparseMatrix embedOnSlots(const DenseMatrix& op, const std::vector<long>& dims,
                              const std::vector<int>& slots);

    SparseMatrix sparseFromDense(const DenseMatrix& m);
    DenseMatrix denseFromSparse(const SparseMatrix& m);
    double maxAbs(const SparseMatrix& m);
    SparseMatrix prunedCopy(const SparseMatrix& m, double tol);

    /// An occupation-indexed family of sparse blocks; absent blocks are zero.
    /// Blocks of operators produced by the semantics layer record, per
    /// occupation, the content new at that occupation (unfolding depth), so
    /// stored support is the meaningful support for the flat order.
    class FockOperator {
    public:
        FockOperator() = default;
        explicit FockOperator(FockContext ctx) : m_ctx(std::move(ctx)) {}

        const FockContext& context() const { return m_ctx; }
        const Spaces& spaces() const { return *m_ctx.spaces; }
        const std::map<OccVec, SparseMatrix>& blocks() const { return m_blocks; }

        void setBlock(const OccVec& occ, SparseMatrix m);
        void addToBlock(const OccVec& occ, const SparseMatrix& m);
        bool hasBlock(const OccVec& occ) const { return m_blocks.count(occ) > 0; }

        /// Stored block, or an explicit zero of the right dimension.
        /// Throws TruncationError beyond the caps.
        SparseMatrix blockAt(const OccVec& occ) const;

        SupportSet support(double tol = 0.0) const;
        long droppedBlocks() const { return m_dropped; }
        void noteDropped(long n = 1) { m_dropped += n; }
        /// Occupations at the truncation boundary, where content may be
        /// missing contributions from outside the caps.
        bool onTruncationShell(const OccVec& occ) const;

        void pruneTiny(double tol = 1e-14);

    private:
        FockContext m_ctx;
        std::map<OccVec, SparseMatrix> m_blocks;
        long m_dropped = 0;
    };

    FockOperator zeroOperator(const FockContext& ctx);
    /// Identity block stored at every occupation within the caps.
    FockOperator identityOperator(const FockContext& ctx);

    /// Drops stored blocks that merely repeat lower blocks with identity
    /// padding on the later copy slots; normal form for operators built by
    /// the semantics layer.
    FockOperator stripRedundantBlocks(const FockOperator& a, double tol = 1e-13);

    /// Pads a block from occupation `from` up to `to` with identity factors
    /// on the additional (higher-index) copy slots of each coin.
    SparseMatrix padBlock(const Spaces& spaces, const OccVec& from, const OccVec& to,
                          const SparseMatrix& m);

    /// Block value of the identity-padded family generated by the stored
    /// blocks of `a` at occupation `occ`.
    SparseMatrix paddedFamilyValue(const FockOperator& a, const OccVec& occ);

    /// Blockwise operator product: (A.B)(n) = A(n).B(n) per occupation.
    FockOperator product(const FockOperator& a, const FockOperator& b);

    /// Sequential-composition product used by the semantics layer: composes
    /// the identity-padded families of the two operands, recording each
    /// contribution at the pointwise maximum of the contributing
    /// occupations. For operands stored on a common occupation this reduces
    /// to the blockwise product.
    FockOperator familyProduct(const FockOperator& a, const FockOperator& b);

    /// Guarded composition along the basis of coin `c`: the block at
    /// m + e_c is sum_i |i><i| (x) A_i(m), the projector acting on the
    /// copy-0 slot of c. Parts are indexed by basis position; missing
    /// entries behave as the zero operator.
    FockOperator guardedComposition(const std::string& coin,
                                    const std::vector<FockOperator>& parts);

    /// Creation functional for one coin: shifts every copy of c one slot
    /// rightward and fills the new copy-0 slot with the identity.
    FockOperator creationFunctional(const std::string& coin, const FockOperator& a);
    /// Composition over a coin set, applied in global coin order; the empty
    /// set is the identity functional.
    FockOperator creationFunctionalAll(const std::set<std::string>& coins,
                                       const FockOperator& a);

    /// Flat order: true iff b agrees with a on the below-closure of a's
    /// nonzero support (a is zero elsewhere by storage).
    bool flatLeq(const FockOperator& a, const FockOperator& b, double tol = 1e-12);

    /// Least upper bound of a finite chain, by overlaying each element on
    /// the below-closure of its support. Throws if the input is not a chain.
    FockOperator lubChain(const std::vector<FockOperator>& chain, double tol = 1e-12);

    /// Identifies a fixed matrix with the operator family that repeats it at
    /// every occupation above `base`, identity factors prepended on the new
    /// lowest-index copy slots of each coin; blocks not above `base` are zero.
    FockOperator cylindricalExtension(const DenseMatrix& m, const OccVec& base,
                                      const FockContext& ctx);

    /// Non-interacting evolution of the copies of one coin: block at {c:n}
    /// is U^(x)n on the coin slots, identity on the principal registers;
    /// the vacuum block is zero.
    FockOperator liftEvolution(const DenseMatrix& u, const std::string& coin,
                               const FockContext& ctx);

    /// Largest absolute entrywise difference between stored faces.
    double maxAbsDiff(const FockOperator& a, const FockOperator& b);

}  // namespace fockrec
