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

#include "fockrec/fock_operator.hpp"

#include <algorithm>

namespace fockrec {

    void FockContext::requireCompatible(const FockContext& o) const {
        if (spaces->coinCount() != o.spaces->coinCount() ||
            spaces->principalDim() != o.spaces->principalDim() || caps != o.caps)
            throw std::invalid_argument("operators live over different spaces or truncations");
        for (int i = 0; i < spaces->coinCount(); ++i)
            if (spaces->coins[i].name != o.spaces->coins[i].name ||
                spaces->coins[i].dimension() != o.spaces->coins[i].dimension())
                throw std::invalid_argument("operators live over different coin spaces");
    }

    BlockShape BlockShape::at(const Spaces& spaces, const OccVec& occ, bool withPrincipals) {
        if (static_cast<int>(occ.counts.size()) != spaces.coinCount())
            throw std::invalid_argument("occupation arity does not match declared coins");
        BlockShape s;
        for (int c = 0; c < spaces.coinCount(); ++c) {
            s.coinSlotStart.push_back(static_cast<int>(s.dims.size()));
            s.copies.push_back(occ.counts[c]);
            for (int k = 0; k < occ.counts[c]; ++k)
                s.dims.push_back(spaces.coins[c].dimension());
        }
        s.principalSlotStart = static_cast<int>(s.dims.size());
        if (withPrincipals)
            for (const auto& p : spaces.principals)
                s.dims.push_back(p.dimension());
        s.totalDim = 1;
        for (long d : s.dims)
            s.totalDim *= d;
        return s;
    }

    int BlockShape::coinSlot(int coinIdx, int copy) const {
        if (copy < 0 || copy >= copies.at(coinIdx))
            throw std::invalid_argument("coin copy outside block occupation");
        return coinSlotStart[coinIdx] + copy;
    }

    int BlockShape::principalSlot(int principalIdx) const {
        return principalSlotStart + principalIdx;
    }

    std::vector<int> digitsOf(long index, const std::vector<long>& dims) {
        std::vector<int> out(dims.size(), 0);
        for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
            out[i] = static_cast<int>(index % dims[i]);
            index /= dims[i];
        }
        return out;
    }

    long indexOf(const std::vector<int>& digits, const std::vector<long>& dims) {
        long index = 0;
        for (size_t i = 0; i < dims.size(); ++i)
            index = index * dims[i] + digits[i];
        return index;
    }

    SparseMatrix embedOnSlots(const SparseMatrix& op, const std::vector<long>& dims,
                              const std::vector<int>& slots) {
        long selDim = 1;
        std::vector<long> selDims;
        for (int s : slots) {
            selDims.push_back(dims.at(s));
            selDim *= dims.at(s);
        }
        if (op.rows() != selDim || op.cols() != selDim)
            throw std::invalid_argument("embedOnSlots: operator does not match selected slots");

        std::vector<int> restSlots;
        std::vector<long> restDims;
        long restDim = 1;
        std::vector<bool> selected(dims.size(), false);
        for (int s : slots)
            selected[s] = true;
        for (size_t i = 0; i < dims.size(); ++i) {
            if (!selected[i]) {
                restSlots.push_back(static_cast<int>(i));
                restDims.push_back(dims[i]);
                restDim *= dims[i];
            }
        }

        long total = selDim * restDim;
        std::vector<Eigen::Triplet<Complex>> trips;
        trips.reserve(static_cast<size_t>(op.nonZeros()) * static_cast<size_t>(restDim));

        std::vector<int> digits(dims.size(), 0);
        for (int k = 0; k < op.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(op, k); it; ++it) {
                auto rowDigits = digitsOf(it.row(), selDims);
                auto colDigits = digitsOf(it.col(), selDims);
                for (long rest = 0; rest < restDim; ++rest) {
                    auto restDigits = digitsOf(rest, restDims);
                    for (size_t i = 0; i < slots.size(); ++i)
                        digits[slots[i]] = rowDigits[i];
                    for (size_t i = 0; i < restSlots.size(); ++i)
                        digits[restSlots[i]] = restDigits[i];
                    long row = indexOf(digits, dims);
                    for (size_t i = 0; i < slots.size(); ++i)
                        digits[slots[i]] = colDigits[i];
                    long col = indexOf(digits, dims);
                    trips.emplace_back(row, col, it.value());
                }
            }
        }
        SparseMatrix out(total, total);
        out.setFromTriplets(trips.begin(), trips.end());
        return out;
    }

    SparseMatrix embedOnSlots(const DenseMatrix& op, const std::vector<long>& dims,
                              const std::vector<int>& slots) {
        return embedOnSlots(sparseFromDense(op), dims, slots);
    }

    SparseMatrix sparseFromDense(const DenseMatrix& m) {
        SparseMatrix out = m.sparseView(1.0, 1e-300);
        out.makeCompressed();
        return out;
    }

    DenseMatrix denseFromSparse(const SparseMatrix& m) { return DenseMatrix(m); }

    double maxAbs(const SparseMatrix& m) {
        double best = 0.0;
        for (int k = 0; k < m.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(m, k); it; ++it)
                best = std::max(best, std::abs(it.value()));
        return best;
    }

    SparseMatrix prunedCopy(const SparseMatrix& m, double tol) {
        SparseMatrix out = m;
        out.prune([tol](int, int, const Complex& v) { return std::abs(v) > tol; });
        out.makeCompressed();
        return out;
    }

    void FockOperator::setBlock(const OccVec& occ, SparseMatrix m) {
        if (!occ.withinCaps(m_ctx.caps))
            throw TruncationError("setBlock: occupation exceeds truncation");
        BlockShape shape = BlockShape::at(*m_ctx.spaces, occ);
        if (m.rows() != shape.totalDim || m.cols() != shape.totalDim)
            throw std::invalid_argument("setBlock: block dimension mismatch");
        m_blocks[occ] = std::move(m);
    }

    void FockOperator::addToBlock(const OccVec& occ, const SparseMatrix& m) {
        auto it = m_blocks.find(occ);
        if (it == m_blocks.end())
            setBlock(occ, m);
        else
            it->second += m;
    }

    SparseMatrix FockOperator::blockAt(const OccVec& occ) const {
        if (!occ.withinCaps(m_ctx.caps))
            throw TruncationError("blockAt: occupation exceeds truncation");
        auto it = m_blocks.find(occ);
        if (it != m_blocks.end())
            return it->second;
        long dim = BlockShape::at(*m_ctx.spaces, occ).totalDim;
        return SparseMatrix(dim, dim);
    }

    SupportSet FockOperator::support(double tol) const {
        SupportSet out;
        for (const auto& [occ, m] : m_blocks)
            if (maxAbs(m) > tol)
                out.insert(occ);
        return out;
    }

    bool FockOperator::onTruncationShell(const OccVec& occ) const {
        for (size_t i = 0; i < occ.counts.size(); ++i)
            if (occ.counts[i] == m_ctx.caps[i])
                return true;
        return false;
    }

    void FockOperator::pruneTiny(double tol) {
        for (auto it = m_blocks.begin(); it != m_blocks.end();) {
            it->second = prunedCopy(it->second, tol);
            if (it->second.nonZeros() == 0)
                it = m_blocks.erase(it);
            else
                ++it;
        }
    }

    FockOperator zeroOperator(const FockContext& ctx) { return FockOperator(ctx); }

    FockOperator identityOperator(const FockContext& ctx) {
        FockOperator out(ctx);
        for (const auto& occ : enumerateOccupations(ctx.caps)) {
            long dim = BlockShape::at(*ctx.spaces, occ).totalDim;
            SparseMatrix eye(dim, dim);
            eye.setIdentity();
            out.setBlock(occ, std::move(eye));
        }
        return out;
    }

    SparseMatrix padBlock(const Spaces& spaces, const OccVec& from, const OccVec& to,
                          const SparseMatrix& m) {
        if (!from.leq(to))
            throw std::invalid_argument("padBlock: target occupation not above source");
        if (from == to)
            return m;
        BlockShape target = BlockShape::at(spaces, to);
        std::vector<int> slots;
        for (int c = 0; c < spaces.coinCount(); ++c)
            for (int k = 0; k < from.counts[c]; ++k)
                slots.push_back(target.coinSlot(c, k));
        for (size_t p = 0; p < spaces.principals.size(); ++p)
            slots.push_back(target.principalSlot(static_cast<int>(p)));
        return embedOnSlots(m, target.dims, slots);
    }

    SparseMatrix paddedFamilyValue(const FockOperator& a, const OccVec& occ) {
        long dim = BlockShape::at(a.spaces(), occ).totalDim;
        SparseMatrix acc(dim, dim);
        for (const auto& [lo, m] : a.blocks()) {
            if (lo.leq(occ))
                acc += padBlock(a.spaces(), lo, occ, m);
        }
        return acc;
    }

    FockOperator stripRedundantBlocks(const FockOperator& a, double tol) {
        FockOperator out(a.context());
        out.noteDropped(a.droppedBlocks());
        // Ascending (total, lex) order visits every occupation after all
        // occupations below it.
        for (const auto& [occ, m] : a.blocks()) {
            SparseMatrix predicted = paddedFamilyValue(out, occ);
            SparseMatrix diff = m - predicted;
            if (maxAbs(diff) > tol)
                out.setBlock(occ, m);
        }
        return out;
    }

    FockOperator product(const FockOperator& a, const FockOperator& b) {
        a.context().requireCompatible(b.context());
        FockOperator out(a.context());
        out.noteDropped(a.droppedBlocks() + b.droppedBlocks());
        for (const auto& [occ, am] : a.blocks()) {
            if (!b.hasBlock(occ))
                continue;
            out.setBlock(occ, SparseMatrix((am * b.blockAt(occ)).pruned()));
        }
        out.pruneTiny();
        return out;
    }

    FockOperator familyProduct(const FockOperator& a, const FockOperator& b) {
        a.context().requireCompatible(b.context());
        FockOperator lhs = stripRedundantBlocks(a);
        FockOperator rhs = stripRedundantBlocks(b);
        FockOperator out(a.context());
        out.noteDropped(lhs.droppedBlocks() + rhs.droppedBlocks());
        const Spaces& spaces = a.spaces();
        for (const auto& [ao, am] : lhs.blocks()) {
            for (const auto& [bo, bm] : rhs.blocks()) {
                OccVec target = ao.max(bo);
                if (!target.withinCaps(a.context().caps)) {
                    out.noteDropped();
                    continue;
                }
                SparseMatrix left = padBlock(spaces, ao, target, am);
                SparseMatrix right = padBlock(spaces, bo, target, bm);
                SparseMatrix prod = (left * right).pruned();
                out.addToBlock(target, prod);
            }
        }
        out.pruneTiny();
        return out;
    }

    FockOperator guardedComposition(const std::string& coin,
                                    const std::vector<FockOperator>& parts) {
        if (parts.empty())
            throw std::invalid_argument("guardedComposition: no parts");
        const FockContext& ctx = parts.front().context();
        const Spaces& spaces = *ctx.spaces;
        int coinIdx = spaces.coinIndex(coin);
        if (coinIdx < 0)
            throw std::invalid_argument("guardedComposition: unknown coin '" + coin + "'");
        int coinDim = spaces.coins[coinIdx].dimension();
        if (static_cast<int>(parts.size()) > coinDim)
            throw std::invalid_argument("guardedComposition: more parts than basis states");

        FockOperator out(ctx);
        for (int i = 0; i < static_cast<int>(parts.size()); ++i) {
            const FockOperator& part = parts[i];
            if (part.blocks().empty())
                continue;
            ctx.requireCompatible(part.context());
            out.noteDropped(part.droppedBlocks());
            for (const auto& [occ, m] : part.blocks()) {
                OccVec target = occ.plus(coinIdx);
                if (!target.withinCaps(ctx.caps)) {
                    out.noteDropped();
                    continue;
                }
                BlockShape shape = BlockShape::at(spaces, target);
                // Branch content occupies the copies above the guard slot.
                std::vector<int> slots;
                for (int c = 0; c < spaces.coinCount(); ++c) {
                    int first = (c == coinIdx) ? 1 : 0;
                    for (int k = first; k < target.counts[c]; ++k)
                        slots.push_back(shape.coinSlot(c, k));
                }
                for (size_t p = 0; p < spaces.principals.size(); ++p)
                    slots.push_back(shape.principalSlot(static_cast<int>(p)));
                SparseMatrix shifted = embedOnSlots(m, shape.dims, slots);

                DenseMatrix proj = DenseMatrix::Zero(coinDim, coinDim);
                proj(i, i) = 1.0;
                SparseMatrix guard =
                    embedOnSlots(proj, shape.dims, {shape.coinSlot(coinIdx, 0)});
                out.addToBlock(target, (guard * shifted).pruned());
            }
        }
        out.pruneTiny();
        return out;
    }

    FockOperator creationFunctional(const std::string& coin, const FockOperator& a) {
        const FockContext& ctx = a.context();
        const Spaces& spaces = *ctx.spaces;
        int coinIdx = spaces.coinIndex(coin);
        if (coinIdx < 0)
            throw std::invalid_argument("creationFunctional: unknown coin '" + coin + "'");
        FockOperator out(ctx);
        out.noteDropped(a.droppedBlocks());
        for (const auto& [occ, m] : a.blocks()) {
            OccVec target = occ.plus(coinIdx);
            if (!target.withinCaps(ctx.caps)) {
                out.noteDropped();
                continue;
            }
            BlockShape shape = BlockShape::at(spaces, target);
            std::vector<int> slots;
            for (int c = 0; c < spaces.coinCount(); ++c) {
                int first = (c == coinIdx) ? 1 : 0;
                for (int k = first; k < target.counts[c]; ++k)
                    slots.push_back(shape.coinSlot(c, k));
            }
            for (size_t p = 0; p < spaces.principals.size(); ++p)
                slots.push_back(shape.principalSlot(static_cast<int>(p)));
            out.addToBlock(target, embedOnSlots(m, shape.dims, slots));
        }
        return out;
    }

    FockOperator creationFunctionalAll(const std::set<std::string>& coins,
                                       const FockOperator& a) {
        FockOperator cur = a;
        // Apply in global coin order; the functionals commute, so any fixed
        // order gives the same operator.
        for (const auto& spec : a.spaces().coins) {
            if (coins.count(spec.name))
                cur = creationFunctional(spec.name, cur);
        }
        return cur;
    }

    bool flatLeq(const FockOperator& a, const FockOperator& b, double tol) {
        a.context().requireCompatible(b.context());
        SupportSet supp = a.support(tol);
        for (const auto& occ : belowClosure(supp)) {
            if (!occ.withinCaps(a.context().caps))
                continue;
            SparseMatrix diff = a.blockAt(occ) - b.blockAt(occ);
            if (maxAbs(diff) > tol)
                return false;
        }
        return true;
    }

    FockOperator lubChain(const std::vector<FockOperator>& chain, double tol) {
        if (chain.empty())
            throw std::invalid_argument("lubChain: empty chain");
        for (size_t i = 0; i + 1 < chain.size(); ++i)
            if (!flatLeq(chain[i], chain[i + 1], tol))
                throw std::invalid_argument("lubChain: input is not an increasing chain");
        FockOperator out(chain.front().context());
        for (const auto& element : chain) {
            for (const auto& occ : belowClosure(element.support(tol))) {
                if (!occ.withinCaps(out.context().caps))
                    continue;
                SparseMatrix blk = element.blockAt(occ);
                if (maxAbs(blk) > tol)
                    out.setBlock(occ, std::move(blk));
            }
        }
        return out;
    }

    FockOperator cylindricalExtension(const DenseMatrix& m, const OccVec& base,
                                      const FockContext& ctx) {
        const Spaces& spaces = *ctx.spaces;
        long baseDim = BlockShape::at(spaces, base).totalDim;
        if (m.rows() != baseDim || m.cols() != baseDim)
            throw std::invalid_argument("cylindricalExtension: matrix does not match base");
        SparseMatrix sm = sparseFromDense(m);
        FockOperator out(ctx);
        for (const auto& occ : enumerateOccupations(ctx.caps)) {
            if (!base.leq(occ))
                continue;
            BlockShape shape = BlockShape::at(spaces, occ);
            // The fixed matrix occupies the highest-index copies; identity
            // factors fill the new lowest-index slots, matching the slot the
            // creation functional opens.
            std::vector<int> slots;
            for (int c = 0; c < spaces.coinCount(); ++c) {
                int skip = occ.counts[c] - base.counts[c];
                for (int k = skip; k < occ.counts[c]; ++k)
                    slots.push_back(shape.coinSlot(c, k));
            }
            for (size_t p = 0; p < spaces.principals.size(); ++p)
                slots.push_back(shape.principalSlot(static_cast<int>(p)));
            out.setBlock(occ, embedOnSlots(sm, shape.dims, slots));
        }
        return out;
    }

    FockOperator liftEvolution(const DenseMatrix& u, const std::string& coin,
                               const FockContext& ctx) {
        const Spaces& spaces = *ctx.spaces;
        int coinIdx = spaces.coinIndex(coin);
        if (coinIdx < 0)
            throw std::invalid_argument("liftEvolution: unknown coin '" + coin + "'");
        if (u.rows() != spaces.coins[coinIdx].dimension() || u.rows() != u.cols())
            throw std::invalid_argument("liftEvolution: matrix does not match coin dimension");
        FockOperator out(ctx);
        SparseMatrix su = sparseFromDense(u);
        for (int n = 1; n <= ctx.caps[coinIdx]; ++n) {
            OccVec occ = OccVec::zeros(spaces.coinCount()).plus(coinIdx, n);
            BlockShape shape = BlockShape::at(spaces, occ);
            SparseMatrix acc(shape.totalDim, shape.totalDim);
            acc.setIdentity();
            for (int k = 0; k < n; ++k)
                acc = (embedOnSlots(su, shape.dims, {shape.coinSlot(coinIdx, k)}) * acc)
                          .pruned();
            out.setBlock(occ, acc);
        }
        return out;
    }

    double maxAbsDiff(const FockOperator& a, const FockOperator& b) {
        a.context().requireCompatible(b.context());
        double best = 0.0;
        SupportSet occs;
        for (const auto& [occ, m] : a.blocks())
            occs.insert(occ);
        for (const auto& [occ, m] : b.blocks())
            occs.insert(occ);
        for (const auto& occ : occs)
            best = std::max(best, maxAbs(SparseMatrix(a.blockAt(occ) - b.blockAt(occ))));
        return best;
    }

}  // namespace fockrec
