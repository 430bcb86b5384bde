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

#include "fockrec/symmetry.hpp"

#include <algorithm>
#include <numeric>

namespace fockrec {

    int PermutationSpec::sign() const {
        int inv = 0;
        for (size_t i = 0; i < mapping.size(); ++i)
            for (size_t j = i + 1; j < mapping.size(); ++j)
                if (mapping[i] > mapping[j])
                    ++inv;
        return inv % 2 == 0 ? 1 : -1;
    }

    PermutationSpec PermutationSpec::identity(int n) {
        PermutationSpec p;
        p.mapping.resize(n);
        std::iota(p.mapping.begin(), p.mapping.end(), 0);
        return p;
    }

    PermutationSpec PermutationSpec::composedAfter(const PermutationSpec& other) const {
        // (P_a P_b)|psi>_i = (P_b psi)_{a(i)} = psi_{b(a(i))}.
        PermutationSpec out;
        out.mapping.resize(mapping.size());
        for (size_t i = 0; i < mapping.size(); ++i)
            out.mapping[i] = other.mapping[mapping[i]];
        return out;
    }

    std::vector<PermutationSpec> allPermutations(int n) {
        std::vector<int> base(n);
        std::iota(base.begin(), base.end(), 0);
        std::vector<PermutationSpec> out;
        do {
            PermutationSpec p;
            p.mapping = base;
            out.push_back(p);
        } while (std::next_permutation(base.begin(), base.end()));
        return out;
    }

    namespace {
        /// Index remap for permuting the copy slots of one coin:
        /// new digit at copy k = old digit at copy pi(k).
        long permuteIndex(long index, const BlockShape& shape, int coinIdx,
                          const PermutationSpec& pi) {
            auto digits = digitsOf(index, shape.dims);
            auto out = digits;
            for (int k = 0; k < pi.size(); ++k)
                out[shape.coinSlot(coinIdx, k)] = digits[shape.coinSlot(coinIdx, pi.mapping[k])];
            return indexOf(out, shape.dims);
        }

        SparseMatrix conjugateByCoinPermutations(const SparseMatrix& block,
                                                 const BlockShape& shape,
                                                 const std::vector<int>& coinIdxs,
                                                 const std::vector<PermutationSpec>& pis) {
            // P A P^{-1} moves the entry (r, c) to (sigma(r), sigma(c)) where
            // sigma is the basis-index action of the permutation family.
            std::vector<Eigen::Triplet<Complex>> trips;
            trips.reserve(static_cast<size_t>(block.nonZeros()));
            for (int k = 0; k < block.outerSize(); ++k) {
                for (SparseMatrix::InnerIterator it(block, k); it; ++it) {
                    long r = it.row(), c = it.col();
                    for (size_t i = 0; i < coinIdxs.size(); ++i) {
                        r = permuteIndex(r, shape, coinIdxs[i], pis[i]);
                        c = permuteIndex(c, shape, coinIdxs[i], pis[i]);
                    }
                    trips.emplace_back(r, c, it.value());
                }
            }
            SparseMatrix out(block.rows(), block.cols());
            out.setFromTriplets(trips.begin(), trips.end());
            return out;
        }
    }  // namespace

    SparseMatrix permutationOperator(const PermutationSpec& pi, const std::string& coin,
                                     const OccVec& occ, const FockContext& ctx) {
        const Spaces& spaces = *ctx.spaces;
        int coinIdx = spaces.coinIndex(coin);
        if (coinIdx < 0)
            throw std::invalid_argument("permutationOperator: unknown coin '" + coin + "'");
        if (pi.size() != occ.counts[coinIdx])
            throw std::invalid_argument(
                "permutationOperator: permutation size does not match occupation");
        BlockShape shape = BlockShape::at(spaces, occ);
        std::vector<Eigen::Triplet<Complex>> trips;
        trips.reserve(static_cast<size_t>(shape.totalDim));
        for (long col = 0; col < shape.totalDim; ++col) {
            // P_pi |col> = |row>: digit at copy k comes from copy pi(k).
            auto digits = digitsOf(col, shape.dims);
            auto out = digits;
            for (int k = 0; k < pi.size(); ++k)
                out[shape.coinSlot(coinIdx, k)] = digits[shape.coinSlot(coinIdx, pi.mapping[k])];
            trips.emplace_back(indexOf(out, shape.dims), col, Complex(1, 0));
        }
        SparseMatrix p(shape.totalDim, shape.totalDim);
        p.setFromTriplets(trips.begin(), trips.end());
        return p;
    }

    DenseVector symmetriseStateVector(const std::vector<DenseVector>& factors, Statistics v) {
        int n = static_cast<int>(factors.size());
        if (n == 0)
            return DenseVector::Ones(1);
        long dim = 1;
        for (const auto& f : factors)
            dim *= f.size();
        DenseVector acc = DenseVector::Zero(dim);
        std::vector<long> dims;
        for (const auto& f : factors)
            dims.push_back(f.size());
        for (const auto& pi : allPermutations(n)) {
            double sgn = (v == Statistics::Fermion) ? pi.sign() : 1.0;
            // P_pi (x_0 (x) ... (x) x_{n-1}) places factor pi(k) at slot k.
            for (long idx = 0; idx < dim; ++idx) {
                auto digits = digitsOf(idx, dims);
                Complex term = sgn;
                for (int k = 0; k < n; ++k)
                    term *= factors[pi.mapping[k]](digits[k]);
                acc(idx) += term;
            }
        }
        double fact = 1.0;
        for (int k = 2; k <= n; ++k)
            fact *= k;
        return acc / fact;
    }

    SparseMatrix symmetriseBlock(const SparseMatrix& block, const OccVec& occ,
                                 const FockContext& ctx, int factorialCap) {
        const Spaces& spaces = *ctx.spaces;
        BlockShape shape = BlockShape::at(spaces, occ);
        std::vector<int> coinIdxs;
        std::vector<std::vector<PermutationSpec>> perCoin;
        double weight = 1.0;
        for (int c = 0; c < spaces.coinCount(); ++c) {
            int n = occ.counts[c];
            if (n < 2)
                continue;
            if (n > factorialCap)
                throw std::invalid_argument(
                    "symmetriseBlock: occupation exceeds the factorial budget");
            coinIdxs.push_back(c);
            perCoin.push_back(allPermutations(n));
            for (int k = 2; k <= n; ++k)
                weight *= k;
        }
        if (coinIdxs.empty())
            return block;

        SparseMatrix acc(block.rows(), block.cols());
        std::vector<size_t> choice(coinIdxs.size(), 0);
        while (true) {
            std::vector<PermutationSpec> pis;
            for (size_t i = 0; i < coinIdxs.size(); ++i)
                pis.push_back(perCoin[i][choice[i]]);
            acc += conjugateByCoinPermutations(block, shape, coinIdxs, pis);
            size_t i = 0;
            for (; i < choice.size(); ++i) {
                if (++choice[i] < perCoin[i].size())
                    break;
                choice[i] = 0;
            }
            if (i == choice.size())
                break;
        }
        return prunedCopy(SparseMatrix(acc * Complex(1.0 / weight, 0)), 1e-16);
    }

    FockOperator symmetriseOperator(const FockOperator& a, int factorialCap) {
        FockOperator out(a.context());
        out.noteDropped(a.droppedBlocks());
        for (const auto& [occ, m] : a.blocks())
            out.setBlock(occ, symmetriseBlock(m, occ, a.context(), factorialCap));
        out.pruneTiny();
        return out;
    }

    bool isSymmetric(const FockOperator& a, double tol) {
        const Spaces& spaces = a.spaces();
        for (const auto& [occ, m] : a.blocks()) {
            BlockShape shape = BlockShape::at(spaces, occ);
            for (int c = 0; c < spaces.coinCount(); ++c) {
                int n = occ.counts[c];
                for (int k = 0; k + 1 < n; ++k) {
                    PermutationSpec swap = PermutationSpec::identity(n);
                    std::swap(swap.mapping[k], swap.mapping[k + 1]);
                    SparseMatrix conj = conjugateByCoinPermutations(
                        m, shape, {c}, {swap});
                    if (maxAbs(SparseMatrix(conj - m)) > tol)
                        return false;
                }
            }
        }
        return true;
    }

    FockOperator oneBodyObservable(const DenseMatrix& single, const std::string& coin,
                                   const FockContext& ctx) {
        const Spaces& spaces = *ctx.spaces;
        int coinIdx = spaces.coinIndex(coin);
        if (coinIdx < 0)
            throw std::invalid_argument("oneBodyObservable: unknown coin '" + coin + "'");
        if (single.rows() != single.cols() ||
            single.rows() != spaces.coins[coinIdx].dimension())
            throw std::invalid_argument("oneBodyObservable: matrix does not match coin");
        FockOperator out(ctx);
        SparseMatrix ss = sparseFromDense(single);
        for (int n = 1; n <= ctx.caps[coinIdx]; ++n) {
            OccVec occ = OccVec::zeros(spaces.coinCount()).plus(coinIdx, n);
            BlockShape shape = BlockShape::at(spaces, occ);
            SparseMatrix acc(shape.totalDim, shape.totalDim);
            for (int k = 0; k < n; ++k)
                acc += embedOnSlots(ss, shape.dims, {shape.coinSlot(coinIdx, k)});
            out.setBlock(occ, acc);
        }
        return out;
    }

}  // namespace fockrec
