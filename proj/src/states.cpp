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

#include "fockrec/states.hpp"

#include <cmath>

namespace fockrec {

    long FockState::componentDim(const OccVec& occ) const {
        long d = 1;
        for (int c = 0; c < ctx.coinCount(); ++c)
            for (int k = 0; k < occ.counts[c]; ++k)
                d *= ctx.spaces->coins[c].dimension();
        if (includesPrincipal)
            d *= ctx.spaces->principalDim();
        return d;
    }

    double FockState::squaredNorm() const {
        double s = 0.0;
        for (const auto& [occ, v] : components)
            s += v.squaredNorm();
        return s;
    }

    DenseVector FockState::componentAt(const OccVec& occ) const {
        auto it = components.find(occ);
        if (it != components.end())
            return it->second;
        return DenseVector::Zero(componentDim(occ));
    }

    void FockState::addComponent(const OccVec& occ, const DenseVector& v) {
        auto it = components.find(occ);
        if (it == components.end()) {
            if (v.size() != componentDim(occ))
                throw std::invalid_argument("FockState: component dimension mismatch");
            components[occ] = v;
        } else {
            it->second += v;
        }
    }

    void FockState::prune(double tol) {
        for (auto it = components.begin(); it != components.end();) {
            if (it->second.cwiseAbs().maxCoeff() <= tol)
                it = components.erase(it);
            else
                ++it;
        }
    }

    FockState vacuumState(const FockContext& ctx,
                          const std::map<std::string, Statistics>& stats) {
        FockState s;
        s.ctx = ctx;
        s.statistics = stats;
        s.components[OccVec::zeros(ctx.coinCount())] = DenseVector::Ones(1);
        return s;
    }

    FockState basisCoinState(const FockContext& ctx, const std::string& coin,
                             const std::vector<std::string>& labels, Statistics v) {
        const Spaces& spaces = *ctx.spaces;
        int coinIdx = spaces.coinIndex(coin);
        if (coinIdx < 0)
            throw std::invalid_argument("basisCoinState: unknown coin '" + coin + "'");
        const SpaceSpec& spec = spaces.coins[coinIdx];
        std::vector<DenseVector> factors;
        for (const auto& l : labels) {
            auto idx = spec.labelIndex(l);
            if (!idx)
                throw std::invalid_argument("basisCoinState: unknown label '" + l + "'");
            DenseVector e = DenseVector::Zero(spec.dimension());
            e(*idx) = 1.0;
            factors.push_back(e);
        }
        DenseVector sym = symmetriseStateVector(factors, v);
        double norm = sym.norm();
        if (norm < 1e-14)
            throw std::invalid_argument(
                "basisCoinState: antisymmetrisation of repeated labels vanishes");
        FockState s;
        s.ctx = ctx;
        s.statistics[coin] = v;
        OccVec occ = OccVec::zeros(ctx.coinCount()).plus(coinIdx, static_cast<int>(labels.size()));
        if (!occ.withinCaps(ctx.caps))
            throw TruncationError("basisCoinState: occupation exceeds truncation");
        s.components[occ] = sym / norm;
        return s;
    }

    FockState creationOp(const DenseVector& psi, const FockState& s, const std::string& coin,
                         double* droppedWeight) {
        const Spaces& spaces = *s.ctx.spaces;
        int coinIdx = spaces.coinIndex(coin);
        if (coinIdx < 0)
            throw std::invalid_argument("creationOp: unknown coin '" + coin + "'");
        if (psi.size() != spaces.coins[coinIdx].dimension())
            throw std::invalid_argument("creationOp: vector does not match coin dimension");
        if (s.includesPrincipal)
            throw std::invalid_argument("creationOp: expected a coin-only state");

        FockState out;
        out.ctx = s.ctx;
        out.statistics = s.statistics;
        double dropped = 0.0;
        for (const auto& [occ, v] : s.components) {
            int n = occ.counts[coinIdx];
            OccVec target = occ.plus(coinIdx);
            if (!target.withinCaps(s.ctx.caps)) {
                dropped += (n + 1) * v.squaredNorm();
                continue;
            }
            // psi lands in the copy-0 slot; existing copies shift rightward.
            BlockShape shape = BlockShape::at(spaces, target, false);
            DenseVector grown = DenseVector::Zero(shape.totalDim);
            BlockShape srcShape = BlockShape::at(spaces, occ, false);
            for (long idx = 0; idx < v.size(); ++idx) {
                if (v(idx) == Complex(0, 0))
                    continue;
                auto srcDigits = digitsOf(idx, srcShape.dims);
                for (int a = 0; a < psi.size(); ++a) {
                    if (psi(a) == Complex(0, 0))
                        continue;
                    std::vector<int> digits(shape.dims.size(), 0);
                    digits[shape.coinSlot(coinIdx, 0)] = a;
                    // Copy the remaining digits, coin copies shifted by one.
                    for (int c = 0; c < spaces.coinCount(); ++c) {
                        int shift = (c == coinIdx) ? 1 : 0;
                        for (int k = 0; k < occ.counts[c]; ++k)
                            digits[shape.coinSlot(c, k + shift)] =
                                srcDigits[srcShape.coinSlot(c, k)];
                    }
                    grown(indexOf(digits, shape.dims)) += psi(a) * v(idx);
                }
            }
            out.addComponent(occ.plus(coinIdx), std::sqrt(n + 1.0) * grown);
        }
        out = symmetriseState(out);
        out.prune();
        if (droppedWeight)
            *droppedWeight = dropped;
        return out;
    }

    FockState annihilationOp(const DenseVector& psi, const FockState& s,
                             const std::string& coin) {
        const Spaces& spaces = *s.ctx.spaces;
        int coinIdx = spaces.coinIndex(coin);
        if (coinIdx < 0)
            throw std::invalid_argument("annihilationOp: unknown coin '" + coin + "'");
        if (psi.size() != spaces.coins[coinIdx].dimension())
            throw std::invalid_argument("annihilationOp: vector does not match coin dimension");
        if (s.includesPrincipal)
            throw std::invalid_argument("annihilationOp: expected a coin-only state");

        FockState out;
        out.ctx = s.ctx;
        out.statistics = s.statistics;
        for (const auto& [occ, v] : s.components) {
            int n = occ.counts[coinIdx];
            if (n == 0)
                continue;  // a(psi) on the vacuum side gives zero
            OccVec target = occ.plus(coinIdx, -1);
            BlockShape srcShape = BlockShape::at(spaces, occ, false);
            BlockShape dstShape = BlockShape::at(spaces, target, false);
            DenseVector shrunk = DenseVector::Zero(dstShape.totalDim);
            // On (anti)symmetric input, a(psi) = sqrt(n) <psi| on copy 0.
            for (long idx = 0; idx < v.size(); ++idx) {
                if (v(idx) == Complex(0, 0))
                    continue;
                auto srcDigits = digitsOf(idx, srcShape.dims);
                int a = srcDigits[srcShape.coinSlot(coinIdx, 0)];
                std::vector<int> digits(dstShape.dims.size(), 0);
                for (int c = 0; c < spaces.coinCount(); ++c) {
                    int shift = (c == coinIdx) ? 1 : 0;
                    for (int k = 0; k < target.counts[c]; ++k)
                        digits[dstShape.coinSlot(c, k)] =
                            srcDigits[srcShape.coinSlot(c, k + shift)];
                }
                shrunk(indexOf(digits, dstShape.dims)) += std::conj(psi(a)) * v(idx);
            }
            out.addComponent(target, std::sqrt(static_cast<double>(n)) * shrunk);
        }
        out.prune();
        return out;
    }

    FockState coherentState(const DenseVector& psi, const std::string& coin,
                            const FockContext& ctx, int cap, double* tailWeight) {
        const Spaces& spaces = *ctx.spaces;
        int coinIdx = spaces.coinIndex(coin);
        if (coinIdx < 0)
            throw std::invalid_argument("coherentState: unknown coin '" + coin + "'");
        if (cap > ctx.caps[coinIdx])
            throw TruncationError("coherentState: cap exceeds coin truncation");

        double norm2 = psi.squaredNorm();
        double prefactor = std::exp(-0.5 * norm2);
        std::map<std::string, Statistics> stats;
        stats[coin] = Statistics::Boson;
        FockState out = vacuumState(ctx, stats);
        FockState level = out;  // a^dag(psi)^n / n! applied to the vacuum
        double factorial = 1.0;
        for (int n = 1; n <= cap; ++n) {
            level = creationOp(psi, level, coin);
            factorial *= n;
            for (const auto& [occ, v] : level.components)
                out.addComponent(occ, v / factorial);
        }
        for (auto& [occ, v] : out.components)
            v *= prefactor;
        if (tailWeight) {
            double tail = 0.0;
            double term = 1.0;  // norm2^n / n!
            for (int n = 1; n <= cap; ++n)
                term *= norm2 / n;
            for (int n = cap + 1; n <= cap + 200; ++n) {
                term *= norm2 / n;
                tail += term;
            }
            *tailWeight = std::exp(-norm2) * tail;
        }
        return out;
    }

    FockState tensorWithPrincipal(const FockState& coinState, const DenseVector& principal) {
        if (coinState.includesPrincipal)
            throw std::invalid_argument("tensorWithPrincipal: state already has a principal part");
        if (principal.size() != coinState.ctx.spaces->principalDim())
            throw std::invalid_argument("tensorWithPrincipal: principal dimension mismatch");
        FockState out;
        out.ctx = coinState.ctx;
        out.statistics = coinState.statistics;
        out.includesPrincipal = true;
        for (const auto& [occ, v] : coinState.components) {
            DenseVector joint(v.size() * principal.size());
            for (long i = 0; i < v.size(); ++i)
                joint.segment(i * principal.size(), principal.size()) = v(i) * principal;
            out.components[occ] = joint;
        }
        return out;
    }

    FockState applyOperator(const FockOperator& a, const FockState& s) {
        a.context().requireCompatible(s.ctx);
        if (!s.includesPrincipal)
            throw std::invalid_argument("applyOperator: state lacks the principal factor");
        FockState out;
        out.ctx = s.ctx;
        out.statistics = s.statistics;
        out.includesPrincipal = true;
        for (const auto& [occ, m] : a.blocks()) {
            auto it = s.components.find(occ);
            if (it == s.components.end())
                continue;
            out.addComponent(occ, m * it->second);
        }
        out.prune();
        return out;
    }

    namespace {
        int sortParity(std::vector<int> digits) {
            int inv = 0;
            for (size_t i = 0; i < digits.size(); ++i)
                for (size_t j = i + 1; j < digits.size(); ++j)
                    if (digits[i] > digits[j])
                        ++inv;
            return inv % 2 == 0 ? 1 : -1;
        }
    }  // namespace

    FockState symmetriseState(const FockState& s) {
        const Spaces& spaces = *s.ctx.spaces;
        FockState out;
        out.ctx = s.ctx;
        out.statistics = s.statistics;
        out.includesPrincipal = s.includesPrincipal;

        for (const auto& [occ, v] : s.components) {
            std::vector<int> activeCoins;
            double denom = 1.0;
            for (int c = 0; c < spaces.coinCount(); ++c) {
                if (occ.counts[c] >= 2) {
                    activeCoins.push_back(c);
                    for (int k = 2; k <= occ.counts[c]; ++k)
                        denom *= k;
                }
            }
            if (activeCoins.empty()) {
                out.components[occ] = v;
                continue;
            }
            BlockShape shape = BlockShape::at(spaces, occ, s.includesPrincipal);

            // Bucket nonzero entries by the per-coin digit multisets plus the
            // untouched digits; S_v spreads each bucket uniformly (with signs
            // for fermions) over the arrangements of every multiset.
            struct Bucket {
                Complex sum{0, 0};
                std::vector<int> sortedDigits;  // representative full digits
            };
            std::map<std::string, Bucket> buckets;
            for (long idx = 0; idx < v.size(); ++idx) {
                if (v(idx) == Complex(0, 0))
                    continue;
                auto digits = digitsOf(idx, shape.dims);
                double sign = 1.0;
                auto rep = digits;
                for (int c : activeCoins) {
                    std::vector<int> coinDigits;
                    for (int k = 0; k < occ.counts[c]; ++k)
                        coinDigits.push_back(digits[shape.coinSlot(c, k)]);
                    Statistics stat = Statistics::Boson;
                    if (auto it = s.statistics.find(spaces.coins[c].name);
                        it != s.statistics.end())
                        stat = it->second;
                    if (stat == Statistics::Fermion)
                        sign *= sortParity(coinDigits);
                    std::sort(coinDigits.begin(), coinDigits.end());
                    for (int k = 0; k < occ.counts[c]; ++k)
                        rep[shape.coinSlot(c, k)] = coinDigits[k];
                }
                std::string key;
                for (int d : rep)
                    key += std::to_string(d) + ",";
                auto& b = buckets[key];
                b.sum += sign * v(idx);
                b.sortedDigits = rep;
            }

            DenseVector acc = DenseVector::Zero(shape.totalDim);
            for (auto& [key, b] : buckets) {
                // Stabiliser size: product of multiplicity factorials.
                double stab = 1.0;
                bool fermionRepeat = false;
                for (int c : activeCoins) {
                    Statistics stat = Statistics::Boson;
                    if (auto it = s.statistics.find(spaces.coins[c].name);
                        it != s.statistics.end())
                        stat = it->second;
                    int run = 1;
                    for (int k = 1; k < occ.counts[c]; ++k) {
                        if (b.sortedDigits[shape.coinSlot(c, k)] ==
                            b.sortedDigits[shape.coinSlot(c, k - 1)]) {
                            ++run;
                            stab *= run;
                            if (stat == Statistics::Fermion)
                                fermionRepeat = true;
                        } else {
                            run = 1;
                        }
                    }
                }
                if (fermionRepeat)
                    continue;  // antisymmetrisation of repeated states vanishes
                double weight = stab / denom;

                // Enumerate arrangements coin by coin.
                std::vector<std::vector<std::vector<int>>> arrangements;
                for (int c : activeCoins) {
                    std::vector<int> coinDigits;
                    for (int k = 0; k < occ.counts[c]; ++k)
                        coinDigits.push_back(b.sortedDigits[shape.coinSlot(c, k)]);
                    std::vector<std::vector<int>> arr;
                    do {
                        arr.push_back(coinDigits);
                    } while (std::next_permutation(coinDigits.begin(), coinDigits.end()));
                    arrangements.push_back(std::move(arr));
                }
                std::vector<size_t> choice(activeCoins.size(), 0);
                while (true) {
                    auto digits = b.sortedDigits;
                    double sign = 1.0;
                    for (size_t i = 0; i < activeCoins.size(); ++i) {
                        int c = activeCoins[i];
                        const auto& arr = arrangements[i][choice[i]];
                        Statistics stat = Statistics::Boson;
                        if (auto it = s.statistics.find(spaces.coins[c].name);
                            it != s.statistics.end())
                            stat = it->second;
                        if (stat == Statistics::Fermion)
                            sign *= sortParity(arr);
                        for (int k = 0; k < occ.counts[c]; ++k)
                            digits[shape.coinSlot(c, k)] = arr[k];
                    }
                    acc(indexOf(digits, shape.dims)) += sign * weight * b.sum;
                    size_t i = 0;
                    for (; i < choice.size(); ++i) {
                        if (++choice[i] < arrangements[i].size())
                            break;
                        choice[i] = 0;
                    }
                    if (i == choice.size())
                        break;
                }
            }
            out.components[occ] = std::move(acc);
        }
        out.prune();
        return out;
    }

    PartialDensityOperator partialTraceCoins(const FockState& s) {
        if (!s.includesPrincipal)
            throw std::invalid_argument("partialTraceCoins: state lacks the principal factor");
        long pdim = s.ctx.spaces->principalDim();
        DenseMatrix rho = DenseMatrix::Zero(pdim, pdim);
        for (const auto& [occ, v] : s.components) {
            long coinDim = v.size() / pdim;
            for (long b = 0; b < coinDim; ++b) {
                auto seg = v.segment(b * pdim, pdim);
                rho += seg * seg.adjoint();
            }
        }
        PartialDensityOperator out;
        out.matrix = rho;
        out.trace = rho.trace().real();
        return out;
    }

    std::map<std::string, double> positionDistribution(const PartialDensityOperator& rho,
                                                       const Spaces& spaces) {
        std::map<std::string, double> out;
        for (long i = 0; i < rho.matrix.rows(); ++i) {
            double p = rho.matrix(i, i).real();
            if (std::abs(p) > 1e-15)
                out[spaces.principalLabel(static_cast<int>(i))] = p;
        }
        return out;
    }

}  // namespace fockrec
