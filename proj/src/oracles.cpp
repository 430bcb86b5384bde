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

#include "fockrec/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace fockrec {

    // ------------------------------------------------------------------
    // Configuration simulator
    // ------------------------------------------------------------------

    namespace {

        using CopyKey = std::pair<std::string, int>;  // (coin, absolute copy)

        struct Frag {
            ProgPtr prog;
            std::map<std::string, int> shift;  // written copy j means copy j + shift
        };

        struct LiveConfig {
            std::vector<Frag> frags;
            std::map<CopyKey, std::string> labels;  // collapsed registers
            std::vector<CopyKey> active;            // sorted; vector registers
            DenseVector joint;  // dims: active registers..., then principals
            int qifs = 0;
        };

        struct Sim {
            const Declaration& decl;
            const GateLibrary& gates;
            const Spaces& spaces;
            std::map<std::string, DenseVector> coinInit;

            std::vector<long> jointDims(const LiveConfig& c) const {
                std::vector<long> dims;
                for (const auto& k : c.active)
                    dims.push_back(spaces.findCoin(k.first)->dimension());
                for (const auto& p : spaces.principals)
                    dims.push_back(p.dimension());
                return dims;
            }

            void activate(LiveConfig& c, const CopyKey& key) const {
                if (std::find(c.active.begin(), c.active.end(), key) != c.active.end())
                    return;
                DenseVector v0;
                auto lit = c.labels.find(key);
                const SpaceSpec* spec = spaces.findCoin(key.first);
                if (lit != c.labels.end()) {
                    v0 = DenseVector::Zero(spec->dimension());
                    v0(*spec->labelIndex(lit->second)) = 1.0;
                    c.labels.erase(lit);
                } else {
                    v0 = coinInit.at(key.first);
                }
                // Insert in sorted position; reindex the joint vector.
                auto pos = std::lower_bound(c.active.begin(), c.active.end(), key);
                int slot = static_cast<int>(pos - c.active.begin());
                auto oldDims = jointDims(c);
                c.active.insert(pos, key);
                auto newDims = jointDims(c);
                DenseVector grown = DenseVector::Zero(c.joint.size() * spec->dimension());
                for (long idx = 0; idx < c.joint.size(); ++idx) {
                    if (c.joint(idx) == Complex(0, 0))
                        continue;
                    auto digits = digitsOf(idx, oldDims);
                    std::vector<int> nd(newDims.size());
                    for (size_t i = 0, j = 0; i < newDims.size(); ++i) {
                        if (static_cast<int>(i) == slot)
                            continue;
                        nd[i] = digits[j++];
                    }
                    for (int a = 0; a < spec->dimension(); ++a) {
                        nd[slot] = a;
                        grown(indexOf(nd, newDims)) += v0(a) * c.joint(idx);
                    }
                }
                c.joint = std::move(grown);
            }

            void applyGate(LiveConfig& c, const Prog& p, const Frag& f) const {
                const GateDef* g = gates.find(p.gate);
                if (!g)
                    throw std::invalid_argument("undeclared gate '" + p.gate + "'");
                std::vector<CopyKey> keys;
                for (const auto& cr : p.coins) {
                    int sh = 0;
                    if (auto it = f.shift.find(cr.coin); it != f.shift.end())
                        sh = it->second;
                    keys.emplace_back(cr.coin, cr.copyIndex + sh);
                }
                for (const auto& k : keys)
                    activate(c, k);
                auto dims = jointDims(c);
                std::vector<int> slots;
                for (const auto& k : keys) {
                    auto it = std::find(c.active.begin(), c.active.end(), k);
                    slots.push_back(static_cast<int>(it - c.active.begin()));
                }
                for (const auto& s : p.systems) {
                    int pi = spaces.principalIndex(s);
                    if (pi < 0)
                        throw std::invalid_argument("undeclared principal register '" + s + "'");
                    slots.push_back(static_cast<int>(c.active.size()) + pi);
                }
                c.joint = embedOnSlots(g->matrix, dims, slots) * c.joint;
            }

            /// Advances one configuration until it terminates, aborts, or
            /// pauses at a call/case statement with the budget used up.
            /// Case statements split; children go back on the work stack.
            void run(LiveConfig cfg, int budget, std::vector<LiveConfig>& terminated,
                     std::vector<LiveConfig>& paused) const {
                std::deque<LiveConfig> work;
                work.push_back(std::move(cfg));
                while (!work.empty()) {
                    LiveConfig c = std::move(work.front());
                    work.pop_front();
                    bool dead = false;
                    while (!c.frags.empty()) {
                        Frag f = c.frags.front();
                        if (f.prog->kind == ProgKind::Seq) {
                            c.frags.front() = {f.prog->second, f.shift};
                            c.frags.insert(c.frags.begin(), Frag{f.prog->first, f.shift});
                            continue;
                        }
                        if (f.prog->kind == ProgKind::Skip) {
                            c.frags.erase(c.frags.begin());
                            continue;
                        }
                        if (f.prog->kind == ProgKind::Abort) {
                            dead = true;
                            break;
                        }
                        if (f.prog->kind == ProgKind::Unitary) {
                            applyGate(c, *f.prog, f);
                            c.frags.erase(c.frags.begin());
                            continue;
                        }
                        if (f.prog->kind == ProgKind::ProcCall) {
                            if (c.qifs >= budget)
                                break;  // pause at the bare call
                            const ProgPtr* body = decl.body(f.prog->callee);
                            if (!body)
                                throw std::invalid_argument("undeclared procedure '" +
                                                            f.prog->callee + "'");
                            c.frags.front() = {*body, f.shift};
                            continue;
                        }
                        // Case statement.
                        if (c.qifs >= budget)
                            break;
                        int sh = 0;
                        if (auto it = f.shift.find(f.prog->guard.coin); it != f.shift.end())
                            sh = it->second;
                        CopyKey key{f.prog->guard.coin, f.prog->guard.copyIndex + sh};
                        activate(c, key);
                        auto dims = jointDims(c);
                        auto it = std::find(c.active.begin(), c.active.end(), key);
                        int slot = static_cast<int>(it - c.active.begin());
                        const SpaceSpec* spec = spaces.findCoin(key.first);

                        c.frags.erase(c.frags.begin());
                        for (const auto& b : f.prog->branches) {
                            auto li = spec->labelIndex(b.label);
                            if (!li)
                                throw std::invalid_argument("label '" + b.label +
                                                            "' not in guard basis");
                            LiveConfig child = c;
                            // Project the guard register on the branch label.
                            std::vector<long> redDims = dims;
                            redDims.erase(redDims.begin() + slot);
                            long redSize = child.joint.size() / spec->dimension();
                            DenseVector reduced = DenseVector::Zero(redSize);
                            for (long idx = 0; idx < child.joint.size(); ++idx) {
                                if (child.joint(idx) == Complex(0, 0))
                                    continue;
                                auto digits = digitsOf(idx, dims);
                                if (digits[slot] != *li)
                                    continue;
                                auto rd = digits;
                                rd.erase(rd.begin() + slot);
                                reduced(indexOf(rd, redDims)) = child.joint(idx);
                            }
                            if (reduced.cwiseAbs().maxCoeff() <= 1e-15)
                                continue;
                            child.joint = std::move(reduced);
                            child.active.erase(child.active.begin() + slot);
                            child.labels[key] = b.label;
                            child.qifs = c.qifs + 1;
                            auto shifted = f.shift;
                            shifted[key.first] = key.second + 1;
                            child.frags.insert(child.frags.begin(), Frag{b.body, shifted});
                            work.push_back(std::move(child));
                        }
                        dead = true;  // the parent was replaced by its children
                        break;
                    }
                    if (dead)
                        continue;
                    if (c.frags.empty())
                        terminated.push_back(std::move(c));
                    else
                        paused.push_back(std::move(c));
                }
            }

            std::string residualText(const LiveConfig& c) const {
                if (c.frags.empty())
                    return "E";
                std::ostringstream oss;
                for (size_t i = 0; i < c.frags.size(); ++i) {
                    if (i)
                        oss << "; ";
                    oss << printProg(c.frags[i].prog);
                }
                return oss.str();
            }

            std::string mergeKey(const LiveConfig& c) const {
                std::ostringstream oss;
                for (const auto& f : c.frags) {
                    oss << printProg(f.prog) << "@";
                    for (const auto& [coin, sh] : f.shift)
                        oss << coin << ":" << sh << ",";
                    oss << "|";
                }
                oss << "/";
                for (const auto& [k, l] : c.labels)
                    oss << k.first << "#" << k.second << "=" << l << ",";
                oss << "/";
                for (const auto& k : c.active)
                    oss << k.first << "#" << k.second << ",";
                return oss.str();
            }

            void mergeConfigs(std::vector<LiveConfig>& configs) const {
                std::map<std::string, size_t> seen;
                std::vector<LiveConfig> merged;
                for (auto& c : configs) {
                    std::string key = mergeKey(c);
                    auto it = seen.find(key);
                    if (it == seen.end()) {
                        seen[key] = merged.size();
                        merged.push_back(std::move(c));
                    } else {
                        merged[it->second].joint += c.joint;
                    }
                }
                // Drop components that cancelled.
                configs.clear();
                for (auto& c : merged)
                    if (c.joint.cwiseAbs().maxCoeff() > 1e-13)
                        configs.push_back(std::move(c));
            }

            std::vector<WeightedConfig> split(const LiveConfig& c) const {
                std::vector<WeightedConfig> out;
                auto dims = jointDims(c);
                for (long idx = 0; idx < c.joint.size(); ++idx) {
                    Complex amp = c.joint(idx);
                    if (std::abs(amp) <= 1e-13)
                        continue;
                    auto digits = digitsOf(idx, dims);
                    WeightedConfig wc;
                    wc.amplitude = amp;
                    for (const auto& [key, label] : c.labels)
                        wc.coins.emplace_back(key.first, key.second, label);
                    for (size_t i = 0; i < c.active.size(); ++i) {
                        const SpaceSpec* spec = spaces.findCoin(c.active[i].first);
                        wc.coins.emplace_back(c.active[i].first, c.active[i].second,
                                              spec->basisLabels[digits[i]]);
                    }
                    std::sort(wc.coins.begin(), wc.coins.end());
                    long pIndex = 0;
                    for (size_t i = 0; i < spaces.principals.size(); ++i)
                        pIndex = pIndex * spaces.principals[i].dimension() +
                                 digits[c.active.size() + i];
                    wc.position = spaces.principalLabel(static_cast<int>(pIndex));
                    wc.residual = residualText(c);
                    out.push_back(std::move(wc));
                }
                return out;
            }
        };

    }  // namespace

    SimulationResult configSimulate(const Declaration& d, const GateLibrary& gates,
                                    const Spaces& spaces, const SimInit& init, int depth) {
        Sim sim{d, gates, spaces, {}};
        for (const auto& c : spaces.coins) {
            std::string label =
                init.coinLabels.count(c.name) ? init.coinLabels.at(c.name) : c.basisLabels[0];
            auto li = c.labelIndex(label);
            if (!li)
                throw std::invalid_argument("configSimulate: unknown coin label '" + label + "'");
            DenseVector v = DenseVector::Zero(c.dimension());
            v(*li) = 1.0;
            sim.coinInit[c.name] = v;
        }

        LiveConfig start;
        start.frags.push_back(Frag{d.main, {}});
        long pdim = spaces.principalDim();
        DenseVector pv = DenseVector::Zero(std::max<long>(pdim, 1));
        if (pdim > 0) {
            int pIndex = 0;
            if (!init.principalLabel.empty()) {
                auto pi = spaces.principalLabelIndex(init.principalLabel);
                if (!pi)
                    throw std::invalid_argument("configSimulate: unknown principal label '" +
                                                init.principalLabel + "'");
                pIndex = *pi;
            } else {
                for (const auto& p : spaces.principals)
                    pIndex = pIndex * p.dimension() + (p.dimension() / 2) * 0;
                // default: index 0 of each register unless it is a ring,
                // whose centre label "0" is the natural origin
                pIndex = 0;
                for (const auto& p : spaces.principals) {
                    auto zero = p.labelIndex("0");
                    pIndex = pIndex * p.dimension() + (zero ? *zero : 0);
                }
            }
            pv(pIndex) = 1.0;
        }
        start.joint = pv;

        SimulationResult result;
        std::vector<LiveConfig> terminated;
        std::vector<LiveConfig> live{start};
        for (int step = 1; step <= depth; ++step) {
            std::vector<LiveConfig> paused;
            for (auto& c : live)
                sim.run(std::move(c), step, terminated, paused);
            sim.mergeConfigs(paused);
            sim.mergeConfigs(terminated);
            live = std::move(paused);

            std::vector<WeightedConfig> snapshot;
            double weight = 0.0;
            for (const auto& c : terminated) {
                auto parts = sim.split(c);
                snapshot.insert(snapshot.end(), parts.begin(), parts.end());
                weight += c.joint.squaredNorm();
            }
            for (const auto& c : live) {
                auto parts = sim.split(c);
                snapshot.insert(snapshot.end(), parts.begin(), parts.end());
                weight += c.joint.squaredNorm();
            }
            result.steps.push_back(std::move(snapshot));
            result.stepWeights.push_back(weight);
        }
        for (const auto& c : terminated) {
            auto parts = sim.split(c);
            result.terminated.insert(result.terminated.end(), parts.begin(), parts.end());
        }
        for (const auto& c : live) {
            auto parts = sim.split(c);
            result.residual.insert(result.residual.end(), parts.begin(), parts.end());
        }
        return result;
    }

    // ------------------------------------------------------------------
    // Closed forms
    // ------------------------------------------------------------------

    namespace {

        DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
            DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
            for (long i = 0; i < a.rows(); ++i)
                for (long j = 0; j < a.cols(); ++j)
                    out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            return out;
        }

        DenseMatrix kronPower(const DenseMatrix& a, int n) {
            DenseMatrix out = DenseMatrix::Identity(1, 1);
            for (int i = 0; i < n; ++i)
                out = kron(out, a);
            return out;
        }

        /// |s><s| for a coin basis string (indices), as a dense matrix.
        DenseMatrix stringProjector(const std::vector<int>& s, int d) {
            long dim = 1;
            for (size_t i = 0; i < s.size(); ++i)
                dim *= d;
            long idx = 0;
            for (int digit : s)
                idx = idx * d + digit;
            DenseMatrix p = DenseMatrix::Zero(dim, dim);
            p(idx, idx) = 1.0;
            return p;
        }

        std::vector<std::vector<int>> stringsWithCounts(int zeros, int ones) {
            // All 0/1 strings with the given multiplicities, basis index 0/1.
            std::vector<std::vector<int>> out;
            int n = zeros + ones;
            std::vector<int> s(n, 0);
            for (int i = zeros; i < n; ++i)
                s[i] = 1;
            std::sort(s.begin(), s.end());
            do {
                out.push_back(s);
            } while (std::next_permutation(s.begin(), s.end()));
            return out;
        }

        struct WalkPieces {
            int coinIdx;
            int L;
            int R;
            DenseMatrix h;
            DenseMatrix tl;
            DenseMatrix tr;
        };

        WalkPieces walkPieces(const WalkOracleConfig& cfg) {
            const Spaces& spaces = *cfg.ctx.spaces;
            int coinIdx = spaces.coinIndex(cfg.coin);
            if (coinIdx < 0)
                throw std::invalid_argument("walk oracle: unknown coin '" + cfg.coin + "'");
            const SpaceSpec& spec = spaces.coins[coinIdx];
            if (spec.dimension() != 2)
                throw std::invalid_argument("walk oracle: the direction coin must be a qubit");
            auto l = spec.labelIndex("L");
            auto r = spec.labelIndex("R");
            if (!l || !r)
                throw std::invalid_argument("walk oracle: coin labels must be L and R");
            int pdim = spaces.principalDim();
            return {coinIdx, *l, *r, hadamardMatrix(), shiftMatrix(pdim, -1),
                    shiftMatrix(pdim, +1)};
        }

        void setWalkBlock(FockOperator& op, const WalkOracleConfig& cfg, int coinIdx, int n,
                          const DenseMatrix& coinPart, const DenseMatrix& principalPart) {
            OccVec occ = OccVec::zeros(cfg.ctx.coinCount()).plus(coinIdx, n);
            if (!occ.withinCaps(cfg.ctx.caps))
                return;
            op.setBlock(occ, sparseFromDense(kron(coinPart, principalPart)));
        }

    }  // namespace

    FockOperator unidirectionalClosedForm(int n, const WalkOracleConfig& cfg) {
        WalkPieces w = walkPieces(cfg);
        FockOperator out(cfg.ctx);
        for (int i = 0; i < n; ++i) {
            std::vector<int> s(i, w.R);
            s.push_back(w.L);
            DenseMatrix coinPart = stringProjector(s, 2) * kronPower(w.h, i + 1);
            DenseMatrix shift = w.tl;
            for (int k = 0; k < i; ++k)
                shift = shift * w.tr;  // T_L T_R^i
            setWalkBlock(out, cfg, w.coinIdx, i + 1, coinPart, shift);
        }
        return out;
    }

    BidirectionalForms bidirectionalClosedForm(const WalkOracleConfig& cfg) {
        WalkPieces w = walkPieces(cfg);
        BidirectionalForms out{FockOperator(cfg.ctx), FockOperator(cfg.ctx)};
        int capN = cfg.ctx.caps[w.coinIdx];
        for (int n = 1; n <= capN; ++n) {
            // Sigma_n = (RL)^k L for n = 2k+1, (RL)^k RR for n = 2k+2.
            std::vector<int> sigma;
            int k = (n - 1) / 2;
            for (int j = 0; j < k; ++j) {
                sigma.push_back(w.R);
                sigma.push_back(w.L);
            }
            if (n % 2 == 1)
                sigma.push_back(w.L);
            else {
                sigma.push_back(w.R);
                sigma.push_back(w.R);
            }
            std::vector<int> dual(sigma);
            for (auto& v : dual)
                v = (v == w.L) ? w.R : w.L;

            DenseMatrix hN = kronPower(w.h, n);
            DenseMatrix tx = (n % 2 == 1) ? w.tl : DenseMatrix(w.tr * w.tr);
            DenseMatrix ty = (n % 2 == 1) ? w.tr : DenseMatrix(w.tl * w.tl);
            setWalkBlock(out.x, cfg, w.coinIdx, n, stringProjector(sigma, 2) * hN, tx);
            setWalkBlock(out.y, cfg, w.coinIdx, n, stringProjector(dual, 2) * hN, ty);
        }
        return out;
    }

    SymmetrisedForms symmetrisedClosedForms(const WalkOracleConfig& cfg) {
        WalkPieces w = walkPieces(cfg);
        SymmetrisedForms out{FockOperator(cfg.ctx), FockOperator(cfg.ctx),
                             FockOperator(cfg.ctx)};
        int capN = cfg.ctx.caps[w.coinIdx];

        auto averagedProjector = [&](int numL, int numR) {
            // Average of |s><s| over all strings with the given counts.
            std::vector<std::vector<int>> strings = stringsWithCounts(numL, numR);
            long dim = 1;
            for (int i = 0; i < numL + numR; ++i)
                dim *= 2;
            DenseMatrix acc = DenseMatrix::Zero(dim, dim);
            for (auto& s01 : strings) {
                std::vector<int> s;
                for (int b : s01)
                    s.push_back(b == 0 ? w.L : w.R);
                acc += stringProjector(s, 2);
            }
            return DenseMatrix(acc / static_cast<double>(strings.size()));
        };

        for (int n = 1; n <= capN; ++n) {
            DenseMatrix hN = kronPower(w.h, n);
            // One-sided walk: i = n-1 repetitions of R and one L, any order.
            DenseMatrix g = averagedProjector(1, n - 1);
            DenseMatrix shift = w.tl;
            for (int k = 0; k < n - 1; ++k)
                shift = shift * w.tr;
            setWalkBlock(out.uni, cfg, w.coinIdx, n, g * hN, shift);

            if (n % 2 == 1) {
                int k = (n - 1) / 2;
                setWalkBlock(out.bidX, cfg, w.coinIdx, n, averagedProjector(k + 1, k) * hN,
                             w.tl);
                setWalkBlock(out.bidY, cfg, w.coinIdx, n, averagedProjector(k, k + 1) * hN,
                             w.tr);
            } else {
                int k = (n - 2) / 2;
                setWalkBlock(out.bidX, cfg, w.coinIdx, n, averagedProjector(k, k + 2) * hN,
                             DenseMatrix(w.tr * w.tr));
                setWalkBlock(out.bidY, cfg, w.coinIdx, n, averagedProjector(k + 2, k) * hN,
                             DenseMatrix(w.tl * w.tl));
            }
        }
        return out;
    }

    LoopForms loopClosedForm(const DenseMatrix& w, const DenseMatrix& u,
                             const LoopOracleConfig& cfg) {
        const Spaces& spaces = *cfg.ctx.spaces;
        int coinIdx = spaces.coinIndex(cfg.coin);
        if (coinIdx < 0)
            throw std::invalid_argument("loop oracle: unknown coin '" + cfg.coin + "'");
        const SpaceSpec& spec = spaces.coins[coinIdx];
        int cd = spec.dimension();
        int pdim = spaces.principalDim();
        if (w.rows() != cd * pdim || u.rows() != pdim)
            throw std::invalid_argument("loop oracle: matrix dimensions do not match");
        int exitIdx = cfg.exitLabelIndex;
        int contIdx = 1 - exitIdx;

        LoopForms out{FockOperator(cfg.ctx), FockOperator(cfg.ctx)};
        int capN = cfg.ctx.caps[coinIdx];
        for (int k = 1; k <= capN; ++k) {
            OccVec occ = OccVec::zeros(cfg.ctx.coinCount()).plus(coinIdx, k);
            if (!occ.withinCaps(cfg.ctx.caps))
                continue;
            BlockShape shape = BlockShape::at(spaces, occ);

            // Interaction at level j acts on copy j and the principal
            // registers; one body unitary between consecutive levels.
            SparseMatrix evo(shape.totalDim, shape.totalDim);
            evo.setIdentity();
            std::vector<int> pslots;
            for (size_t p = 0; p < spaces.principals.size(); ++p)
                pslots.push_back(shape.principalSlot(static_cast<int>(p)));
            SparseMatrix uEmb = embedOnSlots(u, shape.dims, pslots);
            for (int j = 0; j < k; ++j) {
                std::vector<int> slots;
                slots.push_back(shape.coinSlot(coinIdx, j));
                for (int ps : pslots)
                    slots.push_back(ps);
                if (j > 0)
                    evo = (uEmb * evo).pruned();
                evo = (embedOnSlots(w, shape.dims, slots) * evo).pruned();
            }

            DenseMatrix exitP = DenseMatrix::Zero(cd, cd);
            exitP(exitIdx, exitIdx) = 1.0;
            DenseMatrix contP = DenseMatrix::Zero(cd, cd);
            contP(contIdx, contIdx) = 1.0;

            SparseMatrix proj(shape.totalDim, shape.totalDim);
            proj.setIdentity();
            for (int j = 0; j + 1 < k; ++j)
                proj = (embedOnSlots(contP, shape.dims, {shape.coinSlot(coinIdx, j)}) * proj)
                           .pruned();
            proj = (embedOnSlots(exitP, shape.dims, {shape.coinSlot(coinIdx, k - 1)}) * proj)
                       .pruned();
            out.plain.setBlock(occ, SparseMatrix((proj * evo).pruned()));

            // Averaged projector string (exact for product-form W).
            DenseMatrix acc = DenseMatrix::Zero(shape.totalDim, shape.totalDim);
            for (int j = 0; j < k; ++j) {
                SparseMatrix term(shape.totalDim, shape.totalDim);
                term.setIdentity();
                for (int m = 0; m < k; ++m) {
                    const DenseMatrix& p = (m == j) ? exitP : contP;
                    term = (embedOnSlots(p, shape.dims, {shape.coinSlot(coinIdx, m)}) * term)
                               .pruned();
                }
                acc += DenseMatrix(term);
            }
            acc /= static_cast<double>(k);
            out.symmetrised.setBlock(
                occ, SparseMatrix((sparseFromDense(acc) * evo).pruned()));
        }
        return out;
    }

    CompareReport compare(const FockOperator& a, const FockOperator& b, double tol) {
        a.context().requireCompatible(b.context());
        CompareReport report;
        SupportSet occs;
        for (const auto& [occ, m] : a.blocks())
            occs.insert(occ);
        for (const auto& [occ, m] : b.blocks())
            occs.insert(occ);
        report.worstOcc = OccVec::zeros(a.context().coinCount());
        for (const auto& occ : occs) {
            double diff = maxAbs(SparseMatrix(a.blockAt(occ) - b.blockAt(occ)));
            report.entries.push_back({occ, diff, a.onTruncationShell(occ)});
            if (diff > report.maxDiff) {
                report.maxDiff = diff;
                report.worstOcc = occ;
            }
        }
        report.pass = report.maxDiff <= tol;
        return report;
    }

}  // namespace fockrec
