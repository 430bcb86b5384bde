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

#include "fockrec/semantics.hpp"

#include <algorithm>
#include <numeric>

namespace fockrec {

    namespace {

        std::set<std::string> declarationCoins(const Declaration& d) {
            std::set<std::string> out;
            for (const auto& [name, body] : d.equations) {
                auto fc = freeCoins(body);
                out.insert(fc.begin(), fc.end());
            }
            if (d.main) {
                auto fc = freeCoins(d.main);
                out.insert(fc.begin(), fc.end());
            }
            return out;
        }

        struct Evaluator {
            const GateLibrary& gates;
            const FockContext& ctx;
            SkipConvention skip;
            std::set<std::string> declCoins;
            // Scheme mode: identifiers resolve through env and each case
            // statement shifts its branch operators one copy slot rightward.
            // Generalised mode: copy indices are explicit in the text and
            // identifiers are an error.
            bool generalised = false;
            const Declaration* decl = nullptr;
            const ProcEnvironment* env = nullptr;

            FockOperator skipOp() const {
                return skipOperator(ctx, skip, declCoins);
            }

            FockOperator unitary(const Prog& p) const {
                const GateDef* g = gates.find(p.gate);
                if (!g)
                    throw std::invalid_argument("undeclared gate '" + p.gate + "'");
                const Spaces& spaces = *ctx.spaces;
                OccVec occ = OccVec::zeros(spaces.coinCount());
                for (const auto& c : p.coins) {
                    int idx = spaces.coinIndex(c.coin);
                    if (idx < 0)
                        throw std::invalid_argument("undeclared coin '" + c.coin + "'");
                    occ.counts[idx] = std::max(occ.counts[idx], c.copyIndex + 1);
                }
                FockOperator out(ctx);
                if (!occ.withinCaps(ctx.caps)) {
                    out.noteDropped();
                    return out;
                }
                BlockShape shape = BlockShape::at(spaces, occ);
                std::vector<int> slots;
                for (const auto& c : p.coins)
                    slots.push_back(shape.coinSlot(spaces.coinIndex(c.coin), c.copyIndex));
                for (const auto& s : p.systems) {
                    int idx = spaces.principalIndex(s);
                    if (idx < 0)
                        throw std::invalid_argument("undeclared principal register '" + s + "'");
                    slots.push_back(shape.principalSlot(idx));
                }
                out.setBlock(occ, embedOnSlots(g->matrix, shape.dims, slots));
                return out;
            }

            FockOperator qifGeneralised(const Prog& p) const {
                const Spaces& spaces = *ctx.spaces;
                int coinIdx = spaces.coinIndex(p.guard.coin);
                if (coinIdx < 0)
                    throw std::invalid_argument("undeclared coin '" + p.guard.coin + "'");
                const SpaceSpec& spec = spaces.coins[coinIdx];
                int k = p.guard.copyIndex;
                OccVec guardOcc = OccVec::zeros(spaces.coinCount()).plus(coinIdx, k + 1);
                FockOperator acc(ctx);
                if (!guardOcc.withinCaps(ctx.caps)) {
                    acc.noteDropped();
                    return acc;
                }
                BlockShape shape = BlockShape::at(spaces, guardOcc);
                for (const auto& b : p.branches) {
                    auto li = spec.labelIndex(b.label);
                    if (!li)
                        throw std::invalid_argument("label '" + b.label +
                                                    "' is not in the guard basis");
                    DenseMatrix proj = DenseMatrix::Zero(spec.dimension(), spec.dimension());
                    proj(*li, *li) = 1.0;
                    FockOperator projOp(ctx);
                    projOp.setBlock(guardOcc,
                                    embedOnSlots(proj, shape.dims, {shape.coinSlot(coinIdx, k)}));
                    FockOperator branch = eval(b.body);
                    FockOperator term = familyProduct(projOp, branch);
                    for (const auto& [occ, m] : term.blocks())
                        acc.addToBlock(occ, m);
                    acc.noteDropped(term.droppedBlocks());
                }
                acc.pruneTiny();
                return acc;
            }

            FockOperator qifScheme(const Prog& p) const {
                const Spaces& spaces = *ctx.spaces;
                int coinIdx = spaces.coinIndex(p.guard.coin);
                if (coinIdx < 0)
                    throw std::invalid_argument("undeclared coin '" + p.guard.coin + "'");
                const SpaceSpec& spec = spaces.coins[coinIdx];
                std::vector<FockOperator> parts(spec.dimension(), zeroOperator(ctx));
                for (const auto& b : p.branches) {
                    auto li = spec.labelIndex(b.label);
                    if (!li)
                        throw std::invalid_argument("label '" + b.label +
                                                    "' is not in the guard basis");
                    parts[*li] = eval(b.body);
                }
                return guardedComposition(p.guard.coin, parts);
            }

            FockOperator eval(const ProgPtr& p) const {
                switch (p->kind) {
                    case ProgKind::Abort:
                        return zeroOperator(ctx);
                    case ProgKind::Skip:
                        return skipOp();
                    case ProgKind::Unitary:
                        return unitary(*p);
                    case ProgKind::Seq:
                        return familyProduct(eval(p->second), eval(p->first));
                    case ProgKind::Qif:
                        return generalised ? qifGeneralised(*p) : qifScheme(*p);
                    case ProgKind::ProcCall: {
                        if (generalised)
                            throw std::invalid_argument(
                                "procedure identifier in a generalised program");
                        int idx = decl ? decl->index(p->callee) : -1;
                        if (idx < 0 || !env || idx >= static_cast<int>(env->size()))
                            throw std::invalid_argument("environment has no entry for '" +
                                                        p->callee + "'");
                        return (*env)[idx];
                    }
                }
                throw std::logic_error("unreachable");
            }
        };

    }  // namespace

    FockOperator skipOperator(const FockContext& ctx, SkipConvention convention,
                              const std::set<std::string>& declCoins) {
        const Spaces& spaces = *ctx.spaces;
        OccVec occ = OccVec::zeros(spaces.coinCount());
        if (convention == SkipConvention::Paper) {
            for (const auto& c : declCoins) {
                int idx = spaces.coinIndex(c);
                if (idx >= 0)
                    occ.counts[idx] = 1;
            }
        }
        FockOperator out(ctx);
        if (!occ.withinCaps(ctx.caps))
            return out;
        long dim = BlockShape::at(spaces, occ).totalDim;
        SparseMatrix eye(dim, dim);
        eye.setIdentity();
        out.setBlock(occ, std::move(eye));
        return out;
    }

    FockOperator semanticFunctional(const ProgPtr& p, const Declaration& d,
                                    const ProcEnvironment& env, const GateLibrary& gates,
                                    const FockContext& ctx, const SemanticsConfig& cfg) {
        if (env.size() != d.equations.size())
            throw std::invalid_argument("semanticFunctional: environment arity mismatch");
        Evaluator ev{gates, ctx, cfg.skip, declarationCoins(d), false, &d, &env};
        return ev.eval(p);
    }

    ProcEnvironment declFunctional(const Declaration& d, const ProcEnvironment& env,
                                   const GateLibrary& gates, const FockContext& ctx,
                                   const SemanticsConfig& cfg) {
        ProcEnvironment out;
        out.reserve(d.equations.size());
        for (const auto& [name, body] : d.equations)
            out.push_back(semanticFunctional(body, d, env, gates, ctx, cfg));
        return out;
    }

    FixpointResult kleeneFixpoint(const Declaration& d, const GateLibrary& gates,
                                  const FockContext& ctx, const SemanticsConfig& cfg) {
        FixpointResult res;
        res.env.assign(d.equations.size(), zeroOperator(ctx));
        int cap = std::accumulate(ctx.caps.begin(), ctx.caps.end(), 0) + 2;
        for (int iter = 1; iter <= cap; ++iter) {
            ProcEnvironment next = declFunctional(d, res.env, gates, ctx, cfg);
            bool stable = true;
            for (size_t k = 0; k < next.size(); ++k) {
                if (maxAbsDiff(next[k], res.env[k]) != 0.0) {
                    stable = false;
                    break;
                }
            }
            res.env = std::move(next);
            res.iterations = iter;
            if (stable) {
                res.converged = true;
                break;
            }
        }
        return res;
    }

    FockOperator interpretGeneralised(const ProgPtr& q, const GateLibrary& gates,
                                      const FockContext& ctx, const SemanticsConfig& cfg,
                                      const std::set<std::string>& declCoins) {
        if (!calledProcs(q).empty())
            throw std::invalid_argument(
                "interpretGeneralised: program contains procedure identifiers");
        Evaluator ev{gates, ctx, cfg.skip, declCoins, true, nullptr, nullptr};
        return ev.eval(q);
    }

    OperationalResult operationalSemantics(const Declaration& d, const GateLibrary& gates,
                                           const FockContext& ctx,
                                           const SemanticsConfig& cfg) {
        auto coins = declarationCoins(d);
        int cap = std::accumulate(ctx.caps.begin(), ctx.caps.end(), 0) + 2;

        std::vector<std::string> names;
        for (const auto& [n, b] : d.equations)
            names.push_back(n);

        std::vector<std::vector<FockOperator>> chains(names.size());
        std::vector<ProgPtr> approx(names.size(), makeAbort());
        for (size_t k = 0; k < names.size(); ++k)
            chains[k].push_back(interpretGeneralised(approx[k], gates, ctx, cfg, coins));

        OperationalResult res;
        for (int depth = 1; depth <= cap; ++depth) {
            std::vector<ProgPtr> next;
            next.reserve(names.size());
            for (const auto& [n, body] : d.equations)
                next.push_back(substitute(body, names, approx));
            approx = std::move(next);
            bool stable = true;
            for (size_t k = 0; k < names.size(); ++k) {
                FockOperator op = interpretGeneralised(approx[k], gates, ctx, cfg, coins);
                if (maxAbsDiff(op, chains[k].back()) > 1e-13)
                    stable = false;
                chains[k].push_back(std::move(op));
            }
            res.depth = depth;
            if (stable)
                break;
        }

        res.env.reserve(names.size());
        for (size_t k = 0; k < names.size(); ++k)
            res.env.push_back(lubChain(chains[k], cfg.tolerance));
        res.main = semanticFunctional(d.main, d, res.env, gates, ctx, cfg);
        return res;
    }

    namespace {
        double interiorMaxDiff(const FockOperator& a, const FockOperator& b) {
            const auto& caps = a.context().caps;
            auto interior = [&](const OccVec& occ) {
                for (size_t i = 0; i < occ.counts.size(); ++i)
                    if (occ.counts[i] >= caps[i])
                        return false;
                return true;
            };
            double best = 0.0;
            SupportSet occs;
            for (const auto& [occ, m] : a.blocks())
                occs.insert(occ);
            for (const auto& [occ, m] : b.blocks())
                occs.insert(occ);
            for (const auto& occ : occs) {
                if (!interior(occ))
                    continue;
                best = std::max(best, maxAbs(SparseMatrix(a.blockAt(occ) - b.blockAt(occ))));
            }
            return best;
        }
    }  // namespace

    EquivalenceReport checkEquivalence(const Declaration& d, const GateLibrary& gates,
                                       const FockContext& ctx, const SemanticsConfig& cfgFix,
                                       const SemanticsConfig& cfgOp) {
        EquivalenceReport report;
        FixpointResult fix = kleeneFixpoint(d, gates, ctx, cfgFix);
        OperationalResult op = operationalSemantics(d, gates, ctx, cfgOp);
        report.fixpointIterations = fix.iterations;
        report.operationalDepth = op.depth;
        for (size_t k = 0; k < d.equations.size(); ++k) {
            double diff = interiorMaxDiff(fix.env[k], op.env[k]);
            report.entries.push_back({d.equations[k].first, diff});
            report.maxDiff = std::max(report.maxDiff, diff);
        }
        FockOperator fixMain = semanticFunctional(d.main, d, fix.env, gates, ctx, cfgFix);
        double diff = interiorMaxDiff(fixMain, op.main);
        report.entries.push_back({"main", diff});
        report.maxDiff = std::max(report.maxDiff, diff);
        report.pass = report.maxDiff <= cfgFix.tolerance;
        return report;
    }

    EquivalenceReport checkEquivalence(const Declaration& d, const GateLibrary& gates,
                                       const FockContext& ctx, const SemanticsConfig& cfg) {
        return checkEquivalence(d, gates, ctx, cfg, cfg);
    }

    PartialDensityOperator principalSemantics(const Declaration& d, const GateLibrary& gates,
                                              const FockContext& ctx,
                                              const SemanticsConfig& cfg,
                                              const FockState& coinInit,
                                              const DenseVector& psi) {
        FixpointResult fix = kleeneFixpoint(d, gates, ctx, cfg);
        FockOperator mainOp = semanticFunctional(d.main, d, fix.env, gates, ctx, cfg);
        FockState input = tensorWithPrincipal(coinInit, psi);
        // On (anti)symmetric inputs, applying the symmetrised operator equals
        // symmetrising the plain image; the latter has no factorial budget.
        FockState output = symmetriseState(applyOperator(mainOp, input));
        return partialTraceCoins(output);
    }

}  // namespace fockrec
