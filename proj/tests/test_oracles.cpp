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

#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"

using namespace fockrec;
using namespace fockrec::testing;

namespace {
    const WeightedConfig* findConfig(const std::vector<WeightedConfig>& configs,
                                     const std::vector<std::string>& coins,
                                     const std::string& position) {
        for (const auto& c : configs) {
            if (c.position != position || c.coins.size() != coins.size())
                continue;
            bool same = true;
            for (size_t i = 0; i < coins.size(); ++i)
                same &= std::get<2>(c.coins[i]) == coins[i];
            if (same)
                return &c;
        }
        return nullptr;
    }
}  // namespace

TEST_CASE("one-sided walk trace to depth two") {
    ParsedProgram prog = uniWalk(8);
    SimulationResult sim =
        configSimulate(prog.declaration, prog.gates, *prog.spaces, SimInit{}, 2);

    const double s2 = 1.0 / std::sqrt(2.0);
    REQUIRE(sim.steps.size() == 2);
    // Step 1: terminated (L, -1) and residual (R, +1), both 2^-1/2.
    const auto& s1 = sim.steps[0];
    const WeightedConfig* lTerm = findConfig(s1, {"L"}, "-1");
    REQUIRE(lTerm);
    CHECK(std::abs(lTerm->amplitude - Complex(s2, 0)) < 1e-12);
    CHECK(lTerm->residual == "E");
    const WeightedConfig* rLive = findConfig(s1, {"R"}, "1");
    REQUIRE(rLive);
    CHECK(std::abs(rLive->amplitude - Complex(s2, 0)) < 1e-12);
    CHECK(rLive->residual == "X");

    // Step 2: 1/2 (E, R L, 0) and residual 1/2 (X, R R, 2).
    const auto& s2nd = sim.steps[1];
    const WeightedConfig* rl = findConfig(s2nd, {"R", "L"}, "0");
    REQUIRE(rl);
    CHECK(std::abs(rl->amplitude - Complex(0.5, 0)) < 1e-12);
    CHECK(rl->residual == "E");
    const WeightedConfig* rr = findConfig(s2nd, {"R", "R"}, "2");
    REQUIRE(rr);
    CHECK(std::abs(rr->amplitude - Complex(0.5, 0)) < 1e-12);
    CHECK(rr->residual == "X");

    for (double w : sim.stepWeights)
        CHECK(std::abs(w - 1.0) < 1e-12);
}

TEST_CASE("a bare skip terminates with amplitude one") {
    ParsedProgram prog = parseSource("main = skip;\n");
    SimulationResult sim =
        configSimulate(prog.declaration, prog.gates, *prog.spaces, SimInit{}, 1);
    REQUIRE(sim.terminated.size() == 1);
    CHECK(std::abs(sim.terminated[0].amplitude - Complex(1, 0)) < 1e-15);
    CHECK(sim.residual.empty());
}

TEST_CASE("interference walk cancels one pair at depth three") {
    ParsedProgram prog = parseSource(walkPrelude(8) +
                                     "proc X <= (TL[p] (+)[H[d]] TR[p])^2; "
                                     "((TL[p]; X) (+)[H[d]] (TR[p]; X));\n"
                                     "main = X;\n");
    SimulationResult sim =
        configSimulate(prog.declaration, prog.gates, *prog.spaces, SimInit{}, 3);
    const auto& step3 = sim.steps[2];
    const double u = 1.0 / (2.0 * std::sqrt(2.0));

    struct Expect {
        const char* coin;
        const char* pos;
        double amp;
    };
    // Amplitudes proportional to (1, 1, 2, -1, 1) over the surviving pairs;
    // the (R, 1) pair has cancelled.
    std::vector<Expect> expected = {
        {"L", "-3", u}, {"R", "-1", u}, {"L", "-1", 2 * u}, {"L", "1", -u}, {"R", "3", u}};
    CHECK(step3.size() == expected.size());
    for (const auto& e : expected) {
        const WeightedConfig* c = findConfig(step3, {e.coin}, e.pos);
        REQUIRE_MESSAGE(c, e.coin << " at " << e.pos);
        CHECK(std::abs(c->amplitude - Complex(e.amp, 0)) < 1e-12);
    }
    CHECK_FALSE(findConfig(step3, {"R"}, "1"));
    CHECK(std::abs(sim.stepWeights[2] - 1.0) < 1e-12);
}

TEST_CASE("the flipped interference walk keeps unit weight to depth four") {
    ParsedProgram prog = parseSource(walkPrelude(8) +
                                     "proc X <= ((TL[p]; X) (+)[H[d]] (TR[p]; X)); "
                                     "(TL[p] (+)[H[d]] TR[p])^2;\n"
                                     "main = X;\n");
    SimulationResult sim =
        configSimulate(prog.declaration, prog.gates, *prog.spaces, SimInit{}, 4);
    for (double w : sim.stepWeights)
        CHECK(std::abs(w - 1.0) < 1e-12);
}

TEST_CASE("terminated components match the interpreted approximations") {
    // Triangulation: re-expressed as occupation amplitudes, the simulator's
    // terminated branches coincide with applying the interpreted syntactic
    // approximation to the same product input.
    for (auto make : {uniWalk, bidPairWalk}) {
        ParsedProgram prog = make(8);
        FockContext ctx = makeCtx(prog, 6);
        SemanticsConfig cfg;
        for (int depth = 1; depth <= 5; ++depth) {
            SimulationResult sim =
                configSimulate(prog.declaration, prog.gates, *prog.spaces, SimInit{}, depth);
            ProgPtr approx = syntacticApprox(prog.declaration, "X", depth);
            FockOperator op = interpretGeneralised(approx, prog.gates, ctx, cfg, {"d"});
            FockState out = applyOperator(op, productFamilyState(ctx, "d", "L", "0"));
            for (const auto& wc : sim.terminated) {
                std::vector<std::string> labels;
                for (const auto& [coin, copy, label] : wc.coins)
                    labels.push_back(label);
                Complex got = amplitudeOf(out, "d", labels, wc.position);
                CHECK(std::abs(got - wc.amplitude) < 1e-12);
            }
        }
    }
}

TEST_CASE("closed forms: one-sided walk") {
    ParsedProgram prog = uniWalk(8);
    FockContext ctx = makeCtx(prog, 4);
    WalkOracleConfig cfg{ctx, "d"};
    FockOperator one = unidirectionalClosedForm(1, cfg);
    // Single block (|L><L| H) (x) T_L.
    REQUIRE(one.support() == SupportSet{OccVec({1})});
    int pdim = 17;
    DenseMatrix blk = denseFromSparse(one.blockAt(OccVec({1})));
    const double s2 = 1.0 / std::sqrt(2.0);
    DenseMatrix tl = shiftMatrix(pdim, -1);
    CHECK((blk.block(0, 0, pdim, pdim) - s2 * tl).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((blk.block(0, pdim, pdim, pdim) - s2 * tl).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(blk.block(pdim, 0, pdim, pdim).cwiseAbs().maxCoeff() == 0.0);

    // The i = 2 term carries amplitude 1/sqrt(8) from |L^3, 0> to |RRL, 1>.
    FockOperator three = unidirectionalClosedForm(3, cfg);
    FockState out = applyOperator(three, productFamilyState(ctx, "d", "L", "0"));
    CHECK(std::abs(amplitudeOf(out, "d", {"R", "R", "L"}, "1") -
                   Complex(1.0 / std::sqrt(8.0), 0)) < 1e-14);
}

TEST_CASE("closed forms: two-procedure walk shifts") {
    ParsedProgram prog = bidPairWalk(8);
    FockContext ctx = makeCtx(prog, 5);
    WalkOracleConfig cfg{ctx, "d"};
    BidirectionalForms forms = bidirectionalClosedForm(cfg);
    // T_n is T_L for odd n and T_R^2 for even n: apply each block to the
    // all-L input and read the position.
    FockState in = productFamilyState(ctx, "d", "L", "0");
    FockState outX = applyOperator(forms.x, in);
    auto distX = positionDistribution(partialTraceCoins(outX), *ctx.spaces);
    for (const auto& [label, p] : distX)
        CHECK((label == "-1" || label == "2"));
    FockState outY = applyOperator(forms.y, in);
    auto distY = positionDistribution(partialTraceCoins(outY), *ctx.spaces);
    for (const auto& [label, p] : distY)
        CHECK((label == "1" || label == "-2"));
}

TEST_CASE("closed forms: symmetrised families against the engine") {
    ParsedProgram prog = uniWalk(8);
    FockContext ctx = makeCtx(prog, 5);
    SemanticsConfig cfg;
    WalkOracleConfig wcfg{ctx, "d"};
    FixpointResult fix = kleeneFixpoint(prog.declaration, prog.gates, ctx, cfg);
    SymmetrisedForms forms = symmetrisedClosedForms(wcfg);
    CHECK(maxAbsDiff(symmetriseOperator(fix.env.front()), forms.uni) < 1e-12);
    CHECK(isSymmetric(forms.uni));

    ParsedProgram pair = bidPairWalk(8);
    FockContext pctx = makeCtx(pair, 5);
    WalkOracleConfig pcfg{pctx, "d"};
    FixpointResult pfix = kleeneFixpoint(pair.declaration, pair.gates, pctx, cfg);
    SymmetrisedForms pforms = symmetrisedClosedForms(pcfg);
    CHECK(maxAbsDiff(symmetriseOperator(pfix.env[0]), pforms.bidX) < 1e-12);
    CHECK(maxAbsDiff(symmetriseOperator(pfix.env[1]), pforms.bidY) < 1e-12);

    // Uniform coefficients over the strings of (k+1) L's and k R's:
    // every arrangement carries amplitude (1/3) * 2^-3/2 at position -1.
    FockState in = productFamilyState(pctx, "d", "L", "0");
    FockState out = applyOperator(pforms.bidX, in);
    for (const auto& labels :
         std::vector<std::vector<std::string>>{{"L", "L", "R"}, {"L", "R", "L"}, {"R", "L", "L"}})
        CHECK(std::abs(amplitudeOf(out, "d", labels, "-1") -
                       Complex(1.0 / (3.0 * std::sqrt(8.0)), 0)) < 1e-13);
}

TEST_CASE("closed forms: guarded loop") {
    ParsedProgram prog = parseSource(
        "coin c : basis {0, 1};\n"
        "system q : dim 2;\n"
        "gate W on (c, q) = matrix [\n"
        "  0.7071067811865476, 0, 0.7071067811865476, 0;\n"
        "  0, 0.7071067811865476, 0, 0.7071067811865476;\n"
        "  0, 0.7071067811865476, 0, -0.7071067811865476;\n"
        "  0.7071067811865476, 0, -0.7071067811865476, 0 ];\n"
        "gate U on (q) = matrix [\n"
        "  0.7648421872844884, -0.644217687237691;\n"
        "  0.644217687237691, 0.7648421872844884 ];\n"
        "proc X <= W[c, q]; qif [c] |0> -> skip [] |1> -> (U[q]; X) fiq;\n"
        "main = X;\n");
    FockContext ctx = makeCtx(prog, 5);
    const DenseMatrix w = prog.gates.find("W")->matrix;
    const DenseMatrix u = prog.gates.find("U")->matrix;
    LoopOracleConfig lcfg{ctx, "c", 0};
    LoopForms forms = loopClosedForm(w, u, lcfg);

    // k = 1 block is (|0><0| (x) I) W.
    DenseMatrix expect = DenseMatrix::Zero(4, 4);
    expect.block(0, 0, 2, 4) = w.block(0, 0, 2, 4);
    CHECK((denseFromSparse(forms.plain.blockAt(OccVec({1}))) - expect).cwiseAbs().maxCoeff() <
          1e-15);

    // Engine agreement for k <= 4 under the full-identity reading of skip.
    SemanticsConfig cfg{SkipConvention::FullIdentity, 1e-12};
    FixpointResult fix = kleeneFixpoint(prog.declaration, prog.gates, ctx, cfg);
    CompareReport rep = compare(fix.env.front(), forms.plain, 1e-12);
    double interior = 0.0;
    for (const auto& e : rep.entries)
        if (!e.truncationShell)
            interior = std::max(interior, e.diff);
    CHECK(interior < 1e-12);
}

TEST_CASE("a product-form guard gate reduces the loop to the plain choice loop") {
    ParsedProgram prog = parseSource(
        "coin c : basis {0, 1};\n"
        "system q : dim 2;\n"
        "gate V on (c) = hadamard;\n"
        "gate U on (q) = matrix [\n"
        "  0.7648421872844884, -0.644217687237691;\n"
        "  0.644217687237691, 0.7648421872844884 ];\n"
        "proc X <= skip (+)[V[c]] (U[q]; X);\n"
        "main = X;\n");
    FockContext ctx = makeCtx(prog, 4);
    DenseMatrix v = hadamardMatrix();
    DenseMatrix u = prog.gates.find("U")->matrix;
    DenseMatrix w = DenseMatrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            w.block(i * 2, j * 2, 2, 2) = v(i, j) * DenseMatrix::Identity(2, 2);

    LoopOracleConfig lcfg{ctx, "c", 0};
    LoopForms forms = loopClosedForm(w, u, lcfg);
    SemanticsConfig cfg{SkipConvention::FullIdentity, 1e-12};
    FixpointResult fix = kleeneFixpoint(prog.declaration, prog.gates, ctx, cfg);
    CHECK(maxAbsDiff(fix.env.front(), forms.plain) < 1e-12);

    // For product-form W the averaged projector string is the exact
    // symmetrisation.
    CHECK(maxAbsDiff(symmetriseOperator(forms.plain), forms.symmetrised) < 1e-12);
    CHECK(isSymmetric(forms.symmetrised));
}

TEST_CASE("compare reports") {
    std::mt19937 rng(3);
    ParsedProgram prog = uniWalk(2);
    FockContext ctx = makeCtx(prog, 2);
    FockOperator a = randomOperator(ctx, rng, 1.0, 0.5);
    CompareReport same = compare(a, a, 1e-12);
    CHECK(same.pass);
    CHECK(same.maxDiff == 0.0);

    CompareReport vsZero = compare(a, zeroOperator(ctx), 1e-12);
    double biggest = 0.0;
    for (const auto& [occ, m] : a.blocks())
        biggest = std::max(biggest, maxAbs(m));
    CHECK(vsZero.maxDiff == biggest);
    CHECK_FALSE(vsZero.pass);
    CHECK(maxAbs(a.blockAt(vsZero.worstOcc)) == biggest);
}
