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

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "fockrec/json_io.hpp"
#include "fockrec/oracles.hpp"
#include "fockrec/parser.hpp"
#include "fockrec/semantics.hpp"
#include "fockrec/validate.hpp"

namespace {

    using namespace fockrec;
    using nlohmann::json;

    constexpr int kExitOk = 0;
    constexpr int kExitValidation = 1;
    constexpr int kExitComparison = 2;
    constexpr int kExitInternal = 3;

    struct CliError : std::runtime_error {
        CliError(int code, const std::string& msg) : std::runtime_error(msg), code(code) {}
        int code;
    };

    ParsedProgram loadProgram(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw CliError(kExitValidation, "cannot open '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        ParsedProgram prog = parse(SourceFile{ss.str(), path});
        ValidationReport report = validate(prog.declaration, prog.gates, *prog.spaces);
        if (!report.ok())
            throw CliError(kExitValidation, "validation failed:\n" + report.summary());
        return prog;
    }

    FockContext makeContext(const ParsedProgram& prog,
                            const std::vector<std::string>& truncFlags) {
        FockContext ctx;
        ctx.spaces = prog.spaces;
        ctx.caps.assign(prog.spaces->coinCount(), 8);
        for (const auto& flag : truncFlags) {
            auto eq = flag.find('=');
            if (eq == std::string::npos) {
                int n = std::stoi(flag);
                ctx.caps.assign(prog.spaces->coinCount(), n);
            } else {
                std::string coin = flag.substr(0, eq);
                int idx = prog.spaces->coinIndex(coin);
                if (idx < 0)
                    throw CliError(kExitValidation, "unknown coin '" + coin + "' in --trunc");
                ctx.caps[idx] = std::stoi(flag.substr(eq + 1));
            }
        }
        return ctx;
    }

    void writeFileOrStdout(const std::string& path, const std::string& content) {
        if (path.empty() || path == "-") {
            std::cout << content << "\n";
            return;
        }
        std::ofstream out(path);
        if (!out)
            throw CliError(kExitInternal, "cannot write '" + path + "'");
        out << content;
    }

    std::string firstCoinName(const ParsedProgram& prog) {
        if (prog.spaces->coins.empty())
            throw CliError(kExitValidation, "the program declares no coins");
        return prog.spaces->coins.front().name;
    }

    // Recognise a guarded-loop body: an optional coin-system interaction
    // followed by a case statement with one terminating (skip) branch and
    // one branch running a body unitary before the recursive call.
    struct LoopShape {
        DenseMatrix w;
        DenseMatrix u;
        std::string coin;
        int exitLabelIndex = 0;
    };

    LoopShape extractLoopShape(const ParsedProgram& prog) {
        if (prog.declaration.equations.size() != 1)
            throw CliError(kExitValidation, "loop oracle expects a single procedure");
        const ProgPtr& body = prog.declaration.equations.front().second;
        if (body->kind != ProgKind::Seq || body->first->kind != ProgKind::Unitary ||
            body->second->kind != ProgKind::Qif)
            throw CliError(kExitValidation, "loop oracle: body is not interaction; qif");
        const Prog& head = *body->first;
        const Prog& qif = *body->second;
        const GateDef* g = prog.gates.find(head.gate);
        if (!g)
            throw CliError(kExitValidation, "loop oracle: unknown interaction gate");
        const SpaceSpec* coin = prog.spaces->findCoin(qif.guard.coin);
        if (!coin || coin->dimension() != 2)
            throw CliError(kExitValidation, "loop oracle: guard coin must be a qubit");
        long pdim = prog.spaces->principalDim();

        LoopShape shape;
        shape.coin = qif.guard.coin;
        if (head.coins.size() == 1 && head.systems.empty())
            shape.w = kroneckerProduct(g->matrix, DenseMatrix::Identity(pdim, pdim)).eval();
        else
            shape.w = g->matrix;
        bool haveExit = false, haveCont = false;
        for (const auto& b : qif.branches) {
            auto li = coin->labelIndex(b.label);
            if (!li)
                continue;
            if (b.body->kind == ProgKind::Skip) {
                shape.exitLabelIndex = *li;
                haveExit = true;
            } else if (b.body->kind == ProgKind::Seq &&
                       b.body->first->kind == ProgKind::Unitary &&
                       b.body->second->kind == ProgKind::ProcCall) {
                const GateDef* ug = prog.gates.find(b.body->first->gate);
                if (!ug)
                    throw CliError(kExitValidation, "loop oracle: unknown body gate");
                shape.u = ug->matrix;
                haveCont = true;
            }
        }
        if (!haveExit || !haveCont)
            throw CliError(kExitValidation, "loop oracle: body does not match the loop shape");
        return shape;
    }

    int cmdCheck(const std::string& file) {
        loadProgram(file);
        std::cout << "ok\n";
        return kExitOk;
    }

    int cmdApprox(const std::string& file, const std::string& proc, int depth,
                  const std::vector<std::string>& trunc, const std::string& out) {
        ParsedProgram prog = loadProgram(file);
        FockContext ctx = makeContext(prog, trunc);
        std::string name = proc.empty() ? prog.declaration.equations.front().first : proc;
        ProgPtr approx = syntacticApprox(prog.declaration, name, depth);
        SemanticsConfig cfg;
        std::set<std::string> coins;
        for (const auto& [n, b] : prog.declaration.equations) {
            auto fc = freeCoins(b);
            coins.insert(fc.begin(), fc.end());
        }
        if (prog.declaration.main) {
            auto fc = freeCoins(prog.declaration.main);
            coins.insert(fc.begin(), fc.end());
        }
        FockOperator op = interpretGeneralised(approx, prog.gates, ctx, cfg, coins);
        json doc = {{"proc", name}, {"depth", depth}, {"blocks", blocksToJson(op)}};
        writeFileOrStdout(out, doc.dump(2));
        return kExitOk;
    }

    int cmdFixpoint(const std::string& file, const std::vector<std::string>& trunc,
                    const std::string& out, bool reportIterations) {
        ParsedProgram prog = loadProgram(file);
        FockContext ctx = makeContext(prog, trunc);
        SemanticsConfig cfg;
        FixpointResult res = kleeneFixpoint(prog.declaration, prog.gates, ctx, cfg);
        if (reportIterations)
            std::cout << "iterations: " << res.iterations
                      << (res.converged ? "" : " (cap reached)") << "\n";
        json procs = json::object();
        for (size_t k = 0; k < res.env.size(); ++k)
            procs[prog.declaration.equations[k].first] = blocksToJson(res.env[k]);
        json doc = {{"iterations", res.iterations},
                    {"converged", res.converged},
                    {"procs", procs}};
        writeFileOrStdout(out, doc.dump(2));
        return kExitOk;
    }

    int cmdRun(const std::string& file, const std::string& coinInit, const std::string& input,
               const std::string& statistics, const std::vector<std::string>& trunc,
               const std::string& out, const std::string& format) {
        ParsedProgram prog = loadProgram(file);
        FockContext ctx = makeContext(prog, trunc);
        SemanticsConfig cfg;
        std::string coin = firstCoinName(prog);
        Statistics stat = statistics == "fermion" ? Statistics::Fermion : Statistics::Boson;

        FockState init;
        if (coinInit.rfind("basis:", 0) == 0) {
            std::vector<std::string> labels;
            std::string rest = coinInit.substr(6), cur;
            for (char ch : rest) {
                if (ch == ',') {
                    labels.push_back(cur);
                    cur.clear();
                } else {
                    cur.push_back(ch);
                }
            }
            if (!cur.empty())
                labels.push_back(cur);
            try {
                init = basisCoinState(ctx, coin, labels, stat);
            } catch (const std::invalid_argument& e) {
                throw CliError(kExitValidation, e.what());
            }
        } else if (coinInit.rfind("coherent:", 0) == 0) {
            std::string rest = coinInit.substr(9);
            auto at = rest.find('@');
            std::string label = at == std::string::npos ? rest : rest.substr(0, at);
            int cap = at == std::string::npos ? 12 : std::stoi(rest.substr(at + 1));
            if (stat == Statistics::Fermion)
                throw CliError(kExitValidation, "coherent initialisation requires bosons");
            const SpaceSpec* spec = prog.spaces->findCoin(coin);
            auto li = spec->labelIndex(label);
            if (!li)
                throw CliError(kExitValidation, "unknown coin label '" + label + "'");
            DenseVector psi = DenseVector::Zero(spec->dimension());
            psi(*li) = 1.0;
            if (cap > ctx.caps[prog.spaces->coinIndex(coin)])
                ctx.caps[prog.spaces->coinIndex(coin)] = cap;
            double tail = 0.0;
            init = coherentState(psi, coin, ctx, cap, &tail);
            std::cerr << "coherent tail weight beyond occupation " << cap << ": " << tail
                      << "\n";
        } else if (coinInit == "vacuum") {
            std::map<std::string, Statistics> stats;
            stats[coin] = stat;
            init = vacuumState(ctx, stats);
        } else {
            throw CliError(kExitValidation, "unknown --coin-init form '" + coinInit + "'");
        }

        auto pi = prog.spaces->principalLabelIndex(input);
        if (!pi)
            throw CliError(kExitValidation, "unknown principal label '" + input + "'");
        DenseVector psi = DenseVector::Zero(prog.spaces->principalDim());
        psi(*pi) = 1.0;

        PartialDensityOperator rho =
            principalSemantics(prog.declaration, prog.gates, ctx, cfg, init, psi);
        if (format == "csv")
            writeFileOrStdout(out, distributionToCsv(rho, *prog.spaces));
        else
            writeFileOrStdout(out, distributionToJson(rho, *prog.spaces).dump(2));
        return kExitOk;
    }

    int cmdOracle(const std::string& file, const std::string& family, int depth, double tol,
                  const std::vector<std::string>& trunc) {
        ParsedProgram prog = loadProgram(file);
        std::vector<std::string> truncFlags = trunc;
        if (truncFlags.empty())
            truncFlags.push_back(std::to_string(depth + 1));
        FockContext ctx = makeContext(prog, truncFlags);
        SemanticsConfig cfg;
        std::string coin = firstCoinName(prog);

        auto report = [&](const std::string& what, const CompareReport& cr) {
            double interiorMax = 0.0;
            for (const auto& e : cr.entries)
                if (!e.truncationShell)
                    interiorMax = std::max(interiorMax, e.diff);
            std::cout << what << ": max diff " << interiorMax << " (interior shells)\n";
            return interiorMax <= tol;
        };

        bool pass = true;
        if (family == "unidirectional" || family == "bidirectional") {
            FixpointResult fix = kleeneFixpoint(prog.declaration, prog.gates, ctx, cfg);
            WalkOracleConfig wcfg{ctx, coin};
            if (family == "unidirectional") {
                FockOperator oracle = unidirectionalClosedForm(depth + 1, wcfg);
                pass &= report("proc " + prog.declaration.equations.front().first,
                               compare(fix.env.front(), oracle, tol));
            } else {
                if (fix.env.size() < 2)
                    throw CliError(kExitValidation,
                                   "bidirectional oracle expects two procedures");
                BidirectionalForms forms = bidirectionalClosedForm(wcfg);
                pass &= report("proc " + prog.declaration.equations[0].first,
                               compare(fix.env[0], forms.x, tol));
                pass &= report("proc " + prog.declaration.equations[1].first,
                               compare(fix.env[1], forms.y, tol));
            }
        } else if (family == "symmetric") {
            FixpointResult fix = kleeneFixpoint(prog.declaration, prog.gates, ctx, cfg);
            WalkOracleConfig wcfg{ctx, coin};
            SymmetrisedForms forms = symmetrisedClosedForms(wcfg);
            if (fix.env.size() == 1) {
                pass &= report("proc " + prog.declaration.equations.front().first,
                               compare(symmetriseOperator(fix.env.front()), forms.uni, tol));
            } else {
                pass &= report("proc " + prog.declaration.equations[0].first,
                               compare(symmetriseOperator(fix.env[0]), forms.bidX, tol));
                pass &= report("proc " + prog.declaration.equations[1].first,
                               compare(symmetriseOperator(fix.env[1]), forms.bidY, tol));
            }
        } else if (family == "loop") {
            cfg.skip = SkipConvention::FullIdentity;
            FixpointResult fix = kleeneFixpoint(prog.declaration, prog.gates, ctx, cfg);
            LoopShape shape = extractLoopShape(prog);
            LoopOracleConfig lcfg{ctx, shape.coin, shape.exitLabelIndex};
            LoopForms forms = loopClosedForm(shape.w, shape.u, lcfg);
            pass &= report("proc " + prog.declaration.equations.front().first,
                           compare(fix.env.front(), forms.plain, tol));
        } else {
            throw CliError(kExitValidation, "unknown oracle family '" + family + "'");
        }
        std::cout << (pass ? "PASS" : "FAIL") << "\n";
        return pass ? kExitOk : kExitComparison;
    }

    int cmdSimulate(const std::string& file, int depth, const std::string& coinLabel,
                    const std::string& input, const std::string& out) {
        ParsedProgram prog = loadProgram(file);
        SimInit init;
        if (!coinLabel.empty())
            for (const auto& c : prog.spaces->coins)
                init.coinLabels[c.name] = coinLabel;
        init.principalLabel = input;
        SimulationResult sim =
            configSimulate(prog.declaration, prog.gates, *prog.spaces, init, depth);
        writeFileOrStdout(out, traceToJson(sim).dump(2));
        return kExitOk;
    }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpreter and semantics engine for quantum recursive programs"};
    app.require_subcommand(1);

    std::string file, outPath, proc, family = "unidirectional";
    std::string coinInit = "vacuum", input = "0", statistics = "boson", format = "json";
    std::string coinLabel;
    std::vector<std::string> trunc;
    int depth = 3;
    double tol = 1e-12;
    bool reportIterations = false;

    auto* check = app.add_subcommand("check", "parse and validate a program");
    check->add_option("file", file)->required();

    auto* approx = app.add_subcommand("approx", "interpret a syntactic approximation");
    approx->add_option("file", file)->required();
    approx->add_option("--proc", proc, "procedure identifier (default: first)");
    approx->add_option("--depth", depth)->required();
    approx->add_option("--trunc", trunc, "coin=N or a uniform N");
    approx->add_option("--out", outPath);

    auto* fixpoint = app.add_subcommand("fixpoint", "compute the fixed-point semantics");
    fixpoint->add_option("file", file)->required();
    fixpoint->add_option("--trunc", trunc);
    fixpoint->add_option("--out", outPath);
    fixpoint->add_flag("--report-iterations", reportIterations);

    auto* run = app.add_subcommand("run", "principal-system simulation");
    run->add_option("file", file)->required();
    run->add_option("--coin-init", coinInit, "basis:L,L | coherent:L@12 | vacuum");
    run->add_option("--input", input, "principal basis label");
    run->add_option("--statistics", statistics)->check(CLI::IsMember({"boson", "fermion"}));
    run->add_option("--trunc", trunc);
    run->add_option("--out", outPath);
    run->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

    auto* oracle = app.add_subcommand("oracle", "compare against closed-form blocks");
    oracle->add_option("file", file)->required();
    oracle->add_option("--family", family)
        ->check(CLI::IsMember({"unidirectional", "bidirectional", "symmetric", "loop"}));
    oracle->add_option("--depth", depth);
    oracle->add_option("--tol", tol);
    oracle->add_option("--trunc", trunc);

    auto* simulate = app.add_subcommand("simulate", "configuration-transition trace");
    simulate->add_option("file", file)->required();
    simulate->add_option("--depth", depth)->required();
    simulate->add_option("--coin", coinLabel, "initial label for every coin");
    simulate->add_option("--input", input, "initial principal label");
    simulate->add_option("--out", outPath);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed())
            return cmdCheck(file);
        if (approx->parsed())
            return cmdApprox(file, proc, depth, trunc, outPath);
        if (fixpoint->parsed())
            return cmdFixpoint(file, trunc, outPath, reportIterations);
        if (run->parsed())
            return cmdRun(file, coinInit, input, statistics, trunc, outPath, format);
        if (oracle->parsed())
            return cmdOracle(file, family, depth, tol, trunc);
        if (simulate->parsed())
            return cmdSimulate(file, depth, coinLabel, input, outPath);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const fockrec::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
