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

#include "fockrec/validate.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace fockrec {

    std::string ValidationReport::summary() const {
        if (violations.empty())
            return "ok";
        std::ostringstream oss;
        for (const auto& v : violations)
            oss << v.code << ": " << v.message << "\n";
        return oss.str();
    }

    namespace {
        struct Checker {
            const Declaration& decl;
            const GateLibrary& gates;
            const Spaces& spaces;
            ValidationReport report;

            void add(std::string code, std::string message) {
                report.violations.push_back({std::move(code), std::move(message)});
            }

            void checkUnitaryUse(const Prog& n, const std::string& where) {
                const GateDef* g = gates.find(n.gate);
                if (!g) {
                    add("unknown-gate", "gate '" + n.gate + "' in " + where + " is not declared");
                    return;
                }
                std::vector<std::string> used;
                for (const auto& c : n.coins) {
                    used.push_back(c.coin);
                    if (c.copyIndex != 0)
                        add("coin-copy-in-source",
                            "coin copy '" + c.coin + "#" + std::to_string(c.copyIndex) +
                                "' may not appear in source (" + where + ")");
                    if (!spaces.findCoin(c.coin))
                        add("unknown-space", "'" + c.coin + "' used as a coin in " + where +
                                                 " is not a declared coin");
                }
                for (const auto& s : n.systems) {
                    used.push_back(s);
                    if (!spaces.findPrincipal(s))
                        add("unknown-space", "'" + s + "' used as a principal register in " +
                                                 where + " is not declared");
                }
                if (used != g->spaceNames) {
                    std::ostringstream oss;
                    oss << "gate '" << n.gate << "' in " << where << " is applied to (";
                    for (size_t i = 0; i < used.size(); ++i)
                        oss << (i ? ", " : "") << used[i];
                    oss << ") but is declared on (";
                    for (size_t i = 0; i < g->spaceNames.size(); ++i)
                        oss << (i ? ", " : "") << g->spaceNames[i];
                    oss << ")";
                    add("dimension-mismatch", oss.str());
                }
            }

            void checkProg(const ProgPtr& p, const std::string& where) {
                switch (p->kind) {
                    case ProgKind::Abort:
                    case ProgKind::Skip:
                        return;
                    case ProgKind::Unitary:
                        checkUnitaryUse(*p, where);
                        return;
                    case ProgKind::Seq:
                        checkProg(p->first, where);
                        checkProg(p->second, where);
                        return;
                    case ProgKind::ProcCall:
                        if (!decl.body(p->callee))
                            add("unknown-identifier",
                                "procedure '" + p->callee + "' called in " + where +
                                    " is not declared");
                        return;
                    case ProgKind::Qif: {
                        const SpaceSpec* guardSpace = spaces.findCoin(p->guard.coin);
                        if (!guardSpace)
                            add("unknown-space", "qif guard '" + p->guard.coin + "' in " + where +
                                                     " is not a declared coin");
                        if (p->guard.copyIndex != 0)
                            add("coin-copy-in-source",
                                "qif guard copy index must be 0 in source (" + where + ")");
                        std::set<std::string> seen;
                        for (const auto& b : p->branches) {
                            if (!seen.insert(b.label).second)
                                add("duplicate-branch-label",
                                    "label '" + b.label + "' repeated in qif (" + where + ")");
                            if (guardSpace && !guardSpace->labelIndex(b.label))
                                add("unknown-label", "label '" + b.label +
                                                         "' is not in the basis of coin '" +
                                                         p->guard.coin + "' (" + where + ")");
                            if (freeCoins(b.body).count(p->guard.coin))
                                add("guard-coin-in-branch",
                                    "guard coin '" + p->guard.coin +
                                        "' occurs inside a branch body (" + where + ")");
                            checkProg(b.body, where);
                        }
                        return;
                    }
                }
            }
        };
    }  // namespace

    ValidationReport validate(const Declaration& d, const GateLibrary& gates,
                              const Spaces& spaces) {
        Checker ck{d, gates, spaces, {}};

        // Coin and principal namespaces must not collide.
        for (const auto& c : spaces.coins)
            if (spaces.findPrincipal(c.name))
                ck.add("namespace-collision",
                       "'" + c.name + "' is declared both as a coin and a principal register");

        // Labels pairwise distinct within a space.
        auto checkLabels = [&](const SpaceSpec& s) {
            std::set<std::string> seen;
            for (const auto& l : s.basisLabels)
                if (!seen.insert(l).second)
                    ck.add("duplicate-basis-label",
                           "label '" + l + "' repeated in space '" + s.name + "'");
        };
        for (const auto& c : spaces.coins)
            checkLabels(c);
        for (const auto& p : spaces.principals)
            checkLabels(p);

        // Gate matrices: square, dimension matching their spaces, unitary.
        for (const auto& [name, g] : gates.entries()) {
            if (g.matrix.rows() != g.matrix.cols()) {
                ck.add("dimension-mismatch", "gate '" + name + "' matrix is not square");
                continue;
            }
            long want = 1;
            bool known = true;
            bool principalSeen = false;
            for (const auto& sn : g.spaceNames) {
                const SpaceSpec* s = spaces.find(sn);
                if (!s) {
                    ck.add("unknown-space",
                           "gate '" + name + "' is declared on unknown space '" + sn + "'");
                    known = false;
                    continue;
                }
                if (s->kind == SpaceKind::Principal)
                    principalSeen = true;
                else if (principalSeen)
                    ck.add("argument-order", "gate '" + name +
                                                 "' lists coin '" + sn +
                                                 "' after a principal register");
                want *= s->dimension();
            }
            if (known && g.matrix.rows() != want)
                ck.add("dimension-mismatch",
                       "gate '" + name + "' matrix has dimension " +
                           std::to_string(g.matrix.rows()) + " but its spaces have dimension " +
                           std::to_string(want));
            if (!g.unitary)
                ck.add("non-unitary-gate", "gate '" + name + "' is not unitary to tolerance");
        }

        std::set<std::string> duplicate;
        for (size_t i = 0; i < d.equations.size(); ++i)
            for (size_t j = i + 1; j < d.equations.size(); ++j)
                if (d.equations[i].first == d.equations[j].first)
                    duplicate.insert(d.equations[i].first);
        for (const auto& n : duplicate)
            ck.add("duplicate-declaration", "procedure '" + n + "' is declared twice");

        std::set<std::string> declCoins;
        for (const auto& [name, body] : d.equations) {
            ck.checkProg(body, "procedure " + name);
            auto fc = freeCoins(body);
            declCoins.insert(fc.begin(), fc.end());
        }
        if (d.main) {
            ck.checkProg(d.main, "main");
            for (const auto& c : freeCoins(d.main))
                if (declCoins.count(c))
                    ck.add("main-declaration-coin-overlap",
                           "coin '" + c + "' occurs both in main and in a procedure body");
        } else {
            ck.add("missing-main", "no main statement");
        }

        return ck.report;
    }

}  // namespace fockrec
