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

#include "fockrec/ast.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace fockrec {

    namespace {
        std::shared_ptr<Prog> blank(ProgKind k) {
            auto p = std::make_shared<Prog>();
            p->kind = k;
            return p;
        }
    }  // namespace

    ProgPtr makeAbort() { return blank(ProgKind::Abort); }

    ProgPtr makeSkip() { return blank(ProgKind::Skip); }

    ProgPtr makeUnitary(std::string gate, std::vector<CoinRef> coins,
                        std::vector<std::string> systems) {
        auto p = blank(ProgKind::Unitary);
        p->gate = std::move(gate);
        p->coins = std::move(coins);
        p->systems = std::move(systems);
        return p;
    }

    ProgPtr makeSeq(ProgPtr first, ProgPtr second) {
        auto p = blank(ProgKind::Seq);
        p->first = std::move(first);
        p->second = std::move(second);
        return p;
    }

    ProgPtr makeQif(CoinRef guard, std::vector<QifBranch> branches) {
        auto p = blank(ProgKind::Qif);
        p->guard = std::move(guard);
        p->branches = std::move(branches);
        return p;
    }

    ProgPtr makeProcCall(std::string name) {
        auto p = blank(ProgKind::ProcCall);
        p->callee = std::move(name);
        return p;
    }

    bool structurallyEqual(const ProgPtr& a, const ProgPtr& b) {
        if (a == b)
            return true;
        if (!a || !b || a->kind != b->kind)
            return false;
        switch (a->kind) {
            case ProgKind::Abort:
            case ProgKind::Skip:
                return true;
            case ProgKind::Unitary:
                return a->gate == b->gate && a->coins == b->coins && a->systems == b->systems;
            case ProgKind::Seq:
                return structurallyEqual(a->first, b->first) &&
                       structurallyEqual(a->second, b->second);
            case ProgKind::Qif: {
                if (!(a->guard == b->guard) || a->branches.size() != b->branches.size())
                    return false;
                for (size_t i = 0; i < a->branches.size(); ++i) {
                    if (a->branches[i].label != b->branches[i].label ||
                        !structurallyEqual(a->branches[i].body, b->branches[i].body))
                        return false;
                }
                return true;
            }
            case ProgKind::ProcCall:
                return a->callee == b->callee;
        }
        return false;
    }

    namespace {
        void visit(const ProgPtr& p, const std::function<void(const Prog&)>& f) {
            if (!p)
                return;
            f(*p);
            if (p->kind == ProgKind::Seq) {
                visit(p->first, f);
                visit(p->second, f);
            } else if (p->kind == ProgKind::Qif) {
                for (const auto& b : p->branches)
                    visit(b.body, f);
            }
        }
    }  // namespace

    std::set<std::string> freeCoins(const ProgPtr& p) {
        std::set<std::string> out;
        visit(p, [&](const Prog& n) {
            if (n.kind == ProgKind::Unitary) {
                for (const auto& c : n.coins)
                    out.insert(c.coin);
            } else if (n.kind == ProgKind::Qif) {
                out.insert(n.guard.coin);
            }
        });
        return out;
    }

    std::set<std::string> calledProcs(const ProgPtr& p) {
        std::set<std::string> out;
        visit(p, [&](const Prog& n) {
            if (n.kind == ProgKind::ProcCall)
                out.insert(n.callee);
        });
        return out;
    }

    int maxCopyIndex(const ProgPtr& p, const std::string& coin) {
        int best = -1;
        visit(p, [&](const Prog& n) {
            if (n.kind == ProgKind::Unitary) {
                for (const auto& c : n.coins)
                    if (c.coin == coin)
                        best = std::max(best, c.copyIndex);
            } else if (n.kind == ProgKind::Qif && n.guard.coin == coin) {
                best = std::max(best, n.guard.copyIndex);
            }
        });
        return best;
    }

    ProgPtr seqPower(const ProgPtr& p, int n) {
        if (n < 1)
            throw std::invalid_argument("seqPower requires n >= 1");
        if (n == 1)
            return p;
        return makeSeq(p, seqPower(p, n - 1));
    }

    ProgPtr desugarChoice(const ProgPtr& coinProgram, const CoinRef& guard,
                          std::vector<QifBranch> branches) {
        return makeSeq(coinProgram, makeQif(guard, std::move(branches)));
    }

    const ProgPtr* Declaration::body(const std::string& name) const {
        for (const auto& [n, b] : equations)
            if (n == name)
                return &b;
        return nullptr;
    }

    int Declaration::index(const std::string& name) const {
        for (size_t i = 0; i < equations.size(); ++i)
            if (equations[i].first == name)
                return static_cast<int>(i);
        return -1;
    }

    namespace {
        /// Rename copies c_j -> c_{j+1} for all j >= fromIndex.
        ProgPtr renameCopiesUp(const ProgPtr& p, const std::string& coin, int fromIndex) {
            if (!p)
                return p;
            switch (p->kind) {
                case ProgKind::Abort:
                case ProgKind::Skip:
                case ProgKind::ProcCall:
                    return p;
                case ProgKind::Unitary: {
                    bool touched = false;
                    auto coins = p->coins;
                    for (auto& c : coins) {
                        if (c.coin == coin && c.copyIndex >= fromIndex) {
                            ++c.copyIndex;
                            touched = true;
                        }
                    }
                    if (!touched)
                        return p;
                    return makeUnitary(p->gate, std::move(coins), p->systems);
                }
                case ProgKind::Seq:
                    return makeSeq(renameCopiesUp(p->first, coin, fromIndex),
                                   renameCopiesUp(p->second, coin, fromIndex));
                case ProgKind::Qif: {
                    CoinRef g = p->guard;
                    if (g.coin == coin && g.copyIndex >= fromIndex)
                        ++g.copyIndex;
                    std::vector<QifBranch> bs;
                    bs.reserve(p->branches.size());
                    for (const auto& b : p->branches)
                        bs.push_back({b.label, renameCopiesUp(b.body, coin, fromIndex)});
                    return makeQif(g, std::move(bs));
                }
            }
            return p;
        }
    }  // namespace

    ProgPtr substitute(const ProgPtr& p, const std::vector<std::string>& names,
                       const std::vector<ProgPtr>& bodies) {
        if (names.size() != bodies.size())
            throw std::invalid_argument("substitute: arity mismatch");
        for (const auto& b : bodies) {
            if (!calledProcs(b).empty())
                throw std::invalid_argument("substitute: bodies must be identifier-free");
        }
        switch (p->kind) {
            case ProgKind::Abort:
            case ProgKind::Skip:
            case ProgKind::Unitary:
                return p;
            case ProgKind::ProcCall: {
                for (size_t i = 0; i < names.size(); ++i)
                    if (names[i] == p->callee)
                        return bodies[i];
                return p;
            }
            case ProgKind::Seq:
                return makeSeq(substitute(p->first, names, bodies),
                               substitute(p->second, names, bodies));
            case ProgKind::Qif: {
                std::vector<QifBranch> bs;
                bs.reserve(p->branches.size());
                for (const auto& b : p->branches) {
                    ProgPtr sub = substitute(b.body, names, bodies);
                    bs.push_back({b.label, renameCopiesUp(sub, p->guard.coin, p->guard.copyIndex)});
                }
                return makeQif(p->guard, std::move(bs));
            }
        }
        return p;
    }

    namespace {
        std::vector<ProgPtr> approxLevel(const Declaration& d, int depth) {
            std::vector<std::string> names;
            for (const auto& [n, b] : d.equations)
                names.push_back(n);
            std::vector<ProgPtr> cur(names.size(), makeAbort());
            for (int k = 0; k < depth; ++k) {
                std::vector<ProgPtr> next;
                next.reserve(names.size());
                for (const auto& [n, body] : d.equations)
                    next.push_back(substitute(body, names, cur));
                cur = std::move(next);
            }
            return cur;
        }
    }  // namespace

    ProgPtr syntacticApprox(const Declaration& d, const std::string& name, int depth) {
        if (depth < 0)
            throw std::invalid_argument("syntacticApprox: depth must be >= 0");
        int idx = d.index(name);
        if (idx < 0)
            throw std::invalid_argument("syntacticApprox: unknown identifier " + name);
        if (depth == 0)
            return makeAbort();
        return approxLevel(d, depth)[idx];
    }

    ProgPtr syntacticApproxMain(const Declaration& d, int depth) {
        if (depth < 0)
            throw std::invalid_argument("syntacticApprox: depth must be >= 0");
        if (depth == 0)
            return makeAbort();
        std::vector<std::string> names;
        for (const auto& [n, b] : d.equations)
            names.push_back(n);
        return substitute(d.main, names, approxLevel(d, depth - 1));
    }

    namespace {
        std::string coinRefText(const CoinRef& c) {
            if (c.copyIndex == 0)
                return c.coin;
            return c.coin + "#" + std::to_string(c.copyIndex);
        }

        void print(const ProgPtr& p, std::ostream& os) {
            switch (p->kind) {
                case ProgKind::Abort:
                    os << "abort";
                    return;
                case ProgKind::Skip:
                    os << "skip";
                    return;
                case ProgKind::ProcCall:
                    os << p->callee;
                    return;
                case ProgKind::Unitary: {
                    os << p->gate << "[";
                    bool first = true;
                    for (const auto& c : p->coins) {
                        if (!first)
                            os << ", ";
                        os << coinRefText(c);
                        first = false;
                    }
                    for (const auto& s : p->systems) {
                        if (!first)
                            os << ", ";
                        os << s;
                        first = false;
                    }
                    os << "]";
                    return;
                }
                case ProgKind::Seq: {
                    // Sequencing is right-associative in the grammar, so a
                    // left-nested first operand needs explicit parentheses.
                    if (p->first->kind == ProgKind::Seq) {
                        os << "(";
                        print(p->first, os);
                        os << ")";
                    } else {
                        print(p->first, os);
                    }
                    os << "; ";
                    print(p->second, os);
                    return;
                }
                case ProgKind::Qif: {
                    os << "qif [" << coinRefText(p->guard) << "] ";
                    bool first = true;
                    for (const auto& b : p->branches) {
                        if (!first)
                            os << " [] ";
                        os << "|" << b.label << "> -> ";
                        if (b.body->kind == ProgKind::Seq) {
                            os << "(";
                            print(b.body, os);
                            os << ")";
                        } else {
                            print(b.body, os);
                        }
                        first = false;
                    }
                    os << " fiq";
                    return;
                }
            }
        }
    }  // namespace

    std::string printProg(const ProgPtr& p) {
        std::ostringstream oss;
        print(p, oss);
        return oss.str();
    }

}  // namespace fockrec
