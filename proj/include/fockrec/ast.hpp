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

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace fockrec {

    /// Reference to copy `copyIndex` of a coin. Copy 0 is the coin itself;
    /// higher copies only arise from substitution, never from source text.
    struct CoinRef {
        std::string coin;
        int copyIndex = 0;

        bool operator==(const CoinRef& o) const {
            return coin == o.coin && copyIndex == o.copyIndex;
        }
    };

    enum class ProgKind { Abort, Skip, Unitary, Seq, Qif, ProcCall };

    struct Prog;
    using ProgPtr = std::shared_ptr<const Prog>;

    struct QifBranch {
        std::string label;
        ProgPtr body;
    };

    /// One node of a (generalised) program scheme. Nodes are immutable after
    /// construction and shared freely.
    struct Prog {
        ProgKind kind = ProgKind::Abort;

        // Unitary
        std::string gate;
        std::vector<CoinRef> coins;
        std::vector<std::string> systems;

        // Seq
        ProgPtr first;
        ProgPtr second;

        // Qif
        CoinRef guard;
        std::vector<QifBranch> branches;

        // ProcCall
        std::string callee;

        int line = 0;
        int col = 0;
    };

    ProgPtr makeAbort();
    ProgPtr makeSkip();
    ProgPtr makeUnitary(std::string gate, std::vector<CoinRef> coins,
                        std::vector<std::string> systems);
    ProgPtr makeSeq(ProgPtr first, ProgPtr second);
    ProgPtr makeQif(CoinRef guard, std::vector<QifBranch> branches);
    ProgPtr makeProcCall(std::string name);

    bool structurallyEqual(const ProgPtr& a, const ProgPtr& b);

    /// Base coin names occurring in the program, any copy index.
    std::set<std::string> freeCoins(const ProgPtr& p);
    /// All procedure identifiers called in the program.
    std::set<std::string> calledProcs(const ProgPtr& p);
    /// Largest copy index used for `coin`, or -1 if the coin is absent.
    int maxCopyIndex(const ProgPtr& p, const std::string& coin);

    /// Right-nested sequential composition of n copies of p; n >= 1.
    ProgPtr seqPower(const ProgPtr& p, int n);

    /// Quantum choice: coin program followed by a case statement on the coin.
    /// The coin program must touch only the guard coin (checked by caller or
    /// validation); no elision happens for identity coin programs.
    ProgPtr desugarChoice(const ProgPtr& coinProgram, const CoinRef& guard,
                          std::vector<QifBranch> branches);

    struct Declaration {
        std::vector<std::pair<std::string, ProgPtr>> equations;
        ProgPtr main;

        const ProgPtr* body(const std::string& name) const;
        int index(const std::string& name) const;
    };

    /// Simultaneous substitution of procedure identifiers by identifier-free
    /// generalised programs. Inside each branch of a case statement guarded
    /// by copy k of coin c, copies c_j with j >= k in the substituted branch
    /// are renamed to c_{j+1}; the guard copy itself is untouched.
    ProgPtr substitute(const ProgPtr& p, const std::vector<std::string>& names,
                       const std::vector<ProgPtr>& bodies);

    /// n-th syntactic approximation of procedure `name`: 0 gives abort,
    /// n+1 substitutes the n-th approximations into the body.
    ProgPtr syntacticApprox(const Declaration& d, const std::string& name, int depth);
    /// Same unfolding applied to the main statement.
    ProgPtr syntacticApproxMain(const Declaration& d, int depth);

    /// Canonical text of a program; parses back to an equal AST. Coin copies
    /// with index > 0 print as c#k (display only; not accepted by the parser).
    std::string printProg(const ProgPtr& p);

}  // namespace fockrec
