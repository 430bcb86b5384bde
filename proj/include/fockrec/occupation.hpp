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

#include <set>
#include <string>
#include <vector>

namespace fockrec {

    /// Per-coin copy counts, indexed in the global coin order.
    struct OccVec {
        std::vector<int> counts;

        OccVec() = default;
        explicit OccVec(std::vector<int> c) : counts(std::move(c)) {}
        static OccVec zeros(int coinCount) { return OccVec(std::vector<int>(coinCount, 0)); }

        int total() const;
        bool operator==(const OccVec& o) const { return counts == o.counts; }
        /// Ordering for containers: total count first, then lexicographic.
        /// Any listing in this order visits occupations below before above.
        bool operator<(const OccVec& o) const;

        /// Componentwise partial order.
        bool leq(const OccVec& o) const;
        OccVec max(const OccVec& o) const;
        OccVec plus(int coinIdx, int delta = 1) const;
        bool withinCaps(const std::vector<int>& caps) const;

        std::string str(const std::vector<std::string>& coinNames) const;
    };

    using SupportSet = std::set<OccVec>;

    /// Smallest below-closed superset: all vectors componentwise below some
    /// element of s.
    SupportSet belowClosure(const SupportSet& s);
    bool isBelowClosed(const SupportSet& s);

    /// All occupations within the per-coin caps, ordered by (total, lex).
    std::vector<OccVec> enumerateOccupations(const std::vector<int>& caps);

}  // namespace fockrec
