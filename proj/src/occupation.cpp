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

#include "fockrec/occupation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fockrec {

    int OccVec::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

    bool OccVec::operator<(const OccVec& o) const {
        int ta = total(), tb = o.total();
        if (ta != tb)
            return ta < tb;
        return counts < o.counts;
    }

    bool OccVec::leq(const OccVec& o) const {
        if (counts.size() != o.counts.size())
            throw std::invalid_argument("OccVec::leq: coin count mismatch");
        for (size_t i = 0; i < counts.size(); ++i)
            if (counts[i] > o.counts[i])
                return false;
        return true;
    }

    OccVec OccVec::max(const OccVec& o) const {
        if (counts.size() != o.counts.size())
            throw std::invalid_argument("OccVec::max: coin count mismatch");
        OccVec r(*this);
        for (size_t i = 0; i < counts.size(); ++i)
            r.counts[i] = std::max(counts[i], o.counts[i]);
        return r;
    }

    OccVec OccVec::plus(int coinIdx, int delta) const {
        OccVec r(*this);
        r.counts.at(coinIdx) += delta;
        if (r.counts[coinIdx] < 0)
            throw std::invalid_argument("OccVec::plus: negative occupation");
        return r;
    }

    bool OccVec::withinCaps(const std::vector<int>& caps) const {
        for (size_t i = 0; i < counts.size(); ++i)
            if (counts[i] > caps[i])
                return false;
        return true;
    }

    std::string OccVec::str(const std::vector<std::string>& coinNames) const {
        std::ostringstream oss;
        oss << "{";
        for (size_t i = 0; i < counts.size(); ++i) {
            if (i)
                oss << ", ";
            oss << (i < coinNames.size() ? coinNames[i] : "c" + std::to_string(i)) << ": "
                << counts[i];
        }
        oss << "}";
        return oss.str();
    }

    SupportSet belowClosure(const SupportSet& s) {
        SupportSet out;
        for (const auto& top : s) {
            // Enumerate the box [0, top].
            OccVec cur = OccVec::zeros(static_cast<int>(top.counts.size()));
            while (true) {
                out.insert(cur);
                size_t i = 0;
                for (; i < cur.counts.size(); ++i) {
                    if (cur.counts[i] < top.counts[i]) {
                        ++cur.counts[i];
                        for (size_t j = 0; j < i; ++j)
                            cur.counts[j] = 0;
                        break;
                    }
                }
                if (i == cur.counts.size())
                    break;
            }
        }
        return out;
    }

    bool isBelowClosed(const SupportSet& s) {
        return belowClosure(s) == s;
    }

    std::vector<OccVec> enumerateOccupations(const std::vector<int>& caps) {
        SupportSet top;
        top.insert(OccVec(caps));
        auto closed = belowClosure(top);
        return std::vector<OccVec>(closed.begin(), closed.end());
    }

}  // namespace fockrec
