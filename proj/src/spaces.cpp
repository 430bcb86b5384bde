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

#include "fockrec/spaces.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fockrec {

    std::optional<int> SpaceSpec::labelIndex(const std::string& label) const {
        for (size_t i = 0; i < basisLabels.size(); ++i) {
            if (basisLabels[i] == label)
                return static_cast<int>(i);
        }
        return std::nullopt;
    }

    SpaceSpec SpaceSpec::coin(std::string name, std::vector<std::string> labels) {
        SpaceSpec s;
        s.kind = SpaceKind::Coin;
        s.name = std::move(name);
        s.basisLabels = std::move(labels);
        return s;
    }

    SpaceSpec SpaceSpec::ring(std::string name, int halfWidth) {
        SpaceSpec s;
        s.kind = SpaceKind::Principal;
        s.name = std::move(name);
        for (int n = -halfWidth; n <= halfWidth; ++n)
            s.basisLabels.push_back(std::to_string(n));
        return s;
    }

    SpaceSpec SpaceSpec::principal(std::string name, int dimension) {
        SpaceSpec s;
        s.kind = SpaceKind::Principal;
        s.name = std::move(name);
        for (int n = 0; n < dimension; ++n)
            s.basisLabels.push_back(std::to_string(n));
        return s;
    }

    const SpaceSpec* Spaces::findCoin(const std::string& name) const {
        for (const auto& c : coins)
            if (c.name == name)
                return &c;
        return nullptr;
    }

    const SpaceSpec* Spaces::findPrincipal(const std::string& name) const {
        for (const auto& p : principals)
            if (p.name == name)
                return &p;
        return nullptr;
    }

    const SpaceSpec* Spaces::find(const std::string& name) const {
        if (const auto* c = findCoin(name))
            return c;
        return findPrincipal(name);
    }

    int Spaces::coinIndex(const std::string& name) const {
        for (size_t i = 0; i < coins.size(); ++i)
            if (coins[i].name == name)
                return static_cast<int>(i);
        return -1;
    }

    int Spaces::principalIndex(const std::string& name) const {
        for (size_t i = 0; i < principals.size(); ++i)
            if (principals[i].name == name)
                return static_cast<int>(i);
        return -1;
    }

    int Spaces::principalDim() const {
        int d = 1;
        for (const auto& p : principals)
            d *= p.dimension();
        return d;
    }

    std::string Spaces::principalLabel(int index) const {
        if (principals.empty())
            return "";
        // Mixed-radix decomposition, first principal most significant.
        std::vector<int> digits(principals.size(), 0);
        int rest = index;
        for (int i = static_cast<int>(principals.size()) - 1; i >= 0; --i) {
            digits[i] = rest % principals[i].dimension();
            rest /= principals[i].dimension();
        }
        std::ostringstream oss;
        for (size_t i = 0; i < principals.size(); ++i) {
            if (i)
                oss << ",";
            oss << principals[i].basisLabels[digits[i]];
        }
        return oss.str();
    }

    std::optional<int> Spaces::principalLabelIndex(const std::string& label) const {
        // Accept either the joint comma-separated label or, for a single
        // principal register, a bare label.
        std::vector<std::string> parts;
        std::string cur;
        for (char ch : label) {
            if (ch == ',') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        parts.push_back(cur);
        if (parts.size() != principals.size())
            return std::nullopt;
        int index = 0;
        for (size_t i = 0; i < principals.size(); ++i) {
            auto d = principals[i].labelIndex(parts[i]);
            if (!d)
                return std::nullopt;
            index = index * principals[i].dimension() + *d;
        }
        return index;
    }

    void GateLibrary::add(GateDef def) { m_entries[def.name] = std::move(def); }

    const GateDef* GateLibrary::find(const std::string& name) const {
        auto it = m_entries.find(name);
        return it == m_entries.end() ? nullptr : &it->second;
    }

    DenseMatrix hadamardMatrix() {
        DenseMatrix h(2, 2);
        const double s = 1.0 / std::sqrt(2.0);
        h << s, s, s, -s;
        return h;
    }

    DenseMatrix fourierMatrix(int n) {
        DenseMatrix f(n, n);
        const double s = 1.0 / std::sqrt(static_cast<double>(n));
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                double phi = 2.0 * std::numbers::pi * j * k / n;
                f(j, k) = s * Complex(std::cos(phi), std::sin(phi));
            }
        }
        return f;
    }

    DenseMatrix shiftMatrix(int dim, int offset) {
        DenseMatrix t = DenseMatrix::Zero(dim, dim);
        for (int n = 0; n < dim; ++n) {
            int m = ((n + offset) % dim + dim) % dim;
            t(m, n) = 1.0;
        }
        return t;
    }

    DenseMatrix identityMatrix(int dim) { return DenseMatrix::Identity(dim, dim); }

    bool isUnitary(const DenseMatrix& m, double tol) {
        if (m.rows() != m.cols())
            return false;
        DenseMatrix g = m.adjoint() * m;
        return (g - DenseMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
    }

}  // namespace fockrec
