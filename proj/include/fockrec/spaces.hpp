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

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace fockrec {

    using Complex = std::complex<double>;
    using DenseMatrix = Eigen::MatrixXcd;
    using DenseVector = Eigen::VectorXcd;
    using SparseMatrix = Eigen::SparseMatrix<Complex>;

    enum class SpaceKind { Coin, Principal };

    /// A declared quantum space: a coin with named basis labels, or a
    /// principal register (ring positions -W..W, or a plain 0..d-1 space).
    struct SpaceSpec {
        SpaceKind kind = SpaceKind::Coin;
        std::string name;
        std::vector<std::string> basisLabels;

        int dimension() const { return static_cast<int>(basisLabels.size()); }
        std::optional<int> labelIndex(const std::string& label) const;

        static SpaceSpec coin(std::string name, std::vector<std::string> labels);
        static SpaceSpec ring(std::string name, int halfWidth);
        static SpaceSpec principal(std::string name, int dimension);
    };

    /// The declared model: coins and principal registers, in declaration
    /// order. Coin order fixes the tensor-factor order of every Fock block.
    struct Spaces {
        std::vector<SpaceSpec> coins;
        std::vector<SpaceSpec> principals;

        const SpaceSpec* findCoin(const std::string& name) const;
        const SpaceSpec* findPrincipal(const std::string& name) const;
        const SpaceSpec* find(const std::string& name) const;
        int coinIndex(const std::string& name) const;
        int principalIndex(const std::string& name) const;

        int coinCount() const { return static_cast<int>(coins.size()); }
        int principalDim() const;
        /// Joint label of a principal basis index, e.g. "-3" or "0,1".
        std::string principalLabel(int index) const;
        std::optional<int> principalLabelIndex(const std::string& label) const;
    };

    using SpacesPtr = std::shared_ptr<const Spaces>;

    struct GateDef {
        std::string name;
        std::vector<std::string> spaceNames;  // coins first, then principals
        DenseMatrix matrix;
        bool unitary = false;
    };

    class GateLibrary {
    public:
        void add(GateDef def);
        const GateDef* find(const std::string& name) const;
        const std::map<std::string, GateDef>& entries() const { return m_entries; }

    private:
        std::map<std::string, GateDef> m_entries;
    };

    DenseMatrix hadamardMatrix();
    DenseMatrix fourierMatrix(int n);
    /// Cyclic shift on a dim-sized register: |n> -> |n+offset mod dim>.
    DenseMatrix shiftMatrix(int dim, int offset);
    DenseMatrix identityMatrix(int dim);
    bool isUnitary(const DenseMatrix& m, double tol = 1e-10);

}  // namespace fockrec
