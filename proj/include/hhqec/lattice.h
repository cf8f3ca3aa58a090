// Copyright 2026 The hhqec Authors
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

#ifndef HHQEC_LATTICE_H
#define HHQEC_LATTICE_H

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace hhqec {

enum class Role { Data, MeasureX, MeasureZ, Via, Flag, Unused };
enum class Basis { X, Z };
enum class PatchKind { Memory, Stability };
enum class ObsKind { LogicalX, LogicalZ, CheckProductConstraint };

const char *role_name(Role r);
const char *basis_name(Basis b);

struct Qubit {
    int id;
    int x;
    int y;
    Role role;
    std::string label;
};

struct Check {
    Basis basis;
    std::vector<int> support;     // data qubit ids
    int measure_qubit;
    std::vector<int> via_qubits;  // empty when the measure qubit touches the data directly
    std::string label;
    size_t weight() const { return support.size(); }
};

struct Stabilizer {
    Basis basis;
    std::vector<int> checks;  // indices into Patch::checks
};

struct ObservableSpec {
    ObsKind kind;
    /// Data qubit ids for logical operators, check indices for a check-product constraint.
    std::vector<int> support;
};

struct Patch {
    PatchKind kind = PatchKind::Memory;
    int distance = 0;
    std::vector<Qubit> qubits;
    std::vector<std::pair<int, int>> couplings;
    std::vector<Check> checks;
    std::vector<Stabilizer> stabilizers;
    std::vector<ObservableSpec> observables;

    std::vector<int> data_qubits() const;
    std::vector<int> measure_qubits() const;
    int qubit_by_label(const std::string &label) const;
    bool coupled(int a, int b) const;
    /// Index of the check measured by the given qubit, or -1.
    int check_of_measure_qubit(int q) const;
    const ObservableSpec *observable(ObsKind kind) const;
};

/// Heavy-hex memory patch of odd distance d >= 3. Throws std::invalid_argument otherwise.
Patch build_memory_patch(int d);

/// Fixed seven data qubit patch with four X stabilizers whose X checks multiply to identity.
Patch build_stability_patch();

/// One entry per violated invariant. Empty means the patch is well formed.
std::vector<std::string> validate_patch(const Patch &patch);

/// Data-qubit support of the product of the given checks (symmetric difference).
std::vector<int> product_support(const Patch &patch, const std::vector<int> &check_indices);

/// Parity of the overlap between an X-type and a Z-type support.
bool anticommute(const std::vector<int> &a, const std::vector<int> &b);

nlohmann::json patch_to_json(const Patch &patch);
Patch patch_from_json(const nlohmann::json &j);

}  // namespace hhqec

#endif
