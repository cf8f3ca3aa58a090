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

#ifndef HHQEC_CIRCUIT_H
#define HHQEC_CIRCUIT_H

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "hhqec/lattice.h"

namespace hhqec {

enum class Op { ResetZ, H, S, CX, PauliX, PauliZ, MeasureZ, Delay, Tick };
enum class Variant { Original, Improved, Custom };

const char *op_name(Op op);
const char *variant_name(Variant v);
bool is_unitary(Op op);

struct DurationTable {
    double t_1q = 75;
    double t_2q = 120;
    double t_meas = 2000;
    double t_reset = 2200;

    double of(Op op) const;
    bool valid() const { return t_1q > 0 && t_2q > 0 && t_meas > 0 && t_reset > 0; }
    bool operator==(const DurationTable &o) const = default;
};

struct Instruction {
    Op op = Op::Tick;
    std::vector<int> targets;
    double duration = 0;  // nanoseconds
    int round = -1;       // measurement tag: syndrome round, or `rounds` for the final data readout
    int step = 0;         // measurement tag: measurement step within the round

    bool operator==(const Instruction &o) const {
        return op == o.op && targets == o.targets && duration == o.duration && round == o.round && step == o.step;
    }
};

struct MeasRecord {
    int round;
    int qubit;
    int step;
};

struct CircuitMeta {
    PatchKind patch = PatchKind::Memory;
    int distance = 0;
    Variant variant = Variant::Custom;
    bool reset = false;
    Basis basis = Basis::Z;

    bool operator==(const CircuitMeta &o) const {
        return patch == o.patch && distance == o.distance && variant == o.variant && reset == o.reset &&
               basis == o.basis;
    }
};

struct Circuit {
    int num_qubits = 0;
    int rounds = 0;
    CircuitMeta meta;
    DurationTable durations;
    std::vector<int> data_qubits;
    std::vector<Instruction> instructions;

    /// Records in emission order, one per MeasureZ target.
    std::vector<MeasRecord> records() const;
    /// (round, qubit, step) -> record position.
    std::map<std::tuple<int, int, int>, int> measurement_index() const;
    size_t num_records() const;
    /// Instructions grouped by Tick separators (Ticks excluded).
    std::vector<std::vector<Instruction>> layers() const;
    /// Sum over layers of the longest instruction in the layer.
    double total_duration() const;
    size_t num_unitary_layers() const;
    bool is_data(int q) const;

    bool operator==(const Circuit &o) const {
        return num_qubits == o.num_qubits && rounds == o.rounds && meta == o.meta && durations == o.durations &&
               data_qubits == o.data_qubits && instructions == o.instructions;
    }
};

/// Empty iff every layer touches each qubit at most once and CX instructions have two distinct targets.
std::vector<std::string> validate_circuit(const Circuit &c);

/// One round: X checks, then flagged Z checks, each step with its own measurement (and reset).
Circuit build_original_cycle(const Patch &patch, bool reset, const DurationTable &dt = {});

/// One round measuring every check in a single measurement layer after ten unitary layers.
Circuit build_improved_cycle(const Patch &patch, bool reset, const DurationTable &dt = {});

enum class NnPattern { ControlFirst, ViaFirst };

/// Nearest-neighbour sequence equal to CX(control, target) that leaves the via unchanged.
std::vector<Instruction> decompose_nn_cx(int control, int via, int target, NnPattern pattern = NnPattern::ControlFirst,
                                         const DurationTable &dt = {});
/// Same, but rejects triples that are not coupled in the patch.
std::vector<Instruction> decompose_nn_cx(const Patch &patch, int control, int via, int target,
                                         NnPattern pattern = NnPattern::ControlFirst, const DurationTable &dt = {});

/// Drops adjacent identical self-inverse gates and re-layers the result as soon as possible.
Circuit cancel_adjacent_gates(const Circuit &c);

/// Re-layers instructions as soon as possible, preserving per-qubit order.
Circuit relayer_asap(const Circuit &c);

/// Isolated weight-4 check: a 12-layer circuit (init, ten unitary layers, readout) on qubits
/// u=0, w=1, m=2, a=3, b=4, e=5, f=6.
Circuit plaquette_circuit(const DurationTable &dt = {});
/// The uncancelled version of the plaquette unitary, built from kicks and next-nearest CX expansions.
Circuit plaquette_expanded(const DurationTable &dt = {});

enum class Experiment { Memory, Stability };

/// Full experiment: data initialisation, `rounds` syndrome rounds, and data readout (memory only).
Circuit assemble_experiment(const Patch &patch, Variant variant, bool reset, Basis basis, int rounds,
                            const DurationTable &dt = {});

std::string circuit_to_text(const Circuit &c);
Circuit circuit_from_text(const std::string &text);

}  // namespace hhqec

#endif
