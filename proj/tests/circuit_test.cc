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

#include <gtest/gtest.h>

#include <random>

#include "hhqec/circuit.h"
#include "hhqec/sim.h"

namespace hhqec {
namespace {

void apply(Tableau &t, const Instruction &in) {
    switch (in.op) {
        case Op::H: for (int q : in.targets) t.h(q); break;
        case Op::S: for (int q : in.targets) t.s(q); break;
        case Op::CX: t.cx(in.targets[0], in.targets[1]); break;
        case Op::PauliX: for (int q : in.targets) t.x(q); break;
        case Op::PauliZ: for (int q : in.targets) t.z(q); break;
        default: break;
    }
}

Tableau random_state(int n, std::mt19937_64 &rng) {
    Tableau t(n);
    std::uniform_int_distribution<int> q(0, n - 1), g(0, 2);
    for (int i = 0; i < 40; i++) {
        int a = q(rng);
        switch (g(rng)) {
            case 0: t.h(a); break;
            case 1: t.s(a); break;
            default: {
                int b = q(rng);
                if (b != a) t.cx(a, b);
            }
        }
    }
    return t;
}

TEST(Durations, RoundTotals) {
    Patch p = build_memory_patch(3);
    EXPECT_DOUBLE_EQ(build_original_cycle(p, true).total_duration(), 11100);
    EXPECT_DOUBLE_EQ(build_improved_cycle(p, false).total_duration(), 3200);
    EXPECT_DOUBLE_EQ(build_improved_cycle(p, true).total_duration(), 5400);
}

TEST(Cycles, ValidLayering) {
    Patch p = build_memory_patch(3);
    for (bool reset : {false, true}) {
        EXPECT_TRUE(validate_circuit(build_original_cycle(p, reset)).empty());
        EXPECT_TRUE(validate_circuit(build_improved_cycle(p, reset)).empty());
    }
}

TEST(Cycles, OriginalMeasuresTwicePerRound) {
    Patch p = build_memory_patch(3);
    Circuit c = build_original_cycle(p, true);
    int meas_layers = 0;
    for (const auto &l : c.layers()) {
        bool m = false;
        for (const auto &in : l) m |= in.op == Op::MeasureZ;
        meas_layers += m;
    }
    EXPECT_EQ(meas_layers, 2);
}

TEST(Cycles, ImprovedMeasuresAllChecksAtOnce) {
    Patch p = build_memory_patch(3);
    Circuit c = build_improved_cycle(p, false);
    int layers_with_meas = 0;
    for (const auto &l : c.layers()) {
        size_t n = 0;
        for (const auto &in : l) {
            if (in.op == Op::MeasureZ) n += in.targets.size();
        }
        if (n) {
            layers_with_meas++;
            EXPECT_EQ(n, p.checks.size());
        }
    }
    EXPECT_EQ(layers_with_meas, 1);
}

TEST(Cycles, ImprovedRejectsLargerDistance) {
    EXPECT_THROW(build_improved_cycle(build_memory_patch(5), false), std::invalid_argument);
}

TEST(Cycles, NoiselessOriginalFlagsReadZero) {
    Patch p = build_memory_patch(3);
    Circuit c = assemble_experiment(p, Variant::Original, true, Basis::Z, 2);
    auto ref = reference_run(c);
    auto recs = c.records();
    for (size_t i = 0; i < recs.size(); i++) {
        if (recs[i].round >= c.rounds || recs[i].step == 0) continue;
        if (p.qubits[recs[i].qubit].role != Role::Flag) continue;
        EXPECT_EQ(ref.bits[i], 0) << "record " << i;
        EXPECT_FALSE(ref.nondeterministic[i]);
    }
}

TEST(NnCx, FourNearestNeighbourGates) {
    auto seq = decompose_nn_cx(0, 1, 2);
    ASSERT_EQ(seq.size(), 4u);
    for (const auto &in : seq) {
        EXPECT_EQ(in.op, Op::CX);
        EXPECT_EQ(std::abs(in.targets[0] - in.targets[1]), 1);
    }
}

TEST(NnCx, MatchesIdealCxOnRandomStates) {
    std::mt19937_64 rng(20261018);
    for (NnPattern pat : {NnPattern::ControlFirst, NnPattern::ViaFirst}) {
        auto seq = decompose_nn_cx(0, 1, 2, pat);
        for (int trial = 0; trial < 1000; trial++) {
            Tableau a = random_state(3, rng), b = a;
            for (const auto &in : seq) apply(a, in);
            b.cx(0, 2);
            ASSERT_EQ(a.canonical_stabilizers(), b.canonical_stabilizers()) << "trial " << trial;
        }
    }
}

TEST(NnCx, InverseCompositionIsIdentity) {
    std::mt19937_64 rng(5);
    auto seq = decompose_nn_cx(0, 1, 2);
    for (int trial = 0; trial < 100; trial++) {
        Tableau a = random_state(3, rng), b = a;
        for (const auto &in : seq) apply(a, in);
        for (auto it = seq.rbegin(); it != seq.rend(); ++it) apply(a, *it);
        EXPECT_EQ(a.canonical_stabilizers(), b.canonical_stabilizers());
    }
}

TEST(NnCx, RejectsUncoupledTriple) {
    Patch p = build_memory_patch(3);
    auto d = p.data_qubits();
    EXPECT_THROW(decompose_nn_cx(p, d[0], d[1], d[2]), std::invalid_argument);
}

TEST(Cancel, BackToBackCxVanishes) {
    Circuit c;
    c.num_qubits = 2;
    c.instructions = {{Op::CX, {0, 1}}, {Op::Tick}, {Op::CX, {0, 1}}};
    EXPECT_EQ(cancel_adjacent_gates(c).num_unitary_layers(), 0u);
}

TEST(Cancel, PlaquetteHasTenUnitaryLayers) {
    Circuit e = plaquette_expanded();
    Circuit c = cancel_adjacent_gates(e);
    EXPECT_EQ(c.num_unitary_layers(), 10u);
    EXPECT_GT(e.num_unitary_layers(), 10u);
    EXPECT_EQ(plaquette_circuit().layers().size(), 12u);
}

TEST(Cancel, PreservesRandomCliffordCircuits) {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> q(0, 3), g(0, 3);
    for (int trial = 0; trial < 200; trial++) {
        Circuit c;
        c.num_qubits = 4;
        for (int i = 0; i < 30; i++) {
            int a = q(rng), b = q(rng), k = g(rng);
            if (!c.instructions.empty()) c.instructions.push_back({Op::Tick});
            if (k == 0) c.instructions.push_back({Op::H, {a}});
            else if (k == 1) c.instructions.push_back({Op::S, {a}});
            else if (a != b) c.instructions.push_back({Op::CX, {a, b}});
            else c.instructions.push_back({Op::H, {a}});
        }
        Tableau s1(4), s2(4);
        s1.h(0);
        s1.cx(0, 2);
        s2 = s1;
        for (const auto &in : c.instructions) apply(s1, in);
        for (const auto &in : cancel_adjacent_gates(c).instructions) apply(s2, in);
        ASSERT_EQ(s1.canonical_stabilizers(), s2.canonical_stabilizers());
    }
}

TEST(Assemble, ZeroRoundMemoryIsDeterministic) {
    Patch p = build_memory_patch(3);
    Circuit c = assemble_experiment(p, Variant::Improved, false, Basis::Z, 0);
    auto ref = reference_run(c);
    for (auto nd : ref.nondeterministic) EXPECT_FALSE(nd);
}

TEST(Assemble, StabilityRounds) {
    Patch s = build_stability_patch();
    Circuit c = assemble_experiment(s, Variant::Improved, false, Basis::Z, 6);
    EXPECT_EQ(c.rounds, 6);
    EXPECT_TRUE(validate_circuit(c).empty());
    EXPECT_THROW(assemble_experiment(s, Variant::Improved, false, Basis::Z, 0), std::invalid_argument);
}

TEST(CircuitText, RoundTrip) {
    Patch p = build_memory_patch(3);
    for (Variant v : {Variant::Improved, Variant::Original}) {
        for (bool reset : {false, true}) {
            Circuit c = assemble_experiment(p, v, reset, Basis::X, 3);
            EXPECT_EQ(circuit_from_text(circuit_to_text(c)), c);
        }
    }
}

TEST(CircuitText, RejectsGarbage) { EXPECT_THROW(circuit_from_text("FROB 1 2\n"), std::exception); }

TEST(Validate, DoubleTargetInLayer) {
    Circuit c;
    c.num_qubits = 2;
    c.instructions = {{Op::H, {0}}, {Op::CX, {0, 1}}};
    EXPECT_FALSE(validate_circuit(c).empty());
}

}  // namespace
}  // namespace hhqec
