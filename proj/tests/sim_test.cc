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

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "hhqec/dem.h"
#include "hhqec/sim.h"

namespace hhqec {
namespace {

Circuit single_measure() {
    Circuit c;
    c.num_qubits = 1;
    Instruction m{Op::MeasureZ, {0}};
    m.round = 0;
    c.instructions = {m};
    return c;
}

TEST(Tableau, BellPairMeasuresEqual) {
    for (int coin : {0, 1}) {
        Tableau t(2);
        t.h(0);
        t.cx(0, 1);
        bool det = true;
        int a = t.measure(0, coin, &det);
        EXPECT_FALSE(det);
        EXPECT_EQ(a, coin);
        int b = t.measure(1, 0, &det);
        EXPECT_TRUE(det);
        EXPECT_EQ(a, b);
    }
}

TEST(Tableau, ZeroStateMeasuresZero) {
    Tableau t(3);
    bool det = false;
    EXPECT_EQ(t.measure(1, 1, &det), 0);
    EXPECT_TRUE(det);
    t.x(1);
    EXPECT_EQ(t.measure(1, 0, &det), 1);
}

TEST(Tableau, CanonicalFormIgnoresGeneratorChoice) {
    Tableau a(2), b(2);
    a.h(0);
    a.cx(0, 1);
    b.h(1);
    b.cx(1, 0);
    EXPECT_EQ(a.canonical_stabilizers(), b.canonical_stabilizers());
    Tableau c(2);
    c.h(0);
    EXPECT_NE(a.canonical_stabilizers(), c.canonical_stabilizers());
}

TEST(Reference, PrepareMeasureIsZero) {
    auto r = reference_run(single_measure());
    ASSERT_EQ(r.bits.size(), 1u);
    EXPECT_EQ(r.bits[0], 0);
    EXPECT_FALSE(r.nondeterministic[0]);
}

TEST(Reference, StabilityFirstRoundXChecksRandom) {
    Patch s = build_stability_patch();
    Circuit c = assemble_experiment(s, Variant::Improved, false, Basis::Z, 3);
    auto r = reference_run(c);
    auto recs = c.records();
    int random_first = 0, x_first = 0;
    for (size_t i = 0; i < recs.size(); i++) {
        int ci = s.check_of_measure_qubit(recs[i].qubit);
        if (recs[i].round == 0 && ci >= 0 && s.checks[ci].basis == Basis::X) {
            x_first++;
            if (r.nondeterministic[i]) {
                EXPECT_EQ(r.bits[i], 0);  // resolved to +1
                random_first++;
            }
        }
    }
    // The X checks multiply to the identity, so the last one is fixed by the others.
    EXPECT_EQ(random_first, x_first - 1);
    auto ds = define_detectors(c, s, DetectorConvention::for_circuit(c));
    for (const auto &d : ds.detectors) {
        if (d.type == 'X') EXPECT_GE(d.round, 1);
    }
}

TEST(Sample, ZeroNoiseGivesNoFlips) {
    Patch p = build_memory_patch(3);
    Circuit c = assemble_experiment(p, Variant::Improved, false, Basis::Z, 3);
    FrameBatch b = sample(annotate(c, NoiseModel{}), 1000, 1);
    // Raw records may be random (no resets); detector parities never are.
    auto ds = define_detectors(c, p, DetectorConvention::for_circuit(c));
    FrameBatch det = extract_detectors(b, ds);
    for (size_t r = 0; r < det.num_rows; r++) EXPECT_EQ(det.fraction(r), 0.0) << "detector row " << r;
}

TEST(Sample, XErrorBeforeMeasureRate) {
    NoiseModel m;
    m.p_qmeas = 0.3;
    FrameBatch b = sample(annotate(single_measure(), m), 1000000, 17);
    EXPECT_NEAR(b.fraction(0), 0.3, 0.002);
}

TEST(Sample, ParallelMatchesSerial) {
    Patch p = build_memory_patch(3);
    NoisyCircuit nc = annotate(assemble_experiment(p, Variant::Improved, false, Basis::X, 4), default_fitted_model());
    FrameBatch s = sample_serial(nc, 3000, 99);
    EXPECT_EQ(sample(nc, 3000, 99, 1), s);
    EXPECT_EQ(sample(nc, 3000, 99, 4), s);
    EXPECT_NE(sample(nc, 3000, 100, 4), s);
}

TEST(Sample, AgreesWithTableauPerDetector) {
    Patch p = build_memory_patch(3);
    Circuit c = assemble_experiment(p, Variant::Improved, false, Basis::Z, 2);
    NoisyCircuit nc = annotate(c, default_fitted_model());
    auto ds = define_detectors(c, p, DetectorConvention::for_circuit(c));
    const size_t shots = 20000;
    FrameBatch a = extract_detectors(sample(nc, shots, 3), ds);
    FrameBatch b = extract_detectors(sample_tableau(nc, shots, 4), ds);
    for (size_t r = 0; r < a.num_rows; r++) {
        double fa = a.fraction(r), fb = b.fraction(r);
        double pool = (fa + fb) / 2;
        double sd = std::sqrt(2 * pool * (1 - pool) / shots);
        EXPECT_LE(std::abs(fa - fb), 4 * sd + 1e-12) << "row " << r;
    }
}

TEST(InjectFault, MeasurementFlipOnlyTouchesItsRecord) {
    Circuit c = single_measure();
    auto f = inject_fault(c, 0, {}, 0);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0], 1);
    auto g = inject_fault(c, 0, {{0, 'Z'}});
    EXPECT_EQ(g[0], 0);
    auto h = inject_fault(c, 0, {{0, 'Y'}});
    EXPECT_EQ(h[0], 1);
}

TEST(BatchIo, BinaryRoundTrip) {
    FrameBatch b(3, 130);
    b.flip(0, 0);
    b.flip(1, 64);
    b.flip(2, 129);
    auto path = (std::filesystem::temp_directory_path() / "hhqec_batch_test.hhqf").string();
    write_batch_binary(b, path);
    EXPECT_EQ(read_batch_binary(path), b);
    std::remove(path.c_str());
}

TEST(BatchIo, RejectsBadMagic) {
    auto path = (std::filesystem::temp_directory_path() / "hhqec_batch_bad.hhqf").string();
    {
        std::FILE *f = std::fopen(path.c_str(), "wb");
        std::fputs("NOPE", f);
        std::fclose(f);
    }
    EXPECT_THROW(read_batch_binary(path), std::runtime_error);
    std::remove(path.c_str());
}

// ---- density model ----

QubitOp gate(const Eigen::Matrix2cd &u, double ns = 0) {
    QubitOp op;
    op.kind = QubitOp::Gate;
    op.u = u;
    op.ns = ns;
    return op;
}

QubitOp delay(double ns) {
    QubitOp op;
    op.kind = QubitOp::Delay;
    op.ns = ns;
    return op;
}

QubitOp measure() {
    QubitOp op;
    op.kind = QubitOp::Measure;
    return op;
}

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    return x;
}

TEST(Density, HalfLifeAtT1Ln2) {
    QubitDevice d;
    double ns = d.t1_us * std::log(2.0) * 1e3;
    auto r = density_run({gate(pauli_x()), delay(ns), measure()}, d);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0], 0.5, 1e-12);
}

TEST(Density, GroundStateIsStable) {
    QubitDevice d;
    auto r = density_run({delay(1e6), measure()}, d);
    EXPECT_NEAR(r[0], 0.0, 1e-15);
}

TEST(Density, CoherenceDecaysAtT2) {
    QubitDevice d;
    d.t1_us = d.t2_us = 100;
    Density rho = Density::Zero();
    rho(0, 0) = rho(0, 1) = rho(1, 0) = rho(1, 1) = 0.5;
    Density out = relax(rho, 50e3, d);
    EXPECT_NEAR(out(0, 1).real(), 0.5 * std::exp(-0.5), 1e-12);
    EXPECT_NEAR(out(1, 1).real(), 0.5 * std::exp(-0.5), 1e-12);
}

TEST(Density, AssignmentError) {
    QubitDevice d;
    d.p_read1_given0 = 0.02;
    d.p_read0_given1 = 0.07;
    EXPECT_NEAR(density_run({measure()}, d)[0], 0.02, 1e-15);
    EXPECT_NEAR(density_run({gate(pauli_x()), measure()}, d)[0], 0.93, 1e-12);
}

TEST(Density, RejectsUnphysicalT2) {
    QubitDevice d;
    d.t1_us = 50;
    d.t2_us = 120;
    EXPECT_THROW(density_run({measure()}, d), std::invalid_argument);
}

TEST(Density, DepolarizingGate) {
    QubitDevice d;
    d.t1_us = d.t2_us = 1e30;
    d.gate_error = 0.1;
    // X with depolarizing 0.1: P(1) = 0.9 + 0.05.
    EXPECT_NEAR(density_run({gate(pauli_x()), measure()}, d)[0], 0.95, 1e-12);
}

}  // namespace
}  // namespace hhqec
