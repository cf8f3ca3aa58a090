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
#include <set>

#include "hhqec/rb.h"

namespace hhqec {
namespace {

QubitDevice ideal_device() {
    QubitDevice d;
    d.t1_us = d.t2_us = 1e30;
    return d;
}

TEST(Clifford, GroupStructure) {
    EXPECT_TRUE(clifford_unitary(0).isApprox(Eigen::Matrix2cd::Identity()));
    std::set<int> all;
    for (int a = 0; a < kNumCliffords; a++) {
        EXPECT_EQ(clifford_compose(a, clifford_inverse(a)), 0);
        EXPECT_EQ(clifford_compose(clifford_inverse(a), a), 0);
        for (int b = 0; b < kNumCliffords; b++) {
            int c = clifford_compose(a, b);
            ASSERT_GE(c, 0);
            all.insert(c);
        }
        // The gate word reproduces the unitary.
        Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
        for (Op op : clifford_gates(a)) {
            Eigen::Matrix2cd g;
            if (op == Op::H) g << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
            else g << 1, 0, 0, std::complex<double>(0, 1);
            u = g * u;
        }
        EXPECT_EQ(clifford_index_of(u), a);
    }
    EXPECT_EQ((int)all.size(), kNumCliffords);
    EXPECT_GE(clifford_x(), 0);
    EXPECT_GE(clifford_z(), 0);
}

TEST(Simultaneous, EverySequenceInverts) {
    auto seqs = gen_simultaneous_rb({0, 1, 2}, {0, 1, 5, 20}, 10, 3);
    EXPECT_EQ(seqs.size(), 40u);
    for (const auto &s : seqs) EXPECT_TRUE(sequence_inverts(s));
}

TEST(Simultaneous, ZeroLengthSurvivesPerfectly) {
    auto seqs = gen_simultaneous_rb({0, 1}, {0}, 8, 1);
    auto rec = run_rb(seqs, uniform_device({0, 1}, ideal_device()), 500, 2);
    for (const auto &r : rec) EXPECT_EQ(r.survival, 1.0);
}

TEST(Simultaneous, TargetsBalanced) {
    auto seqs = gen_simultaneous_rb({0, 1, 2, 3}, {1, 2, 3, 4, 5}, 100, 11);
    int ones = 0, n = 0;
    for (const auto &s : seqs) {
        for (const auto &q : s.qubits) {
            ones += q.x;
            n++;
        }
    }
    double f = (double)ones / n, se = std::sqrt(0.25 / n);
    EXPECT_NEAR(f, 0.5, 3 * se);
}

TEST(Simultaneous, RejectsUnsortedLengths) {
    EXPECT_THROW(gen_simultaneous_rb({0}, {5, 1}, 2, 0), std::invalid_argument);
}

TEST(FitRb, ZeroNoise) {
    auto seqs = gen_simultaneous_rb({0}, {1, 4, 16, 32}, 5, 2);
    auto fits = fit_rb(run_rb(seqs, uniform_device({0}, ideal_device()), 1000, 3));
    ASSERT_EQ(fits.size(), 1u);
    EXPECT_NEAR(fits[0].fit.p, 1.0, 1e-6);
    EXPECT_NEAR(fits[0].fit.A, 0.5, 1e-6);
}

TEST(FitRb, NeedsThreeLengths) {
    auto seqs = gen_simultaneous_rb({0, 1}, {1, 4}, 5, 2);
    auto fits = fit_rb(run_rb(seqs, uniform_device({0, 1}, ideal_device()), 100, 3));
    ASSERT_EQ(fits.size(), 2u);
    EXPECT_FALSE(fits[0].fit.ok);
    EXPECT_FALSE(fits[1].fit.ok);
}

TEST(FitRb, PlantedDepolarizing) {
    QubitDevice d = ideal_device();
    d.gate_error = 0.005;
    auto seqs = gen_simultaneous_rb({0}, {1, 10, 25, 50, 80}, 30, 12);
    auto fits = fit_rb(run_rb(seqs, uniform_device({0}, d), 2000, 13));
    ASSERT_TRUE(fits[0].fit.ok);
    EXPECT_NEAR(fits[0].fit.p, 0.995, 4 * fits[0].fit.p_se);
}

TEST(Midcircuit, SequencesInvertForEveryVariant) {
    for (auto v : {MidVariant::ReturnToTarget, MidVariant::AlwaysZero, MidVariant::AlwaysOne, MidVariant::DelayOnly,
                   MidVariant::RandomizePreMeasure}) {
        auto seqs = gen_midcircuit_rb({0, 1}, {2}, {0, 1, 3, 7}, 6, v, 5);
        for (const auto &s : seqs) EXPECT_TRUE(sequence_inverts(s)) << mid_variant_name(v);
    }
}

TEST(Midcircuit, VariantNamesRoundTrip) {
    for (auto v : {MidVariant::ReturnToTarget, MidVariant::AlwaysZero, MidVariant::AlwaysOne, MidVariant::DelayOnly,
                   MidVariant::RandomizePreMeasure})
        EXPECT_EQ(mid_variant_from_name(mid_variant_name(v)), v);
    EXPECT_THROW(mid_variant_from_name("sometimes"), std::invalid_argument);
}

TEST(Midcircuit, OverlappingSetsRejected) {
    EXPECT_THROW(gen_midcircuit_rb({0, 1}, {1}, {1}, 1, MidVariant::ReturnToTarget, 0), std::invalid_argument);
}

TEST(Midcircuit, ZeroDurationReducesToPlainRb) {
    QubitDevice d;
    d.gate_error = 0.002;
    d.meas_ns = 0;
    DeviceParams dev = uniform_device({0, 1}, d);
    auto seqs = gen_midcircuit_rb({0}, {1}, {3, 6}, 4, MidVariant::ReturnToTarget, 8);
    for (const auto &s : seqs) {
        for (const auto &q : s.qubits) {
            // Same gates as one plain sequence: initial X, all segment Cliffords, closing Clifford.
            RbSequence plain;
            plain.m = s.m;
            QubitSequence pq = q;
            pq.measured = false;
            pq.segments = {{}};
            int net = 0;
            for (size_t r = 0; r < q.segments.size(); r++) {
                for (int c : q.segments[r]) {
                    pq.segments[0].push_back(c);
                    net = clifford_compose(net, c);
                }
            }
            pq.z_flags.clear();
            plain.qubits = {pq};
            double a = density_run(qubit_program(s, q, dev), d).back();
            double b = density_run(qubit_program(plain, pq, dev), d).back();
            EXPECT_NEAR(a, b, 1e-12);
        }
    }
}

TEST(Midcircuit, ParkedInOneDecaysFaster) {
    QubitDevice d;
    d.meas_ns = 2000;
    DeviceParams dev = uniform_device({0, 1}, d);
    std::vector<int> ms = {1, 4, 8, 16, 32};
    auto zero = fit_rb(run_rb(gen_midcircuit_rb({0}, {1}, ms, 20, MidVariant::AlwaysZero, 1), dev, 1000, 2));
    auto one = fit_rb(run_rb(gen_midcircuit_rb({0}, {1}, ms, 20, MidVariant::AlwaysOne, 1), dev, 1000, 2));
    EXPECT_LT(one[0].fit.p_hi(), zero[0].fit.p_lo());
}

TEST(Midcircuit, RandomizedSpectatorShowsTwirledDamping) {
    QubitDevice d;
    d.t1_us = 30;  // a low-T1 spectator makes the damping dominant
    d.t2_us = 40;
    d.meas_ns = 2000;
    DeviceParams dev = uniform_device({0, 1}, d);
    auto seqs = gen_midcircuit_rb({0}, {1}, {1, 2, 4, 8, 12}, 30, MidVariant::RandomizePreMeasure, 3);
    auto fits = fit_rb(run_rb(seqs, dev, 2000, 4));
    double cycle = std::pow(twirled_damping(dev.clifford_ns, d), 4) * twirled_damping(2000, d);
    EXPECT_NEAR(fits[1].fit.p, cycle, 4 * fits[1].fit.p_se + 1e-3);
}

TEST(Device, Violations) {
    QubitDevice d;
    d.t2_us = 3 * d.t1_us;
    EXPECT_FALSE(uniform_device({0}, d).violations().empty());
    QubitDevice e;
    e.p_read0_given1 = 1.5;
    EXPECT_FALSE(uniform_device({0}, e).violations().empty());
    EXPECT_TRUE(uniform_device({0}, QubitDevice{}).violations().empty());
    EXPECT_THROW(run_rb(gen_simultaneous_rb({0}, {1}, 1, 0), uniform_device({0}, d), 10, 0), std::invalid_argument);
}

TEST(Device, JsonRoundTrip) {
    QubitDevice d;
    d.gate_error = 1e-3;
    d.p_read1_given0 = 0.01;
    DeviceParams dev = uniform_device({3, 5}, d, 50);
    EXPECT_EQ(device_to_json(device_from_json(device_to_json(dev))), device_to_json(dev));
}

TEST(RunRb, WorkerIndependentAndCsvRoundTrip) {
    QubitDevice d;
    d.gate_error = 0.003;
    auto seqs = gen_simultaneous_rb({0, 1}, {1, 5, 9}, 4, 6);
    auto a = run_rb(seqs, uniform_device({0, 1}, d), 300, 7, 1);
    auto b = run_rb(seqs, uniform_device({0, 1}, d), 300, 7, 4);
    EXPECT_EQ(a, b);
    auto path = (std::filesystem::temp_directory_path() / "hhqec_survival.csv").string();
    write_survival_csv(a, path);
    EXPECT_EQ(read_survival_csv(path), a);
    std::remove(path.c_str());
}

TEST(Temporal, StationaryRunsRaiseNoFlags) {
    QubitDevice d;
    d.gate_error = 0.002;
    d.p_read1_given0 = 0.02;
    d.p_read0_given1 = 0.04;
    DeviceParams dev = uniform_device({0, 1, 2}, d);
    auto seqs = gen_temporal_consistency(42, {0, 1, 2}, 20, 15);
    auto rep = compare_runs(run_rb(seqs, dev, 5000, 1), run_rb(seqs, dev, 5000, 2));
    EXPECT_TRUE(rep.flags.empty());
    EXPECT_GE(rep.threshold_z, 3.0);
}

TEST(Temporal, DoubledAssignmentErrorIsFlagged) {
    QubitDevice d;
    d.gate_error = 0.002;
    d.p_read1_given0 = 0.03;
    d.p_read0_given1 = 0.05;
    DeviceParams dev = uniform_device({0, 1, 2}, d);
    DeviceParams drift = dev;
    drift.qubits[1].p_read1_given0 *= 2;
    drift.qubits[1].p_read0_given1 *= 2;
    auto seqs = gen_temporal_consistency(42, {0, 1, 2}, 20, 15);
    auto rep = compare_runs(run_rb(seqs, dev, 20000, 1), run_rb(seqs, drift, 20000, 2));
    EXPECT_TRUE(rep.flagged(1));
    EXPECT_FALSE(rep.flagged(0));
    EXPECT_FALSE(rep.flagged(2));
}

TEST(Temporal, MismatchedRunsRejected) {
    auto a = run_rb(gen_temporal_consistency(1, {0}, 2, 3), uniform_device({0}, QubitDevice{}), 10, 0);
    auto b = a;
    b.pop_back();
    EXPECT_THROW(compare_runs(a, b), std::invalid_argument);
}

Circuit independent_block(int n) {
    Circuit c;
    c.num_qubits = n;
    std::vector<int> all(n);
    for (int q = 0; q < n; q++) all[q] = q;
    c.instructions = {{Op::H, all}, {Op::Tick}, {Op::S, all}};
    return c;
}

TEST(Mirror, NoiselessOutcomeIsDeterministic) {
    Patch p = build_memory_patch(3);
    Circuit blk = syndrome_block(p);
    const int n = blk.num_qubits;
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 5; trial++) {
        std::vector<int> cl(n);
        std::vector<uint8_t> px(n), pz(n);
        for (int q = 0; q < n; q++) {
            cl[q] = (int)(rng() % kNumCliffords);
            px[q] = rng() & 1;
            pz[q] = rng() & 1;
        }
        Circuit c = mirrored_circuit(blk, 2, cl, px, pz);
        EXPECT_TRUE(validate_circuit(c).empty());
        auto ref = reference_run(c);
        for (auto nd : ref.nondeterministic) EXPECT_FALSE(nd);
    }
}

TEST(Mirror, RejectsNonUnitaryBlock) {
    Circuit c;
    c.num_qubits = 1;
    Instruction m{Op::MeasureZ, {0}};
    c.instructions = {m};
    EXPECT_THROW(mirrored_circuit(c, 1, {0}, {0}, {0}), std::invalid_argument);
}

TEST(Correlation, IndependentNoiseHasNoEdges) {
    NoiseModel m;
    m.p_1q = 0.004;
    CorrelationConfig cfg;
    cfg.seed = 79;
    cfg.k = 10;
    cfg.shots = 4000;
    auto r = correlation_analysis(independent_block(5), m, cfg);
    for (int a = 0; a < 5; a++) {
        EXPECT_DOUBLE_EQ(r.correlation[a][a], 1.0);
        EXPECT_LT(r.marginal_fidelity[a], 1.0);
        for (int b = 0; b < 5; b++) {
            if (a != b) EXPECT_LT(std::abs(r.correlation[a][b]), 0.03);
        }
    }
    EXPECT_TRUE(r.edges.empty());
}

TEST(Correlation, PlantedCrosstalkGivesOneEdge) {
    NoiseModel m;
    m.p_1q = 0.004;
    CorrelationConfig cfg;
    cfg.seed = 78;
    cfg.k = 10;
    cfg.shots = 4000;
    cfg.crosstalk = {{1, 3, 0.03}};
    auto r = correlation_analysis(independent_block(5), m, cfg);
    ASSERT_EQ(r.edges.size(), 1u);
    EXPECT_EQ(r.edges[0].a, 1);
    EXPECT_EQ(r.edges[0].b, 3);
    EXPECT_GT(r.correlation[1][3], 0.1);
}

TEST(Correlation, SyndromeBlockCorrelatesCoupledQubits) {
    Patch p = build_memory_patch(3);
    NoiseModel m;
    m.p_2q = 0.01;
    CorrelationConfig cfg;
    cfg.seed = 5;
    cfg.k = 10;
    cfg.shots = 3000;
    auto r = correlation_analysis(syndrome_block(p), m, cfg);
    EXPECT_FALSE(r.edges.empty());
    for (int a = 0; a < r.num_qubits; a++) EXPECT_DOUBLE_EQ(r.correlation[a][a], 1.0);
}

}  // namespace
}  // namespace hhqec
