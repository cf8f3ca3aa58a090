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

#include "hhqec/experiments.h"

namespace hhqec {
namespace {

TEST(FitDecay, RecoversExactCurve) {
    std::vector<double> t, y, s;
    for (int i = 1; i <= 12; i++) {
        t.push_back(i);
        y.push_back(0.4 * std::pow(0.93, i) + 0.5);
        s.push_back(0.001);
    }
    DecayFit f = fit_decay(t, y, s, 0.5);
    ASSERT_TRUE(f.ok) << f.message;
    EXPECT_NEAR(f.p, 0.93, 1e-8);
    EXPECT_NEAR(f.A, 0.4, 1e-8);
}

TEST(FitDecay, RejectsBadInput) {
    EXPECT_THROW(fit_decay({1, 2}, {1}, {1, 1}, 0), std::invalid_argument);
    EXPECT_THROW(fit_decay({1, 2, 3}, {1, 1, 1}, {1, 0, 1}, 0), std::invalid_argument);
    EXPECT_FALSE(fit_decay({1}, {0.9}, {0.1}, 0.5).ok);
}

TEST(Memory, ZeroNoiseNeverFails) {
    MemoryResult r = run_memory(build_memory_patch(3), Variant::Improved, false, Basis::Z, {1, 2, 3, 4}, NoiseModel{},
                                2000, 1);
    for (const auto &p : r.points) EXPECT_EQ(p.failures, 0u);
    EXPECT_NEAR(r.fit.p, 1.0, 1e-6);
}

TEST(Memory, DeterministicAcrossWorkers) {
    Patch p = build_memory_patch(3);
    auto a = run_memory(p, Variant::Improved, false, Basis::X, {1, 3, 5}, default_fitted_model(), 3000, 21, 1);
    auto b = run_memory(p, Variant::Improved, false, Basis::X, {1, 3, 5}, default_fitted_model(), 3000, 21, 4);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (size_t i = 0; i < a.points.size(); i++) EXPECT_EQ(a.points[i].failures, b.points[i].failures);
}

TEST(Memory, FailuresGrowWithRounds) {
    auto r = run_memory(build_memory_patch(3), Variant::Improved, false, Basis::Z, {1, 6, 12}, default_fitted_model(),
                        5000, 2);
    EXPECT_LT(r.points[0].rate(), r.points[2].rate());
    EXPECT_GT(r.fit.p, 0);
    EXPECT_LT(r.fit.p, 1);
}

TEST(Memory, PerRoundErrorBelowReadoutFlip) {
    NoiseModel model = default_fitted_model();
    auto r = run_memory(build_memory_patch(3), Variant::Improved, false, Basis::Z, {1, 2, 4, 6, 8}, model, 10000, 12);
    ASSERT_TRUE(r.fit.ok);
    EXPECT_LT(1 - r.fidelity(), model.p_cmeas);
}

TEST(Stability, ZeroNoiseNeverFails) {
    StabilityResult r = run_stability(false, {1, 2, 3, 4, 5}, NoiseModel{}, 2000, 3);
    for (const auto &p : r.points) EXPECT_EQ(p.failures, 0u);
    EXPECT_EQ(r.excluded_t, (std::vector<int>{1, 2}));
}

TEST(Stability, FailureDecreasesWithRounds) {
    StabilityResult r = run_stability(false, {2, 4, 6, 8, 10}, default_fitted_model(), 5000, 4);
    EXPECT_GT(r.points.front().rate(), r.points.back().rate());
    EXPECT_LT(r.gamma(), 1);
}

TEST(Sweep, ResetParameterIsDeadWithoutReset) {
    SweepConfig cfg;
    cfg.memory_ts = {1, 2, 3};
    cfg.stability_ts = {3, 4, 5};
    cfg.shots = 2000;
    cfg.seed = 5;
    auto pts = run_sweep(default_fitted_model(), {"p_reset"}, {1, 0.1}, {false}, cfg);
    ASSERT_EQ(pts.size(), 4u);  // two factors, memory and stability
    for (const auto &a : pts) {
        for (const auto &b : pts) {
            if (a.experiment != b.experiment) continue;
            for (size_t i = 0; i < a.points.size(); i++) EXPECT_EQ(a.points[i].failures, b.points[i].failures);
        }
    }
}

TEST(TargetCurves, CsvRoundTrip) {
    std::vector<TargetCurve> c = {{"memory_z", {1, 2, 3}, {0.9, 0.8, 0.7}}, {"stability_nr", {3, 4}, {0.3, 0.25}}};
    auto path = (std::filesystem::temp_directory_path() / "hhqec_targets.csv").string();
    write_target_curves(c, path);
    auto r = read_target_curves(path);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].kind, "memory_z");
    EXPECT_EQ(r[0].ts, c[0].ts);
    EXPECT_EQ(r[1].values, c[1].values);
    std::remove(path.c_str());
}

TEST(NoiseFit, LossIsZeroOnIdenticalCurves) {
    std::vector<TargetCurve> c = {{"memory_z", {1, 2, 3}, {0.9, 0.8, 0.7}}};
    EXPECT_DOUBLE_EQ(curve_loss(c, c), 0);
}

TEST(NoiseFit, PerturbedParameterMoves) {
    // Targets from a model with p_cmeas doubled; only p_cmeas is free.
    NoiseModel base = default_fitted_model();
    NoiseModel planted = scale_parameter(base, "p_cmeas", 2);
    std::vector<int> ts = {2, 4, 6, 8};
    std::vector<TargetCurve> targets = {simulate_curve("stability_nr", ts, planted, 4000, 9)};
    NoiseFitConfig cfg;
    cfg.free = {"p_cmeas"};
    cfg.shots = 4000;
    cfg.seed = 9;
    cfg.max_iterations = 40;
    auto r = fit_noise_model(targets, base, cfg);
    EXPECT_GT(r.model.p_cmeas, base.p_cmeas * 1.3);
}

}  // namespace
}  // namespace hhqec
