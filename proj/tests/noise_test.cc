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

#include "hhqec/noise.h"

namespace hhqec {
namespace {

TEST(FittedModel, TableValues) {
    NoiseModel m = default_fitted_model();
    EXPECT_DOUBLE_EQ(m.p_2q, 0.0041);
    EXPECT_DOUBLE_EQ(m.p_qmeas, 0.012);
    EXPECT_DOUBLE_EQ(m.p_idle, 0.012);
    EXPECT_DOUBLE_EQ(m.p_cmeas, 0.042);
    EXPECT_DOUBLE_EQ(m.p_reset, 0.075);
    EXPECT_TRUE(m.tie_qmeas_to_idle);
    EXPECT_TRUE(m.violations().empty());
}

TEST(Scale, CmeasTenth) {
    NoiseModel m = scale_parameter(default_fitted_model(), "p_cmeas", 0.1);
    EXPECT_NEAR(m.p_cmeas, 0.0042, 1e-15);
}

TEST(Scale, IdentityFactor) {
    EXPECT_EQ(scale_parameter(default_fitted_model(), "p_idle", 1), default_fitted_model());
}

TEST(Scale, TiedParametersMoveTogether) {
    NoiseModel m = scale_parameter(default_fitted_model(), "p_idle", 0.5);
    EXPECT_DOUBLE_EQ(m.p_idle, 0.006);
    EXPECT_DOUBLE_EQ(m.p_qmeas, 0.006);
    EXPECT_TRUE(m.violations().empty());
}

TEST(Scale, UnknownParameterThrows) {
    EXPECT_THROW(scale_parameter(default_fitted_model(), "p_bogus", 0.5), std::invalid_argument);
}

TEST(Violations, RangeAndTie) {
    NoiseModel m;
    m.p_2q = 0.8;
    EXPECT_FALSE(m.violations().empty());
    NoiseModel t;
    t.tie_qmeas_to_idle = true;
    t.p_qmeas = 0.01;
    t.p_idle = 0.02;
    EXPECT_FALSE(t.violations().empty());
}

TEST(NoiseJson, RoundTrip) {
    NoiseModel m = default_fitted_model();
    EXPECT_EQ(noise_from_json(noise_to_json(m)), m);
    auto j = noise_to_json(m);
    j["p_2q"] = 2.0;
    EXPECT_THROW(noise_from_json(j), std::invalid_argument);
}

TEST(Annotate, SingleCx) {
    Circuit c;
    c.num_qubits = 2;
    c.instructions = {{Op::CX, {0, 1}}};
    NoiseModel m;
    m.p_2q = 0.01;
    NoisyCircuit nc = annotate(c, m);
    int n2 = 0;
    for (const auto &ch : nc.channels) n2 += ch.kind == ChannelKind::Depolarize2;
    EXPECT_EQ(n2, 1);
}

TEST(Annotate, ImprovedRoundCounts) {
    Patch p = build_memory_patch(3);
    Circuit c = build_improved_cycle(p, false);
    // Independent tally from the instruction list.
    int g1 = 0, g2 = 0, meas = 0, idle = 0;
    for (const auto &l : c.layers()) {
        bool slow = false;
        for (const auto &in : l) slow |= in.op == Op::MeasureZ || in.op == Op::ResetZ;
        for (const auto &in : l) {
            if (in.op == Op::H || in.op == Op::S) g1 += (int)in.targets.size();
            if (in.op == Op::CX) g2++;
            if (in.op == Op::MeasureZ) meas += (int)in.targets.size();
            if (in.op == Op::Delay && slow) {
                for (int q : in.targets) idle += c.is_data(q);
            }
        }
    }
    NoisyCircuit nc = annotate(c, default_fitted_model());
    std::map<ChannelKind, int> n;
    for (const auto &ch : nc.channels) n[ch.kind] += ch.kind == ChannelKind::Depolarize2 ? 1 : (int)ch.targets.size();
    EXPECT_EQ(n[ChannelKind::Depolarize1], g1);
    EXPECT_EQ(n[ChannelKind::Depolarize2], g2);
    EXPECT_EQ(n[ChannelKind::XBeforeMeasure], meas);
    EXPECT_EQ(n[ChannelKind::RecordFlip], meas);
    EXPECT_EQ(n[ChannelKind::IdleDepolarize], idle);
    EXPECT_EQ(n[ChannelKind::XAfterReset], 0);
    EXPECT_EQ(idle, 9);
}

TEST(Annotate, ChannelsSortedByPosition) {
    Patch p = build_memory_patch(3);
    NoisyCircuit nc = annotate(assemble_experiment(p, Variant::Original, true, Basis::Z, 2), default_fitted_model());
    for (size_t i = 1; i < nc.channels.size(); i++) EXPECT_LE(nc.channels[i - 1].position, nc.channels[i].position);
}

}  // namespace
}  // namespace hhqec
