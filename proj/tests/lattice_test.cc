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

#include <algorithm>
#include <map>

#include "hhqec/lattice.h"

namespace hhqec {
namespace {

int count_stabilizers(const Patch &p, Basis b) {
    return (int)std::count_if(p.stabilizers.begin(), p.stabilizers.end(),
                              [&](const Stabilizer &s) { return s.basis == b; });
}

TEST(MemoryPatch, Distance3Counts) {
    Patch p = build_memory_patch(3);
    EXPECT_EQ(p.data_qubits().size(), 9u);
    EXPECT_EQ(count_stabilizers(p, Basis::Z), 2);
    EXPECT_EQ(count_stabilizers(p, Basis::X), 4);
    EXPECT_TRUE(validate_patch(p).empty());
}

TEST(MemoryPatch, LogicalsAnticommute) {
    for (int d : {3, 5, 7}) {
        Patch p = build_memory_patch(d);
        auto *lx = p.observable(ObsKind::LogicalX);
        auto *lz = p.observable(ObsKind::LogicalZ);
        ASSERT_NE(lx, nullptr);
        ASSERT_NE(lz, nullptr);
        EXPECT_TRUE(anticommute(lx->support, lz->support)) << "d=" << d;
        for (const auto &c : p.checks) {
            const auto &other = c.basis == Basis::X ? lz->support : lx->support;
            EXPECT_FALSE(anticommute(c.support, other));
        }
    }
}

TEST(MemoryPatch, Distance5Exhaustive) {
    Patch p = build_memory_patch(5);
    EXPECT_TRUE(validate_patch(p).empty());
    EXPECT_EQ(p.data_qubits().size(), 25u);
    // Every stabilizer commutes with every check of the opposite type.
    for (const auto &s : p.stabilizers) {
        auto sup = product_support(p, s.checks);
        for (const auto &c : p.checks) {
            if (c.basis != s.basis) EXPECT_FALSE(anticommute(sup, c.support));
        }
    }
}

TEST(MemoryPatch, HeavyHexDegree) {
    Patch p = build_memory_patch(5);
    std::map<int, int> degree;
    for (auto [a, b] : p.couplings) {
        degree[a]++;
        degree[b]++;
        bool da = p.qubits[a].role == Role::Data, db = p.qubits[b].role == Role::Data;
        EXPECT_FALSE(da && db) << "data-data coupling " << a << "-" << b;
    }
    for (auto [q, deg] : degree) EXPECT_LE(deg, 3) << "qubit " << q;
}

TEST(MemoryPatch, RejectsEvenOrSmallDistance) {
    EXPECT_THROW(build_memory_patch(4), std::invalid_argument);
    EXPECT_THROW(build_memory_patch(1), std::invalid_argument);
    EXPECT_THROW(build_memory_patch(-3), std::invalid_argument);
}

TEST(StabilityPatch, FourXStabilizersDoubleCover) {
    Patch p = build_stability_patch();
    EXPECT_EQ(count_stabilizers(p, Basis::X), 4);
    EXPECT_TRUE(validate_patch(p).empty());
    std::map<int, int> cover;
    std::vector<int> xchecks;
    for (size_t i = 0; i < p.checks.size(); i++) {
        if (p.checks[i].basis != Basis::X) continue;
        xchecks.push_back((int)i);
        for (int q : p.checks[i].support) cover[q]++;
    }
    for (int q : p.data_qubits()) EXPECT_EQ(cover[q], 2) << "data qubit " << q;
    EXPECT_TRUE(product_support(p, xchecks).empty());
    auto *c = p.observable(ObsKind::CheckProductConstraint);
    ASSERT_NE(c, nullptr);
    EXPECT_TRUE(product_support(p, c->support).empty());
}

TEST(ValidatePatch, DeletedCheckIsReported) {
    Patch p = build_memory_patch(3);
    auto it = std::find_if(p.stabilizers.begin(), p.stabilizers.end(),
                           [](const Stabilizer &s) { return s.basis == Basis::Z && s.checks.size() == 2; });
    ASSERT_NE(it, p.stabilizers.end());
    it->checks.pop_back();
    EXPECT_FALSE(validate_patch(p).empty());
}

TEST(ValidatePatch, TruncatedLogicalIsReported) {
    Patch p = build_memory_patch(3);
    for (auto &o : p.observables) {
        if (o.kind == ObsKind::LogicalZ) o.support.pop_back();
    }
    auto v = validate_patch(p);
    EXPECT_FALSE(v.empty());
}

TEST(PatchJson, RoundTrip) {
    for (const Patch &p : {build_memory_patch(3), build_memory_patch(5), build_stability_patch()}) {
        Patch q = patch_from_json(patch_to_json(p));
        EXPECT_EQ(patch_to_json(q), patch_to_json(p));
        EXPECT_TRUE(validate_patch(q).empty());
    }
}

}  // namespace
}  // namespace hhqec
