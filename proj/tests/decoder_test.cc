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
#include <limits>
#include <random>

#include "hhqec/blossom.h"
#include "hhqec/decoder.h"

namespace hhqec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DemEdge edge(int u, int v, double p, uint64_t obs = 0) { return {u, v, p, std::log((1 - p) / p), obs}; }

DemGraph random_graph(int n, std::mt19937_64 &rng) {
    DemGraph g;
    g.num_detectors = n;
    g.num_observables = 1;
    g.detector_type.assign(n, 'Z');
    g.detector_round.assign(n, 0);
    std::uniform_real_distribution<double> p(0.001, 0.4);
    std::bernoulli_distribution keep(0.12), to_boundary(0.2), flips(0.3);
    for (int u = 0; u < n; u++) {
        for (int v = u + 1; v < n; v++) {
            if (keep(rng)) g.edges.push_back(edge(u, v, p(rng), flips(rng)));
        }
        // A boundary edge per node keeps every event matchable.
        if (to_boundary(rng) || u == 0) g.edges.push_back(edge(u, g.boundary(), p(rng), flips(rng)));
    }
    for (int u = 1; u < n; u++) g.edges.push_back(edge(u - 1, u, p(rng)));
    return g;
}

// Bellman-Ford over detectors only; the boundary is a sink.
std::vector<std::vector<double>> bellman_ford(const DemGraph &g) {
    int n = g.num_detectors;
    std::vector<std::vector<double>> d(n, std::vector<double>(n + 1, kInf));
    for (int s = 0; s < n; s++) {
        d[s][s] = 0;
        for (int it = 0; it < n + 1; it++) {
            for (const auto &e : g.edges) {
                if (e.v == g.boundary()) {
                    d[s][n] = std::min(d[s][n], d[s][e.u] + e.w);
                    continue;
                }
                d[s][e.v] = std::min(d[s][e.v], d[s][e.u] + e.w);
                d[s][e.u] = std::min(d[s][e.u], d[s][e.v] + e.w);
            }
        }
    }
    return d;
}

TEST(Paths, SingleEdgeDistance) {
    DemGraph g;
    g.num_detectors = 2;
    g.num_observables = 1;
    g.edges = {edge(0, 1, 0.1, 1), edge(0, 2, 0.01), edge(1, 2, 0.01)};
    auto m = all_pairs_paths(g, {0, 1});
    EXPECT_NEAR(m.d(0, 1), std::log(9.0), 1e-12);
    EXPECT_EQ(m.o(0, 1), 1u);
    EXPECT_NEAR(m.boundary[0], std::log(99.0), 1e-12);
}

TEST(Paths, MatchBellmanFordOnRandomGraphs) {
    std::mt19937_64 rng(30);
    for (int trial = 0; trial < 20; trial++) {
        DemGraph g = random_graph(30, rng);
        auto oracle = bellman_ford(g);
        std::vector<int> ev(30);
        for (int i = 0; i < 30; i++) ev[i] = i;
        auto m = all_pairs_paths(g, ev);
        for (int i = 0; i < 30; i++) {
            for (int j = 0; j < 30; j++) ASSERT_NEAR(m.d(i, j), oracle[i][j], 1e-9);
            ASSERT_NEAR(m.boundary[i], oracle[i][30], 1e-9);
        }
    }
}

EventMetric random_metric(int k, std::mt19937_64 &rng) {
    EventMetric m;
    std::uniform_real_distribution<double> u(0, 10);
    m.events.resize(k);
    m.dist.assign(k * k, 0);
    m.obs.assign(k * k, 0);
    m.boundary.resize(k);
    m.boundary_obs.resize(k);
    for (int i = 0; i < k; i++) {
        m.events[i] = i;
        m.boundary[i] = u(rng);
        m.boundary_obs[i] = i & 1;
        for (int j = i + 1; j < k; j++) {
            m.dist[i * k + j] = m.dist[j * k + i] = u(rng);
            m.obs[i * k + j] = m.obs[j * k + i] = (i + j) & 1;
        }
    }
    return m;
}

TEST(Match, EmptyIsEmpty) {
    EventMetric m;
    auto r = match(m);
    EXPECT_TRUE(r.pairs.empty());
    EXPECT_EQ(r.weight, 0);
    EXPECT_EQ(r.observables, 0u);
}

TEST(Match, TwoEventsPickCheaperOption) {
    EventMetric m;
    m.events = {3, 7};
    m.dist = {0, 5, 5, 0};
    m.obs = {0, 1, 1, 0};
    m.boundary = {1, 2};
    m.boundary_obs = {0, 0};
    auto r = match(m);
    EXPECT_NEAR(r.weight, 3, 1e-9);
    EXPECT_EQ(r.observables, 0u);
    m.dist = {0, 2.5, 2.5, 0};
    r = match(m);
    EXPECT_NEAR(r.weight, 2.5, 1e-9);
    EXPECT_EQ(r.observables, 1u);
}

TEST(Match, EqualsBruteForceOnRandomInstances) {
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 300; trial++) {
        int k = (int)(rng() % 17);
        auto m = random_metric(k, rng);
        auto exact = brute_force_match(m);
        ASSERT_NEAR(match(m).weight, exact.weight, 1e-5) << "k=" << k;
        ASSERT_NEAR(match_clustered(m).weight, exact.weight, 1e-5) << "k=" << k;
    }
}

TEST(Match, EveryEventMatchedOnce) {
    std::mt19937_64 rng(4);
    auto m = random_metric(12, rng);
    auto r = match(m);
    std::vector<int> seen(12, 0);
    for (auto [a, b] : r.pairs) {
        seen[a]++;
        if (b != Matching::kBoundary) seen[b]++;
    }
    for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(Blossom, SmallKnownMatching) {
    // Path 0-1-2-3 with heavy middle edge: max weight takes the middle, max cardinality takes the ends.
    std::vector<std::tuple<int, int, int64_t>> e = {{0, 1, 5}, {1, 2, 11}, {2, 3, 5}};
    auto w = max_weight_matching(e, false);
    EXPECT_EQ(w[1], 2);
    EXPECT_EQ(w[0], -1);
    auto c = max_weight_matching(e, true);
    EXPECT_EQ(c[0], 1);
    EXPECT_EQ(c[2], 3);
}

TEST(DecodeBatch, ZeroInZeroOut) {
    DemGraph g;
    g.num_detectors = 2;
    g.num_observables = 1;
    g.edges = {edge(0, 1, 0.1, 1), edge(0, 2, 0.01), edge(1, 2, 0.01)};
    FrameBatch det(3, 200);
    FrameBatch pred = decode_batch(g, det);
    EXPECT_EQ(pred.num_rows, 1u);
    EXPECT_EQ(pred.fraction(0), 0.0);
}

TEST(DecodeBatch, SingleMeasurementFaultIsCorrected) {
    Patch p = build_memory_patch(3);
    Circuit c = assemble_experiment(p, Variant::Improved, false, Basis::Z, 3);
    auto ds = define_detectors(c, p, DetectorConvention::for_circuit(c));
    NoisyCircuit nc = annotate(c, default_fitted_model());
    DemGraph g = compile(nc, ds);
    const size_t nrec = c.num_records();
    FrameBatch flips(nrec, nrec);
    for (size_t r = 0; r < nrec; r++) flips.flip(r, r);  // shot r flips record r
    FrameBatch det = extract_detectors(flips, ds);
    FrameBatch pred = decode_batch(g, det);
    auto s = summarize(pred, det, g.num_detectors);
    EXPECT_EQ(s.failures, 0u);
    EXPECT_EQ(s.shots, nrec);
}

TEST(DecodeBatch, WorkerCountDoesNotChangeOutput) {
    Patch p = build_memory_patch(3);
    Circuit c = assemble_experiment(p, Variant::Improved, false, Basis::X, 4);
    auto ds = define_detectors(c, p, DetectorConvention::for_circuit(c));
    NoisyCircuit nc = annotate(c, default_fitted_model());
    DemGraph g = compile(nc, ds);
    FrameBatch det = extract_detectors(sample(nc, 5000, 2), ds);
    EXPECT_EQ(decode_batch(g, det, 1), decode_batch(g, det, 4));
}

}  // namespace
}  // namespace hhqec
