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

#include "hhqec/decoder.h"

#include <cmath>
#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

#include <omp.h>

#include "hhqec/blossom.h"

namespace hhqec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Costs are quantized to integers for the matcher.
constexpr double kScale = 1e6;
constexpr size_t kSmallEvents = 8;

struct Adj {
    std::vector<std::vector<std::tuple<int, double, uint64_t>>> out;
};

Adj adjacency(const DemGraph &g) {
    Adj a;
    a.out.resize(g.num_nodes());
    for (const auto &e : g.edges) {
        if (e.u < 0 || e.u >= g.num_nodes() || e.v < 0 || e.v >= g.num_nodes()) throw std::invalid_argument("edge node out of range");
        a.out[e.u].emplace_back(e.v, e.w, e.observables);
        a.out[e.v].emplace_back(e.u, e.w, e.observables);
    }
    return a;
}

// Single-source shortest paths; the boundary node is a sink.
void dijkstra(const Adj &a, int src, int boundary, double *dist, uint64_t *obs) {
    const int n = (int)a.out.size();
    std::fill(dist, dist + n, kInf);
    std::fill(obs, obs + n, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        if (u == boundary && u != src) continue;
        for (auto &[v, w, o] : a.out[u]) {
            double nd = d + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                obs[v] = obs[u] ^ o;
                pq.push({nd, v});
            }
        }
    }
}

void check_reachable(const EventMetric &m) {
    const size_t k = m.size();
    for (size_t i = 0; i < k; i++) {
        bool ok = std::isfinite(m.boundary[i]);
        for (size_t j = 0; j < k && !ok; j++) ok = j != i && std::isfinite(m.d(i, j));
        if (!ok) throw std::runtime_error("detection event " + std::to_string(m.events[i]) + " is unreachable");
    }
}

}  // namespace

EventMetric all_pairs_paths(const DemGraph &g, const std::vector<int> &events) {
    Adj a = adjacency(g);
    const size_t k = events.size(), n = g.num_nodes();
    EventMetric m;
    m.events = events;
    m.dist.resize(k * k);
    m.obs.resize(k * k);
    m.boundary.resize(k);
    m.boundary_obs.resize(k);
    std::vector<double> dist(n);
    std::vector<uint64_t> obs(n);
    for (size_t i = 0; i < k; i++) {
        if (events[i] < 0 || events[i] >= g.num_detectors) throw std::invalid_argument("event is not a detector");
        dijkstra(a, events[i], g.boundary(), dist.data(), obs.data());
        for (size_t j = 0; j < k; j++) {
            m.dist[i * k + j] = dist[events[j]];
            m.obs[i * k + j] = obs[events[j]];
        }
        m.boundary[i] = dist[g.boundary()];
        m.boundary_obs[i] = obs[g.boundary()];
    }
    check_reachable(m);
    return m;
}

Matching match(const EventMetric &m) {
    Matching out;
    const int k = (int)m.size();
    if (k == 0) return out;
    // Vertices 0..k-1 are events, k..2k-1 their boundary copies. Copies pair with each other at
    // zero cost. Maximising (big - cost) over maximum-cardinality matchings minimises cost.
    std::vector<std::tuple<int, int, int64_t>> costs;
    int64_t big = 1;
    auto q = [](double c) { return (int64_t)std::llround(c * kScale); };
    for (int i = 0; i < k; i++) {
        for (int j = i + 1; j < k; j++) {
            // A pair no cheaper than both boundary paths can always be swapped for them.
            if (std::isfinite(m.d(i, j)) && !(m.d(i, j) >= m.boundary[i] + m.boundary[j])) {
                costs.emplace_back(i, j, q(m.d(i, j)));
            }
        }
        if (std::isfinite(m.boundary[i])) costs.emplace_back(i, k + i, q(m.boundary[i]));
        for (int j = i + 1; j < k; j++) costs.emplace_back(k + i, k + j, 0);
    }
    for (auto &[i, j, c] : costs) big = std::max(big, c + 1);
    std::vector<std::tuple<int, int, int64_t>> edges;
    edges.reserve(costs.size());
    for (auto &[i, j, c] : costs) edges.emplace_back(i, j, big - c);
    auto mate = max_weight_matching(edges, true);
    mate.resize(2 * k, -1);
    for (int i = 0; i < k; i++) {
        int j = mate[i];
        if (j < 0) throw std::logic_error("matching left an event unmatched");
        if (j >= k) {
            out.pairs.emplace_back(i, Matching::kBoundary);
            out.weight += m.boundary[i];
            out.observables ^= m.boundary_obs[i];
        } else if (i < j) {
            out.pairs.emplace_back(i, j);
            out.weight += m.d(i, j);
            out.observables ^= m.o(i, j);
        }
    }
    return out;
}

Matching brute_force_match(const EventMetric &m) {
    const int k = (int)m.size();
    if (k > 20) throw std::invalid_argument("brute force supports at most 20 events");
    const uint32_t full = (1u << k) - 1;
    std::vector<double> best(full + 1, kInf);
    std::vector<int> choice(full + 1, -2);
    best[0] = 0;
    // best[mask]: optimum over the events in mask. The lowest event pairs with the boundary
    // (choice -1) or with a higher event; the first optimum in that order wins ties.
    for (uint32_t mask = 1; mask <= full; mask++) {
        int i = std::countr_zero(mask);
        uint32_t rest = mask & ~(1u << i);
        double c = best[rest] + m.boundary[i];
        if (c < best[mask]) {
            best[mask] = c;
            choice[mask] = -1;
        }
        for (uint32_t r = rest; r; r &= r - 1) {
            int j = std::countr_zero(r);
            double cj = best[rest & ~(1u << j)] + m.d(i, j);
            if (cj < best[mask]) {
                best[mask] = cj;
                choice[mask] = j;
            }
        }
    }
    Matching out;
    out.weight = best[full];
    for (uint32_t mask = full; mask;) {
        int i = std::countr_zero(mask);
        int j = choice[mask];
        if (j == -2) throw std::runtime_error("no finite matching");
        if (j < 0) {
            out.pairs.emplace_back(i, Matching::kBoundary);
            out.observables ^= m.boundary_obs[i];
            mask &= ~(1u << i);
        } else {
            out.pairs.emplace_back(i, j);
            out.observables ^= m.o(i, j);
            mask &= ~((1u << i) | (1u << j));
        }
    }
    return out;
}

Decoder::Decoder(const DemGraph &g) : g_(g), n_(g.num_nodes()) {
    Adj a = adjacency(g_);
    dist_.resize((size_t)g_.num_detectors * n_);
    obs_.resize((size_t)g_.num_detectors * n_);
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < g_.num_detectors; s++) {
        dijkstra(a, s, g_.boundary(), dist_.data() + (size_t)s * n_, obs_.data() + (size_t)s * n_);
    }
}

EventMetric Decoder::metric(const std::vector<int> &events) const {
    const size_t k = events.size();
    EventMetric m;
    m.events = events;
    m.dist.resize(k * k);
    m.obs.resize(k * k);
    m.boundary.resize(k);
    m.boundary_obs.resize(k);
    for (size_t i = 0; i < k; i++) {
        if (events[i] < 0 || events[i] >= g_.num_detectors) throw std::invalid_argument("event is not a detector");
        const double *d = dist_.data() + (size_t)events[i] * n_;
        const uint64_t *o = obs_.data() + (size_t)events[i] * n_;
        for (size_t j = 0; j < k; j++) {
            m.dist[i * k + j] = d[events[j]];
            m.obs[i * k + j] = o[events[j]];
        }
        m.boundary[i] = d[g_.boundary()];
        m.boundary_obs[i] = o[g_.boundary()];
    }
    check_reachable(m);
    return m;
}

namespace {

EventMetric sub_metric(const EventMetric &m, const std::vector<int> &idx) {
    const size_t k = idx.size(), n = m.size();
    EventMetric s;
    s.dist.resize(k * k);
    s.obs.resize(k * k);
    for (size_t a = 0; a < k; a++) {
        s.events.push_back(m.events[idx[a]]);
        s.boundary.push_back(m.boundary[idx[a]]);
        s.boundary_obs.push_back(m.boundary_obs[idx[a]]);
        for (size_t b = 0; b < k; b++) {
            s.dist[a * k + b] = m.dist[idx[a] * n + idx[b]];
            s.obs[a * k + b] = m.obs[idx[a] * n + idx[b]];
        }
    }
    return s;
}

}  // namespace

Matching match_clustered(const EventMetric &m) {
    const int k = (int)m.size();
    // Events i and j only ever pair when d(i,j) < b(i) + b(j); otherwise sending both to the
    // boundary is at least as cheap. Components of that relation are independent problems.
    std::vector<int> root(k);
    for (int i = 0; i < k; i++) root[i] = i;
    std::function<int(int)> find = [&](int x) { return root[x] == x ? x : root[x] = find(root[x]); };
    for (int i = 0; i < k; i++) {
        for (int j = i + 1; j < k; j++) {
            if (m.d(i, j) < m.boundary[i] + m.boundary[j]) root[find(i)] = find(j);
        }
    }
    std::vector<std::vector<int>> groups(k);
    for (int i = 0; i < k; i++) groups[find(i)].push_back(i);
    Matching out;
    for (const auto &idx : groups) {
        if (idx.empty()) continue;
        EventMetric s = sub_metric(m, idx);
        // Both solvers are exact; the subset recursion is cheaper for a handful of events.
        Matching part = s.size() <= kSmallEvents ? brute_force_match(s) : match(s);
        for (auto [a, b] : part.pairs) out.pairs.emplace_back(idx[a], b == Matching::kBoundary ? b : idx[b]);
        out.weight += part.weight;
        out.observables ^= part.observables;
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

Matching Decoder::decode(const std::vector<int> &events) const { return match_clustered(metric(events)); }

FrameBatch decode_batch(const DemGraph &g, const FrameBatch &detectors, int workers) {
    if (detectors.num_rows < (size_t)g.num_detectors) throw std::invalid_argument("batch has fewer rows than detectors");
    Decoder dec(g);
    FrameBatch out(g.num_observables, detectors.shots);
    const long long words = (long long)detectors.words;
    int nt = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(nt)
    for (long long b = 0; b < words; b++) {
        std::vector<std::vector<int>> events(64);
        for (int d = 0; d < g.num_detectors; d++) {
            for (uint64_t w = detectors.row(d)[b]; w; w &= w - 1) events[std::countr_zero(w)].push_back(d);
        }
        for (int s = 0; s < 64; s++) {
            if (events[s].empty()) continue;
            uint64_t obs = dec.decode(events[s]).observables;
            for (int o = 0; o < g.num_observables; o++) {
                if ((obs >> o) & 1) out.row(o)[b] |= 1ULL << s;
            }
        }
    }
    return out;
}

DecodeSummary summarize(const FrameBatch &predictions, const FrameBatch &detectors, int num_detectors, int observable) {
    if (predictions.shots != detectors.shots) throw std::invalid_argument("shot counts differ");
    DecodeSummary s;
    s.shots = detectors.shots;
    const uint64_t *p = predictions.row(observable);
    const uint64_t *a = detectors.row(num_detectors + observable);
    for (size_t k = 0; k < detectors.words; k++) s.failures += std::popcount(p[k] ^ a[k]);
    s.rate = s.shots ? (double)s.failures / (double)s.shots : 0;
    s.stderr_ = s.shots ? std::sqrt(s.rate * (1 - s.rate) / (double)s.shots) : 0;
    return s;
}

void write_summary_csv(const std::vector<DecodeSummary> &rows, const std::string &path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "shots,failures,rate,stderr\n";
    f.precision(10);
    for (const auto &r : rows) f << r.shots << ',' << r.failures << ',' << r.rate << ',' << r.stderr_ << '\n';
}

}  // namespace hhqec
