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

#include "hhqec/dem.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace hhqec {

namespace {

using Bits = std::vector<uint64_t>;

void xor_into(Bits &a, const Bits &b) {
    for (size_t i = 0; i < a.size(); i++) a[i] ^= b[i];
}

// Symmetric difference of record lists.
std::vector<int> xor_sets(const std::vector<int> &a, const std::vector<int> &b) {
    std::vector<int> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> sorted_xor(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    std::vector<int> out;
    for (size_t i = 0; i < v.size();) {
        size_t j = i;
        while (j < v.size() && v[j] == v[i]) j++;
        if ((j - i) & 1) out.push_back(v[i]);
        i = j;
    }
    return out;
}

double xor_prob(double a, double b) { return a * (1 - b) + b * (1 - a); }

}  // namespace

DetectorSet define_detectors(const Circuit &c, const Patch &patch, DetectorConvention conv) {
    if (c.meta.patch != patch.kind) throw std::invalid_argument("circuit and patch kinds differ");
    DetectorConvention want = DetectorConvention::for_circuit(c);
    if (conv.mode != want.mode) {
        throw std::invalid_argument(std::string("convention mismatch: ") +
                                    (conv.mode == DetectorConvention::Reset ? "Reset" : "NoReset") +
                                    " convention on a " + (c.meta.reset ? "reset" : "no-reset") + " circuit");
    }
    if (conv.lookback != want.lookback) throw std::invalid_argument("lookback must be 1 with reset and 2 without");

    DetectorSet ds;
    ds.convention = conv;
    auto recs = c.records();
    ds.num_records = recs.size();

    // A record's value is its outcome XOR the previous outcome of the same qubit when the
    // qubit was not reset in between.
    std::vector<int> prev(recs.size(), -1), last(c.num_qubits, -1);
    int k = 0;
    for (const auto &in : c.instructions) {
        if (in.op == Op::MeasureZ) {
            for (int q : in.targets) {
                prev[k] = last[q];
                last[q] = k++;
            }
        } else if (in.op == Op::ResetZ) {
            for (int q : in.targets) last[q] = -1;
        }
    }
    auto value = [&](int r) {
        std::vector<int> v{r};
        if (prev[r] >= 0) v.push_back(prev[r]);
        std::sort(v.begin(), v.end());
        return v;
    };
    std::map<std::pair<int, int>, int> first;
    std::vector<std::vector<int>> flags_by_round(std::max(c.rounds, 1));
    for (int i = 0; i < (int)recs.size(); i++) {
        auto key = std::make_pair(recs[i].round, recs[i].qubit);
        if (!first.count(key)) {
            first[key] = i;
        } else if (recs[i].round < c.rounds) {
            flags_by_round[recs[i].round].push_back(i);
        }
    }
    auto check_value = [&](int ci, int r) {
        auto it = first.find({r, patch.checks[ci].measure_qubit});
        if (it == first.end()) throw std::invalid_argument("check " + patch.checks[ci].label + " not measured in round " + std::to_string(r));
        return value(it->second);
    };
    auto stab_value = [&](int si, int r) {
        std::vector<int> v;
        for (int ci : patch.stabilizers[si].checks) {
            auto cv = check_value(ci, r);
            v.insert(v.end(), cv.begin(), cv.end());
        }
        return sorted_xor(v);
    };
    auto add = [&](std::vector<int> records, int round, int stab, char type) {
        ds.detectors.push_back({(int)ds.detectors.size(), std::move(records), round, stab, type});
    };
    auto type_of = [&](int si) { return patch.stabilizers[si].basis == Basis::X ? 'X' : 'Z'; };
    const int ns = (int)patch.stabilizers.size();

    if (patch.kind == PatchKind::Memory) {
        Basis b = c.meta.basis;
        for (int r = 0; r < c.rounds; r++) {
            for (int si = 0; si < ns; si++) {
                if (r == 0) {
                    if (patch.stabilizers[si].basis == b) add(stab_value(si, 0), 0, si, type_of(si));
                } else {
                    add(xor_sets(stab_value(si, r), stab_value(si, r - 1)), r, si, type_of(si));
                }
            }
            for (int f : flags_by_round[r]) add(value(f), r, -1, 'F');
        }
        auto mi = c.measurement_index();
        auto data_records = [&](const std::vector<int> &qs) {
            std::vector<int> v;
            for (int q : qs) v.push_back(mi.at({c.rounds, q, 0}));
            std::sort(v.begin(), v.end());
            return v;
        };
        for (int si = 0; si < ns; si++) {
            if (patch.stabilizers[si].basis != b) continue;
            auto v = data_records(product_support(patch, patch.stabilizers[si].checks));
            if (c.rounds > 0) v = xor_sets(v, stab_value(si, c.rounds - 1));
            add(v, c.rounds, si, type_of(si));
        }
        const ObservableSpec *obs = patch.observable(b == Basis::Z ? ObsKind::LogicalZ : ObsKind::LogicalX);
        if (!obs) throw std::invalid_argument("patch has no logical for the memory basis");
        ds.observables.push_back({obs->kind, data_records(obs->support)});
    } else {
        for (int r = 1; r < c.rounds; r++) {
            for (int si = 0; si < ns; si++) add(xor_sets(stab_value(si, r), stab_value(si, r - 1)), r, si, type_of(si));
        }
        const ObservableSpec *obs = patch.observable(ObsKind::CheckProductConstraint);
        if (!obs) throw std::invalid_argument("stability patch has no check-product constraint");
        std::vector<int> v;
        for (int ci : obs->support) {
            auto cv = check_value(ci, c.rounds - 1);
            v.insert(v.end(), cv.begin(), cv.end());
        }
        ds.observables.push_back({obs->kind, sorted_xor(v)});
        ds.incomplete_rounds = {0, 1};
    }
    return ds;
}

std::vector<std::string> check_determinism(const Circuit &c, const DetectorSet &ds) {
    std::vector<std::string> out;
    auto ref = reference_run(c);
    auto deps = outcome_dependence(c);
    auto check = [&](const std::vector<int> &recs, const std::string &name) {
        int parity = 0;
        for (int r : recs) parity ^= ref.bits.at(r);
        if (parity) out.push_back(name + " has reference value 1");
        for (size_t k = 0; k < deps.size(); k++) {
            int p = 0;
            for (int r : recs) p ^= deps[k][r];
            if (p) {
                out.push_back(name + " depends on random event " + std::to_string(k));
                break;
            }
        }
    };
    for (const auto &d : ds.detectors) check(d.records, "detector " + std::to_string(d.id));
    for (size_t o = 0; o < ds.observables.size(); o++) check(ds.observables[o].records, "observable " + std::to_string(o));
    return out;
}

FrameBatch extract_detectors(const FrameBatch &records, const DetectorSet &ds) {
    if (records.num_rows != ds.num_records) throw std::invalid_argument("record count does not match detector layout");
    FrameBatch out(ds.detectors.size() + ds.observables.size(), records.shots);
    auto fill = [&](size_t row, const std::vector<int> &recs) {
        uint64_t *dst = out.row(row);
        for (int r : recs) {
            const uint64_t *src = records.row(r);
            for (size_t k = 0; k < out.words; k++) dst[k] ^= src[k];
        }
    };
    for (size_t i = 0; i < ds.detectors.size(); i++) fill(i, ds.detectors[i].records);
    for (size_t o = 0; o < ds.observables.size(); o++) fill(ds.detectors.size() + o, ds.observables[o].records);
    return out;
}

std::vector<FaultMechanism> enumerate_faults(const NoisyCircuit &nc, const DetectorSet &ds) {
    const Circuit &c = nc.base;
    const size_t D = ds.detectors.size(), O = ds.observables.size();
    if (O > 64) throw std::invalid_argument("at most 64 observables");
    const size_t W = (D + O + 63) / 64;
    std::vector<Bits> rec_mask(ds.num_records, Bits(W, 0));
    for (size_t i = 0; i < D; i++) {
        for (int r : ds.detectors[i].records) rec_mask.at(r)[i >> 6] ^= 1ULL << (i & 63);
    }
    for (size_t o = 0; o < O; o++) {
        size_t b = D + o;
        for (int r : ds.observables[o].records) rec_mask.at(r)[b >> 6] ^= 1ULL << (b & 63);
    }
    // sx[q] / sz[q]: detectors and observables flipped by an X / Z on q at the current point.
    std::vector<Bits> sx(c.num_qubits, Bits(W, 0)), sz(c.num_qubits, Bits(W, 0));
    int rec = (int)ds.num_records;
    std::vector<FaultMechanism> out;

    auto emit = [&](int pos, std::vector<PauliTerm> paulis, int record, double p, const Bits &sig) {
        FaultMechanism f{(int)out.size(), pos, std::move(paulis), record, p, {}, 0};
        for (size_t w = 0; w < W; w++) {
            for (uint64_t m = sig[w]; m; m &= m - 1) {
                size_t b = w * 64 + std::countr_zero(m);
                if (b < D) f.detectors.push_back((int)b);
                else f.observables |= 1ULL << (b - D);
            }
        }
        out.push_back(std::move(f));
    };
    auto pauli_sig = [&](int q, int xz, Bits &sig) {
        if (xz & 1) xor_into(sig, sx[q]);
        if (xz & 2) xor_into(sig, sz[q]);
    };
    auto pchar = [](int xz) { return xz == 1 ? 'X' : xz == 2 ? 'Z' : 'Y'; };

    // Channels sorted by position; walk them from the back.
    int ch = (int)nc.channels.size() - 1;
    for (int pos = (int)c.instructions.size(); pos >= 0; pos--) {
        if (pos < (int)c.instructions.size()) {
            const Instruction &in = c.instructions[pos];
            switch (in.op) {
                case Op::H:
                    for (int q : in.targets) std::swap(sx[q], sz[q]);
                    break;
                case Op::S:
                    for (int q : in.targets) xor_into(sx[q], sz[q]);
                    break;
                case Op::CX: {
                    int a = in.targets[0], b = in.targets[1];
                    xor_into(sx[a], sx[b]);
                    xor_into(sz[b], sz[a]);
                    break;
                }
                case Op::MeasureZ:
                    rec -= (int)in.targets.size();
                    for (size_t j = 0; j < in.targets.size(); j++) {
                        int q = in.targets[j];
                        xor_into(sx[q], rec_mask[rec + j]);
                        std::fill(sz[q].begin(), sz[q].end(), 0);
                    }
                    break;
                case Op::ResetZ:
                    for (int q : in.targets) {
                        std::fill(sx[q].begin(), sx[q].end(), 0);
                        std::fill(sz[q].begin(), sz[q].end(), 0);
                    }
                    break;
                default: break;
            }
        }
        for (; ch >= 0 && nc.channels[ch].position == pos; ch--) {
            const Channel &k = nc.channels[ch];
            if (k.p <= 0) continue;
            switch (k.kind) {
                case ChannelKind::Depolarize1:
                case ChannelKind::IdleDepolarize:
                    for (int q : k.targets) {
                        for (int xz = 1; xz <= 3; xz++) {
                            Bits sig(W, 0);
                            pauli_sig(q, xz, sig);
                            emit(pos, {{q, pchar(xz)}}, -1, k.p / 3, sig);
                        }
                    }
                    break;
                case ChannelKind::Depolarize2:
                    for (size_t i = 0; i + 1 < k.targets.size(); i += 2) {
                        int a = k.targets[i], b = k.targets[i + 1];
                        for (int pp = 1; pp < 16; pp++) {
                            Bits sig(W, 0);
                            std::vector<PauliTerm> terms;
                            if (pp & 3) {
                                pauli_sig(a, pp & 3, sig);
                                terms.push_back({a, pchar(pp & 3)});
                            }
                            if (pp >> 2) {
                                pauli_sig(b, pp >> 2, sig);
                                terms.push_back({b, pchar(pp >> 2)});
                            }
                            emit(pos, terms, -1, k.p / 15, sig);
                        }
                    }
                    break;
                case ChannelKind::XBeforeMeasure:
                case ChannelKind::XAfterReset:
                    for (int q : k.targets) {
                        Bits sig(W, 0);
                        pauli_sig(q, 1, sig);
                        emit(pos, {{q, 'X'}}, -1, k.p, sig);
                    }
                    break;
                case ChannelKind::RecordFlip:
                    for (int r : k.targets) emit(pos, {}, r, k.p, rec_mask.at(r));
                    break;
            }
        }
    }
    std::reverse(out.begin(), out.end());
    for (size_t i = 0; i < out.size(); i++) out[i].id = (int)i;
    return out;
}

namespace {

std::string describe(const FaultMechanism &f) {
    std::ostringstream os;
    os << "fault before instruction " << f.position;
    for (const auto &t : f.paulis) os << " " << t.kind << t.qubit;
    if (f.record >= 0) os << " flip record " << f.record;
    os << " with detectors";
    for (int d : f.detectors) os << " " << d;
    return os.str();
}

using EdgeTable = std::map<std::vector<int>, std::map<uint64_t, double>>;

// Splits `dets` into existing edges whose observables XOR to `obs`. Groups are tried by
// detector type first, then any partition into same-type edges.
bool decompose(const std::vector<int> &dets, uint64_t obs, const std::vector<char> &type, const EdgeTable &edges,
               std::vector<std::pair<std::vector<int>, uint64_t>> &parts) {
    std::map<char, std::vector<int>> groups;
    for (int d : dets) groups[type[d]].push_back(d);
    // Type split.
    std::vector<const std::map<uint64_t, double> *> options;
    std::vector<std::vector<int>> keys;
    bool ok = true;
    for (auto &[t, g] : groups) {
        auto it = edges.find(g);
        if (g.size() > 2 || it == edges.end()) {
            ok = false;
            break;
        }
        options.push_back(&it->second);
        keys.push_back(g);
    }
    if (ok) {
        std::vector<uint64_t> chosen(keys.size());
        std::function<bool(size_t, uint64_t)> pick = [&](size_t i, uint64_t acc) {
            if (i == keys.size()) return acc == obs;
            for (auto &[o, p] : *options[i]) {
                chosen[i] = o;
                if (pick(i + 1, acc ^ o)) return true;
            }
            return false;
        };
        if (pick(0, 0)) {
            for (size_t i = 0; i < keys.size(); i++) parts.emplace_back(keys[i], chosen[i]);
            return true;
        }
    }
    // Same-type partition into singles and pairs.
    std::vector<int> rest = dets;
    std::vector<std::pair<std::vector<int>, uint64_t>> acc_parts;
    std::function<bool(std::vector<int> &, uint64_t)> search = [&](std::vector<int> &left, uint64_t acc) {
        if (left.empty()) return acc == obs;
        int a = left.front();
        std::vector<std::vector<int>> cands{{a}};
        for (size_t j = 1; j < left.size(); j++) {
            if (type[left[j]] == type[a]) cands.push_back({a, left[j]});
        }
        for (auto &cand : cands) {
            auto it = edges.find(cand);
            if (it == edges.end()) continue;
            std::vector<int> next;
            for (int d : left) {
                if (std::find(cand.begin(), cand.end(), d) == cand.end()) next.push_back(d);
            }
            for (auto &[o, p] : it->second) {
                acc_parts.emplace_back(cand, o);
                if (search(next, acc ^ o)) return true;
                acc_parts.pop_back();
            }
        }
        return false;
    };
    if (search(rest, 0)) {
        parts = acc_parts;
        return true;
    }
    return false;
}

}  // namespace

DemGraph compile(const NoisyCircuit &nc, const DetectorSet &ds) {
    auto bad = check_determinism(nc.base, ds);
    if (!bad.empty()) throw std::runtime_error("non-deterministic detectors: " + bad.front());
    DemGraph g;
    g.num_detectors = (int)ds.detectors.size();
    g.num_observables = (int)ds.observables.size();
    g.incomplete_rounds = ds.incomplete_rounds;
    for (const auto &d : ds.detectors) {
        g.detector_type.push_back(d.type);
        g.detector_round.push_back(d.round);
    }
    auto faults = enumerate_faults(nc, ds);
    // Aggregate identical signatures first.
    std::map<std::pair<std::vector<int>, uint64_t>, std::pair<double, int>> agg;
    double undetectable = 0;
    for (const auto &f : faults) {
        if (f.detectors.empty()) {
            // Possible only when rounds carry no detectors, as in a one-round stability run.
            if (f.observables) undetectable = xor_prob(undetectable, f.p);
            continue;
        }
        auto &slot = agg[{f.detectors, f.observables}];
        if (slot.first == 0) slot.second = f.id;
        slot.first = xor_prob(slot.first, f.p);
    }
    if (undetectable > 0) {
        std::ostringstream os;
        os << "undetectable logical p=" << undetectable;
        g.remainder.push_back(os.str());
    }
    EdgeTable edges;
    for (auto &[key, val] : agg) {
        if (key.first.size() <= 2) edges[key.first][key.second] = val.first;
    }
    EdgeTable extra;
    for (auto &[key, val] : agg) {
        if (key.first.size() <= 2) continue;
        std::vector<std::pair<std::vector<int>, uint64_t>> parts;
        if (!decompose(key.first, key.second, g.detector_type, edges, parts)) {
            throw std::runtime_error("undecomposable " + describe(faults[val.second]));
        }
        std::ostringstream os;
        os << "hyperedge";
        for (int d : key.first) os << " " << d;
        os << " p=" << val.first << " ->";
        for (auto &[dets, o] : parts) {
            double &p = extra[dets][o];
            p = xor_prob(p, val.first);
            os << " (";
            for (size_t i = 0; i < dets.size(); i++) os << (i ? " " : "") << dets[i];
            os << ")";
        }
        g.remainder.push_back(os.str());
    }
    for (auto &[dets, m] : extra) {
        for (auto &[o, p] : m) edges[dets][o] = xor_prob(edges[dets][o], p);
    }
    // Same detectors with different observable flips stay as parallel edges: merging them would
    // hide a logical failure from the distance search.
    for (auto &[dets, m] : edges) {
        for (auto &[o, p0] : m) {
            double p = p0;
            if (p >= 0.5) {
                g.remainder.push_back("edge probability clamped below 0.5");
                p = 0.5 - 1e-9;
            }
            int u = dets[0], v = dets.size() == 2 ? dets[1] : g.boundary();
            g.edges.push_back({u, v, p, std::log((1 - p) / p), o});
        }
    }
    return g;
}

std::string dem_to_text(const DemGraph &g) {
    std::ostringstream os;
    os.precision(17);
    os << "# hhqec detector error model\n";
    os << "detectors " << g.num_detectors << "\n";
    os << "observables " << g.num_observables << "\n";
    os << "incomplete_rounds";
    for (int r : g.incomplete_rounds) os << " " << r;
    os << "\n";
    for (int i = 0; i < g.num_detectors; i++) {
        os << "detector " << i << " " << (i < (int)g.detector_type.size() ? g.detector_type[i] : 'X') << " "
           << (i < (int)g.detector_round.size() ? g.detector_round[i] : 0) << "\n";
    }
    for (const auto &e : g.edges) {
        os << "edge " << e.u << " ";
        if (e.v == g.boundary()) os << "B";
        else os << e.v;
        os << " " << e.p;
        for (int o = 0; o < 64; o++) {
            if ((e.observables >> o) & 1) os << " L" << o;
        }
        os << "\n";
    }
    return os.str();
}

DemGraph dem_from_text(const std::string &text) {
    DemGraph g;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string &msg) {
        throw std::invalid_argument("dem line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "detectors") {
            if (!(ls >> g.num_detectors) || g.num_detectors < 0) fail("bad detector count");
            g.detector_type.assign(g.num_detectors, 'X');
            g.detector_round.assign(g.num_detectors, 0);
        } else if (kw == "observables") {
            if (!(ls >> g.num_observables)) fail("bad observable count");
        } else if (kw == "incomplete_rounds") {
            int r;
            while (ls >> r) g.incomplete_rounds.push_back(r);
        } else if (kw == "detector") {
            int i, r;
            char t;
            if (!(ls >> i >> t >> r) || i < 0 || i >= g.num_detectors) fail("bad detector line");
            g.detector_type[i] = t;
            g.detector_round[i] = r;
        } else if (kw == "edge") {
            std::string su, sv, tok;
            double p;
            if (!(ls >> su >> sv >> p)) fail("bad edge line");
            auto node = [&](const std::string &s) {
                if (s == "B") return g.boundary();
                int v = std::stoi(s);
                if (v < 0 || v >= g.num_detectors) fail("node out of range");
                return v;
            };
            DemEdge e{node(su), node(sv), p, 0, 0};
            if (!(p > 0 && p < 0.5)) fail("edge probability outside (0, 0.5)");
            e.w = std::log((1 - p) / p);
            while (ls >> tok) {
                if (tok.size() < 2 || tok[0] != 'L') fail("bad observable token " + tok);
                int o = std::stoi(tok.substr(1));
                if (o < 0 || o >= 64) fail("observable index out of range");
                e.observables |= 1ULL << o;
            }
            g.edges.push_back(e);
        } else {
            fail("unknown keyword " + kw);
        }
    }
    return g;
}

int fault_distance(const DemGraph &g, int observable) {
    const int n = g.num_nodes();
    std::vector<std::vector<std::pair<int, int>>> adj(n);
    for (const auto &e : g.edges) {
        int par = (e.observables >> observable) & 1;
        adj[e.u].push_back({e.v, par});
        adj[e.v].push_back({e.u, par});
    }
    int best = kInfiniteDistance;
    std::vector<int> dist(2 * n);
    for (int s = 0; s < n; s++) {
        if (adj[s].empty()) continue;
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<int> queue{2 * s};
        dist[2 * s] = 0;
        while (!queue.empty()) {
            int st = queue.front();
            queue.pop_front();
            if (dist[st] + 1 >= best) break;
            int u = st >> 1, par = st & 1;
            for (auto [v, ep] : adj[u]) {
                int nst = 2 * v + (par ^ ep);
                if (nst == 2 * s + 1) {
                    best = std::min(best, dist[st] + 1);
                    continue;
                }
                if (dist[nst] < 0) {
                    dist[nst] = dist[st] + 1;
                    queue.push_back(nst);
                }
            }
        }
    }
    return best;
}

int fault_distance_exact(const std::vector<FaultMechanism> &faults, int observable, int max_weight) {
    if (max_weight > 4) throw std::invalid_argument("exact search supports weights up to 4");
    // Distinct mechanisms keyed by a random hash of their detector set.
    std::mt19937_64 rng(0xD15EA5E);
    std::unordered_map<int, uint64_t> zob;
    auto hash_of = [&](const std::vector<int> &dets) {
        uint64_t h = 0;
        for (int d : dets) {
            auto it = zob.find(d);
            if (it == zob.end()) it = zob.emplace(d, rng() | 1).first;
            h ^= it->second;
        }
        return h;
    };
    std::set<std::pair<std::vector<int>, int>> uniq;
    for (const auto &f : faults) {
        int par = (f.observables >> observable) & 1;
        if (f.detectors.empty() && !par) continue;
        uniq.insert({f.detectors, par});
    }
    std::vector<uint64_t> key;
    std::vector<int> par;
    for (auto &[d, p] : uniq) {
        key.push_back(hash_of(d));
        par.push_back(p);
    }
    const size_t m = key.size();
    if (max_weight < 1) return kInfiniteDistance;
    for (size_t i = 0; i < m; i++) {
        if (key[i] == 0 && par[i]) return 1;
    }
    if (max_weight < 2) return kInfiniteDistance;
    std::unordered_map<uint64_t, int> single;  // bit 0: even parity seen, bit 1: odd parity seen
    for (size_t i = 0; i < m; i++) single[key[i]] |= 1 << par[i];
    for (auto &[k, mask] : single) {
        if (mask == 3) return 2;
    }
    if (max_weight < 3) return kInfiniteDistance;
    for (size_t i = 0; i < m; i++) {
        for (size_t j = i + 1; j < m; j++) {
            auto it = single.find(key[i] ^ key[j]);
            if (it != single.end() && (it->second >> (1 ^ par[i] ^ par[j]) & 1)) return 3;
        }
    }
    if (max_weight < 4) return kInfiniteDistance;
    std::unordered_map<uint64_t, int> pairs;
    pairs.reserve(m * m / 2);
    for (size_t i = 0; i < m; i++) {
        for (size_t j = i + 1; j < m; j++) {
            uint64_t k = key[i] ^ key[j];
            int p = par[i] ^ par[j];
            int &mask = pairs[k];
            if (mask >> (p ^ 1) & 1) return 4;
            mask |= 1 << p;
        }
    }
    return kInfiniteDistance;
}

}  // namespace hhqec
