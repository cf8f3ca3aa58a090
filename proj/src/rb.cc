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

#include "hhqec/rb.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <gsl/gsl_cdf.h>
#include <omp.h>

namespace hhqec {

namespace {

using C2 = Eigen::Matrix2cd;

// Removes the global phase so equal-up-to-phase unitaries compare equal.
C2 canonical(const C2 &u) {
    for (int i = 0; i < 4; i++) {
        std::complex<double> v = u(i / 2, i % 2);
        if (std::abs(v) > 1e-9) return u * (std::abs(v) / v);
    }
    return u;
}

struct CliffordTable {
    std::vector<C2> u;
    std::vector<std::vector<Op>> words;
    int mul[kNumCliffords][kNumCliffords];
    int inv[kNumCliffords];
    int x = -1, z = -1;

    int find(const C2 &m) const {
        C2 c = canonical(m);
        for (size_t i = 0; i < u.size(); i++) {
            if ((u[i] - c).norm() < 1e-9) return (int)i;
        }
        return -1;
    }

    CliffordTable() {
        const double r = 1 / std::sqrt(2.0);
        C2 h, s;
        h << r, r, r, -r;
        s << 1, 0, 0, std::complex<double>(0, 1);
        u.push_back(C2::Identity());
        words.push_back({});
        for (size_t head = 0; head < u.size(); head++) {
            for (auto [g, op] : {std::pair{h, Op::H}, std::pair{s, Op::S}}) {
                C2 next = g * u[head];
                if (find(next) >= 0) continue;
                u.push_back(canonical(next));
                auto w = words[head];
                w.push_back(op);
                words.push_back(std::move(w));
            }
        }
        if (u.size() != kNumCliffords) throw std::logic_error("Clifford closure has wrong size");
        for (int a = 0; a < kNumCliffords; a++) {
            for (int b = 0; b < kNumCliffords; b++) mul[a][b] = find(u[b] * u[a]);
            for (int b = 0; b < kNumCliffords; b++) {
                if (find(u[b] * u[a]) == 0) inv[a] = b;
            }
        }
        C2 px, pz;
        px << 0, 1, 1, 0;
        pz << 1, 0, 0, -1;
        x = find(px);
        z = find(pz);
    }
};

const CliffordTable &table() {
    static const CliffordTable t;
    return t;
}

constexpr uint64_t kStreamSimultaneous = 0x524253;
constexpr uint64_t kStreamMid = 0x4D4952;
constexpr uint64_t kStreamShots = 0x53555256;
constexpr uint64_t kStreamTwirl = 0x434C46;
constexpr uint64_t kStreamFrames = 0x434F52;

int random_clifford(Rng &rng) { return std::uniform_int_distribution<int>(0, kNumCliffords - 1)(rng); }
bool coin(Rng &rng) { return std::bernoulli_distribution(0.5)(rng); }

// Net Clifford of a list applied in order, starting from `start`.
int product(int start, const std::vector<int> &seq) {
    for (int c : seq) start = clifford_compose(start, c);
    return start;
}

}  // namespace

const Eigen::Matrix2cd &clifford_unitary(int i) { return table().u.at(i); }
const std::vector<Op> &clifford_gates(int i) { return table().words.at(i); }
int clifford_compose(int a, int b) { return table().mul[a][b]; }
int clifford_inverse(int i) { return table().inv[i]; }
int clifford_index_of(const Eigen::Matrix2cd &u) { return table().find(u); }
int clifford_x() { return table().x; }
int clifford_z() { return table().z; }

const char *mid_variant_name(MidVariant v) {
    switch (v) {
        case MidVariant::ReturnToTarget: return "return_to_target";
        case MidVariant::AlwaysZero: return "always_zero";
        case MidVariant::AlwaysOne: return "always_one";
        case MidVariant::DelayOnly: return "delay_only";
        case MidVariant::RandomizePreMeasure: return "randomize_pre_measure";
    }
    return "?";
}

MidVariant mid_variant_from_name(const std::string &s) {
    for (auto v : {MidVariant::ReturnToTarget, MidVariant::AlwaysZero, MidVariant::AlwaysOne, MidVariant::DelayOnly,
                   MidVariant::RandomizePreMeasure}) {
        if (s == mid_variant_name(v)) return v;
    }
    throw std::invalid_argument("unknown mid-circuit variant '" + s + "'");
}

std::vector<RbSequence> gen_simultaneous_rb(const std::vector<int> &qubits, const std::vector<int> &ms, int k,
                                            uint64_t seed) {
    if (!std::is_sorted(ms.begin(), ms.end())) throw std::invalid_argument("m list must be ascending");
    if (k < 1) throw std::invalid_argument("k must be positive");
    std::vector<RbSequence> out;
    for (int m : ms) {
        if (m < 0) throw std::invalid_argument("m must be non-negative");
        for (int s = 0; s < k; s++) {
            Rng rng = make_rng(seed, kStreamSimultaneous, ((uint64_t)m << 32) | (uint64_t)s);
            RbSequence seq;
            seq.m = m;
            seq.k_index = s;
            for (int q : qubits) {
                QubitSequence qs;
                qs.qubit = q;
                qs.x = coin(rng);
                std::vector<int> cl(m);
                for (int &c : cl) c = random_clifford(rng);
                qs.inverse = clifford_inverse(product(0, cl));
                qs.segments.push_back(std::move(cl));
                seq.qubits.push_back(std::move(qs));
            }
            out.push_back(std::move(seq));
        }
    }
    return out;
}

std::vector<RbSequence> gen_midcircuit_rb(const std::vector<int> &measured, const std::vector<int> &spectators,
                                          const std::vector<int> &ms, int k, MidVariant variant, uint64_t seed,
                                          int cliffords_per_segment) {
    if (!std::is_sorted(ms.begin(), ms.end())) throw std::invalid_argument("m list must be ascending");
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (cliffords_per_segment < 1) throw std::invalid_argument("segments need at least one Clifford");
    for (int q : measured) {
        if (std::find(spectators.begin(), spectators.end(), q) != spectators.end())
            throw std::invalid_argument("measured and spectator qubits overlap");
    }
    const int X = clifford_x(), Z = clifford_z();
    std::vector<RbSequence> out;
    for (int m : ms) {
        if (m < 0) throw std::invalid_argument("m must be non-negative");
        for (int s = 0; s < k; s++) {
            Rng rng = make_rng(seed, kStreamMid, ((uint64_t)m << 32) | (uint64_t)s);
            RbSequence seq;
            seq.m = m;
            seq.k_index = s;
            seq.midcircuit = true;
            seq.variant = variant;
            auto add = [&](int q, bool is_measured) {
                QubitSequence qs;
                qs.qubit = q;
                qs.measured = is_measured;
                qs.x = coin(rng);
                int net = qs.x ? X : 0;
                for (int r = 0; r < m; r++) {
                    std::vector<int> seg(cliffords_per_segment);
                    for (int &c : seg) c = random_clifford(rng);
                    int target = -1;  // pre-measurement basis state, or -1 to leave it random
                    switch (variant) {
                        case MidVariant::ReturnToTarget:
                        case MidVariant::DelayOnly: target = qs.x; break;
                        case MidVariant::AlwaysZero: target = 0; break;
                        case MidVariant::AlwaysOne: target = 1; break;
                        case MidVariant::RandomizePreMeasure: target = is_measured ? (int)qs.x : -1; break;
                    }
                    if (target >= 0) {
                        seg.pop_back();
                        seg.push_back(clifford_compose(clifford_inverse(product(net, seg)), target ? X : 0));
                    }
                    net = product(net, seg);
                    qs.segments.push_back(std::move(seg));
                    uint8_t z = is_measured ? coin(rng) : 0;
                    qs.z_flags.push_back(z);
                    if (z) net = clifford_compose(net, Z);
                }
                qs.inverse = clifford_compose(clifford_inverse(net), qs.x ? X : 0);
                seq.qubits.push_back(std::move(qs));
            };
            for (int q : measured) add(q, true);
            for (int q : spectators) add(q, false);
            out.push_back(std::move(seq));
        }
    }
    return out;
}

std::vector<RbSequence> gen_temporal_consistency(uint64_t seed, const std::vector<int> &qubits, int m, int k) {
    return gen_simultaneous_rb(qubits, {m}, k, seed);
}

bool sequence_inverts(const RbSequence &s) {
    DeviceParams ideal;
    QubitDevice dev;
    dev.t1_us = dev.t2_us = 1e30;
    for (const auto &q : s.qubits) ideal.qubits[q.qubit] = dev;
    for (const auto &q : s.qubits) {
        auto r = density_run(qubit_program(s, q, ideal), ideal.get(q.qubit));
        if (r.empty() || std::abs(r.back() - (q.x ? 1.0 : 0.0)) > 1e-9) return false;
    }
    return true;
}

const QubitDevice &DeviceParams::get(int q) const {
    auto it = qubits.find(q);
    if (it == qubits.end()) throw std::out_of_range("no device parameters for qubit " + std::to_string(q));
    return it->second;
}

std::vector<std::string> DeviceParams::violations() const {
    std::vector<std::string> v;
    if (!(clifford_ns >= 0)) v.push_back("clifford_ns must be non-negative");
    for (const auto &[q, d] : qubits) {
        std::string tag = "qubit " + std::to_string(q) + ": ";
        if (!(d.t1_us > 0 && d.t2_us > 0)) v.push_back(tag + "T1 and T2 must be positive");
        if (d.t2_us > 2 * d.t1_us) v.push_back(tag + "T2 exceeds 2*T1");
        for (double p : {d.gate_error, d.p_read1_given0, d.p_read0_given1, d.excitation}) {
            if (!(p >= 0 && p <= 1)) v.push_back(tag + "probability outside [0,1]");
        }
        if (!(d.meas_ns >= 0)) v.push_back(tag + "measurement duration must be non-negative");
    }
    return v;
}

DeviceParams uniform_device(const std::vector<int> &qubits, const QubitDevice &dev, double clifford_ns) {
    DeviceParams d;
    d.clifford_ns = clifford_ns;
    for (int q : qubits) d.qubits[q] = dev;
    return d;
}

nlohmann::json device_to_json(const DeviceParams &d) {
    nlohmann::json j;
    j["clifford_ns"] = d.clifford_ns;
    j["qubits"] = nlohmann::json::array();
    for (const auto &[q, v] : d.qubits) {
        j["qubits"].push_back({{"qubit", q},
                               {"t1_us", v.t1_us},
                               {"t2_us", v.t2_us},
                               {"gate_error", v.gate_error},
                               {"p_read1_given0", v.p_read1_given0},
                               {"p_read0_given1", v.p_read0_given1},
                               {"meas_ns", v.meas_ns},
                               {"excitation", v.excitation}});
    }
    return j;
}

DeviceParams device_from_json(const nlohmann::json &j) {
    DeviceParams d;
    d.clifford_ns = j.value("clifford_ns", 75.0);
    for (const auto &e : j.at("qubits")) {
        QubitDevice v;
        v.t1_us = e.value("t1_us", v.t1_us);
        v.t2_us = e.value("t2_us", v.t2_us);
        v.gate_error = e.value("gate_error", v.gate_error);
        v.p_read1_given0 = e.value("p_read1_given0", v.p_read1_given0);
        v.p_read0_given1 = e.value("p_read0_given1", v.p_read0_given1);
        v.meas_ns = e.value("meas_ns", v.meas_ns);
        v.excitation = e.value("excitation", v.excitation);
        d.qubits[e.at("qubit").get<int>()] = v;
    }
    auto v = d.violations();
    if (!v.empty()) throw std::invalid_argument("invalid device parameters: " + v.front());
    return d;
}

std::vector<QubitOp> qubit_program(const RbSequence &s, const QubitSequence &q, const DeviceParams &dev) {
    std::vector<QubitOp> ops;
    auto gate = [&](int c, bool noisy = true) {
        QubitOp op;
        op.kind = QubitOp::Gate;
        op.u = clifford_unitary(c);
        op.ns = dev.clifford_ns;
        op.noisy = noisy;
        ops.push_back(op);
    };
    auto idle = [&](double ns) {
        if (ns <= 0) return;
        QubitOp op;
        op.kind = QubitOp::Delay;
        op.ns = ns;
        ops.push_back(op);
    };
    // Every measurement layer lasts as long as the slowest measured qubit.
    double layer_ns = 0;
    for (const auto &o : s.qubits) {
        if (o.measured) layer_ns = std::max(layer_ns, dev.get(o.qubit).meas_ns);
    }
    const double own_ns = dev.get(q.qubit).meas_ns;
    if (q.x) gate(clifford_x());
    for (size_t r = 0; r < q.segments.size(); r++) {
        for (int c : q.segments[r]) gate(c);
        if (!s.midcircuit) continue;
        if (!q.measured) {
            idle(layer_ns);
            continue;
        }
        if (s.variant == MidVariant::DelayOnly) {
            idle(own_ns);
        } else {
            QubitOp meas;
            meas.kind = QubitOp::Measure;
            meas.recorded = false;
            meas.ns = own_ns;
            ops.push_back(meas);
        }
        idle(layer_ns - own_ns);
        if (r < q.z_flags.size() && q.z_flags[r]) gate(clifford_z(), false);
    }
    gate(q.inverse);
    QubitOp final_meas;
    final_meas.kind = QubitOp::Measure;
    ops.push_back(final_meas);
    return ops;
}

std::vector<SurvivalRecord> run_rb(const std::vector<RbSequence> &seqs, const DeviceParams &dev, size_t shots,
                                   uint64_t seed, int workers) {
    auto v = dev.violations();
    if (!v.empty()) throw std::invalid_argument("invalid device parameters: " + v.front());
    if (shots == 0) throw std::invalid_argument("shots must be positive");
    std::vector<std::pair<int, int>> jobs;
    for (size_t i = 0; i < seqs.size(); i++) {
        for (size_t j = 0; j < seqs[i].qubits.size(); j++) jobs.emplace_back((int)i, (int)j);
    }
    std::vector<SurvivalRecord> out(jobs.size());
    const long n = (long)jobs.size();
#pragma omp parallel for schedule(dynamic) num_threads(workers > 0 ? workers : omp_get_max_threads())
    for (long idx = 0; idx < n; idx++) {
        const RbSequence &s = seqs[jobs[idx].first];
        const QubitSequence &q = s.qubits[jobs[idx].second];
        const QubitDevice &d = dev.get(q.qubit);
        double p1 = density_run(qubit_program(s, q, dev), d).back();
        double ps = std::clamp(q.x ? p1 : 1 - p1, 0.0, 1.0);
        Rng rng = make_rng(seed, kStreamShots, (uint64_t)idx);
        size_t hits = std::binomial_distribution<size_t>(shots, ps)(rng);
        out[idx] = {q.qubit, s.m, s.k_index, q.x, (double)hits / (double)shots, shots};
    }
    return out;
}

void write_survival_csv(const std::vector<SurvivalRecord> &r, const std::string &path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f.precision(17);
    f << "qubit,m,sequence,x,survival,shots\n";
    for (const auto &e : r) f << e.qubit << ',' << e.m << ',' << e.sequence << ',' << e.x << ',' << e.survival << ','
                              << e.shots << '\n';
    if (!f) throw std::runtime_error("write failed for " + path);
}

std::vector<SurvivalRecord> read_survival_csv(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::string line;
    std::getline(f, line);
    if (line != "qubit,m,sequence,x,survival,shots") throw std::runtime_error("unexpected survival CSV header");
    std::vector<SurvivalRecord> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream is(line);
        SurvivalRecord e;
        int x;
        if (!(is >> e.qubit >> e.m >> e.sequence >> x >> e.survival >> e.shots))
            throw std::runtime_error("malformed survival row: " + line);
        e.x = x != 0;
        if (e.survival < 0 || e.survival > 1) throw std::runtime_error("survival outside [0,1]");
        out.push_back(e);
    }
    return out;
}

std::vector<RbFit> fit_rb(const std::vector<SurvivalRecord> &records) {
    std::map<int, std::map<int, std::vector<const SurvivalRecord *>>> by;
    for (const auto &r : records) by[r.qubit][r.m].push_back(&r);
    std::vector<RbFit> out;
    for (const auto &[q, per_m] : by) {
        RbFit f;
        f.qubit = q;
        std::vector<double> t, y, sig;
        for (const auto &[m, rs] : per_m) {
            double n = (double)rs.size(), mean = 0, shots = 0;
            for (auto *r : rs) {
                mean += r->survival;
                shots += (double)r->shots;
            }
            mean /= n;
            double var = 0;
            for (auto *r : rs) var += (r->survival - mean) * (r->survival - mean);
            var = rs.size() > 1 ? var / (n - 1) : 0;
            // Sequence scatter, floored by the pooled binomial error and half a count.
            double se = std::max({std::sqrt(var / n), std::sqrt(mean * (1 - mean) / shots), 0.5 / shots});
            f.points.push_back({m, mean, se, (int)rs.size()});
            t.push_back(m);
            y.push_back(mean);
            sig.push_back(se);
        }
        if (per_m.size() < 3) {
            f.fit.message = "need at least three distinct m values";
        } else {
            f.fit = fit_decay(t, y, sig, 0.5);
        }
        out.push_back(std::move(f));
    }
    return out;
}

nlohmann::json rb_fits_to_json(const std::vector<RbFit> &fits) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto &f : fits) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto &p : f.points) pts.push_back({{"m", p.m}, {"mean", p.mean}, {"sigma", p.sigma}, {"k", p.sequences}});
        j.push_back({{"qubit", f.qubit}, {"fit", fit_to_json(f.fit)}, {"points", pts}});
    }
    return j;
}

double twirled_damping(double ns, const QubitDevice &dev) {
    double t = ns * 1e-3;
    return (std::exp(-t / dev.t1_us) + 2 * std::exp(-t / dev.t2_us)) / 3;
}

bool TemporalReport::flagged(int qubit) const {
    return std::any_of(flags.begin(), flags.end(), [&](const TemporalFlag &f) { return f.qubit == qubit; });
}

TemporalReport compare_runs(const std::vector<SurvivalRecord> &a, const std::vector<SurvivalRecord> &b, double alpha,
                            double min_z) {
    std::map<std::tuple<int, int, int>, const SurvivalRecord *> idx;
    for (const auto &r : a) idx[{r.qubit, r.m, r.sequence}] = &r;
    std::vector<std::pair<const SurvivalRecord *, const SurvivalRecord *>> pairs;
    for (const auto &r : b) {
        auto it = idx.find({r.qubit, r.m, r.sequence});
        if (it == idx.end()) throw std::invalid_argument("runs cover different sequences");
        pairs.emplace_back(it->second, &r);
    }
    if (pairs.size() != a.size()) throw std::invalid_argument("runs cover different sequences");
    TemporalReport rep;
    rep.comparisons = pairs.size();
    double bonf = pairs.empty() ? 0 : gsl_cdf_ugaussian_Qinv(alpha / (2.0 * (double)pairs.size()));
    rep.threshold_z = std::max(min_z, bonf);
    for (auto [x, y] : pairs) {
        double na = (double)x->shots, nb = (double)y->shots;
        double pool = (x->survival * na + y->survival * nb) / (na + nb);
        double var = pool * (1 - pool) * (1 / na + 1 / nb);
        // A zero-variance pool means both runs saw the same extreme outcome.
        double z = var > 0 ? (y->survival - x->survival) / std::sqrt(var) : 0;
        double &mx = rep.max_abs_z[x->qubit];
        mx = std::max(mx, std::abs(z));
        if (std::abs(z) > rep.threshold_z) rep.flags.push_back({x->qubit, x->m, x->sequence, x->survival, y->survival, z});
    }
    return rep;
}

nlohmann::json temporal_to_json(const TemporalReport &r) {
    nlohmann::json flags = nlohmann::json::array();
    for (const auto &f : r.flags)
        flags.push_back({{"qubit", f.qubit}, {"m", f.m}, {"sequence", f.sequence}, {"a", f.a}, {"b", f.b}, {"z", f.z}});
    nlohmann::json mx = nlohmann::json::object();
    for (const auto &[q, z] : r.max_abs_z) mx[std::to_string(q)] = z;
    return {{"threshold_z", r.threshold_z}, {"comparisons", r.comparisons}, {"flags", flags}, {"max_abs_z", mx}};
}

// ---- correlation analysis ----

namespace {

void emit(Circuit &c, const std::vector<Instruction> &layer) {
    if (layer.empty()) return;
    if (!c.instructions.empty()) c.instructions.push_back({Op::Tick, {}});
    for (auto in : layer) {
        in.duration = c.durations.of(in.op);
        c.instructions.push_back(in);
    }
}

void emit_cliffords(Circuit &c, const std::vector<int> &cl) {
    size_t depth = 0;
    for (int x : cl) depth = std::max(depth, clifford_gates(x).size());
    for (size_t j = 0; j < depth; j++) {
        std::vector<Instruction> layer;
        for (size_t q = 0; q < cl.size(); q++) {
            const auto &w = clifford_gates(cl[q]);
            if (j < w.size()) layer.push_back({w[j], {(int)q}});
        }
        emit(c, layer);
    }
}

Circuit mirrored_impl(const Circuit &block, int m, const std::vector<int> &cliffords,
                      const std::vector<uint8_t> &pauli_x, const std::vector<uint8_t> &pauli_z, int *middle) {
    const int n = block.num_qubits;
    if ((int)cliffords.size() != n || (int)pauli_x.size() != n || (int)pauli_z.size() != n)
        throw std::invalid_argument("twirl sizes must match the block's qubit count");
    if (m < 1) throw std::invalid_argument("m must be positive");
    auto layers = block.layers();
    for (const auto &l : layers) {
        for (const auto &in : l) {
            if (in.op != Op::H && in.op != Op::S && in.op != Op::CX && in.op != Op::PauliX && in.op != Op::PauliZ &&
                in.op != Op::Delay)
                throw std::invalid_argument(std::string("block must be unitary; found ") + op_name(in.op));
        }
    }
    Circuit c;
    c.num_qubits = n;
    c.rounds = 0;
    c.durations = block.durations;
    c.data_qubits = block.data_qubits;
    emit_cliffords(c, cliffords);
    for (int r = 0; r < m; r++) {
        for (const auto &l : layers) emit(c, l);
    }
    if (middle) *middle = (int)c.instructions.size() + (c.instructions.empty() ? 0 : 1);
    std::vector<Instruction> px, pz;
    for (int q = 0; q < n; q++) {
        if (pauli_x[q]) px.push_back({Op::PauliX, {q}});
        if (pauli_z[q]) pz.push_back({Op::PauliZ, {q}});
    }
    emit(c, px);
    emit(c, pz);
    for (int r = 0; r < m; r++) {
        for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
            // S^-1 = Z S, so inverse S layers get a trailing Z layer.
            std::vector<Instruction> fix;
            for (const auto &in : *it) {
                if (in.op == Op::S) fix.push_back({Op::PauliZ, in.targets});
            }
            emit(c, *it);
            emit(c, fix);
        }
    }
    std::vector<int> inv(n);
    for (int q = 0; q < n; q++) inv[q] = clifford_inverse(cliffords[q]);
    emit_cliffords(c, inv);
    std::vector<int> all(n);
    for (int q = 0; q < n; q++) all[q] = q;
    Instruction meas{Op::MeasureZ, all};
    meas.round = 0;
    emit(c, {meas});
    return c;
}

}  // namespace

Circuit mirrored_circuit(const Circuit &block, int m, const std::vector<int> &cliffords,
                         const std::vector<uint8_t> &pauli_x, const std::vector<uint8_t> &pauli_z) {
    return mirrored_impl(block, m, cliffords, pauli_x, pauli_z, nullptr);
}

Circuit syndrome_block(const Patch &patch) {
    Circuit cyc = build_improved_cycle(patch, false);
    Circuit out = cyc;
    out.instructions.clear();
    for (const auto &in : cyc.instructions) {
        if (in.op == Op::H || in.op == Op::S || in.op == Op::CX) out.instructions.push_back(in);
    }
    return relayer_asap(out);
}

CorrelationResult correlation_analysis(const Circuit &block, const NoiseModel &model, const CorrelationConfig &cfg) {
    const int n = block.num_qubits;
    if (cfg.k < 1 || cfg.shots == 0) throw std::invalid_argument("k and shots must be positive");
    for (const auto &x : cfg.crosstalk) {
        if (x.a < 0 || x.b < 0 || x.a >= n || x.b >= n || x.a == x.b)
            throw std::invalid_argument("crosstalk pair outside the block");
        if (!(x.p >= 0 && x.p <= 0.75)) throw std::invalid_argument("crosstalk probability outside [0,0.75]");
    }
    std::vector<double> ones(n, 0);
    std::vector<std::vector<double>> both(n, std::vector<double>(n, 0));
    for (int r = 0; r < cfg.k; r++) {
        Rng rng = make_rng(cfg.seed, kStreamTwirl, (uint64_t)r);
        std::vector<int> cl(n);
        std::vector<uint8_t> px(n), pz(n);
        for (int q = 0; q < n; q++) {
            cl[q] = random_clifford(rng);
            px[q] = coin(rng);
            pz[q] = coin(rng);
        }
        int middle = 0;
        Circuit c = mirrored_impl(block, cfg.m, cl, px, pz, &middle);
        NoisyCircuit nc = annotate(c, model);
        for (const auto &x : cfg.crosstalk) nc.channels.push_back({middle, ChannelKind::Depolarize2, {x.a, x.b}, x.p});
        std::stable_sort(nc.channels.begin(), nc.channels.end(),
                         [](const Channel &a, const Channel &b) { return a.position < b.position; });
        FrameBatch fb = sample(nc, cfg.shots, derive_seed(cfg.seed, kStreamFrames, (uint64_t)r), cfg.workers);
        const uint64_t tail = (cfg.shots & 63) ? ((1ULL << (cfg.shots & 63)) - 1) : ~0ULL;
        auto word = [&](int q, size_t w) { return fb.row(q)[w] & (w + 1 == fb.words ? tail : ~0ULL); };
        for (int a = 0; a < n; a++) {
            for (size_t w = 0; w < fb.words; w++) ones[a] += std::popcount(word(a, w));
            for (int b = a + 1; b < n; b++) {
                size_t cnt = 0;
                for (size_t w = 0; w < fb.words; w++) cnt += std::popcount(word(a, w) & word(b, w));
                both[a][b] += (double)cnt;
            }
        }
    }
    CorrelationResult res;
    res.num_qubits = n;
    res.total_shots = cfg.shots * (size_t)cfg.k;
    const double N = (double)res.total_shots;
    res.marginal_fidelity.resize(n);
    res.correlation.assign(n, std::vector<double>(n, 0));
    res.mutual_information.assign(n, std::vector<double>(n, 0));
    for (int a = 0; a < n; a++) {
        res.marginal_fidelity[a] = 1 - ones[a] / N;
        res.correlation[a][a] = 1;
    }
    const double pairs = n * (n - 1) / 2.0;
    res.p_threshold = pairs > 0 ? cfg.alpha / pairs : cfg.alpha;
    for (int a = 0; a < n; a++) {
        for (int b = a + 1; b < n; b++) {
            double fa = ones[a] / N, fb = ones[b] / N, f11 = both[a][b] / N;
            double den = std::sqrt(fa * (1 - fa) * fb * (1 - fb));
            double rho = den > 0 ? (f11 - fa * fb) / den : 0;
            res.correlation[a][b] = rho;
            res.correlation[b][a] = rho;
            double cell[2][2] = {{1 - fa - fb + f11, fb - f11}, {fa - f11, f11}};
            double ma[2] = {1 - fa, fa}, mb[2] = {1 - fb, fb};
            double info = 0;
            for (int i = 0; i < 2; i++) {
                for (int j = 0; j < 2; j++) {
                    if (cell[i][j] > 0) info += cell[i][j] * std::log(cell[i][j] / (ma[i] * mb[j]));
                }
            }
            info = std::max(0.0, info);
            res.mutual_information[a][b] = res.mutual_information[b][a] = info / std::log(2.0);
            double g = 2 * N * info;
            double pv = gsl_cdf_chisq_Q(g, 1);
            if (pv < res.p_threshold) res.edges.push_back({a, b, info / std::log(2.0), g, pv});
        }
    }
    return res;
}

nlohmann::json correlation_to_json(const CorrelationResult &r) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto &e : r.edges)
        edges.push_back({{"a", e.a}, {"b", e.b}, {"mi_bits", e.mi}, {"g", e.g}, {"p_value", e.p_value}});
    return {{"num_qubits", r.num_qubits},
            {"total_shots", r.total_shots},
            {"marginal_fidelity", r.marginal_fidelity},
            {"correlation", r.correlation},
            {"mutual_information_bits", r.mutual_information},
            {"p_threshold", r.p_threshold},
            {"edges", edges}};
}

}  // namespace hhqec
