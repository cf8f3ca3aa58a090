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

#include <bit>
#include <fstream>
#include <stdexcept>

#include <omp.h>

#include "hhqec/sim.h"

namespace hhqec {

FrameBatch::FrameBatch(size_t rows, size_t shots_)
    : num_rows(rows), shots(shots_), words((shots_ + 63) / 64), bits(rows * ((shots_ + 63) / 64), 0) {}

double FrameBatch::fraction(size_t r) const {
    if (shots == 0) return 0;
    size_t n = 0;
    for (size_t k = 0; k < words; k++) n += std::popcount(row(r)[k]);
    return (double)n / (double)shots;
}

namespace {

enum class FK : uint8_t { H, S, CX, Measure, Reset, Dep1, Dep2, XErr, RecFlip };

struct FOp {
    FK k;
    std::vector<int> t;
    double p = 0;
};

struct Program {
    int num_qubits = 0;
    size_t num_records = 0;
    std::vector<FOp> ops;
};

Program compile(const NoisyCircuit &nc) {
    const Circuit &c = nc.base;
    Program prog{c.num_qubits, c.num_records(), {}};
    size_t ch = 0;
    for (size_t i = 0; i <= c.instructions.size(); i++) {
        for (; ch < nc.channels.size() && nc.channels[ch].position == (int)i; ch++) {
            const Channel &k = nc.channels[ch];
            if (k.p <= 0) continue;
            FK kind = FK::Dep1;
            switch (k.kind) {
                case ChannelKind::Depolarize1:
                case ChannelKind::IdleDepolarize: kind = FK::Dep1; break;
                case ChannelKind::Depolarize2: kind = FK::Dep2; break;
                case ChannelKind::XBeforeMeasure:
                case ChannelKind::XAfterReset: kind = FK::XErr; break;
                case ChannelKind::RecordFlip: kind = FK::RecFlip; break;
            }
            prog.ops.push_back({kind, k.targets, k.p});
        }
        if (i == c.instructions.size()) break;
        const Instruction &in = c.instructions[i];
        switch (in.op) {
            case Op::H: prog.ops.push_back({FK::H, in.targets}); break;
            case Op::S: prog.ops.push_back({FK::S, in.targets}); break;
            case Op::CX: prog.ops.push_back({FK::CX, in.targets}); break;
            case Op::MeasureZ: prog.ops.push_back({FK::Measure, in.targets}); break;
            case Op::ResetZ: prog.ops.push_back({FK::Reset, in.targets}); break;
            default: break;  // Paulis commute with the frame up to sign; Delay and Tick are no-ops.
        }
    }
    return prog;
}

// Calls f(index) for each of n Bernoulli(p) trials that fire, via geometric gaps.
template <typename F>
void for_each_hit(Rng &rng, size_t n, double p, F f) {
    if (p >= 1) {
        for (size_t i = 0; i < n; i++) f(i);
        return;
    }
    std::geometric_distribution<size_t> geo(p);
    for (size_t i = geo(rng); i < n; i += geo(rng) + 1) f(i);
}

// One 64-shot block. Writes record word `block` of `out`.
void run_block(const Program &prog, uint64_t seed, size_t block, uint64_t mask, FrameBatch &out,
               std::vector<uint64_t> &x, std::vector<uint64_t> &z, std::vector<uint64_t> &rec) {
    Rng rng = make_rng(seed, 0x5A, block);
    x.assign(prog.num_qubits, 0);
    z.assign(prog.num_qubits, 0);
    rec.assign(prog.num_records, 0);
    // Initial state |0...0> is a Z eigenstate: randomize the Z frame.
    for (int q = 0; q < prog.num_qubits; q++) z[q] = rng();
    size_t r = 0;
    for (const FOp &op : prog.ops) {
        switch (op.k) {
            case FK::H:
                for (int q : op.t) std::swap(x[q], z[q]);
                break;
            case FK::S:
                for (int q : op.t) z[q] ^= x[q];
                break;
            case FK::CX:
                for (size_t i = 0; i + 1 < op.t.size(); i += 2) {
                    int c = op.t[i], t = op.t[i + 1];
                    x[t] ^= x[c];
                    z[c] ^= z[t];
                }
                break;
            case FK::Measure:
                for (int q : op.t) {
                    rec[r++] = x[q];
                    z[q] = rng();
                }
                break;
            case FK::Reset:
                for (int q : op.t) {
                    x[q] = 0;
                    z[q] = rng();
                }
                break;
            case FK::Dep1:
                for_each_hit(rng, op.t.size() * 64, op.p, [&](size_t i) {
                    int q = op.t[i >> 6];
                    uint64_t b = 1ULL << (i & 63);
                    int pp = 1 + (int)(rng() % 3);
                    if (pp & 1) x[q] ^= b;
                    if (pp & 2) z[q] ^= b;
                });
                break;
            case FK::Dep2:
                for_each_hit(rng, op.t.size() / 2 * 64, op.p, [&](size_t i) {
                    int a = op.t[2 * (i >> 6)], c = op.t[2 * (i >> 6) + 1];
                    uint64_t b = 1ULL << (i & 63);
                    int pp = 1 + (int)(rng() % 15);
                    if (pp & 1) x[a] ^= b;
                    if (pp & 2) z[a] ^= b;
                    if (pp & 4) x[c] ^= b;
                    if (pp & 8) z[c] ^= b;
                });
                break;
            case FK::XErr:
                for_each_hit(rng, op.t.size() * 64, op.p,
                             [&](size_t i) { x[op.t[i >> 6]] ^= 1ULL << (i & 63); });
                break;
            case FK::RecFlip:
                for_each_hit(rng, op.t.size() * 64, op.p,
                             [&](size_t i) { rec[op.t[i >> 6]] ^= 1ULL << (i & 63); });
                break;
        }
    }
    for (size_t k = 0; k < prog.num_records; k++) out.bits[k * out.words + block] = rec[k] & mask;
}

uint64_t block_mask(size_t shots, size_t block) {
    size_t rem = shots - block * 64;
    return rem >= 64 ? ~0ULL : ((1ULL << rem) - 1);
}

}  // namespace

FrameBatch sample(const NoisyCircuit &nc, size_t shots, uint64_t seed, int workers) {
    Program prog = compile(nc);
    FrameBatch out(prog.num_records, shots);
    long long blocks = (long long)out.words;
    int nt = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
    {
        std::vector<uint64_t> x, z, rec;
#pragma omp for schedule(dynamic, 4)
        for (long long b = 0; b < blocks; b++) run_block(prog, seed, b, block_mask(shots, b), out, x, z, rec);
    }
    return out;
}

FrameBatch sample_serial(const NoisyCircuit &nc, size_t shots, uint64_t seed) {
    Program prog = compile(nc);
    FrameBatch out(prog.num_records, shots);
    std::vector<uint64_t> x, z, rec;
    for (size_t b = 0; b < out.words; b++) run_block(prog, seed, b, block_mask(shots, b), out, x, z, rec);
    return out;
}

std::vector<uint8_t> inject_fault(const Circuit &c, int position, const std::vector<PauliTerm> &fault,
                                  int flip_record) {
    std::vector<uint8_t> x(c.num_qubits, 0), z(c.num_qubits, 0), rec;
    rec.reserve(c.num_records());
    for (size_t i = 0; i <= c.instructions.size(); i++) {
        if ((int)i == position) {
            for (const auto &f : fault) {
                if (f.kind == 'X' || f.kind == 'Y') x[f.qubit] ^= 1;
                if (f.kind == 'Z' || f.kind == 'Y') z[f.qubit] ^= 1;
            }
        }
        if (i == c.instructions.size()) break;
        const Instruction &in = c.instructions[i];
        switch (in.op) {
            case Op::H:
                for (int q : in.targets) std::swap(x[q], z[q]);
                break;
            case Op::S:
                for (int q : in.targets) z[q] ^= x[q];
                break;
            case Op::CX:
                x[in.targets[1]] ^= x[in.targets[0]];
                z[in.targets[0]] ^= z[in.targets[1]];
                break;
            case Op::MeasureZ:
                for (int q : in.targets) {
                    rec.push_back(x[q]);
                    z[q] = 0;
                }
                break;
            case Op::ResetZ:
                for (int q : in.targets) x[q] = z[q] = 0;
                break;
            default: break;
        }
    }
    if (flip_record >= 0) rec.at(flip_record) ^= 1;
    return rec;
}

void write_batch_binary(const FrameBatch &b, const std::string &path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    uint32_t version = 1;
    uint64_t rows = b.num_rows, shots = b.shots;
    f.write("HHQF", 4);
    f.write(reinterpret_cast<const char *>(&version), 4);
    f.write(reinterpret_cast<const char *>(&rows), 8);
    f.write(reinterpret_cast<const char *>(&shots), 8);
    f.write(reinterpret_cast<const char *>(b.bits.data()), b.bits.size() * 8);
}

FrameBatch read_batch_binary(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    char magic[4];
    uint32_t version;
    uint64_t rows, shots;
    f.read(magic, 4);
    f.read(reinterpret_cast<char *>(&version), 4);
    f.read(reinterpret_cast<char *>(&rows), 8);
    f.read(reinterpret_cast<char *>(&shots), 8);
    if (!f || std::string(magic, 4) != "HHQF" || version != 1) throw std::runtime_error("bad batch file " + path);
    FrameBatch b(rows, shots);
    f.read(reinterpret_cast<char *>(b.bits.data()), b.bits.size() * 8);
    if (!f) throw std::runtime_error("truncated batch file " + path);
    return b;
}

void write_batch_csv_summary(const FrameBatch &b, const std::string &path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "record,event_fraction\n";
    for (size_t r = 0; r < b.num_rows; r++) f << r << ',' << b.fraction(r) << '\n';
}

}  // namespace hhqec
