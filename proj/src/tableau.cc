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

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "hhqec/sim.h"

namespace hhqec {

Tableau::Tableau(int n) : n_(n), w_((n + 63) / 64) {
    int rows = 2 * n + 1;
    xs_.assign((size_t)rows * w_, 0);
    zs_.assign((size_t)rows * w_, 0);
    r_.assign(rows, 0);
    for (int i = 0; i < n; i++) {
        xs_[i * w_ + (i >> 6)] |= 1ULL << (i & 63);
        zs_[(i + n) * w_ + (i >> 6)] |= 1ULL << (i & 63);
    }
}

void Tableau::h(int q) {
    int k = q >> 6;
    uint64_t m = 1ULL << (q & 63);
    for (int i = 0; i < 2 * n_; i++) {
        uint64_t &x = xs_[i * w_ + k], &z = zs_[i * w_ + k];
        r_[i] ^= (x & z & m) != 0;
        uint64_t t = (x ^ z) & m;
        x ^= t;
        z ^= t;
    }
}

void Tableau::s(int q) {
    int k = q >> 6;
    uint64_t m = 1ULL << (q & 63);
    for (int i = 0; i < 2 * n_; i++) {
        uint64_t &x = xs_[i * w_ + k], &z = zs_[i * w_ + k];
        r_[i] ^= (x & z & m) != 0;
        z ^= x & m;
    }
}

void Tableau::cx(int c, int t) {
    for (int i = 0; i < 2 * n_; i++) {
        bool xc = bx(i, c), zc = bz(i, c), xt = bx(i, t), zt = bz(i, t);
        r_[i] ^= xc && zt && (xt == zc);
        if (xc) xs_[i * w_ + (t >> 6)] ^= 1ULL << (t & 63);
        if (zt) zs_[i * w_ + (c >> 6)] ^= 1ULL << (c & 63);
    }
}

void Tableau::x(int q) {
    for (int i = 0; i < 2 * n_; i++) r_[i] ^= bz(i, q);
}

void Tableau::z(int q) {
    for (int i = 0; i < 2 * n_; i++) r_[i] ^= bx(i, q);
}

void Tableau::rowsum(int h, int i) {
    int sum = 2 * r_[h] + 2 * r_[i];
    for (int k = 0; k < w_; k++) {
        uint64_t x1 = xs_[i * w_ + k], z1 = zs_[i * w_ + k];
        uint64_t x2 = xs_[h * w_ + k], z2 = zs_[h * w_ + k];
        uint64_t plus = (x1 & z1 & ~x2 & z2) | (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2);
        uint64_t minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & ~x2 & z2) | (~x1 & z1 & x2 & z2);
        sum += std::popcount(plus) - std::popcount(minus);
        xs_[h * w_ + k] = x1 ^ x2;
        zs_[h * w_ + k] = z1 ^ z2;
    }
    r_[h] = (((sum % 4) + 4) % 4) == 2;
}

void Tableau::rowcopy(int dst, int src) {
    std::copy_n(xs_.begin() + src * w_, w_, xs_.begin() + dst * w_);
    std::copy_n(zs_.begin() + src * w_, w_, zs_.begin() + dst * w_);
    r_[dst] = r_[src];
}

void Tableau::rowclear(int row) {
    std::fill_n(xs_.begin() + row * w_, w_, 0);
    std::fill_n(zs_.begin() + row * w_, w_, 0);
    r_[row] = 0;
}

void Tableau::rowswap(int a, int b) {
    std::swap_ranges(xs_.begin() + a * w_, xs_.begin() + (a + 1) * w_, xs_.begin() + b * w_);
    std::swap_ranges(zs_.begin() + a * w_, zs_.begin() + (a + 1) * w_, zs_.begin() + b * w_);
    std::swap(r_[a], r_[b]);
}

std::vector<std::string> Tableau::canonical_stabilizers() const {
    Tableau t = *this;
    int row = t.n_;
    // X pivots first, then Z pivots on the remaining rows.
    for (int pass = 0; pass < 2; pass++) {
        for (int q = 0; q < t.n_ && row < 2 * t.n_; q++) {
            int piv = -1;
            for (int i = row; i < 2 * t.n_; i++) {
                if (pass == 0 ? t.bx(i, q) : t.bz(i, q)) {
                    piv = i;
                    break;
                }
            }
            if (piv < 0) continue;
            t.rowswap(piv, row);
            for (int i = t.n_; i < 2 * t.n_; i++) {
                if (i != row && (pass == 0 ? t.bx(i, q) : t.bz(i, q))) t.rowsum(i, row);
            }
            row++;
        }
    }
    std::vector<std::string> out;
    for (int i = 0; i < t.n_; i++) out.push_back(t.stabilizer(i));
    return out;
}

bool Tableau::is_deterministic(int q) const {
    for (int i = n_; i < 2 * n_; i++) {
        if (bx(i, q)) return false;
    }
    return true;
}

int Tableau::measure(int q, int coin, bool *deterministic) {
    int p = -1;
    for (int i = n_; i < 2 * n_ && p < 0; i++) {
        if (bx(i, q)) p = i;
    }
    if (p >= 0) {
        for (int i = 0; i < 2 * n_; i++) {
            if (i != p && bx(i, q)) rowsum(i, p);
        }
        rowcopy(p - n_, p);
        rowclear(p);
        zs_[p * w_ + (q >> 6)] |= 1ULL << (q & 63);
        r_[p] = coin & 1;
        if (deterministic) *deterministic = false;
        return coin & 1;
    }
    int s = 2 * n_;
    rowclear(s);
    for (int i = 0; i < n_; i++) {
        if (bx(i, q)) rowsum(s, i + n_);
    }
    if (deterministic) *deterministic = true;
    return r_[s];
}

int Tableau::reset(int q, int coin, bool *deterministic) {
    int m = measure(q, coin, deterministic);
    if (m) x(q);
    return m;
}

std::string Tableau::stabilizer(int i) const {
    std::string s(1, r_[n_ + i] ? '-' : '+');
    for (int q = 0; q < n_; q++) {
        bool x = bx(n_ + i, q), z = bz(n_ + i, q);
        s += x ? (z ? 'Y' : 'X') : (z ? 'Z' : '_');
    }
    return s;
}

bool Tableau::operator==(const Tableau &o) const { return n_ == o.n_ && xs_ == o.xs_ && zs_ == o.zs_ && r_ == o.r_; }

namespace {

void apply_gate(Tableau &t, const Instruction &in) {
    switch (in.op) {
        case Op::H:
            for (int q : in.targets) t.h(q);
            break;
        case Op::S:
            for (int q : in.targets) t.s(q);
            break;
        case Op::CX: t.cx(in.targets[0], in.targets[1]); break;
        case Op::PauliX:
            for (int q : in.targets) t.x(q);
            break;
        case Op::PauliZ:
            for (int q : in.targets) t.z(q);
            break;
        default: break;
    }
}

void apply_pauli(Tableau &t, int q, int pauli) {
    // pauli: bit 0 is X, bit 1 is Z.
    if (pauli & 1) t.x(q);
    if (pauli & 2) t.z(q);
}

}  // namespace

ReferenceResult reference_run(const Circuit &c, const std::vector<uint8_t> &coins) {
    ReferenceResult res;
    res.final_state = Tableau(c.num_qubits);
    Tableau &t = res.final_state;
    int event = 0;
    auto coin = [&]() { return event < (int)coins.size() ? coins[event] : 0; };
    for (const auto &in : c.instructions) {
        switch (in.op) {
            case Op::MeasureZ:
                for (int q : in.targets) {
                    bool det;
                    int m = t.measure(q, coin(), &det);
                    if (!det) event++;
                    res.bits.push_back(m);
                    res.nondeterministic.push_back(!det);
                }
                break;
            case Op::ResetZ:
                for (int q : in.targets) {
                    bool det;
                    t.reset(q, coin(), &det);
                    if (!det) event++;
                }
                break;
            case Op::Tick:
            case Op::Delay: break;
            default: apply_gate(t, in);
        }
    }
    res.random_events = event;
    return res;
}

std::vector<std::vector<uint8_t>> outcome_dependence(const Circuit &c) {
    ReferenceResult base = reference_run(c);
    std::vector<std::vector<uint8_t>> cols;
    for (int k = 0; k < base.random_events; k++) {
        std::vector<uint8_t> coins(base.random_events, 0);
        coins[k] = 1;
        auto r = reference_run(c, coins);
        std::vector<uint8_t> col(base.bits.size());
        for (size_t i = 0; i < col.size(); i++) col[i] = r.bits[i] ^ base.bits[i];
        cols.push_back(std::move(col));
    }
    return cols;
}

FrameBatch sample_tableau(const NoisyCircuit &nc, size_t shots, uint64_t seed) {
    const Circuit &c = nc.base;
    ReferenceResult ref = reference_run(c);
    FrameBatch out(c.num_records(), shots);
    std::uniform_real_distribution<double> unif(0, 1);
    std::vector<uint8_t> rec;
    for (size_t s = 0; s < shots; s++) {
        Rng rng = make_rng(seed, 2, s);
        Tableau t(c.num_qubits);
        rec.clear();
        size_t ch = 0;
        auto channels_at = [&](size_t pos) {
            for (; ch < nc.channels.size() && nc.channels[ch].position == (int)pos; ch++) {
                const Channel &k = nc.channels[ch];
                if (k.p <= 0) continue;
                switch (k.kind) {
                    case ChannelKind::Depolarize1:
                    case ChannelKind::IdleDepolarize:
                        for (int q : k.targets) {
                            if (unif(rng) < k.p) apply_pauli(t, q, 1 + (int)(rng() % 3));
                        }
                        break;
                    case ChannelKind::Depolarize2:
                        for (size_t i = 0; i + 1 < k.targets.size(); i += 2) {
                            if (unif(rng) < k.p) {
                                int pp = 1 + (int)(rng() % 15);
                                apply_pauli(t, k.targets[i], pp & 3);
                                apply_pauli(t, k.targets[i + 1], pp >> 2);
                            }
                        }
                        break;
                    case ChannelKind::XBeforeMeasure:
                    case ChannelKind::XAfterReset:
                        for (int q : k.targets) {
                            if (unif(rng) < k.p) t.x(q);
                        }
                        break;
                    case ChannelKind::RecordFlip:
                        for (int r : k.targets) {
                            if (unif(rng) < k.p) rec[r] ^= 1;
                        }
                        break;
                }
            }
        };
        for (size_t i = 0; i <= c.instructions.size(); i++) {
            channels_at(i);
            if (i == c.instructions.size()) break;
            const Instruction &in = c.instructions[i];
            if (in.op == Op::MeasureZ) {
                for (int q : in.targets) rec.push_back(t.measure(q, rng() & 1));
            } else if (in.op == Op::ResetZ) {
                for (int q : in.targets) t.reset(q, rng() & 1);
            } else {
                apply_gate(t, in);
            }
        }
        for (size_t r = 0; r < rec.size(); r++) {
            if (rec[r] ^ ref.bits[r]) out.flip(r, s);
        }
    }
    return out;
}

}  // namespace hhqec
