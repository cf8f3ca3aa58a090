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

#ifndef HHQEC_SIM_H
#define HHQEC_SIM_H

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hhqec/noise.h"
#include "hhqec/rng.h"

namespace hhqec {

/// Stabilizer tableau with destabilizers; bit-packed rows.
class Tableau {
   public:
    explicit Tableau(int n = 0);

    int num_qubits() const { return n_; }
    void h(int q);
    void s(int q);
    void cx(int c, int t);
    void x(int q);
    void z(int q);
    /// Z measurement. A random outcome takes the value `coin`.
    int measure(int q, int coin, bool *deterministic = nullptr);
    /// Measure and conditionally flip back to |0>. Returns the internal outcome.
    int reset(int q, int coin, bool *deterministic = nullptr);
    bool is_deterministic(int q) const;
    /// Stabilizer row i as a string like "+XZ_Y".
    std::string stabilizer(int i) const;
    /// Stabilizer generators in reduced row-echelon form. Equal iff the states are equal.
    std::vector<std::string> canonical_stabilizers() const;
    bool operator==(const Tableau &o) const;

   private:
    bool bx(int row, int q) const { return (xs_[row * w_ + (q >> 6)] >> (q & 63)) & 1; }
    bool bz(int row, int q) const { return (zs_[row * w_ + (q >> 6)] >> (q & 63)) & 1; }
    void rowsum(int h, int i);
    void rowcopy(int dst, int src);
    void rowclear(int row);
    void rowswap(int a, int b);

    int n_;
    int w_;
    std::vector<uint64_t> xs_, zs_;
    std::vector<uint8_t> r_;
};

/// Records x shots bit table, packed 64 shots per word.
struct FrameBatch {
    size_t num_rows = 0;
    size_t shots = 0;
    size_t words = 0;
    std::vector<uint64_t> bits;

    FrameBatch() = default;
    FrameBatch(size_t rows, size_t shots_);
    bool get(size_t row, size_t shot) const { return (bits[row * words + (shot >> 6)] >> (shot & 63)) & 1; }
    void flip(size_t row, size_t shot) { bits[row * words + (shot >> 6)] ^= 1ULL << (shot & 63); }
    uint64_t *row(size_t r) { return bits.data() + r * words; }
    const uint64_t *row(size_t r) const { return bits.data() + r * words; }
    double fraction(size_t row) const;
    bool operator==(const FrameBatch &o) const = default;
};

struct ReferenceResult {
    std::vector<uint8_t> bits;           // one per measurement record
    std::vector<uint8_t> nondeterministic;
    int random_events = 0;               // random measurements and resets, in order
    Tableau final_state;
};

/// Noiseless run. Random outcomes take the value from `coins` (0 when absent or short).
ReferenceResult reference_run(const Circuit &c, const std::vector<uint8_t> &coins = {});

/// For each random event k, the records that flip when its coin flips. Records are affine in
/// the coins, so these columns determine which record parities are deterministic.
std::vector<std::vector<uint8_t>> outcome_dependence(const Circuit &c);

/// Full stabilizer simulation per shot; record flips relative to reference_run. Serial.
FrameBatch sample_tableau(const NoisyCircuit &nc, size_t shots, uint64_t seed);

/// Bit-packed Pauli-frame sampler. Blocks of 64 shots run on OpenMP threads; each block draws
/// from its own keyed generator so output is identical for any worker count.
FrameBatch sample(const NoisyCircuit &nc, size_t shots, uint64_t seed, int workers = 0);
/// Same kernel on one thread, kept as the reference for the parallel path.
FrameBatch sample_serial(const NoisyCircuit &nc, size_t shots, uint64_t seed);

/// A single Pauli on the frame: kind is 'X', 'Y' or 'Z'.
struct PauliTerm {
    int qubit;
    char kind;
};

/// Noiseless frame propagation of one fault placed before instruction `position`, or a flip of
/// record `flip_record`. Returns the flipped records.
std::vector<uint8_t> inject_fault(const Circuit &c, int position, const std::vector<PauliTerm> &fault,
                                  int flip_record = -1);

/// Binary layout: "HHQF", u32 version 1, u64 rows, u64 shots, then rows*ceil(shots/64) u64 words.
void write_batch_binary(const FrameBatch &b, const std::string &path);
FrameBatch read_batch_binary(const std::string &path);
/// CSV with columns record,event_fraction.
void write_batch_csv_summary(const FrameBatch &b, const std::string &path);

// ---- single-qubit density-matrix device model ----

struct QubitDevice {
    double t1_us = 197.36;
    double t2_us = 118.43;
    double gate_error = 0;   // depolarizing probability after each gate
    double p_read1_given0 = 0;
    double p_read0_given1 = 0;
    double meas_ns = 2000;
    double excitation = 0;   // steady-state excited population
};

struct QubitOp {
    enum Kind { Gate, Delay, Measure, Depolarize } kind = Delay;
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
    double ns = 0;
    double lambda = 0;
    bool recorded = true;
    bool noisy = true;  // false for virtual (frame-change) gates
};

using Density = Eigen::Matrix2cd;

/// Closed-form relaxation: populations relax at 1/T1, coherences decay at 1/T2.
Density relax(const Density &rho, double ns, const QubitDevice &dev);

/// Evolves |0><0| through `seq`. Returns P(read 1) for each recorded measurement.
std::vector<double> density_run(const std::vector<QubitOp> &seq, const QubitDevice &dev);

}  // namespace hhqec

#endif
