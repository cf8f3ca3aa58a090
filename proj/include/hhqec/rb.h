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

#ifndef HHQEC_RB_H
#define HHQEC_RB_H

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hhqec/circuit.h"
#include "hhqec/experiments.h"
#include "hhqec/noise.h"
#include "hhqec/sim.h"
#include "json.hpp"

namespace hhqec {

// ---- single-qubit Clifford group ----

inline constexpr int kNumCliffords = 24;

/// Unitary of Clifford `i`. Index 0 is the identity; the rest follow breadth-first order over
/// words in {H, S}.
const Eigen::Matrix2cd &clifford_unitary(int i);
/// Shortest {H, S} word for Clifford `i`, first gate first.
const std::vector<Op> &clifford_gates(int i);
/// Index of U_b * U_a (a applied first).
int clifford_compose(int a, int b);
int clifford_inverse(int i);
/// Index of `u` up to global phase, or -1.
int clifford_index_of(const Eigen::Matrix2cd &u);
int clifford_x();
int clifford_z();

// ---- sequences ----

enum class MidVariant { ReturnToTarget, AlwaysZero, AlwaysOne, DelayOnly, RandomizePreMeasure };
const char *mid_variant_name(MidVariant v);
/// Accepts the names printed by mid_variant_name; throws std::invalid_argument otherwise.
MidVariant mid_variant_from_name(const std::string &s);

struct QubitSequence {
    int qubit = 0;
    bool x = false;         // initial X gate; the sequence returns to |x>
    bool measured = false;  // measured mid-circuit (mid-circuit RB only)
    /// Plain RB: one segment of m Cliffords. Mid-circuit RB: one segment per round, each
    /// followed by a measurement layer.
    std::vector<std::vector<int>> segments;
    std::vector<uint8_t> z_flags;  // random Z after each mid-circuit measurement
    int inverse = 0;               // closing Clifford

    bool operator==(const QubitSequence &o) const = default;
};

struct RbSequence {
    int m = 0;
    int k_index = 0;
    bool midcircuit = false;
    MidVariant variant = MidVariant::ReturnToTarget;
    std::vector<QubitSequence> qubits;

    bool operator==(const RbSequence &o) const = default;
};

/// For each m (ascending), k sequences of m random Cliffords per qubit plus the inverting
/// Clifford, each qubit with its own random target x.
std::vector<RbSequence> gen_simultaneous_rb(const std::vector<int> &qubits, const std::vector<int> &ms, int k,
                                            uint64_t seed);

/// Rounds of `cliffords_per_segment` Cliffords followed by a measurement layer on `measured`
/// (a delay of equal length for DelayOnly) while spectators idle. The last Clifford of each
/// segment steers the qubit into the variant's pre-measurement state.
std::vector<RbSequence> gen_midcircuit_rb(const std::vector<int> &measured, const std::vector<int> &spectators,
                                          const std::vector<int> &ms, int k, MidVariant variant, uint64_t seed,
                                          int cliffords_per_segment = 4);

/// One frozen randomization (single m) for repeated runs.
std::vector<RbSequence> gen_temporal_consistency(uint64_t seed, const std::vector<int> &qubits, int m, int k);

/// Noiseless check that every qubit's sequence returns to |x>.
bool sequence_inverts(const RbSequence &s);

// ---- device execution ----

struct DeviceParams {
    std::map<int, QubitDevice> qubits;
    double clifford_ns = 75;  // one Clifford counts as one gate

    const QubitDevice &get(int q) const;
    std::vector<std::string> violations() const;
};

DeviceParams uniform_device(const std::vector<int> &qubits, const QubitDevice &dev, double clifford_ns = 75);
nlohmann::json device_to_json(const DeviceParams &d);
DeviceParams device_from_json(const nlohmann::json &j);

/// Single-qubit operation list for one qubit of a sequence.
std::vector<QubitOp> qubit_program(const RbSequence &s, const QubitSequence &q, const DeviceParams &dev);

struct SurvivalRecord {
    int qubit = 0;
    int m = 0;
    int sequence = 0;
    bool x = false;
    double survival = 0;
    size_t shots = 0;

    bool operator==(const SurvivalRecord &o) const = default;
};

/// Exact density-matrix probabilities, then binomial shot noise. Identical for any worker count.
std::vector<SurvivalRecord> run_rb(const std::vector<RbSequence> &seqs, const DeviceParams &dev, size_t shots,
                                   uint64_t seed, int workers = 0);

void write_survival_csv(const std::vector<SurvivalRecord> &r, const std::string &path);
std::vector<SurvivalRecord> read_survival_csv(const std::string &path);

struct RbPoint {
    int m;
    double mean;   // survival averaged over sequences
    double sigma;  // standard error of the mean
    int sequences;
};

struct RbFit {
    int qubit = 0;
    DecayFit fit;  // survival = A p^m + 0.5
    std::vector<RbPoint> points;
};

/// Per-qubit fit of the sequence-averaged survival. A qubit with fewer than three distinct m
/// values, or a failed fit, gets ok=false without affecting the others.
std::vector<RbFit> fit_rb(const std::vector<SurvivalRecord> &records);
nlohmann::json rb_fits_to_json(const std::vector<RbFit> &fits);

/// Per-Clifford decay of the Pauli-twirled relaxation over `ns`.
double twirled_damping(double ns, const QubitDevice &dev);

// ---- temporal consistency ----

struct TemporalFlag {
    int qubit;
    int m;
    int sequence;
    double a, b;  // survivals in the two runs
    double z;
};

struct TemporalReport {
    double threshold_z = 0;
    size_t comparisons = 0;
    std::vector<TemporalFlag> flags;
    std::map<int, double> max_abs_z;  // per qubit

    bool flagged(int qubit) const;
};

/// Two-proportion z test per (qubit, sequence). The threshold is the larger of `min_z` and the
/// Bonferroni bound for family-wise level `alpha`.
TemporalReport compare_runs(const std::vector<SurvivalRecord> &a, const std::vector<SurvivalRecord> &b,
                            double alpha = 0.01, double min_z = 3.0);
nlohmann::json temporal_to_json(const TemporalReport &r);

// ---- correlation analysis ----

struct Crosstalk {
    int a, b;
    double p;  // two-qubit depolarizing probability
};

struct CorrelationConfig {
    int m = 1;             // block repetitions on each side of the Pauli layer
    int k = 20;            // twirl randomizations
    size_t shots = 5000;   // per randomization
    uint64_t seed = 0;
    double alpha = 1e-3;   // family-wise level for edges
    std::vector<Crosstalk> crosstalk;
    int workers = 0;
};

struct MiEdge {
    int a, b;
    double mi;  // bits
    double g;
    double p_value;
};

struct CorrelationResult {
    int num_qubits = 0;
    size_t total_shots = 0;
    std::vector<double> marginal_fidelity;
    std::vector<std::vector<double>> correlation;  // Pearson, diagonal 1
    std::vector<std::vector<double>> mutual_information;
    double p_threshold = 0;
    std::vector<MiEdge> edges;
};

/// Mirror of a unitary block: U^m, random Pauli, U^-m, wrapped in a random single-qubit Clifford
/// layer and its inverse, then Z readout of every qubit. Non-unitary instructions are rejected.
Circuit mirrored_circuit(const Circuit &block, int m, const std::vector<int> &cliffords,
                         const std::vector<uint8_t> &pauli_x, const std::vector<uint8_t> &pauli_z);

/// Unitary layers of the improved syndrome cycle.
Circuit syndrome_block(const Patch &patch);

CorrelationResult correlation_analysis(const Circuit &block, const NoiseModel &model, const CorrelationConfig &cfg);
nlohmann::json correlation_to_json(const CorrelationResult &r);

}  // namespace hhqec

#endif
