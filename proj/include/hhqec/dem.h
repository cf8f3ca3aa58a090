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

#ifndef HHQEC_DEM_H
#define HHQEC_DEM_H

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hhqec/circuit.h"
#include "hhqec/lattice.h"
#include "hhqec/noise.h"
#include "hhqec/sim.h"

namespace hhqec {

struct DetectorConvention {
    enum Mode { Reset, NoReset } mode = Reset;
    int lookback = 1;

    static DetectorConvention reset() { return {Reset, 1}; }
    static DetectorConvention no_reset() { return {NoReset, 2}; }
    /// The convention matching an assembled circuit.
    static DetectorConvention for_circuit(const Circuit &c) { return c.meta.reset ? reset() : no_reset(); }
};

struct DetectorSpec {
    int id;
    std::vector<int> records;  // XOR set, sorted
    int round;
    int stabilizer;            // index into Patch::stabilizers, or -1 for a flag detector
    char type;                 // 'X', 'Z' or 'F' (flag)
};

struct ObservableBinding {
    ObsKind kind;
    std::vector<int> records;
};

struct DetectorSet {
    DetectorConvention convention;
    size_t num_records = 0;
    std::vector<DetectorSpec> detectors;
    std::vector<ObservableBinding> observables;
    /// Rounds without full stabilizer information; a fitter should skip them.
    std::vector<int> incomplete_rounds;
};

/// Detectors and observables for an assembled memory or stability circuit.
/// Throws std::invalid_argument when the convention does not match the circuit.
DetectorSet define_detectors(const Circuit &c, const Patch &patch, DetectorConvention conv);

/// One message per detector or observable that is not deterministic under zero noise.
std::vector<std::string> check_determinism(const Circuit &c, const DetectorSet &ds);

/// Detector rows followed by observable rows, from record-flip rows.
FrameBatch extract_detectors(const FrameBatch &records, const DetectorSet &ds);

struct FaultMechanism {
    int id;
    int position;                 // instruction index the fault precedes
    std::vector<PauliTerm> paulis;
    int record = -1;              // flipped record for classical faults
    double p;
    std::vector<int> detectors;   // sorted
    uint64_t observables = 0;     // bit per observable
};

/// Every single fault of every channel with its propagated signature.
std::vector<FaultMechanism> enumerate_faults(const NoisyCircuit &nc, const DetectorSet &ds);

struct DemEdge {
    int u;
    int v;                 // may be the boundary node
    double p;
    double w;              // ln((1-p)/p)
    uint64_t observables;
    bool operator==(const DemEdge &o) const = default;
};

struct DemGraph {
    int num_detectors = 0;
    int num_observables = 0;
    std::vector<DemEdge> edges;
    std::vector<char> detector_type;
    std::vector<int> detector_round;
    std::vector<int> incomplete_rounds;
    /// Decomposed hyperedges and merge notes, for inspection.
    std::vector<std::string> remainder;

    int boundary() const { return num_detectors; }
    int num_nodes() const { return num_detectors + 1; }
};

/// Aggregates single faults into a matching graph. Signatures with more than two detectors are split
/// into X and Z parts that must already be graph edges; anything else throws std::runtime_error.
DemGraph compile(const NoisyCircuit &nc, const DetectorSet &ds);

std::string dem_to_text(const DemGraph &g);
DemGraph dem_from_text(const std::string &text);

inline constexpr int kInfiniteDistance = std::numeric_limits<int>::max();

/// Fewest graph edges whose detectors cancel and whose observable parity is odd.
int fault_distance(const DemGraph &g, int observable = 0);

/// Same quantity over raw fault mechanisms by meet-in-the-middle, searching weights up to
/// `max_weight` (at most 4). Returns kInfiniteDistance when nothing is found.
int fault_distance_exact(const std::vector<FaultMechanism> &faults, int observable = 0, int max_weight = 4);

}  // namespace hhqec

#endif
