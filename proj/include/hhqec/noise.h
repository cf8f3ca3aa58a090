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

#ifndef HHQEC_NOISE_H
#define HHQEC_NOISE_H

#include <string>
#include <vector>

#include "hhqec/circuit.h"
#include "json.hpp"

namespace hhqec {

struct NoiseModel {
    double p_1q = 0;
    double p_2q = 0;
    double p_qmeas = 0;
    double p_cmeas = 0;
    double p_idle = 0;
    double p_reset = 0;
    bool tie_qmeas_to_idle = false;

    bool operator==(const NoiseModel &o) const = default;
    /// Empty iff every probability lies in [0, 0.75] and the tie, if set, holds.
    std::vector<std::string> violations() const;
    double get(const std::string &name) const;
    void set(const std::string &name, double value);
};

extern const std::vector<std::string> kNoiseParameters;

/// Table values fitted to the device data.
NoiseModel default_fitted_model();

/// Copy with one parameter multiplied by `factor`. Tied parameters move together.
NoiseModel scale_parameter(const NoiseModel &m, const std::string &which, double factor);

nlohmann::json noise_to_json(const NoiseModel &m);
NoiseModel noise_from_json(const nlohmann::json &j);

enum class ChannelKind { Depolarize1, Depolarize2, XBeforeMeasure, RecordFlip, XAfterReset, IdleDepolarize };
const char *channel_name(ChannelKind k);

struct Channel {
    /// Applies just before base instruction `position` (position == size means at the end).
    int position;
    ChannelKind kind;
    /// Qubits, qubit pairs for Depolarize2, or record indices for RecordFlip.
    std::vector<int> targets;
    double p;

    bool operator==(const Channel &o) const = default;
};

struct NoisyCircuit {
    Circuit base;
    std::vector<Channel> channels;  // sorted by position
};

NoisyCircuit annotate(const Circuit &c, const NoiseModel &m);

}  // namespace hhqec

#endif
