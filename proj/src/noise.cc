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

#include "hhqec/noise.h"

#include <algorithm>
#include <stdexcept>

namespace hhqec {

const std::vector<std::string> kNoiseParameters = {"p_1q", "p_2q", "p_qmeas", "p_cmeas", "p_idle", "p_reset"};

static double *field(NoiseModel &m, const std::string &name) {
    if (name == "p_1q") return &m.p_1q;
    if (name == "p_2q") return &m.p_2q;
    if (name == "p_qmeas") return &m.p_qmeas;
    if (name == "p_cmeas") return &m.p_cmeas;
    if (name == "p_idle") return &m.p_idle;
    if (name == "p_reset") return &m.p_reset;
    throw std::invalid_argument("unknown noise parameter " + name);
}

double NoiseModel::get(const std::string &name) const { return *field(const_cast<NoiseModel &>(*this), name); }
void NoiseModel::set(const std::string &name, double value) { *field(*this, name) = value; }

std::vector<std::string> NoiseModel::violations() const {
    std::vector<std::string> out;
    for (const auto &n : kNoiseParameters) {
        double v = get(n);
        if (!(v >= 0 && v <= 0.75)) out.push_back(n + " = " + std::to_string(v) + " outside [0, 0.75]");
    }
    if (tie_qmeas_to_idle && p_qmeas != p_idle) out.push_back("p_qmeas differs from p_idle while tied");
    return out;
}

NoiseModel default_fitted_model() {
    NoiseModel m;
    m.p_1q = 0.0002;
    m.p_2q = 0.0041;
    m.p_qmeas = 0.012;
    m.p_cmeas = 0.042;
    m.p_idle = 0.012;
    m.p_reset = 0.075;
    m.tie_qmeas_to_idle = true;
    return m;
}

NoiseModel scale_parameter(const NoiseModel &m, const std::string &which, double factor) {
    if (!(factor > 0)) throw std::invalid_argument("scale factor must be positive");
    NoiseModel out = m;
    out.set(which, m.get(which) * factor);
    if (m.tie_qmeas_to_idle && (which == "p_qmeas" || which == "p_idle")) {
        out.p_qmeas = out.p_idle = m.get(which) * factor;
    }
    auto v = out.violations();
    if (!v.empty()) throw std::out_of_range("scaled model invalid: " + v.front());
    return out;
}

nlohmann::json noise_to_json(const NoiseModel &m) {
    nlohmann::json j;
    for (const auto &n : kNoiseParameters) j[n] = m.get(n);
    j["tie_qmeas_to_idle"] = m.tie_qmeas_to_idle;
    return j;
}

NoiseModel noise_from_json(const nlohmann::json &j) {
    NoiseModel m;
    for (const auto &n : kNoiseParameters) {
        if (j.contains(n)) m.set(n, j.at(n).get<double>());
    }
    m.tie_qmeas_to_idle = j.value("tie_qmeas_to_idle", false);
    auto v = m.violations();
    if (!v.empty()) throw std::invalid_argument("invalid noise model: " + v.front());
    return m;
}

const char *channel_name(ChannelKind k) {
    switch (k) {
        case ChannelKind::Depolarize1: return "DEPOLARIZE1";
        case ChannelKind::Depolarize2: return "DEPOLARIZE2";
        case ChannelKind::XBeforeMeasure: return "X_ERROR_MEASURE";
        case ChannelKind::RecordFlip: return "RECORD_FLIP";
        case ChannelKind::XAfterReset: return "X_ERROR_RESET";
        case ChannelKind::IdleDepolarize: return "DEPOLARIZE1_IDLE";
    }
    return "?";
}

NoisyCircuit annotate(const Circuit &c, const NoiseModel &m) {
    auto v = m.violations();
    if (!v.empty()) throw std::invalid_argument("invalid noise model: " + v.front());
    NoisyCircuit nc{c, {}};
    const auto &ins = c.instructions;
    // Layer membership decides whether a delay is a measurement/reset idle.
    std::vector<bool> slow_layer(ins.size(), false);
    for (size_t i = 0, start = 0; i <= ins.size(); i++) {
        if (i == ins.size() || ins[i].op == Op::Tick) {
            bool slow = false;
            for (size_t k = start; k < i; k++) slow |= ins[k].op == Op::MeasureZ || ins[k].op == Op::ResetZ;
            for (size_t k = start; k < i; k++) slow_layer[k] = slow;
            start = i + 1;
        }
    }
    int record = 0;
    std::vector<bool> measured(c.num_qubits, false);
    auto add = [&](int pos, ChannelKind k, std::vector<int> t, double p) {
        if (!t.empty()) nc.channels.push_back({pos, k, std::move(t), p});
    };
    for (size_t i = 0; i < ins.size(); i++) {
        const Instruction &in = ins[i];
        int pos = (int)i;
        switch (in.op) {
            case Op::H:
            case Op::S:
            case Op::PauliX:
            case Op::PauliZ: add(pos, ChannelKind::Depolarize1, in.targets, m.p_1q); break;
            case Op::CX: add(pos, ChannelKind::Depolarize2, in.targets, m.p_2q); break;
            case Op::MeasureZ: {
                for (int q : in.targets) measured[q] = true;
                add(pos, ChannelKind::XBeforeMeasure, in.targets, m.p_qmeas);
                std::vector<int> recs;
                for (size_t k = 0; k < in.targets.size(); k++) recs.push_back(record++);
                add(pos + 1, ChannelKind::RecordFlip, recs, m.p_cmeas);
                break;
            }
            case Op::ResetZ: {
                // Only a reset after a measurement is the noisy measure-and-flip operation;
                // initial preparation is ideal.
                std::vector<int> t;
                for (int q : in.targets) {
                    if (measured[q]) t.push_back(q);
                }
                add(pos + 1, ChannelKind::XAfterReset, t, m.p_reset);
                break;
            }
            case Op::Delay: {
                if (!slow_layer[i]) break;
                std::vector<int> d;
                for (int q : in.targets) {
                    if (c.is_data(q)) d.push_back(q);
                }
                add(pos, ChannelKind::IdleDepolarize, d, m.p_idle);
                break;
            }
            default: break;
        }
    }
    std::stable_sort(nc.channels.begin(), nc.channels.end(),
                     [](const Channel &a, const Channel &b) { return a.position < b.position; });
    return nc;
}

}  // namespace hhqec
