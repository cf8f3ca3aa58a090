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

#include "hhqec/circuit.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hhqec {

const char *op_name(Op op) {
    switch (op) {
        case Op::ResetZ: return "R";
        case Op::H: return "H";
        case Op::S: return "S";
        case Op::CX: return "CX";
        case Op::PauliX: return "X";
        case Op::PauliZ: return "Z";
        case Op::MeasureZ: return "M";
        case Op::Delay: return "DELAY";
        case Op::Tick: return "TICK";
    }
    return "?";
}

const char *variant_name(Variant v) {
    switch (v) {
        case Variant::Original: return "original";
        case Variant::Improved: return "improved";
        case Variant::Custom: return "custom";
    }
    return "?";
}

bool is_unitary(Op op) {
    return op == Op::H || op == Op::S || op == Op::CX || op == Op::PauliX || op == Op::PauliZ;
}

double DurationTable::of(Op op) const {
    switch (op) {
        case Op::H:
        case Op::S:
        case Op::PauliX:
        case Op::PauliZ: return t_1q;
        case Op::CX: return t_2q;
        case Op::MeasureZ: return t_meas;
        case Op::ResetZ: return t_reset;
        default: return 0;
    }
}

std::vector<MeasRecord> Circuit::records() const {
    std::vector<MeasRecord> out;
    for (const auto &in : instructions) {
        if (in.op != Op::MeasureZ) continue;
        for (int q : in.targets) out.push_back({in.round, q, in.step});
    }
    return out;
}

std::map<std::tuple<int, int, int>, int> Circuit::measurement_index() const {
    std::map<std::tuple<int, int, int>, int> out;
    int k = 0;
    for (const auto &r : records()) out[{r.round, r.qubit, r.step}] = k++;
    return out;
}

size_t Circuit::num_records() const {
    size_t n = 0;
    for (const auto &in : instructions) {
        if (in.op == Op::MeasureZ) n += in.targets.size();
    }
    return n;
}

std::vector<std::vector<Instruction>> Circuit::layers() const {
    std::vector<std::vector<Instruction>> out(1);
    for (const auto &in : instructions) {
        if (in.op == Op::Tick) {
            if (!out.back().empty()) out.emplace_back();
        } else {
            out.back().push_back(in);
        }
    }
    if (out.back().empty()) out.pop_back();
    return out;
}

double Circuit::total_duration() const {
    double total = 0;
    for (const auto &layer : layers()) {
        double m = 0;
        for (const auto &in : layer) m = std::max(m, in.duration);
        total += m;
    }
    return total;
}

size_t Circuit::num_unitary_layers() const {
    size_t n = 0;
    for (const auto &layer : layers()) {
        bool u = false;
        for (const auto &in : layer) u |= is_unitary(in.op);
        n += u;
    }
    return n;
}

bool Circuit::is_data(int q) const { return std::find(data_qubits.begin(), data_qubits.end(), q) != data_qubits.end(); }

std::vector<std::string> validate_circuit(const Circuit &c) {
    std::vector<std::string> out;
    int li = 0;
    for (const auto &layer : c.layers()) {
        std::set<int> used;
        for (const auto &in : layer) {
            if (in.op == Op::CX && (in.targets.size() != 2 || in.targets[0] == in.targets[1])) {
                out.push_back("layer " + std::to_string(li) + ": malformed CX");
            }
            for (int q : in.targets) {
                if (q < 0 || q >= c.num_qubits) out.push_back("layer " + std::to_string(li) + ": bad qubit");
                if (!used.insert(q).second) {
                    out.push_back("layer " + std::to_string(li) + ": qubit " + std::to_string(q) + " used twice");
                }
            }
        }
        li++;
    }
    return out;
}

namespace {

Instruction gate(Op op, std::vector<int> t, const DurationTable &dt) {
    Instruction in;
    in.op = op;
    in.targets = std::move(t);
    in.duration = dt.of(op);
    return in;
}

Instruction delay(double ns, std::vector<int> t) {
    Instruction in;
    in.op = Op::Delay;
    in.targets = std::move(t);
    in.duration = ns;
    return in;
}

void emit_layers(Circuit &c, const std::vector<std::vector<Instruction>> &layers) {
    for (const auto &layer : layers) {
        if (layer.empty()) continue;
        if (!c.instructions.empty() && c.instructions.back().op != Op::Tick) c.instructions.push_back({});
        for (const auto &in : layer) c.instructions.push_back(in);
    }
}

// Measurement layer on `measured`, plus a delay on every other qubit.
std::vector<Instruction> measure_layer(int n, const std::vector<int> &measured, int step, const DurationTable &dt) {
    std::vector<Instruction> layer;
    Instruction m = gate(Op::MeasureZ, measured, dt);
    m.round = 0;
    m.step = step;
    layer.push_back(m);
    std::set<int> s(measured.begin(), measured.end());
    std::vector<int> idle;
    for (int q = 0; q < n; q++) {
        if (!s.count(q)) idle.push_back(q);
    }
    if (!idle.empty()) layer.push_back(delay(dt.t_meas, idle));
    return layer;
}

std::vector<Instruction> reset_layer(int n, const std::vector<int> &reset, const DurationTable &dt) {
    std::vector<Instruction> layer;
    layer.push_back(gate(Op::ResetZ, reset, dt));
    std::set<int> s(reset.begin(), reset.end());
    std::vector<int> idle;
    for (int q = 0; q < n; q++) {
        if (!s.count(q)) idle.push_back(q);
    }
    if (!idle.empty()) layer.push_back(delay(dt.t_reset, idle));
    return layer;
}

Circuit empty_circuit(const Patch &p, Variant v, bool reset, const DurationTable &dt) {
    if (!dt.valid()) throw std::invalid_argument("durations must be strictly positive");
    Circuit c;
    c.num_qubits = (int)p.qubits.size();
    c.rounds = 1;
    c.meta = {p.kind, p.distance, v, reset, Basis::Z};
    c.durations = dt;
    c.data_qubits = p.data_qubits();
    return c;
}

struct Plaquette {
    int u, w, m, a, b, e, f;
};

struct Roles {
    std::vector<Plaquette> plaquettes;
    std::vector<std::pair<int, const Check *>> free_x;     // via-free X checks
    std::vector<const Check *> left, right;                // weight-2 boundary Z checks
    std::vector<const Check *> wide_x;                     // weight-3 X checks (stability)
};

Roles classify(const Patch &p) {
    Roles r;
    std::set<int> vias;
    int max_x = 0;
    for (const auto &q : p.qubits) max_x = std::max(max_x, q.x);
    for (const auto &c : p.checks) {
        if (c.basis == Basis::Z && c.via_qubits.size() == 2 && c.weight() == 4) {
            r.plaquettes.push_back({c.via_qubits[0], c.via_qubits[1], c.measure_qubit, c.support[0], c.support[1],
                                    c.support[2], c.support[3]});
            vias.insert(c.via_qubits.begin(), c.via_qubits.end());
        }
    }
    for (const auto &c : p.checks) {
        if (c.basis == Basis::X && c.weight() == 2 && !vias.count(c.measure_qubit)) {
            r.free_x.emplace_back(c.measure_qubit, &c);
        } else if (c.basis == Basis::X && c.weight() == 3) {
            r.wide_x.push_back(&c);
        } else if (c.basis == Basis::Z && c.via_qubits.empty()) {
            (2 * p.qubits[c.measure_qubit].x < max_x ? r.left : r.right).push_back(&c);
        }
    }
    return r;
}

struct TGate {
    int layer;
    Op op;
    char q0;
    char q1;
};

// Weight-4 Z check. u kicks a and b (its X check), then both reads are routed through u and w
// as next-nearest-neighbour CX gates with the shared via CX cancelled. The read order on m is
// e, a, f, b so the last two reads form a vertical pair and a mid-circuit fault on m spreads
// to at most a pair aligned with the X logical.
constexpr TGate kPlaquette[] = {
    {0, Op::H, 'u', 0},     {0, Op::H, 'w', 0},     {1, Op::CX, 'u', 'a'}, {1, Op::CX, 'e', 'w'},
    {2, Op::CX, 'u', 'b'},  {2, Op::CX, 'w', 'm'},  {3, Op::CX, 'a', 'u'}, {3, Op::CX, 'e', 'w'},
    {4, Op::CX, 'u', 'm'},  {4, Op::CX, 'f', 'w'},  {5, Op::CX, 'a', 'u'}, {5, Op::CX, 'w', 'm'},
    {6, Op::CX, 'b', 'u'},  {6, Op::CX, 'f', 'w'},  {7, Op::CX, 'u', 'm'}, {7, Op::CX, 'w', 'e'},
    {8, Op::CX, 'b', 'u'},  {8, Op::CX, 'w', 'f'},  {9, Op::H, 'u', 0},    {9, Op::H, 'w', 0},
};
// Unpaired via measuring its weight-2 X check.
constexpr TGate kFreeVia[] = {{0, Op::H, 'v', 0}, {1, Op::CX, 'v', 'l'}, {4, Op::CX, 'v', 'r'}, {5, Op::H, 'v', 0}};
// Boundary Z checks: t is the upper data qubit, s the lower one.
constexpr TGate kLeft[] = {{2, Op::CX, 't', 'm'}, {0, Op::CX, 's', 'm'}};
constexpr TGate kRight[] = {{5, Op::CX, 't', 'm'}, {9, Op::CX, 's', 'm'}};

constexpr int kImprovedLayers = 10;

// Weight-3 X checks of the stability patch: H layer, three CX layers (one per support qubit in
// support order), H layer.
struct WideTiming {
    const char *label;
    int h0, c0, c1, c2, h1;
};
constexpr WideTiming kWide[] = {{"XB", 0, 1, 4, 2, 5}, {"XE", 2, 4, 7, 3, 9}};

template <size_t N>
void place(std::vector<std::vector<Instruction>> &layers, const TGate (&tmpl)[N], const std::map<char, int> &names,
           const DurationTable &dt) {
    for (const auto &g : tmpl) {
        std::vector<int> t{names.at(g.q0)};
        if (g.op == Op::CX) t.push_back(names.at(g.q1));
        layers[g.layer].push_back(gate(g.op, t, dt));
    }
}

std::vector<int> non_data(const Patch &p) { return p.measure_qubits(); }

}  // namespace

Circuit build_improved_cycle(const Patch &p, bool reset, const DurationTable &dt) {
    if (p.kind == PatchKind::Memory && p.distance != 3) {
        throw std::invalid_argument("the single-step schedule is only defined for distance 3");
    }
    auto errs = validate_patch(p);
    if (!errs.empty()) throw std::invalid_argument("invalid patch: " + errs.front());
    Circuit c = empty_circuit(p, Variant::Improved, reset, dt);
    Roles r = classify(p);
    std::vector<std::vector<Instruction>> layers(kImprovedLayers);
    for (const auto &pl : r.plaquettes) {
        place(layers, kPlaquette,
              {{'u', pl.u}, {'w', pl.w}, {'m', pl.m}, {'a', pl.a}, {'b', pl.b}, {'e', pl.e}, {'f', pl.f}}, dt);
    }
    for (auto [v, chk] : r.free_x) place(layers, kFreeVia, {{'v', v}, {'l', chk->support[0]}, {'r', chk->support[1]}}, dt);
    for (const Check *chk : r.left) {
        place(layers, kLeft, {{'t', chk->support[0]}, {'s', chk->support[1]}, {'m', chk->measure_qubit}}, dt);
    }
    for (const Check *chk : r.right) {
        place(layers, kRight, {{'t', chk->support[0]}, {'s', chk->support[1]}, {'m', chk->measure_qubit}}, dt);
    }
    for (const Check *chk : r.wide_x) {
        const WideTiming *tm = nullptr;
        for (const auto &w : kWide) {
            if (chk->label == w.label) tm = &w;
        }
        if (!tm) throw std::invalid_argument("no schedule for weight-3 check " + chk->label);
        int m = chk->measure_qubit;
        layers[tm->h0].push_back(gate(Op::H, {m}, dt));
        layers[tm->c0].push_back(gate(Op::CX, {m, chk->support[0]}, dt));
        layers[tm->c1].push_back(gate(Op::CX, {m, chk->support[1]}, dt));
        layers[tm->c2].push_back(gate(Op::CX, {m, chk->support[2]}, dt));
        layers[tm->h1].push_back(gate(Op::H, {m}, dt));
    }
    auto anc = non_data(p);
    layers.push_back(measure_layer(c.num_qubits, anc, 0, dt));
    if (reset) layers.push_back(reset_layer(c.num_qubits, anc, dt));
    emit_layers(c, layers);
    auto bad = validate_circuit(c);
    if (!bad.empty()) throw std::logic_error("improved schedule conflict: " + bad.front());
    return c;
}

Circuit build_original_cycle(const Patch &p, bool reset, const DurationTable &dt) {
    if (p.kind != PatchKind::Memory) throw std::invalid_argument("the two-step circuit is defined for memory patches only");
    auto errs = validate_patch(p);
    if (!errs.empty()) throw std::invalid_argument("invalid patch: " + errs.front());
    Circuit c = empty_circuit(p, Variant::Original, reset, dt);
    Roles r = classify(p);
    std::vector<std::vector<Instruction>> layers;

    // Step 1: weight-2 X checks on every via.
    std::vector<int> vias;
    std::vector<Instruction> l1, l2;
    for (const auto &chk : p.checks) {
        if (chk.basis != Basis::X) continue;
        vias.push_back(chk.measure_qubit);
        l1.push_back(gate(Op::CX, {chk.measure_qubit, chk.support[0]}, dt));
        l2.push_back(gate(Op::CX, {chk.measure_qubit, chk.support[1]}, dt));
    }
    std::vector<Instruction> hv;
    for (int v : vias) hv.push_back(gate(Op::H, {v}, dt));
    layers.push_back(hv);
    layers.push_back(l1);
    layers.push_back(l2);
    layers.push_back(hv);
    layers.push_back(measure_layer(c.num_qubits, vias, 0, dt));
    if (reset) layers.push_back(reset_layer(c.num_qubits, vias, dt));

    // Step 2: Z checks. The vias of each weight-4 check start in |+> and act as flags while the
    // four data qubits are copied onto m one at a time through next-nearest-neighbour CX gates.
    std::vector<int> flags;
    for (const auto &pl : r.plaquettes) {
        flags.push_back(pl.u);
        flags.push_back(pl.w);
    }
    std::vector<Instruction> hf;
    for (int f : flags) hf.push_back(gate(Op::H, {f}, dt));
    layers.push_back(hf);
    std::vector<std::vector<Instruction>> chain(16);
    for (const auto &pl : r.plaquettes) {
        const int order[4][2] = {{pl.a, pl.u}, {pl.e, pl.w}, {pl.b, pl.u}, {pl.f, pl.w}};
        for (int k = 0; k < 4; k++) {
            auto seq = decompose_nn_cx(p, order[k][0], order[k][1], pl.m, NnPattern::ControlFirst, dt);
            for (int j = 0; j < 4; j++) chain[4 * k + j].push_back(seq[j]);
        }
    }
    for (auto &l : chain) layers.push_back(l);
    std::vector<Instruction> b1, b2;
    for (const auto *side : {&r.left, &r.right}) {
        for (const Check *chk : *side) {
            b1.push_back(gate(Op::CX, {chk->support[0], chk->measure_qubit}, dt));
            b2.push_back(gate(Op::CX, {chk->support[1], chk->measure_qubit}, dt));
        }
    }
    layers.push_back(b1);
    layers.push_back(b2);
    layers.push_back(hf);
    std::vector<int> step2;
    for (const auto &chk : p.checks) {
        if (chk.basis == Basis::Z) step2.push_back(chk.measure_qubit);
    }
    step2.insert(step2.end(), flags.begin(), flags.end());
    std::sort(step2.begin(), step2.end());
    layers.push_back(measure_layer(c.num_qubits, step2, 1, dt));
    if (reset) layers.push_back(reset_layer(c.num_qubits, step2, dt));
    emit_layers(c, layers);
    auto bad = validate_circuit(c);
    if (!bad.empty()) throw std::logic_error("two-step schedule conflict: " + bad.front());
    return c;
}

std::vector<Instruction> decompose_nn_cx(int control, int via, int target, NnPattern pattern, const DurationTable &dt) {
    if (control == via || via == target || control == target) throw std::invalid_argument("repeated qubit in triple");
    Instruction cv = gate(Op::CX, {control, via}, dt);
    Instruction vt = gate(Op::CX, {via, target}, dt);
    if (pattern == NnPattern::ControlFirst) return {cv, vt, cv, vt};
    return {vt, cv, vt, cv};
}

std::vector<Instruction> decompose_nn_cx(const Patch &p, int control, int via, int target, NnPattern pattern,
                                         const DurationTable &dt) {
    if (!p.coupled(control, via) || !p.coupled(via, target)) {
        throw std::invalid_argument("qubits " + std::to_string(control) + ", " + std::to_string(via) + ", " +
                                    std::to_string(target) + " are not a coupled path");
    }
    return decompose_nn_cx(control, via, target, pattern, dt);
}

Circuit relayer_asap(const Circuit &c) {
    std::vector<int> last(c.num_qubits, -1);
    std::vector<std::vector<Instruction>> layers;
    for (const auto &in : c.instructions) {
        if (in.op == Op::Tick) continue;
        int l = 0;
        for (int q : in.targets) l = std::max(l, last[q] + 1);
        for (int q : in.targets) last[q] = l;
        if ((int)layers.size() <= l) layers.resize(l + 1);
        layers[l].push_back(in);
    }
    Circuit out = c;
    out.instructions.clear();
    emit_layers(out, layers);
    return out;
}

Circuit cancel_adjacent_gates(const Circuit &c) {
    auto self_inverse = [](Op op) { return op == Op::H || op == Op::CX || op == Op::PauliX || op == Op::PauliZ; };
    std::vector<Instruction> out;
    std::vector<bool> alive;
    std::vector<std::vector<int>> stack(c.num_qubits);
    for (const auto &in : c.instructions) {
        if (in.op == Op::Tick) continue;
        if (self_inverse(in.op) && !in.targets.empty()) {
            int j = stack[in.targets[0]].empty() ? -1 : stack[in.targets[0]].back();
            bool same = j >= 0 && out[j].op == in.op && out[j].targets == in.targets;
            for (int q : in.targets) same &= !stack[q].empty() && stack[q].back() == j;
            if (same) {
                alive[j] = false;
                for (int q : in.targets) stack[q].pop_back();
                continue;
            }
        }
        out.push_back(in);
        alive.push_back(true);
        for (int q : in.targets) stack[q].push_back((int)out.size() - 1);
    }
    Circuit r = c;
    r.instructions.clear();
    for (size_t i = 0; i < out.size(); i++) {
        if (alive[i]) r.instructions.push_back(out[i]);
    }
    return relayer_asap(r);
}

namespace {

Circuit plaquette_shell(const DurationTable &dt) {
    Circuit c;
    c.num_qubits = 7;
    c.rounds = 1;
    c.durations = dt;
    c.data_qubits = {3, 4, 5, 6};
    return c;
}

const std::map<char, int> kPlaqNames = {{'u', 0}, {'w', 1}, {'m', 2}, {'a', 3}, {'b', 4}, {'e', 5}, {'f', 6}};

}  // namespace

Circuit plaquette_circuit(const DurationTable &dt) {
    Circuit c = plaquette_shell(dt);
    std::vector<std::vector<Instruction>> layers(kImprovedLayers);
    place(layers, kPlaquette, kPlaqNames, dt);
    layers.insert(layers.begin(), {gate(Op::ResetZ, {0, 1, 2, 3, 4, 5, 6}, dt)});
    layers.push_back(measure_layer(7, {0, 1, 2}, 0, dt));
    emit_layers(c, layers);
    return c;
}

Circuit plaquette_expanded(const DurationTable &dt) {
    const int u = 0, w = 1, m = 2, a = 3, b = 4, e = 5, f = 6;
    auto cat = [](std::vector<Instruction> x, const std::vector<Instruction> &y) {
        x.insert(x.end(), y.begin(), y.end());
        return x;
    };
    // Each via runs its X-check kicks and two reads of m; the second read uses the mirrored
    // pattern so its first gate repeats the last gate of the first read.
    std::vector<Instruction> cu = {gate(Op::H, {u}, dt), gate(Op::CX, {u, a}, dt), gate(Op::CX, {u, b}, dt)};
    cu = cat(cu, decompose_nn_cx(a, u, m, NnPattern::ControlFirst, dt));
    cu = cat(cu, decompose_nn_cx(b, u, m, NnPattern::ViaFirst, dt));
    cu.push_back(gate(Op::H, {u}, dt));
    std::vector<Instruction> cw = {gate(Op::H, {w}, dt)};
    cw = cat(cw, decompose_nn_cx(e, w, m, NnPattern::ControlFirst, dt));
    cw = cat(cw, decompose_nn_cx(f, w, m, NnPattern::ViaFirst, dt));
    cw.push_back(gate(Op::CX, {w, e}, dt));
    cw.push_back(gate(Op::CX, {w, f}, dt));
    cw.push_back(gate(Op::H, {w}, dt));
    Circuit c = plaquette_shell(dt);
    for (size_t i = 0; i < cu.size(); i++) {
        c.instructions.push_back(cu[i]);
        c.instructions.push_back(cw[i]);
    }
    return relayer_asap(c);
}

Circuit assemble_experiment(const Patch &p, Variant variant, bool reset, Basis basis, int rounds,
                            const DurationTable &dt) {
    if (variant == Variant::Original && p.kind == PatchKind::Stability) {
        throw std::invalid_argument("the two-step circuit has no stability variant");
    }
    if (variant == Variant::Custom) throw std::invalid_argument("custom circuits cannot be assembled");
    if (rounds < 0 || (p.kind == PatchKind::Stability && rounds < 1)) {
        throw std::invalid_argument("invalid round count " + std::to_string(rounds));
    }
    Circuit cyc = variant == Variant::Original ? build_original_cycle(p, reset, dt) : build_improved_cycle(p, reset, dt);
    Circuit c = empty_circuit(p, variant, reset, dt);
    c.meta.basis = basis;
    c.rounds = rounds;
    std::vector<int> all(c.num_qubits);
    for (int q = 0; q < c.num_qubits; q++) all[q] = q;
    std::vector<Instruction> hd;
    for (int q : c.data_qubits) hd.push_back(gate(Op::H, {q}, dt));

    emit_layers(c, {{gate(Op::ResetZ, all, dt)}});
    if (basis == Basis::X) emit_layers(c, {hd});
    for (int r = 0; r < rounds; r++) {
        c.instructions.push_back({});
        for (auto in : cyc.instructions) {
            if (in.op == Op::MeasureZ) in.round = r;
            c.instructions.push_back(in);
        }
    }
    if (p.kind == PatchKind::Memory) {
        if (basis == Basis::X) emit_layers(c, {hd});
        auto layer = measure_layer(c.num_qubits, c.data_qubits, 0, dt);
        layer[0].round = rounds;
        emit_layers(c, {layer});
    }
    return c;
}

std::string circuit_to_text(const Circuit &c) {
    std::ostringstream os;
    os << "# hhqec circuit\n";
    os << "QUBITS " << c.num_qubits << "\n";
    os << "ROUNDS " << c.rounds << "\n";
    os << "PATCH " << (c.meta.patch == PatchKind::Memory ? "memory" : "stability") << " " << c.meta.distance << "\n";
    os << "VARIANT " << variant_name(c.meta.variant) << "\n";
    os << "RESET " << (c.meta.reset ? 1 : 0) << "\n";
    os << "BASIS " << basis_name(c.meta.basis) << "\n";
    os << "DURATIONS " << c.durations.t_1q << " " << c.durations.t_2q << " " << c.durations.t_meas << " "
       << c.durations.t_reset << "\n";
    os << "DATA";
    for (int q : c.data_qubits) os << " " << q;
    os << "\n";
    int round = -1, step = 0;
    for (const auto &in : c.instructions) {
        if (in.op == Op::Tick) {
            os << "TICK\n";
            continue;
        }
        if (in.op == Op::MeasureZ && (in.round != round || in.step != step)) {
            round = in.round;
            step = in.step;
            os << "TAG " << round << " " << step << "\n";
        }
        os << op_name(in.op);
        if (in.op == Op::Delay) os << " " << in.duration;
        for (int q : in.targets) os << " " << q;
        os << "\n";
    }
    return os.str();
}

Circuit circuit_from_text(const std::string &text) {
    Circuit c;
    std::istringstream is(text);
    std::string line;
    int round = -1, step = 0, lineno = 0;
    auto fail = [&](const std::string &why) {
        throw std::invalid_argument("circuit text line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(is, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "QUBITS") {
            ls >> c.num_qubits;
        } else if (word == "ROUNDS") {
            ls >> c.rounds;
        } else if (word == "PATCH") {
            std::string k;
            ls >> k >> c.meta.distance;
            c.meta.patch = k == "memory" ? PatchKind::Memory : PatchKind::Stability;
        } else if (word == "VARIANT") {
            std::string v;
            ls >> v;
            c.meta.variant = v == "original" ? Variant::Original : v == "improved" ? Variant::Improved : Variant::Custom;
        } else if (word == "RESET") {
            int r;
            ls >> r;
            c.meta.reset = r != 0;
        } else if (word == "BASIS") {
            std::string b;
            ls >> b;
            c.meta.basis = b == "X" ? Basis::X : Basis::Z;
        } else if (word == "DURATIONS") {
            ls >> c.durations.t_1q >> c.durations.t_2q >> c.durations.t_meas >> c.durations.t_reset;
        } else if (word == "DATA") {
            int q;
            while (ls >> q) c.data_qubits.push_back(q);
        } else if (word == "TAG") {
            ls >> round >> step;
        } else if (word == "TICK") {
            c.instructions.push_back({});
        } else {
            Instruction in;
            bool found = false;
            for (Op op : {Op::ResetZ, Op::H, Op::S, Op::CX, Op::PauliX, Op::PauliZ, Op::MeasureZ, Op::Delay}) {
                if (word == op_name(op)) {
                    in.op = op;
                    found = true;
                }
            }
            if (!found) fail("unknown opcode " + word);
            if (in.op == Op::Delay) {
                if (!(ls >> in.duration)) fail("DELAY needs a duration");
            } else {
                in.duration = c.durations.of(in.op);
            }
            int q;
            while (ls >> q) {
                if (q < 0 || q >= c.num_qubits) fail("qubit out of range");
                in.targets.push_back(q);
            }
            if (!ls.eof()) fail("bad target list");
            if (in.targets.empty()) fail("instruction without targets");
            if (in.op == Op::CX && in.targets.size() != 2) fail("CX takes exactly two targets");
            if (in.op == Op::MeasureZ) {
                in.round = round;
                in.step = step;
            }
            c.instructions.push_back(in);
        }
    }
    return c;
}

}  // namespace hhqec
