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

#include "hhqec/lattice.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hhqec {

const char *role_name(Role r) {
    switch (r) {
        case Role::Data: return "data";
        case Role::MeasureX: return "measure_x";
        case Role::MeasureZ: return "measure_z";
        case Role::Via: return "via";
        case Role::Flag: return "flag";
        case Role::Unused: return "unused";
    }
    return "?";
}

const char *basis_name(Basis b) { return b == Basis::X ? "X" : "Z"; }

static Role role_from_name(const std::string &s) {
    for (Role r : {Role::Data, Role::MeasureX, Role::MeasureZ, Role::Via, Role::Flag, Role::Unused}) {
        if (s == role_name(r)) return r;
    }
    throw std::invalid_argument("unknown role " + s);
}

static const char *obs_kind_name(ObsKind k) {
    switch (k) {
        case ObsKind::LogicalX: return "logical_x";
        case ObsKind::LogicalZ: return "logical_z";
        case ObsKind::CheckProductConstraint: return "check_product_constraint";
    }
    return "?";
}

std::vector<int> Patch::data_qubits() const {
    std::vector<int> out;
    for (const auto &q : qubits) {
        if (q.role == Role::Data) out.push_back(q.id);
    }
    return out;
}

std::vector<int> Patch::measure_qubits() const {
    std::vector<int> out;
    for (const auto &q : qubits) {
        if (q.role != Role::Data) out.push_back(q.id);
    }
    return out;
}

int Patch::qubit_by_label(const std::string &label) const {
    for (const auto &q : qubits) {
        if (q.label == label) return q.id;
    }
    return -1;
}

bool Patch::coupled(int a, int b) const {
    for (const auto &[u, v] : couplings) {
        if ((u == a && v == b) || (u == b && v == a)) return true;
    }
    return false;
}

int Patch::check_of_measure_qubit(int q) const {
    for (size_t k = 0; k < checks.size(); k++) {
        if (checks[k].measure_qubit == q) return (int)k;
    }
    return -1;
}

const ObservableSpec *Patch::observable(ObsKind k) const {
    for (const auto &o : observables) {
        if (o.kind == k) return &o;
    }
    return nullptr;
}

std::vector<int> product_support(const Patch &patch, const std::vector<int> &check_indices) {
    std::set<int> s;
    for (int k : check_indices) {
        for (int q : patch.checks.at(k).support) {
            if (!s.erase(q)) s.insert(q);
        }
    }
    return {s.begin(), s.end()};
}

bool anticommute(const std::vector<int> &a, const std::vector<int> &b) {
    size_t n = 0;
    for (int x : a) n += std::count(b.begin(), b.end(), x);
    return n & 1;
}

namespace {

struct Builder {
    Patch p;
    std::map<std::string, int> ids;

    int add(const std::string &label, int x, int y, Role role) {
        int id = (int)p.qubits.size();
        p.qubits.push_back({id, x, y, role, label});
        ids[label] = id;
        return id;
    }
    int operator[](const std::string &label) const { return ids.at(label); }
    void couple(int a, int b) { p.couplings.emplace_back(std::min(a, b), std::max(a, b)); }
    int check(Basis basis, std::vector<int> support, int m, std::vector<int> vias, const std::string &label) {
        p.checks.push_back({basis, std::move(support), m, std::move(vias), label});
        return (int)p.checks.size() - 1;
    }
};

std::string lbl(const char *kind, int r, int c) {
    return std::string(kind) + std::to_string(r) + "_" + std::to_string(c);
}

}  // namespace

// Layout (d=3 shown, D data, H via/X-measure, M weight-4 Z-measure, L/R boundary Z-measure):
//
//   D-H-D-H-D
//   | M |   R
//   D-H-D-H-D
//   L   | M |
//   D-H-D-H-D
//
// Each H measures the weight-2 X check on its two horizontal neighbours. Each M measures the
// weight-4 Z check on the surrounding square, reaching the data through the H above and below.
Patch build_memory_patch(int d) {
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("distance must be odd and at least 3, got " + std::to_string(d));
    }
    Builder b;
    b.p.kind = PatchKind::Memory;
    b.p.distance = d;
    for (int r = 0; r < d; r++) {
        for (int c = 0; c < d; c++) b.add(lbl("D", r, c), 4 * c, 2 * r, Role::Data);
    }
    for (int r = 0; r < d; r++) {
        for (int c = 0; c + 1 < d; c++) b.add(lbl("H", r, c), 4 * c + 2, 2 * r, Role::MeasureX);
    }
    std::vector<std::pair<int, int>> plaq;
    for (int r = 0; r + 1 < d; r++) {
        for (int c = 0; c + 1 < d; c++) {
            if ((r + c) % 2 == 0) plaq.emplace_back(r, c);
        }
    }
    for (auto [r, c] : plaq) b.add(lbl("M", r, c), 4 * c + 2, 2 * r + 1, Role::MeasureZ);
    std::vector<int> bl, br;
    for (int r = 0; r + 1 < d; r++) (r % 2 ? bl : br).push_back(r);
    for (int r : bl) b.add(lbl("L", r, 0), 0, 2 * r + 1, Role::MeasureZ);
    for (int r : br) b.add(lbl("R", r, d - 1), 4 * (d - 1), 2 * r + 1, Role::MeasureZ);

    auto D = [&](int r, int c) { return b[lbl("D", r, c)]; };
    auto Hq = [&](int r, int c) { return b[lbl("H", r, c)]; };

    std::map<std::pair<int, int>, int> xcheck;
    for (int r = 0; r < d; r++) {
        for (int c = 0; c + 1 < d; c++) {
            b.couple(D(r, c), Hq(r, c));
            b.couple(D(r, c + 1), Hq(r, c));
            xcheck[{r, c}] = b.check(Basis::X, {D(r, c), D(r, c + 1)}, Hq(r, c), {}, lbl("X", r, c));
        }
    }
    std::map<std::pair<int, int>, int> zplaq;
    for (auto [r, c] : plaq) {
        int m = b[lbl("M", r, c)];
        b.couple(m, Hq(r, c));
        b.couple(m, Hq(r + 1, c));
        zplaq[{r, c}] = b.check(Basis::Z, {D(r, c), D(r, c + 1), D(r + 1, c), D(r + 1, c + 1)}, m,
                                {Hq(r, c), Hq(r + 1, c)}, lbl("Z", r, c));
    }
    std::map<int, int> zbound;
    for (int r : bl) {
        int m = b[lbl("L", r, 0)];
        b.couple(m, D(r, 0));
        b.couple(m, D(r + 1, 0));
        zbound[r] = b.check(Basis::Z, {D(r, 0), D(r + 1, 0)}, m, {}, lbl("ZL", r, 0));
    }
    for (int r : br) {
        int m = b[lbl("R", r, d - 1)];
        b.couple(m, D(r, d - 1));
        b.couple(m, D(r + 1, d - 1));
        zbound[r] = b.check(Basis::Z, {D(r, d - 1), D(r + 1, d - 1)}, m, {}, lbl("ZR", r, d - 1));
    }

    // Z stabilizers: one per row strip, closed by the boundary check on the open side.
    for (int r = 0; r + 1 < d; r++) {
        std::vector<int> cs;
        for (int c = 0; c + 1 < d; c++) {
            if ((r + c) % 2 == 0) cs.push_back(zplaq[{r, c}]);
        }
        cs.push_back(zbound[r]);
        b.p.stabilizers.push_back({Basis::Z, cs});
    }
    // X stabilizers: vertically adjacent pairs on the squares without a plaquette, plus the
    // unpaired top and bottom boundary checks.
    for (int r = 0; r + 1 < d; r++) {
        for (int c = 0; c + 1 < d; c++) {
            if ((r + c) % 2 == 1) b.p.stabilizers.push_back({Basis::X, {xcheck[{r, c}], xcheck[{r + 1, c}]}});
        }
    }
    for (int c = 0; c + 1 < d; c += 2) b.p.stabilizers.push_back({Basis::X, {xcheck[{0, c}]}});
    for (int c = 0; c + 1 < d; c++) {
        if ((d - 1 + c) % 2 == 1) b.p.stabilizers.push_back({Basis::X, {xcheck[{d - 1, c}]}});
    }

    std::vector<int> zl, xl;
    for (int c = 0; c < d; c++) zl.push_back(D(0, c));
    for (int r = 0; r < d; r++) xl.push_back(D(r, 0));
    b.p.observables.push_back({ObsKind::LogicalZ, zl});
    b.p.observables.push_back({ObsKind::LogicalX, xl});
    return b.p;
}

// Seven data qubits: the 3x3 grid without two opposite corners.
//
//   D00-H00-D01
//    |  M00  |      E joins D00, D01, D10
//   D10-H10-D11-H11-D12
//            |  M11  |    B joins D12, D21, D22
//           D21-H21-D22
Patch build_stability_patch() {
    Builder b;
    b.p.kind = PatchKind::Stability;
    b.p.distance = 3;
    const std::vector<std::pair<int, int>> data = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}};
    for (auto [r, c] : data) b.add(lbl("D", r, c), 4 * c, 2 * r, Role::Data);
    const std::vector<std::pair<int, int>> vias = {{0, 0}, {1, 0}, {1, 1}, {2, 1}};
    for (auto [r, c] : vias) b.add(lbl("H", r, c), 4 * c + 2, 2 * r, Role::MeasureX);
    b.add(lbl("M", 0, 0), 2, 1, Role::MeasureZ);
    b.add(lbl("M", 1, 1), 6, 3, Role::MeasureZ);
    b.add("XB", 9, 4, Role::MeasureX);
    b.add("XE", -1, 1, Role::MeasureX);

    auto D = [&](int r, int c) { return b[lbl("D", r, c)]; };
    auto Hq = [&](int r, int c) { return b[lbl("H", r, c)]; };
    std::map<std::string, int> x;
    for (auto [r, c] : vias) {
        b.couple(D(r, c), Hq(r, c));
        b.couple(D(r, c + 1), Hq(r, c));
        x[lbl("H", r, c)] = b.check(Basis::X, {D(r, c), D(r, c + 1)}, Hq(r, c), {}, lbl("X", r, c));
    }
    for (auto [r, c] : std::vector<std::pair<int, int>>{{0, 0}, {1, 1}}) {
        int m = b[lbl("M", r, c)];
        b.couple(m, Hq(r, c));
        b.couple(m, Hq(r + 1, c));
        b.check(Basis::Z, {D(r, c), D(r, c + 1), D(r + 1, c), D(r + 1, c + 1)}, m, {Hq(r, c), Hq(r + 1, c)},
                lbl("Z", r, c));
    }
    for (int q : {D(1, 2), D(2, 1), D(2, 2)}) b.couple(b["XB"], q);
    for (int q : {D(1, 0), D(0, 0), D(0, 1)}) b.couple(b["XE"], q);
    int xb = b.check(Basis::X, {D(1, 2), D(2, 1), D(2, 2)}, b["XB"], {}, "XB");
    int xe = b.check(Basis::X, {D(1, 0), D(0, 0), D(0, 1)}, b["XE"], {}, "XE");

    b.p.stabilizers.push_back({Basis::X, {x["H0_0"]}});
    b.p.stabilizers.push_back({Basis::X, {x["H2_1"]}});
    b.p.stabilizers.push_back({Basis::X, {x["H1_0"], xb}});
    b.p.stabilizers.push_back({Basis::X, {x["H1_1"], xe}});

    std::vector<int> all_x;
    for (size_t k = 0; k < b.p.checks.size(); k++) {
        if (b.p.checks[k].basis == Basis::X) all_x.push_back((int)k);
    }
    b.p.observables.push_back({ObsKind::CheckProductConstraint, all_x});
    return b.p;
}

std::vector<std::string> validate_patch(const Patch &p) {
    std::vector<std::string> out;
    auto report = [&](const std::string &s) { out.push_back(s); };
    const int n = (int)p.qubits.size();
    for (int i = 0; i < n; i++) {
        if (p.qubits[i].id != i) report("qubit ids are not dense at index " + std::to_string(i));
        if (p.qubits[i].role == Role::Unused) report("unused qubit " + p.qubits[i].label + " kept in patch");
    }
    auto is_data = [&](int q) { return q >= 0 && q < n && p.qubits[q].role == Role::Data; };

    std::vector<int> degree(n, 0);
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : p.couplings) {
        if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
            report("invalid coupling " + std::to_string(a) + "-" + std::to_string(b));
            continue;
        }
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second) {
            report("duplicate coupling " + std::to_string(a) + "-" + std::to_string(b));
        }
        degree[a]++;
        degree[b]++;
        if (is_data(a) && is_data(b)) {
            report("data qubits " + p.qubits[a].label + " and " + p.qubits[b].label + " are directly coupled");
        }
    }
    for (int i = 0; i < n; i++) {
        if (degree[i] > 3) report("qubit " + p.qubits[i].label + " has degree " + std::to_string(degree[i]));
    }

    for (size_t k = 0; k < p.checks.size(); k++) {
        const Check &c = p.checks[k];
        std::string name = "check " + std::to_string(k) + " (" + c.label + ")";
        for (int q : c.support) {
            if (!is_data(q)) report(name + " has non-data support qubit " + std::to_string(q));
        }
        if (c.weight() < 2 || c.weight() > 4) report(name + " has weight " + std::to_string(c.weight()));
        if (c.basis == Basis::Z && c.weight() == 3) report(name + " is a weight-3 Z check");
        Role want = c.basis == Basis::X ? Role::MeasureX : Role::MeasureZ;
        if (c.measure_qubit < 0 || c.measure_qubit >= n || p.qubits[c.measure_qubit].role != want) {
            report(name + " has a measure qubit with the wrong role");
            continue;
        }
        for (int v : c.via_qubits) {
            if (!p.coupled(v, c.measure_qubit)) report(name + " via " + std::to_string(v) + " not coupled");
        }
        for (int q : c.support) {
            bool reach = p.coupled(q, c.measure_qubit);
            for (int v : c.via_qubits) reach |= p.coupled(q, v);
            if (!reach) report(name + " cannot reach data qubit " + p.qubits[q].label);
        }
    }

    for (size_t s = 0; s < p.stabilizers.size(); s++) {
        const Stabilizer &st = p.stabilizers[s];
        std::string name = "stabilizer " + std::to_string(s);
        bool ok = !st.checks.empty();
        for (int k : st.checks) {
            if (k < 0 || k >= (int)p.checks.size() || p.checks[k].basis != st.basis) ok = false;
        }
        if (!ok) {
            report(name + " references invalid or mismatched checks");
            continue;
        }
        auto sup = product_support(p, st.checks);
        for (size_t k = 0; k < p.checks.size(); k++) {
            if (p.checks[k].basis != st.basis && anticommute(sup, p.checks[k].support)) {
                report(name + " anticommutes with check " + std::to_string(k) + " (" + p.checks[k].label + ")");
            }
        }
    }

    if (p.kind == PatchKind::Memory) {
        const ObservableSpec *lx = p.observable(ObsKind::LogicalX);
        const ObservableSpec *lz = p.observable(ObsKind::LogicalZ);
        if (!lx || !lz) {
            report("memory patch is missing a logical operator");
        } else {
            for (auto [op, basis, nm] : {std::tuple{lx, Basis::X, "logical X"}, std::tuple{lz, Basis::Z, "logical Z"}}) {
                for (size_t k = 0; k < p.checks.size(); k++) {
                    if (p.checks[k].basis != basis && anticommute(op->support, p.checks[k].support)) {
                        report(std::string(nm) + " anticommutes with check " + std::to_string(k) + " (" +
                               p.checks[k].label + ")");
                    }
                }
            }
            if (!anticommute(lx->support, lz->support)) report("logical X and logical Z commute");
        }
    } else {
        std::map<int, int> cover;
        for (const auto &c : p.checks) {
            if (c.basis == Basis::X) {
                for (int q : c.support) cover[q]++;
            }
        }
        for (int q : p.data_qubits()) {
            if (cover[q] != 2) {
                report("data qubit " + p.qubits[q].label + " is in " + std::to_string(cover[q]) + " X checks");
            }
        }
        const ObservableSpec *cp = p.observable(ObsKind::CheckProductConstraint);
        if (!cp) {
            report("stability patch has no check-product constraint");
        } else {
            auto sup = product_support(p, cp->support);
            if (!sup.empty()) report("check-product constraint is not the identity on data qubits");
            for (size_t k = 0; k < p.checks.size(); k++) {
                if (p.checks[k].basis == Basis::Z && anticommute(sup, p.checks[k].support)) {
                    report("check-product constraint anticommutes with check " + std::to_string(k));
                }
            }
        }
    }
    return out;
}

nlohmann::json patch_to_json(const Patch &p) {
    using nlohmann::json;
    json j;
    j["kind"] = p.kind == PatchKind::Memory ? "memory" : "stability";
    j["distance"] = p.distance;
    j["qubits"] = json::array();
    for (const auto &q : p.qubits) {
        j["qubits"].push_back({{"id", q.id}, {"x", q.x}, {"y", q.y}, {"role", role_name(q.role)}, {"label", q.label}});
    }
    j["couplings"] = json::array();
    for (auto [a, b] : p.couplings) j["couplings"].push_back({a, b});
    j["checks"] = json::array();
    for (const auto &c : p.checks) {
        j["checks"].push_back({{"basis", basis_name(c.basis)},
                               {"support", c.support},
                               {"measure_qubit", c.measure_qubit},
                               {"via_qubits", c.via_qubits},
                               {"weight", c.weight()},
                               {"label", c.label}});
    }
    j["stabilizers"] = json::array();
    for (const auto &s : p.stabilizers) j["stabilizers"].push_back({{"basis", basis_name(s.basis)}, {"checks", s.checks}});
    j["observables"] = json::array();
    for (const auto &o : p.observables) j["observables"].push_back({{"kind", obs_kind_name(o.kind)}, {"support", o.support}});
    return j;
}

Patch patch_from_json(const nlohmann::json &j) {
    Patch p;
    p.kind = j.at("kind").get<std::string>() == "memory" ? PatchKind::Memory : PatchKind::Stability;
    p.distance = j.at("distance").get<int>();
    for (const auto &q : j.at("qubits")) {
        p.qubits.push_back({q.at("id").get<int>(), q.at("x").get<int>(), q.at("y").get<int>(),
                            role_from_name(q.at("role").get<std::string>()), q.at("label").get<std::string>()});
    }
    for (const auto &c : j.at("couplings")) p.couplings.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
    auto basis = [](const nlohmann::json &b) { return b.get<std::string>() == "X" ? Basis::X : Basis::Z; };
    for (const auto &c : j.at("checks")) {
        p.checks.push_back({basis(c.at("basis")), c.at("support").get<std::vector<int>>(),
                            c.at("measure_qubit").get<int>(), c.at("via_qubits").get<std::vector<int>>(),
                            c.at("label").get<std::string>()});
    }
    for (const auto &s : j.at("stabilizers")) {
        p.stabilizers.push_back({basis(s.at("basis")), s.at("checks").get<std::vector<int>>()});
    }
    for (const auto &o : j.at("observables")) {
        std::string k = o.at("kind").get<std::string>();
        ObsKind kind = k == "logical_x"   ? ObsKind::LogicalX
                       : k == "logical_z" ? ObsKind::LogicalZ
                                          : ObsKind::CheckProductConstraint;
        p.observables.push_back({kind, o.at("support").get<std::vector<int>>()});
    }
    return p;
}

}  // namespace hhqec
