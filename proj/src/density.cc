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
#include <cmath>
#include <stdexcept>

#include "hhqec/sim.h"

namespace hhqec {

Density relax(const Density &rho, double ns, const QubitDevice &dev) {
    if (ns <= 0) return rho;
    double t = ns * 1e-3;
    double g1 = std::exp(-t / dev.t1_us), g2 = std::exp(-t / dev.t2_us);
    Density out;
    double p1 = dev.excitation + (rho(1, 1).real() - dev.excitation) * g1;
    out(1, 1) = p1;
    out(0, 0) = 1 - p1;
    out(0, 1) = rho(0, 1) * g2;
    out(1, 0) = rho(1, 0) * g2;
    return out;
}

std::vector<double> density_run(const std::vector<QubitOp> &seq, const QubitDevice &dev) {
    if (dev.t1_us <= 0 || dev.t2_us <= 0) throw std::invalid_argument("T1 and T2 must be positive");
    if (dev.t2_us > 2 * dev.t1_us) throw std::invalid_argument("T2 exceeds 2*T1");
    Density rho = Density::Zero();
    rho(0, 0) = 1;
    const Density half_id = Density::Identity() * 0.5;
    std::vector<double> out;
    for (const QubitOp &op : seq) {
        switch (op.kind) {
            case QubitOp::Gate:
                rho = op.u * rho * op.u.adjoint();
                if (!op.noisy) break;
                rho = (1 - dev.gate_error) * rho + dev.gate_error * half_id;
                rho = relax(rho, op.ns, dev);
                break;
            case QubitOp::Delay: rho = relax(rho, op.ns, dev); break;
            case QubitOp::Depolarize: rho = op.lambda * rho + (1 - op.lambda) * half_id; break;
            case QubitOp::Measure: {
                double p1 = std::clamp(rho(1, 1).real(), 0.0, 1.0);
                if (op.recorded) out.push_back((1 - p1) * dev.p_read1_given0 + p1 * (1 - dev.p_read0_given1));
                rho(0, 1) = rho(1, 0) = 0;
                rho = relax(rho, op.ns > 0 ? op.ns : dev.meas_ns, dev);
                break;
            }
        }
    }
    return out;
}

}  // namespace hhqec
