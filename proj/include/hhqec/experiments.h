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

#ifndef HHQEC_EXPERIMENTS_H
#define HHQEC_EXPERIMENTS_H

#include <cstdint>
#include <string>
#include <vector>

#include "hhqec/circuit.h"
#include "hhqec/lattice.h"
#include "hhqec/noise.h"
#include "json.hpp"

namespace hhqec {

struct CurvePoint {
    int t;
    size_t shots;
    size_t failures;
    double rate() const { return shots ? (double)failures / (double)shots : 0; }
    double stderr_() const;
};

/// y(t) = A * p^t + offset, fitted by weighted nonlinear least squares.
struct DecayFit {
    double A = 0, p = 0;
    double A_se = 0, p_se = 0;
    double chi2 = 0;
    int dof = 0;
    bool ok = false;
    std::string message;

    double p_lo() const { return p - 1.959963984540054 * p_se; }
    double p_hi() const { return p + 1.959963984540054 * p_se; }
};

/// Weighted fit of y = A * p^t + offset. Points with sigma <= 0 are rejected.
DecayFit fit_decay(const std::vector<double> &t, const std::vector<double> &y, const std::vector<double> &sigma,
                   double offset);

struct MemoryResult {
    Basis basis = Basis::Z;
    Variant variant = Variant::Improved;
    bool reset = false;
    uint64_t seed = 0;
    std::vector<CurvePoint> points;
    DecayFit fit;  // success = A p^t + 0.5

    double fidelity() const { return (1 + fit.p) / 2; }
    double fidelity_se() const { return fit.p_se / 2; }
    /// 2 * success - 1 per point.
    std::vector<double> survival() const;
    /// 1 - 2 * mean failure probability per point (identical to survival(), kept for the sweep reports).
    std::vector<double> survival_from_failures() const;
};

struct StabilityResult {
    bool reset = false;
    uint64_t seed = 0;
    std::vector<CurvePoint> points;
    std::vector<int> excluded_t;
    DecayFit fit;  // failure = B Gamma^t; fit.A is B, fit.p is Gamma

    double gamma() const { return fit.p; }
};

/// Memory experiment. Shots for round count t use the seed derived from (seed, t).
MemoryResult run_memory(const Patch &patch, Variant variant, bool reset, Basis basis, const std::vector<int> &ts,
                        const NoiseModel &model, size_t shots, uint64_t seed, int workers = 0);

/// Stability experiment on the fixed stability patch. Round counts in `excluded` stay in the
/// output but are left out of the fit.
StabilityResult run_stability(bool reset, const std::vector<int> &ts, const NoiseModel &model, size_t shots,
                              uint64_t seed, int workers = 0, const std::vector<int> &excluded = {1, 2});

struct SweepConfig {
    std::vector<int> memory_ts{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<int> stability_ts{1, 2, 3, 4, 5, 6, 7, 8};
    size_t shots = 20000;
    uint64_t seed = 0;
    Basis basis = Basis::Z;
    int workers = 0;
};

struct SweepPoint {
    std::string parameter;
    double factor;
    bool reset;
    std::string experiment;  // "memory" or "stability"
    double decay;            // memory p or stability Gamma
    double decay_se;
    bool fit_ok;
    std::vector<CurvePoint> points;
};

extern const std::vector<double> kSweepFactors;

/// Every (parameter, factor, reset mode) point, each with a memory and a stability run. The seed
/// is shared across the grid, so factor 1 reproduces the unswept runs exactly.
std::vector<SweepPoint> run_sweep(const NoiseModel &model, const std::vector<std::string> &parameters,
                                  const std::vector<double> &factors, const std::vector<bool> &resets,
                                  const SweepConfig &cfg);

/// A decay curve to match. kind: memory_z, memory_x (survival 2s-1, improved no-reset) or
/// stability_nr, stability_ur (failure probability).
struct TargetCurve {
    std::string kind;
    std::vector<int> ts;
    std::vector<double> values;
};

/// Simulated curve values of the given kind.
TargetCurve simulate_curve(const std::string &kind, const std::vector<int> &ts, const NoiseModel &model, size_t shots,
                           uint64_t seed, int workers = 0);

struct NoiseFitConfig {
    std::vector<std::string> free{"p_2q", "p_cmeas", "p_qmeas"};
    size_t shots = 20000;
    uint64_t seed = 0;
    int max_iterations = 200;
    double size_tolerance = 1e-4;
    double initial_step = 0.3;  // in natural-log units
    int workers = 0;
};

struct NoiseFitResult {
    NoiseModel model;
    double loss = 0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string message;
};

/// Nelder-Mead in log-parameter space on the summed squared log residuals. Every evaluation
/// uses the same seed so the objective is a deterministic function of the parameters.
NoiseFitResult fit_noise_model(const std::vector<TargetCurve> &targets, const NoiseModel &initial,
                               const NoiseFitConfig &cfg);

double curve_loss(const std::vector<TargetCurve> &targets, const std::vector<TargetCurve> &sim);

nlohmann::json fit_to_json(const DecayFit &f);
nlohmann::json memory_to_json(const MemoryResult &r);
nlohmann::json stability_to_json(const StabilityResult &r);
nlohmann::json sweep_to_json(const std::vector<SweepPoint> &pts);
nlohmann::json noise_fit_to_json(const NoiseFitResult &r);

/// Columns t,shots,failures,rate,stderr.
void write_points_csv(const std::vector<CurvePoint> &pts, const std::string &path);
/// Tidy long-format tables for plotting.
void write_memory_tidy(const std::vector<MemoryResult> &rs, const std::string &path);
void write_stability_tidy(const std::vector<StabilityResult> &rs, const std::string &path);
void write_sweep_tidy(const std::vector<SweepPoint> &pts, const std::string &path);

std::vector<TargetCurve> read_target_curves(const std::string &csv_path);
void write_target_curves(const std::vector<TargetCurve> &curves, const std::string &csv_path);

}  // namespace hhqec

#endif
