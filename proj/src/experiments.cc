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

#include "hhqec/experiments.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <gsl/gsl_blas.h>
#include <gsl/gsl_multifit_nlinear.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "hhqec/decoder.h"
#include "hhqec/dem.h"
#include "hhqec/rng.h"
#include "hhqec/sim.h"

namespace hhqec {

double CurvePoint::stderr_() const {
    if (!shots) return 0;
    double r = rate();
    return std::sqrt(r * (1 - r) / (double)shots);
}

// ---------------------------------------------------------------- fitting

namespace {

struct FitData {
    const std::vector<double> *t, *y, *sigma;
    double offset;
};

int decay_f(const gsl_vector *x, void *data, gsl_vector *f) {
    auto *d = static_cast<FitData *>(data);
    double A = gsl_vector_get(x, 0), p = gsl_vector_get(x, 1);
    for (size_t i = 0; i < d->t->size(); i++) {
        double model = A * std::pow(p, (*d->t)[i]) + d->offset;
        gsl_vector_set(f, i, (model - (*d->y)[i]) / (*d->sigma)[i]);
    }
    return GSL_SUCCESS;
}

int decay_df(const gsl_vector *x, void *data, gsl_matrix *J) {
    auto *d = static_cast<FitData *>(data);
    double A = gsl_vector_get(x, 0), p = gsl_vector_get(x, 1);
    for (size_t i = 0; i < d->t->size(); i++) {
        double t = (*d->t)[i], s = (*d->sigma)[i];
        gsl_matrix_set(J, i, 0, std::pow(p, t) / s);
        gsl_matrix_set(J, i, 1, t == 0 ? 0 : A * t * std::pow(p, t - 1) / s);
    }
    return GSL_SUCCESS;
}

}  // namespace

DecayFit fit_decay(const std::vector<double> &t, const std::vector<double> &y, const std::vector<double> &sigma,
                   double offset) {
    DecayFit out;
    const size_t n = t.size();
    if (n != y.size() || n != sigma.size()) throw std::invalid_argument("fit input sizes differ");
    if (n < 2) {
        out.message = "need at least two points";
        return out;
    }
    for (double s : sigma) {
        if (!(s > 0)) throw std::invalid_argument("fit sigma must be positive");
    }
    // Start from a weighted log-linear fit of the points above the offset.
    double sw = 0, st = 0, sl = 0, stt = 0, stl = 0;
    for (size_t i = 0; i < n; i++) {
        double v = y[i] - offset;
        if (v <= 0) continue;
        double w = std::pow(v / sigma[i], 2);
        double l = std::log(v);
        sw += w;
        st += w * t[i];
        sl += w * l;
        stt += w * t[i] * t[i];
        stl += w * t[i] * l;
    }
    double A0 = 0.5, p0 = 0.9;
    double den = sw * stt - st * st;
    if (sw > 0 && den > 0) {
        double slope = (sw * stl - st * sl) / den;
        double icpt = (sl - slope * st) / sw;
        p0 = std::exp(slope);
        A0 = std::exp(icpt);
    }
    if (!(p0 > 0 && std::isfinite(p0))) p0 = 0.9;
    if (!(std::isfinite(A0))) A0 = 0.5;

    FitData data{&t, &y, &sigma, offset};
    gsl_multifit_nlinear_fdf fdf;
    fdf.f = decay_f;
    fdf.df = decay_df;
    fdf.fvv = nullptr;
    fdf.n = n;
    fdf.p = 2;
    fdf.params = &data;
    gsl_multifit_nlinear_parameters params = gsl_multifit_nlinear_default_parameters();
    gsl_multifit_nlinear_workspace *w = gsl_multifit_nlinear_alloc(gsl_multifit_nlinear_trust, &params, n, 2);
    gsl_vector *x = gsl_vector_alloc(2);
    gsl_vector_set(x, 0, A0);
    gsl_vector_set(x, 1, p0);
    gsl_set_error_handler_off();
    int info = 0;
    int status = gsl_multifit_nlinear_init(x, &fdf, w);
    if (status == GSL_SUCCESS) status = gsl_multifit_nlinear_driver(200, 1e-10, 1e-10, 1e-12, nullptr, nullptr, &info, w);
    gsl_vector *res = gsl_multifit_nlinear_residual(w);
    double chi2;
    gsl_blas_ddot(res, res, &chi2);
    gsl_matrix *J = gsl_multifit_nlinear_jac(w);
    gsl_matrix *cov = gsl_matrix_alloc(2, 2);
    gsl_multifit_nlinear_covar(J, 0.0, cov);
    gsl_vector *sol = gsl_multifit_nlinear_position(w);
    out.A = gsl_vector_get(sol, 0);
    out.p = gsl_vector_get(sol, 1);
    out.chi2 = chi2;
    out.dof = (int)n - 2;
    // Inflate by the reduced chi-square when the scatter exceeds the binomial error bars.
    double scale = out.dof > 0 ? std::max(1.0, std::sqrt(chi2 / out.dof)) : 1.0;
    out.A_se = std::sqrt(std::max(0.0, gsl_matrix_get(cov, 0, 0))) * scale;
    out.p_se = std::sqrt(std::max(0.0, gsl_matrix_get(cov, 1, 1))) * scale;
    out.ok = status == GSL_SUCCESS && std::isfinite(out.p) && std::isfinite(out.A) && std::isfinite(out.p_se);
    out.message = status == GSL_SUCCESS ? "ok" : gsl_strerror(status);
    gsl_matrix_free(cov);
    gsl_vector_free(x);
    gsl_multifit_nlinear_free(w);
    return out;
}

// ---------------------------------------------------------------- runs

namespace {

struct Pipeline {
    NoisyCircuit nc;
    DetectorSet ds;
    DemGraph g;
};

Pipeline prepare(const Patch &patch, Variant variant, bool reset, Basis basis, int t, const NoiseModel &model) {
    Circuit c = assemble_experiment(patch, variant, reset, basis, t);
    Pipeline p;
    p.ds = define_detectors(c, patch, DetectorConvention::for_circuit(c));
    p.nc = annotate(c, model);
    p.g = compile(p.nc, p.ds);
    return p;
}

CurvePoint run_point(const Pipeline &p, int t, size_t shots, uint64_t seed, int workers) {
    FrameBatch rec = sample(p.nc, shots, seed, workers);
    FrameBatch det = extract_detectors(rec, p.ds);
    FrameBatch pred = decode_batch(p.g, det, workers);
    DecodeSummary s = summarize(pred, det, p.g.num_detectors, 0);
    return {t, s.shots, s.failures};
}

// Binomial error bar with a half-count floor so empty bins keep a finite weight.
double binomial_sigma(double rate, size_t shots) {
    double n = (double)shots;
    double r = std::clamp(rate, 0.5 / n, 1 - 0.5 / n);
    return std::sqrt(r * (1 - r) / n);
}

constexpr uint64_t kMemoryStream = 0x4D454D;
constexpr uint64_t kStabilityStream = 0x535442;

}  // namespace

std::vector<double> MemoryResult::survival() const {
    std::vector<double> out;
    for (const auto &p : points) out.push_back(2 * (1 - p.rate()) - 1);
    return out;
}

std::vector<double> MemoryResult::survival_from_failures() const {
    std::vector<double> out;
    for (const auto &p : points) out.push_back(1 - 2 * p.rate());
    return out;
}

MemoryResult run_memory(const Patch &patch, Variant variant, bool reset, Basis basis, const std::vector<int> &ts,
                        const NoiseModel &model, size_t shots, uint64_t seed, int workers) {
    if (ts.empty()) throw std::invalid_argument("empty round list");
    if (shots == 0) throw std::invalid_argument("shots must be positive");
    MemoryResult r;
    r.basis = basis;
    r.variant = variant;
    r.reset = reset;
    r.seed = seed;
    std::vector<double> t, y, sig;
    for (int rounds : ts) {
        Pipeline p = prepare(patch, variant, reset, basis, rounds, model);
        CurvePoint pt = run_point(p, rounds, shots, derive_seed(seed, kMemoryStream, rounds), workers);
        r.points.push_back(pt);
        t.push_back(rounds);
        y.push_back(1 - pt.rate());
        sig.push_back(binomial_sigma(pt.rate(), pt.shots));
    }
    r.fit = fit_decay(t, y, sig, 0.5);
    return r;
}

StabilityResult run_stability(bool reset, const std::vector<int> &ts, const NoiseModel &model, size_t shots,
                              uint64_t seed, int workers, const std::vector<int> &excluded) {
    if (ts.empty()) throw std::invalid_argument("empty round list");
    if (shots == 0) throw std::invalid_argument("shots must be positive");
    Patch patch = build_stability_patch();
    StabilityResult r;
    r.reset = reset;
    r.seed = seed;
    r.excluded_t = excluded;
    std::vector<double> t, y, sig;
    for (int rounds : ts) {
        Pipeline p = prepare(patch, Variant::Improved, reset, Basis::Z, rounds, model);
        CurvePoint pt = run_point(p, rounds, shots, derive_seed(seed, kStabilityStream, rounds), workers);
        r.points.push_back(pt);
        if (std::find(excluded.begin(), excluded.end(), rounds) != excluded.end()) continue;
        t.push_back(rounds);
        y.push_back(pt.rate());
        sig.push_back(binomial_sigma(pt.rate(), pt.shots));
    }
    if (t.size() < 2) {
        r.fit.message = "fewer than two rounds left after exclusion";
    } else {
        r.fit = fit_decay(t, y, sig, 0.0);
    }
    return r;
}

const std::vector<double> kSweepFactors = {1.0, 0.5, 0.1, 0.01};

std::vector<SweepPoint> run_sweep(const NoiseModel &model, const std::vector<std::string> &parameters,
                                  const std::vector<double> &factors, const std::vector<bool> &resets,
                                  const SweepConfig &cfg) {
    for (double f : factors) {
        bool ok = false;
        for (double a : kSweepFactors) ok = ok || std::abs(f - a) < 1e-12;
        if (!ok) throw std::invalid_argument("sweep factor " + std::to_string(f) + " is not one of 1, 1/2, 1/10, 1/100");
    }
    for (const auto &p : parameters) {
        if (std::find(kNoiseParameters.begin(), kNoiseParameters.end(), p) == kNoiseParameters.end()) {
            throw std::invalid_argument("unknown noise parameter " + p);
        }
    }
    Patch mem = build_memory_patch(3);
    std::vector<SweepPoint> out;
    for (const auto &param : parameters) {
        for (double f : factors) {
            NoiseModel m = scale_parameter(model, param, f);
            for (bool reset : resets) {
                MemoryResult mr = run_memory(mem, Variant::Improved, reset, cfg.basis, cfg.memory_ts, m, cfg.shots,
                                             cfg.seed, cfg.workers);
                out.push_back({param, f, reset, "memory", mr.fit.p, mr.fit.p_se, mr.fit.ok, mr.points});
                StabilityResult sr = run_stability(reset, cfg.stability_ts, m, cfg.shots, cfg.seed, cfg.workers);
                out.push_back({param, f, reset, "stability", sr.fit.p, sr.fit.p_se, sr.fit.ok, sr.points});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- noise fit

TargetCurve simulate_curve(const std::string &kind, const std::vector<int> &ts, const NoiseModel &model, size_t shots,
                           uint64_t seed, int workers) {
    TargetCurve c{kind, ts, {}};
    if (kind == "memory_z" || kind == "memory_x") {
        Patch mem = build_memory_patch(3);
        auto r = run_memory(mem, Variant::Improved, false, kind == "memory_z" ? Basis::Z : Basis::X, ts, model, shots,
                            seed, workers);
        c.values = r.survival();
    } else if (kind == "stability_nr" || kind == "stability_ur") {
        auto r = run_stability(kind == "stability_ur", ts, model, shots, seed, workers, {});
        for (const auto &p : r.points) c.values.push_back(p.rate());
    } else {
        throw std::invalid_argument("unknown curve kind " + kind);
    }
    return c;
}

double curve_loss(const std::vector<TargetCurve> &targets, const std::vector<TargetCurve> &sim) {
    if (targets.size() != sim.size()) throw std::invalid_argument("curve count mismatch");
    // Values at or below zero are floored so the logarithm stays finite.
    constexpr double kFloor = 1e-4;
    double loss = 0;
    for (size_t i = 0; i < targets.size(); i++) {
        if (targets[i].values.size() != sim[i].values.size()) throw std::invalid_argument("curve length mismatch");
        for (size_t k = 0; k < targets[i].values.size(); k++) {
            double r = std::log(std::max(sim[i].values[k], kFloor)) - std::log(std::max(targets[i].values[k], kFloor));
            loss += r * r;
        }
    }
    return loss;
}

namespace {

struct NmContext {
    const std::vector<TargetCurve> *targets;
    NoiseModel base;
    const NoiseFitConfig *cfg;
    int evaluations = 0;
};

NoiseModel with_params(const NmContext &ctx, const gsl_vector *x) {
    NoiseModel m = ctx.base;
    for (size_t i = 0; i < ctx.cfg->free.size(); i++) {
        const std::string &name = ctx.cfg->free[i];
        double v = std::exp(gsl_vector_get(x, i));
        m.set(name, v);
        if (m.tie_qmeas_to_idle && (name == "p_qmeas" || name == "p_idle")) m.p_qmeas = m.p_idle = v;
    }
    return m;
}

double nm_objective(const gsl_vector *x, void *params) {
    auto *ctx = static_cast<NmContext *>(params);
    ctx->evaluations++;
    NoiseModel m = with_params(*ctx, x);
    if (!m.violations().empty()) return 1e6;
    std::vector<TargetCurve> sim;
    for (const auto &t : *ctx->targets) sim.push_back(simulate_curve(t.kind, t.ts, m, ctx->cfg->shots, ctx->cfg->seed, ctx->cfg->workers));
    return curve_loss(*ctx->targets, sim);
}

}  // namespace

NoiseFitResult fit_noise_model(const std::vector<TargetCurve> &targets, const NoiseModel &initial,
                               const NoiseFitConfig &cfg) {
    if (targets.empty()) throw std::invalid_argument("no target curves");
    for (const auto &t : targets) {
        if (t.ts.size() < 4) throw std::invalid_argument("target curve " + t.kind + " has fewer than 4 round counts");
        if (t.ts.size() != t.values.size()) throw std::invalid_argument("target curve " + t.kind + " is ragged");
    }
    if (cfg.free.empty()) throw std::invalid_argument("no free parameters");
    std::set<std::string> seen;
    for (const auto &f : cfg.free) {
        if (std::find(kNoiseParameters.begin(), kNoiseParameters.end(), f) == kNoiseParameters.end()) {
            throw std::invalid_argument("unknown noise parameter " + f);
        }
        std::string key = (initial.tie_qmeas_to_idle && f == "p_idle") ? "p_qmeas" : f;
        if (!seen.insert(key).second) throw std::invalid_argument("parameter " + f + " is tied to another free parameter");
        if (!(initial.get(f) > 0)) throw std::invalid_argument("free parameter " + f + " must start positive");
    }
    const size_t n = cfg.free.size();
    NmContext ctx{&targets, initial, &cfg};
    gsl_multimin_function fn{nm_objective, n, &ctx};
    gsl_vector *x = gsl_vector_alloc(n), *step = gsl_vector_alloc(n);
    for (size_t i = 0; i < n; i++) {
        gsl_vector_set(x, i, std::log(initial.get(cfg.free[i])));
        gsl_vector_set(step, i, cfg.initial_step);
    }
    gsl_multimin_fminimizer *s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    NoiseFitResult out;
    int status = GSL_CONTINUE;
    while (status == GSL_CONTINUE && out.iterations < cfg.max_iterations) {
        out.iterations++;
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), cfg.size_tolerance);
    }
    out.converged = status == GSL_SUCCESS;
    out.model = with_params(ctx, gsl_multimin_fminimizer_x(s));
    out.loss = gsl_multimin_fminimizer_minimum(s);
    out.evaluations = ctx.evaluations;
    out.message = out.converged ? "converged" : "stopped after " + std::to_string(out.iterations) + " iterations; best so far reported";
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(x);
    gsl_vector_free(step);
    return out;
}

// ---------------------------------------------------------------- output

nlohmann::json fit_to_json(const DecayFit &f) {
    return {{"A", f.A},       {"p", f.p},           {"A_se", f.A_se},   {"p_se", f.p_se}, {"p_ci95", {f.p_lo(), f.p_hi()}},
            {"chi2", f.chi2}, {"dof", f.dof},       {"ok", f.ok},       {"message", f.message}};
}

static nlohmann::json points_json(const std::vector<CurvePoint> &pts) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto &p : pts) a.push_back({{"t", p.t}, {"shots", p.shots}, {"failures", p.failures}, {"rate", p.rate()}, {"stderr", p.stderr_()}});
    return a;
}

nlohmann::json memory_to_json(const MemoryResult &r) {
    return {{"experiment", "memory"},
            {"basis", basis_name(r.basis)},
            {"variant", variant_name(r.variant)},
            {"reset", r.reset},
            {"seed", r.seed},
            {"points", points_json(r.points)},
            {"fit", fit_to_json(r.fit)},
            {"fidelity_per_round", r.fidelity()},
            {"fidelity_se", r.fidelity_se()},
            {"survival_2s_minus_1", r.survival()},
            {"survival_1_minus_2pfail", r.survival_from_failures()}};
}

nlohmann::json stability_to_json(const StabilityResult &r) {
    return {{"experiment", "stability"}, {"reset", r.reset},        {"seed", r.seed},
            {"points", points_json(r.points)}, {"excluded_t", r.excluded_t}, {"fit", fit_to_json(r.fit)},
            {"B", r.fit.A},               {"gamma", r.fit.p},         {"gamma_ci95", {r.fit.p_lo(), r.fit.p_hi()}}};
}

nlohmann::json sweep_to_json(const std::vector<SweepPoint> &pts) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto &p : pts) {
        a.push_back({{"parameter", p.parameter}, {"factor", p.factor}, {"mode", p.reset ? "ur" : "nr"},
                     {"experiment", p.experiment}, {"decay", p.decay}, {"decay_se", p.decay_se}, {"fit_ok", p.fit_ok},
                     {"points", points_json(p.points)}});
    }
    return a;
}

nlohmann::json noise_fit_to_json(const NoiseFitResult &r) {
    return {{"model", noise_to_json(r.model)}, {"loss", r.loss},       {"iterations", r.iterations},
            {"evaluations", r.evaluations},    {"converged", r.converged}, {"message", r.message}};
}

static std::ofstream open_out(const std::string &path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f.precision(10);
    return f;
}

void write_points_csv(const std::vector<CurvePoint> &pts, const std::string &path) {
    auto f = open_out(path);
    f << "t,shots,failures,rate,stderr\n";
    for (const auto &p : pts) f << p.t << ',' << p.shots << ',' << p.failures << ',' << p.rate() << ',' << p.stderr_() << '\n';
}

void write_memory_tidy(const std::vector<MemoryResult> &rs, const std::string &path) {
    auto f = open_out(path);
    f << "experiment,variant,basis,reset,t,shots,failures,rate,stderr,survival,fit_survival,fit_p,fit_A\n";
    for (const auto &r : rs) {
        for (const auto &p : r.points) {
            double fit = 2 * (r.fit.A * std::pow(r.fit.p, p.t) + 0.5) - 1;
            f << "memory," << variant_name(r.variant) << ',' << basis_name(r.basis) << ',' << (r.reset ? "ur" : "nr") << ','
              << p.t << ',' << p.shots << ',' << p.failures << ',' << p.rate() << ',' << p.stderr_() << ','
              << 1 - 2 * p.rate() << ',' << fit << ',' << r.fit.p << ',' << r.fit.A << '\n';
        }
    }
}

void write_stability_tidy(const std::vector<StabilityResult> &rs, const std::string &path) {
    auto f = open_out(path);
    f << "experiment,reset,t,shots,failures,rate,stderr,excluded,fit_rate,fit_gamma,fit_B\n";
    for (const auto &r : rs) {
        for (const auto &p : r.points) {
            bool ex = std::find(r.excluded_t.begin(), r.excluded_t.end(), p.t) != r.excluded_t.end();
            f << "stability," << (r.reset ? "ur" : "nr") << ',' << p.t << ',' << p.shots << ',' << p.failures << ','
              << p.rate() << ',' << p.stderr_() << ',' << (ex ? 1 : 0) << ',' << r.fit.A * std::pow(r.fit.p, p.t) << ','
              << r.fit.p << ',' << r.fit.A << '\n';
        }
    }
}

void write_sweep_tidy(const std::vector<SweepPoint> &pts, const std::string &path) {
    auto f = open_out(path);
    f << "parameter,factor,mode,experiment,decay,decay_se,fit_ok\n";
    for (const auto &p : pts) {
        f << p.parameter << ',' << p.factor << ',' << (p.reset ? "ur" : "nr") << ',' << p.experiment << ',' << p.decay << ','
          << p.decay_se << ',' << (p.fit_ok ? 1 : 0) << '\n';
    }
}

std::vector<TargetCurve> read_target_curves(const std::string &csv_path) {
    std::ifstream f(csv_path);
    if (!f) throw std::runtime_error("cannot open " + csv_path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("kind,t,value", 0) != 0) throw std::invalid_argument("target CSV needs header kind,t,value");
    std::map<std::string, TargetCurve> by_kind;
    std::vector<std::string> order;
    int lineno = 1;
    while (std::getline(f, line)) {
        lineno++;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string kind, ts, vs;
        if (!std::getline(ss, kind, ',') || !std::getline(ss, ts, ',') || !std::getline(ss, vs, ',')) {
            throw std::invalid_argument("bad target row at line " + std::to_string(lineno));
        }
        if (!by_kind.count(kind)) order.push_back(kind);
        auto &c = by_kind[kind];
        c.kind = kind;
        c.ts.push_back(std::stoi(ts));
        c.values.push_back(std::stod(vs));
    }
    std::vector<TargetCurve> out;
    for (const auto &k : order) out.push_back(by_kind[k]);
    return out;
}

void write_target_curves(const std::vector<TargetCurve> &curves, const std::string &csv_path) {
    auto f = open_out(csv_path);
    f.precision(12);
    f << "kind,t,value\n";
    for (const auto &c : curves) {
        for (size_t i = 0; i < c.ts.size(); i++) f << c.kind << ',' << c.ts[i] << ',' << c.values[i] << '\n';
    }
}

}  // namespace hhqec
