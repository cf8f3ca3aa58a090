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

// hhqec command-line entry point. Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hhqec/circuit.h"
#include "hhqec/decoder.h"
#include "hhqec/dem.h"
#include "hhqec/experiments.h"
#include "hhqec/lattice.h"
#include "hhqec/noise.h"
#include "hhqec/rb.h"
#include "hhqec/sim.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hhqec;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// "1..4,6,8" -> {1,2,3,4,6,8}
std::vector<int> parse_int_list(const std::string &s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        try {
            auto dots = part.find("..");
            if (dots == std::string::npos) {
                out.push_back(std::stoi(part));
                continue;
            }
            int a = std::stoi(part.substr(0, dots)), b = std::stoi(part.substr(dots + 2));
            if (b < a) throw UsageError("empty range " + part);
            for (int i = a; i <= b; i++) out.push_back(i);
        } catch (const std::logic_error &) {
            throw UsageError("bad integer list '" + s + "'");
        }
    }
    if (out.empty()) throw UsageError("empty integer list");
    return out;
}

std::vector<double> parse_double_list(const std::string &s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        try {
            out.push_back(std::stod(part));
        } catch (const std::logic_error &) {
            throw UsageError("bad number list '" + s + "'");
        }
    }
    if (out.empty()) throw UsageError("empty number list");
    return out;
}

std::vector<std::string> parse_names(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

std::string slurp(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const std::string &path, const std::string &text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

void spit_json(const std::string &path, const json &j) { spit(path, j.dump(2) + "\n"); }

Variant parse_variant(const std::string &s) {
    if (s == "improved") return Variant::Improved;
    if (s == "original") return Variant::Original;
    throw UsageError("variant must be improved or original");
}

Basis parse_basis(const std::string &s) {
    if (s == "Z" || s == "z") return Basis::Z;
    if (s == "X" || s == "x") return Basis::X;
    throw UsageError("basis must be X or Z");
}

// "auto" resets for the original schedule and not for the improved one.
bool parse_reset(const std::string &s, Variant v) {
    if (s == "auto") return v == Variant::Original;
    if (s == "on" || s == "true" || s == "1") return true;
    if (s == "off" || s == "false" || s == "0") return false;
    throw UsageError("reset must be auto, on or off");
}

bool parse_onoff(const std::string &s) {
    if (s == "on" || s == "true" || s == "1") return true;
    if (s == "off" || s == "false" || s == "0") return false;
    throw UsageError("expected on or off, got '" + s + "'");
}

NoiseModel load_noise(const std::string &path) {
    if (path.empty()) return default_fitted_model();
    return noise_from_json(json::parse(slurp(path)));
}

Patch memory_patch(int d) {
    if (d < 3 || d % 2 == 0) throw UsageError("distance must be odd and at least 3, got " + std::to_string(d));
    return build_memory_patch(d);
}

// Every option of the subcommand with its resolved value, defaults included.
json resolved_options(const CLI::App *app) {
    json j = json::object();
    for (const CLI::Option *opt : app->get_options()) {
        if (opt == app->get_help_ptr()) continue;
        std::string name = opt->get_name(false, false);
        if (name.empty()) continue;
        while (!name.empty() && name[0] == '-') name.erase(0, 1);
        if (opt->count() > 0) {
            auto r = opt->results();
            if (opt->get_type_size() == 0) j[name] = true;  // flag
            else j[name] = r.size() == 1 ? json(r[0]) : json(r);
        } else if (opt->get_type_size() == 0) {
            j[name] = false;
        } else {
            j[name] = opt->get_default_str();
        }
    }
    return j;
}

struct Run {
    std::string out = "out";
    std::vector<std::string> argv;
    const CLI::App *app = nullptr;
    fs::path dir() const { return fs::path(out); }
};

void write_manifest(const Run &run, const std::string &status, const std::string &error = "") {
    json m;
    m["tool"] = "hhqec";
    m["command"] = run.app->get_name();
    m["argv"] = run.argv;
    m["config"] = resolved_options(run.app);
    m["status"] = status;
    if (!error.empty()) m["error"] = error;
    fs::create_directories(run.dir());
    spit_json((run.dir() / "manifest.json").string(), m);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"hhqec: heavy-hex error-correction simulator and analysis toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file of defaults; command-line flags take precedence");
    Run run;
    for (int i = 0; i < argc; i++) run.argv.push_back(argv[i]);
    int workers = 0;
    bool emit_plot = false;

    auto common = [&](CLI::App *sub, bool experiment) {
        sub->add_option("--out", run.out, "Output directory")->capture_default_str();
        sub->add_option("--workers", workers, "Worker threads (0 = all cores)")->capture_default_str();
        if (experiment) sub->add_flag("--emit-plot-data", emit_plot, "Also write tidy long-format CSVs for plotting");
    };

    // ---- build ----
    std::string variant = "improved", reset = "auto", basis = "Z", patch_kind = "memory";
    int d = 3, rounds = 1;
    auto *build = app.add_subcommand("build", "Write patch JSON, circuit text and a duration report");
    build->add_option("--variant", variant, "improved or original")->capture_default_str();
    build->add_option("--reset", reset, "auto (on for original), on or off")->capture_default_str();
    build->add_option("--d", d, "Code distance (odd)")->capture_default_str();
    build->add_option("--patch", patch_kind, "memory or stability")->capture_default_str();
    build->add_option("--basis", basis, "Logical basis for memory")->capture_default_str();
    build->add_option("--rounds", rounds, "Syndrome rounds in the assembled experiment")->capture_default_str();
    common(build, false);

    // ---- memory / stability ----
    std::string ts = "1..12", noise_path, exclude = "1,2";
    size_t shots = 100000;
    uint64_t seed = 0;
    auto *memory = app.add_subcommand("memory", "Memory experiment with per-round fidelity fit");
    memory->add_option("--variant", variant)->capture_default_str();
    memory->add_option("--reset", reset)->capture_default_str();
    memory->add_option("--basis", basis)->capture_default_str();
    memory->add_option("--d", d)->capture_default_str();
    memory->add_option("--t", ts, "Round counts, e.g. 1..12 or 1,2,4")->capture_default_str();
    memory->add_option("--shots", shots)->capture_default_str();
    memory->add_option("--seed", seed)->required();
    memory->add_option("--noise", noise_path, "Noise model JSON (default: fitted table values)");
    common(memory, true);

    auto *stability = app.add_subcommand("stability", "Stability experiment with Gamma fit");
    stability->add_option("--reset", reset)->capture_default_str();
    stability->add_option("--t", ts)->capture_default_str();
    stability->add_option("--exclude", exclude, "Round counts left out of the fit")->capture_default_str();
    stability->add_option("--shots", shots)->capture_default_str();
    stability->add_option("--seed", seed)->required();
    stability->add_option("--noise", noise_path);
    common(stability, true);

    // ---- sweep ----
    std::string params = "all", factors = "1,0.5,0.1,0.01", resets = "off,on", mem_ts = "1..8", stab_ts = "1..8";
    auto *sweep = app.add_subcommand("sweep", "One-parameter noise sweeps of memory and stability decay");
    sweep->add_option("--params", params, "Comma list of parameters or 'all'")->capture_default_str();
    sweep->add_option("--factors", factors)->capture_default_str();
    sweep->add_option("--resets", resets, "Reset modes to run")->capture_default_str();
    sweep->add_option("--memory-t", mem_ts)->capture_default_str();
    sweep->add_option("--stability-t", stab_ts)->capture_default_str();
    sweep->add_option("--basis", basis)->capture_default_str();
    sweep->add_option("--shots", shots)->capture_default_str();
    sweep->add_option("--seed", seed)->required();
    sweep->add_option("--noise", noise_path);
    common(sweep, true);

    // ---- fit ----
    std::string targets_path, free = "p_2q,p_cmeas,p_qmeas";
    int max_iter = 200;
    double size_tol = 1e-4, step = 0.3;
    auto *fit = app.add_subcommand("fit", "Fit noise parameters to target decay curves");
    fit->add_option("--targets", targets_path, "CSV with columns kind,t,value")->required();
    fit->add_option("--free", free, "Parameters to fit")->capture_default_str();
    fit->add_option("--noise", noise_path, "Initial model JSON");
    fit->add_option("--shots", shots)->capture_default_str();
    fit->add_option("--seed", seed)->required();
    fit->add_option("--max-iterations", max_iter)->capture_default_str();
    fit->add_option("--size-tolerance", size_tol)->capture_default_str();
    fit->add_option("--initial-step", step, "Simplex step in log units")->capture_default_str();
    common(fit, true);

    // ---- rb ----
    std::string protocol = "simultaneous", qubits = "0..3", measured = "0,1", spectators = "2,3", ms = "1,2,4,8,16,32,64",
                mid_variant = "return_to_target", device_path, device2_path, block = "independent";
    int k = 20, cps = 4, mirror_m = 1;
    uint64_t seed2 = 1;
    double alpha = 0.01, crosstalk_p = 0;
    std::string crosstalk_pair;
    auto *rb = app.add_subcommand("rb", "Randomized-benchmarking protocols on the device simulator");
    rb->add_option("--protocol", protocol, "simultaneous, midcircuit, temporal or correlation")->capture_default_str();
    rb->add_option("--qubits", qubits)->capture_default_str();
    rb->add_option("--measured", measured)->capture_default_str();
    rb->add_option("--spectators", spectators)->capture_default_str();
    rb->add_option("--m", ms, "Sequence lengths (rounds for midcircuit; first value for temporal)")->capture_default_str();
    rb->add_option("--k", k, "Sequences per length")->capture_default_str();
    rb->add_option("--cliffords-per-segment", cps)->capture_default_str();
    rb->add_option("--variant", mid_variant)->capture_default_str();
    rb->add_option("--device", device_path, "Device parameters JSON (default: median T1/T2, 2 us readout)");
    rb->add_option("--device2", device2_path, "Device for the second temporal run (default: same)");
    rb->add_option("--shots", shots)->capture_default_str();
    rb->add_option("--seed", seed)->required();
    rb->add_option("--seed2", seed2, "Shot seed of the second temporal run")->capture_default_str();
    rb->add_option("--alpha", alpha, "Family-wise level for flags or edges")->capture_default_str();
    rb->add_option("--block", block, "Correlation block: independent or syndrome")->capture_default_str();
    rb->add_option("--mirror-m", mirror_m, "Block repetitions per mirror half")->capture_default_str();
    rb->add_option("--noise", noise_path, "Noise model for correlation analysis");
    rb->add_option("--crosstalk", crosstalk_pair, "Planted crosstalk pair a,b");
    rb->add_option("--crosstalk-p", crosstalk_p)->capture_default_str();
    common(rb, true);

    // ---- dem / sample / decode ----
    std::string circuit_path, patch_path, dem_path, det_path;
    auto *dem = app.add_subcommand("dem", "Compile a detector error model");
    dem->add_option("--circuit", circuit_path)->required();
    dem->add_option("--patch", patch_path)->required();
    dem->add_option("--noise", noise_path);
    common(dem, false);

    auto *sample_cmd = app.add_subcommand("sample", "Sample measurement records (and detectors with --patch)");
    sample_cmd->add_option("--circuit", circuit_path)->required();
    sample_cmd->add_option("--patch", patch_path);
    sample_cmd->add_option("--noise", noise_path);
    sample_cmd->add_option("--shots", shots)->capture_default_str();
    sample_cmd->add_option("--seed", seed)->required();
    common(sample_cmd, false);

    auto *decode = app.add_subcommand("decode", "Decode a detector batch against a DEM");
    decode->add_option("--dem", dem_path)->required();
    decode->add_option("--detectors", det_path, "Binary detector batch with observable rows")->required();
    common(decode, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    CLI::App *sub = app.get_subcommands().front();
    run.app = sub;
    if (workers < 0) {
        std::cerr << "error: --workers must be non-negative\n";
        return 2;
    }
    if (workers > 0) omp_set_num_threads(workers);
    const std::string name = sub->get_name();

    try {
        fs::create_directories(run.dir());
        const fs::path out = run.dir();
        if (name == "build") {
            Variant v = parse_variant(variant);
            bool rs = parse_reset(reset, v);
            Patch p = patch_kind == "stability" ? build_stability_patch()
                      : patch_kind == "memory"  ? memory_patch(d)
                                                : throw UsageError("patch must be memory or stability");
            Circuit cycle = v == Variant::Improved ? build_improved_cycle(p, rs) : build_original_cycle(p, rs);
            Circuit full = assemble_experiment(p, v, rs, parse_basis(basis), rounds);
            spit_json((out / "patch.json").string(), patch_to_json(p));
            spit((out / "circuit.txt").string(), circuit_to_text(full));
            json rep = {{"variant", variant_name(v)},
                        {"reset", rs},
                        {"distance", p.distance},
                        {"round_duration_ns", cycle.total_duration()},
                        {"unitary_layers_per_round", cycle.num_unitary_layers()},
                        {"experiment_duration_ns", full.total_duration()},
                        {"rounds", rounds}};
            spit_json((out / "durations.json").string(), rep);
            std::printf("round_duration_ns %.0f\n", cycle.total_duration());
            std::printf("unitary_layers_per_round %zu\n", cycle.num_unitary_layers());
        } else if (name == "memory") {
            if (shots == 0) throw UsageError("--shots must be positive");
            Variant v = parse_variant(variant);
            MemoryResult r = run_memory(memory_patch(d), v, parse_reset(reset, v), parse_basis(basis),
                                        parse_int_list(ts), load_noise(noise_path), shots, seed, workers);
            write_points_csv(r.points, (out / "points.csv").string());
            spit_json((out / "fit.json").string(), memory_to_json(r));
            if (emit_plot) write_memory_tidy({r}, (out / "memory_tidy.csv").string());
            std::printf("fidelity %.6f +- %.6f\n", r.fidelity(), r.fidelity_se());
        } else if (name == "stability") {
            if (shots == 0) throw UsageError("--shots must be positive");
            StabilityResult r = run_stability(parse_reset(reset, Variant::Improved), parse_int_list(ts), load_noise(noise_path), shots, seed,
                                              workers, exclude == "none" ? std::vector<int>{} : parse_int_list(exclude));
            write_points_csv(r.points, (out / "points.csv").string());
            spit_json((out / "fit.json").string(), stability_to_json(r));
            if (emit_plot) write_stability_tidy({r}, (out / "stability_tidy.csv").string());
            std::printf("gamma %.6f [%.6f, %.6f]\n", r.gamma(), r.fit.p_lo(), r.fit.p_hi());
        } else if (name == "sweep") {
            SweepConfig cfg;
            cfg.memory_ts = parse_int_list(mem_ts);
            cfg.stability_ts = parse_int_list(stab_ts);
            cfg.shots = shots;
            cfg.seed = seed;
            cfg.basis = parse_basis(basis);
            cfg.workers = workers;
            std::vector<std::string> ps = params == "all" ? kNoiseParameters : parse_names(params);
            for (const auto &p : ps) {
                if (std::find(kNoiseParameters.begin(), kNoiseParameters.end(), p) == kNoiseParameters.end())
                    throw UsageError("unknown noise parameter " + p);
            }
            std::vector<bool> rv;
            for (const auto &s : parse_names(resets)) rv.push_back(parse_onoff(s));
            auto pts = run_sweep(load_noise(noise_path), ps, parse_double_list(factors), rv, cfg);
            spit_json((out / "sweep.json").string(), sweep_to_json(pts));
            if (emit_plot) write_sweep_tidy(pts, (out / "sweep_tidy.csv").string());
            std::printf("points %zu\n", pts.size());
        } else if (name == "fit") {
            NoiseFitConfig cfg;
            cfg.free = parse_names(free);
            cfg.shots = shots;
            cfg.seed = seed;
            cfg.max_iterations = max_iter;
            cfg.size_tolerance = size_tol;
            cfg.initial_step = step;
            cfg.workers = workers;
            auto targets = read_target_curves(targets_path);
            auto r = fit_noise_model(targets, load_noise(noise_path), cfg);
            spit_json((out / "fitted.json").string(), noise_to_json(r.model));
            spit_json((out / "fit_report.json").string(), noise_fit_to_json(r));
            if (emit_plot) {
                std::vector<TargetCurve> sims;
                for (const auto &t : targets) sims.push_back(simulate_curve(t.kind, t.ts, r.model, shots, seed, workers));
                write_target_curves(sims, (out / "fitted_curves.csv").string());
            }
            std::printf("loss %.6g converged %d\n", r.loss, (int)r.converged);
        } else if (name == "rb") {
            QubitDevice median;
            median.meas_ns = 2000;
            auto device_for = [&](const std::string &path, const std::vector<int> &qs) {
                return path.empty() ? uniform_device(qs, median) : device_from_json(json::parse(slurp(path)));
            };
            json summary = {{"protocol", protocol}, {"seed", seed}};
            if (protocol == "simultaneous" || protocol == "midcircuit") {
                std::vector<RbSequence> seqs;
                std::vector<int> all;
                if (protocol == "simultaneous") {
                    all = parse_int_list(qubits);
                    seqs = gen_simultaneous_rb(all, parse_int_list(ms), k, seed);
                } else {
                    auto mq = parse_int_list(measured), sq = parse_int_list(spectators);
                    all = mq;
                    all.insert(all.end(), sq.begin(), sq.end());
                    seqs = gen_midcircuit_rb(mq, sq, parse_int_list(ms), k, mid_variant_from_name(mid_variant), seed, cps);
                    summary["variant"] = mid_variant;
                }
                DeviceParams dev = device_for(device_path, all);
                auto recs = run_rb(seqs, dev, shots, derive_seed(seed, 1), workers);
                write_survival_csv(recs, (out / "survival.csv").string());
                auto fits = fit_rb(recs);
                summary["device"] = device_to_json(dev);
                summary["fits"] = rb_fits_to_json(fits);
                spit_json((out / "rb.json").string(), summary);
                for (const auto &f : fits) std::printf("qubit %d p %.6f +- %.6f\n", f.qubit, f.fit.p, f.fit.p_se);
            } else if (protocol == "temporal") {
                auto qs = parse_int_list(qubits);
                auto seqs = gen_temporal_consistency(seed, qs, parse_int_list(ms).front(), k);
                DeviceParams d1 = device_for(device_path, qs);
                DeviceParams d2 = device2_path.empty() ? d1 : device_for(device2_path, qs);
                auto a = run_rb(seqs, d1, shots, derive_seed(seed, 1), workers);
                auto b = run_rb(seqs, d2, shots, derive_seed(seed2, 1), workers);
                write_survival_csv(a, (out / "survival_run1.csv").string());
                write_survival_csv(b, (out / "survival_run2.csv").string());
                auto rep = compare_runs(a, b, alpha);
                summary["report"] = temporal_to_json(rep);
                summary["seed2"] = seed2;
                spit_json((out / "temporal.json").string(), summary);
                std::printf("flags %zu threshold_z %.3f\n", rep.flags.size(), rep.threshold_z);
            } else if (protocol == "correlation") {
                Circuit blk;
                if (block == "syndrome") {
                    blk = syndrome_block(memory_patch(d));
                } else if (block == "independent") {
                    auto qs = parse_int_list(qubits);
                    int n = *std::max_element(qs.begin(), qs.end()) + 1;
                    blk.num_qubits = n;
                    std::vector<int> all(n);
                    for (int q = 0; q < n; q++) all[q] = q;
                    blk.instructions = {{Op::H, all}, {Op::Tick}, {Op::S, all}};
                } else {
                    throw UsageError("block must be independent or syndrome");
                }
                CorrelationConfig cfg;
                cfg.m = mirror_m;
                cfg.k = k;
                cfg.shots = shots;
                cfg.seed = seed;
                cfg.alpha = alpha;
                cfg.workers = workers;
                if (!crosstalk_pair.empty()) {
                    auto pr = parse_int_list(crosstalk_pair);
                    if (pr.size() != 2) throw UsageError("--crosstalk takes a,b");
                    cfg.crosstalk.push_back({pr[0], pr[1], crosstalk_p});
                }
                NoiseModel nm = noise_path.empty() ? NoiseModel{} : load_noise(noise_path);
                if (noise_path.empty()) nm.p_1q = 0.003;
                auto res = correlation_analysis(blk, nm, cfg);
                summary["correlation"] = correlation_to_json(res);
                summary["noise"] = noise_to_json(nm);
                spit_json((out / "correlation.json").string(), summary);
                std::printf("edges %zu\n", res.edges.size());
                for (const auto &e : res.edges) std::printf("edge %d %d mi_bits %.6g p %.3g\n", e.a, e.b, e.mi, e.p_value);
            } else {
                throw UsageError("unknown protocol " + protocol);
            }
        } else if (name == "dem") {
            Circuit c = circuit_from_text(slurp(circuit_path));
            Patch p = patch_from_json(json::parse(slurp(patch_path)));
            auto ds = define_detectors(c, p, DetectorConvention::for_circuit(c));
            DemGraph g = compile(annotate(c, load_noise(noise_path)), ds);
            spit((out / "dem.txt").string(), dem_to_text(g));
            std::printf("detectors %d edges %zu\n", g.num_detectors, g.edges.size());
        } else if (name == "sample") {
            if (shots == 0) throw UsageError("--shots must be positive");
            Circuit c = circuit_from_text(slurp(circuit_path));
            FrameBatch recs = sample(annotate(c, load_noise(noise_path)), shots, seed, workers);
            write_batch_binary(recs, (out / "records.hhqf").string());
            write_batch_csv_summary(recs, (out / "records_summary.csv").string());
            if (!patch_path.empty()) {
                Patch p = patch_from_json(json::parse(slurp(patch_path)));
                auto ds = define_detectors(c, p, DetectorConvention::for_circuit(c));
                write_batch_binary(extract_detectors(recs, ds), (out / "detectors.hhqf").string());
            }
            std::printf("records %zu shots %zu\n", recs.num_rows, recs.shots);
        } else if (name == "decode") {
            DemGraph g = dem_from_text(slurp(dem_path));
            FrameBatch det = read_batch_binary(det_path);
            if ((int)det.num_rows < g.num_detectors + g.num_observables)
                throw UsageError("detector batch has fewer rows than detectors plus observables");
            FrameBatch pred = decode_batch(g, det, workers);
            write_batch_binary(pred, (out / "predictions.hhqf").string());
            std::vector<DecodeSummary> rows;
            for (int o = 0; o < g.num_observables; o++) rows.push_back(summarize(pred, det, g.num_detectors, o));
            write_summary_csv(rows, (out / "summary.csv").string());
            for (const auto &r : rows) std::printf("failures %zu of %zu\n", r.failures, r.shots);
        }
        write_manifest(run, "ok");
        return 0;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        try {
            write_manifest(run, "failed", e.what());
        } catch (...) {
        }
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        try {
            write_manifest(run, "failed", e.what());
        } catch (...) {
        }
        return 1;
    }
}
