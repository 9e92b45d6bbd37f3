// bizcycle command-line front end.
//
// Every subcommand: reads an optional key=value config (model parameters
// plus "run.*" defaults for its own flags; explicit flags win), writes
// manifest.json into --out first, then its data files.  All randomness
// derives from --seed; multi-replica subcommands use seed, seed+1, ...
//
// Exit codes: 0 success, 2 config/usage error, 3 numerical divergence,
// 4 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "bizcycle/calibration.hpp"
#include "bizcycle/cycles.hpp"
#include "bizcycle/integrator.hpp"
#include "bizcycle/io.hpp"
#include "bizcycle/micro.hpp"
#include "bizcycle/model.hpp"
#include "bizcycle/noise.hpp"
#include "bizcycle/params.hpp"
#include "bizcycle/phase.hpp"
#include "bizcycle/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace bizcycle;

namespace {

// ---------------------------------------------------------------------------
//  shared plumbing
// ---------------------------------------------------------------------------

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
};

// "run.<name>" config keys that act as defaults for CLI flags.
struct RunKeys {
    struct Entry {
        CLI::Option* opt;
        std::function<void(const std::string&)> set;
    };
    std::map<std::string, Entry> entries;

    void add_double(CLI::Option* opt, const std::string& name, double& target) {
        entries["run." + name] = {opt, [&target, name](const std::string& v) {
                                      target = parse_num(v, name);
                                  }};
    }
    void add_long(CLI::Option* opt, const std::string& name, long& target) {
        entries["run." + name] = {opt, [&target, name](const std::string& v) {
                                      target = static_cast<long>(parse_num(v, name));
                                  }};
    }
    void add_int(CLI::Option* opt, const std::string& name, int& target) {
        entries["run." + name] = {opt, [&target, name](const std::string& v) {
                                      target = static_cast<int>(parse_num(v, name));
                                  }};
    }
    void add_string(CLI::Option* opt, const std::string& name, std::string& target) {
        entries["run." + name] = {opt, [&target](const std::string& v) { target = v; }};
    }
    void add_flag(CLI::Option* opt, const std::string& name, bool& target) {
        entries["run." + name] = {opt, [&target, name](const std::string& v) {
                                      if (v == "true" || v == "1") target = true;
                                      else if (v == "false" || v == "0") target = false;
                                      else throw ConfigError("config: run." + name +
                                                             " expects true/false");
                                  }};
    }

    static double parse_num(const std::string& v, const std::string& name) {
        try {
            size_t pos = 0;
            double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw ConfigError("config: bad value '" + v + "' for run." + name);
        }
    }
};

void add_seed_key(RunKeys& keys, CLI::Option* opt, Common& common) {
    keys.entries["run.seed"] = {opt, [&common](const std::string& v) {
                                    common.seed = static_cast<std::uint64_t>(
                                        RunKeys::parse_num(v, "seed"));
                                }};
}

// Loads the config file: model keys into params, run.* keys into flag
// defaults (skipped when the flag was given explicitly).
Params load_config(const Common& common, const RunKeys& keys) {
    Params params;
    if (common.config_path.empty()) return params;
    for (const auto& e : read_config_file(common.config_path)) {
        if (e.key.rfind("run.", 0) == 0) {
            auto it = keys.entries.find(e.key);
            if (it == keys.entries.end())
                throw ConfigError("config line " + std::to_string(e.line) + ": unknown key '" +
                                  e.key + "'");
            if (it->second.opt->count() == 0) it->second.set(e.value);
            continue;
        }
        if (!apply_param(params, e))
            throw ConfigError("config line " + std::to_string(e.line) + ": unknown key '" +
                              e.key + "'");
    }
    params.validate();
    return params;
}

// Manifest first, then data: a crashed run leaves its intent on disk.
void start_run(const Common& common, const std::string& subcommand,
               const std::vector<std::uint64_t>& seeds) {
    fs::create_directories(common.out_dir);
    RunManifest manifest;
    manifest.subcommand = subcommand;
    manifest.config_path = common.config_path;
    manifest.seeds = seeds;
    manifest.out_dir = common.out_dir;
    manifest.rng_algorithm = kRngAlgorithmId;
    write_manifest((fs::path(common.out_dir) / "manifest.json").string(), manifest);
}

std::string out_file(const Common& common, const std::string& name) {
    return (fs::path(common.out_dir) / name).string();
}

void write_json_file(const std::string& path, const ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

ordered_json params_json(const Params& p) {
    return ordered_json{{"tau_h", p.tau_h}, {"tau_s", p.tau_s},   {"tau_y", p.tau_y},
                        {"beta1", p.beta1}, {"beta2", p.beta2},   {"k1", p.k1},
                        {"k2", p.k2},       {"epsilon", p.epsilon}, {"c1", p.c1},
                        {"c2", p.c2},       {"s_star", p.s_star}, {"b", p.b}};
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, int n) {
    std::vector<std::uint64_t> seeds(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) seeds[static_cast<size_t>(i)] = base + static_cast<std::uint64_t>(i);
    return seeds;
}

// ---------------------------------------------------------------------------
//  simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    Common common;
    long years = 8;
    long burn_days = 0;
    int substeps = 8;
    long record_stride = 0;  // 0 -> daily (= substeps)
    std::string scheme = "heun";
    bool bounded = false;
    double noise_std = 0.4;
    double ar = 0.5;
};

int cmd_simulate(const SimulateArgs& a, const Params& params) {
    if (a.years < 1) throw ConfigError("simulate: --years must be >= 1");
    if (a.substeps < 1) throw ConfigError("simulate: --substeps must be >= 1");

    start_run(a.common, "simulate", {a.common.seed});

    NoiseConfig ncfg;
    ncfg.daily_std = a.noise_std;
    ncfg.substeps_per_day = a.substeps;
    ncfg.intraday_ar_coeff = a.ar;
    ncfg.seed = a.common.seed;
    ncfg.validate();

    SimConfig sim;
    sim.dt = 1.0 / a.substeps;
    sim.n_days = a.years * static_cast<long>(kDaysPerYear);
    sim.scheme = scheme_from_name(a.scheme);
    sim.record_stride = a.record_stride > 0 ? a.record_stride : a.substeps;
    sim.burn_in_days = a.burn_days;
    sim.record_initial = false;
    const FullState start = expansion_start(params);
    sim.initial_full = start;
    sim.initial_bounded = {start.h, start.s, start.p - start.y};

    const NoisePath noise = sample_path(ncfg, sim.burn_in_days + sim.n_days);
    const Trajectory traj =
        a.bounded ? simulate_bounded(params, sim, noise) : simulate_full(params, sim, noise);
    write_trajectory_csv(out_file(a.common, "trajectory.csv"), traj);

    ordered_json j;
    j["formulation"] = a.bounded ? "bounded" : "full";
    j["years"] = a.years;
    j["burn_in_days"] = sim.burn_in_days;
    j["scheme"] = scheme_name(sim.scheme);
    j["dt_days"] = sim.dt;
    j["record_stride"] = sim.record_stride;
    j["noise"] = {{"daily_std", ncfg.daily_std},
                  {"substeps_per_day", ncfg.substeps_per_day},
                  {"intraday_ar_coeff", ncfg.intraday_ar_coeff}};
    j["rows"] = traj.size();
    j["params"] = params_json(params);
    write_json_file(out_file(a.common, "simulate.json"), j);

    std::cout << "simulate: " << traj.size() << " rows -> " << out_file(a.common, "trajectory.csv")
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
//  equilibria
// ---------------------------------------------------------------------------

int cmd_equilibria(const Common& common, const Params& params) {
    start_run(common, "equilibria", {});
    const auto eqs = find_equilibria(params);

    ordered_json list = ordered_json::array();
    for (const auto& e : eqs) {
        ordered_json ev = ordered_json::array();
        for (const auto& lam : e.eigenvalues)
            ev.push_back({{"re", lam.real()}, {"im", lam.imag()}});
        const double line_z = std::log(params.b + params.tau_y * params.c2 *
                                                      (e.state.s - params.s_star));
        list.push_back({{"h", e.state.h},
                        {"s", e.state.s},
                        {"z", e.state.z},
                        {"class", stability_name(e.classification)},
                        {"eigenvalues", ev},
                        {"line_residual", std::fabs(e.state.z - line_z)}});
    }
    ordered_json j;
    j["count"] = eqs.size();
    j["equilibria"] = list;
    j["params"] = params_json(params);
    write_json_file(out_file(common, "equilibria.json"), j);

    for (const auto& e : eqs)
        std::cout << stability_name(e.classification) << ": s=" << e.state.s << " h=" << e.state.h
                  << " z=" << e.state.z << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
//  portrait
// ---------------------------------------------------------------------------

struct PortraitArgs {
    Common common;
    std::vector<double> planes;  // C values
    int fan = 40;
};

int cmd_portrait(const PortraitArgs& a, const Params& params) {
    std::vector<double> planes = a.planes;
    if (planes.empty()) planes = {-0.48, -1.11};

    start_run(a.common, "portrait", {});

    ordered_json jplanes = ordered_json::array();
    for (size_t i = 0; i < planes.size(); ++i) {
        const PlaneSpec plane{planes[i]};
        const PhasePortrait portrait = phase_portrait(params, plane, a.fan);
        const BarrierHeight barrier = barrier_height(params, plane);

        const std::string fan_name = "portrait_" + std::to_string(i) + ".csv";
        const std::string sep_name = "separatrix_" + std::to_string(i) + ".csv";
        write_portrait_csv(out_file(a.common, fan_name), portrait);
        write_polyline_csv(out_file(a.common, sep_name), portrait.separatrix);

        ordered_json jeq = ordered_json::array();
        for (const auto& pe : portrait.planar_equilibria)
            jeq.push_back({{"s", pe.s}, {"h", pe.h}, {"stable", pe.stable}});
        jplanes.push_back({{"C", plane.C},
                           {"fan_csv", fan_name},
                           {"separatrix_csv", sep_name},
                           {"planar_equilibria", jeq},
                           {"barrier",
                            {{"expansion", barrier.expansion},
                             {"contraction", barrier.contraction},
                             {"expansion_clamped", barrier.expansion_clamped},
                             {"contraction_clamped", barrier.contraction_clamped}}}});
        std::cout << "plane C=" << plane.C << ": barrier expansion=" << barrier.expansion
                  << (barrier.expansion_clamped ? " (clamped)" : "")
                  << " contraction=" << barrier.contraction
                  << (barrier.contraction_clamped ? " (clamped)" : "") << "\n";
    }
    ordered_json j;
    j["s_prime_scale"] = splane_scale(params);
    j["planes"] = jplanes;
    j["params"] = params_json(params);
    write_json_file(out_file(a.common, "portrait.json"), j);
    return 0;
}

// ---------------------------------------------------------------------------
//  cycles
// ---------------------------------------------------------------------------

struct CyclesArgs {
    Common common;
    long years = 2000;
};

int cmd_cycles(const CyclesArgs& a, const Params& params) {
    if (a.years < 500) throw ConfigError("cycles: --years must be >= 500 (dwell statistics)");
    start_run(a.common, "cycles", {a.common.seed});

    const Trajectory traj = standard_run(a.years, params, a.common.seed);
    const DetrendResult res = detrend(traj.t_days, traj.y, 12.0);
    const CycleStats stats = make_cycle_stats(find_troughs(res));
    const GrowthEstimate growth = growth_rate(traj.t_days, traj.y);
    const DwellStats dwell = dwell_asymmetry(traj, params);

    write_histogram_csv(out_file(a.common, "cycles_hist.csv"), stats);

    ordered_json j;
    j["years"] = a.years;
    j["seed"] = a.common.seed;
    j["n_cycles"] = stats.lengths_years.size();
    if (stats.modal_bin >= 0) {
        j["modal_bin"] = {{"index", stats.modal_bin},
                          {"lo_years", stats.bin_edges_years[static_cast<size_t>(stats.modal_bin)]},
                          {"hi_years",
                           stats.bin_edges_years[static_cast<size_t>(stats.modal_bin) + 1]}};
    }
    j["growth"] = {{"lambda_per_year", growth.lambda}, {"stderr", growth.stderr_}};
    j["dwell"] = {{"expansion_share", dwell.expansion_share},
                  {"contraction_share", dwell.contraction_share},
                  {"mean_dwell_expansion_years", dwell.mean_dwell_expansion_years},
                  {"mean_dwell_contraction_years", dwell.mean_dwell_contraction_years}};
    j["trough_times_years"] = stats.trough_times_years;
    j["params"] = params_json(params);
    write_json_file(out_file(a.common, "cycles.json"), j);

    std::cout << "cycles: " << stats.lengths_years.size() << " cycles";
    if (stats.modal_bin >= 0)
        std::cout << ", modal bin [" << stats.bin_edges_years[static_cast<size_t>(stats.modal_bin)]
                  << ", " << stats.bin_edges_years[static_cast<size_t>(stats.modal_bin) + 1]
                  << ") years";
    std::cout << ", lambda=" << growth.lambda << "/yr\n";
    return 0;
}

// ---------------------------------------------------------------------------
//  sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
    Common common;
    std::string epsilon = "0.01:0.05:0.01";
    long years_per_point = 1000;
    int replicas = 4;
    int jobs = 1;
};

std::vector<double> parse_grid(const std::string& text) {
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) throw ConfigError("sweep: --epsilon expects lo:hi:step");
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError("sweep: --epsilon expects lo:hi:step");
    double lo = 0, hi = 0, step = 0;
    try {
        lo = std::stod(text.substr(0, c1));
        hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        step = std::stod(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw ConfigError("sweep: bad --epsilon grid '" + text + "'");
    }
    if (!(step > 0) || hi < lo) throw ConfigError("sweep: bad --epsilon grid '" + text + "'");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double v = lo + i * step;
        if (v > hi + 1e-12) break;
        grid.push_back(v);
    }
    return grid;
}

int cmd_sweep(const SweepArgs& a, const Params& params) {
    if (a.replicas < 1) throw ConfigError("sweep: --replicas must be >= 1");
    if (a.jobs < 1) throw ConfigError("sweep: --jobs must be >= 1");
    const std::vector<double> grid = parse_grid(a.epsilon);
    const auto seeds = seed_range(a.common.seed, a.replicas);

    start_run(a.common, "sweep", seeds);

    // One task per grid point; common seeds make the points independent, so
    // the merged result is identical to the serial sweep regardless of jobs.
    std::vector<SweepPoint> points(grid.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            points[i] = epsilon_sweep({grid[i]}, a.years_per_point, params, seeds).front();
        }
    };
    if (a.jobs == 1) {
        worker();
    } else {
        std::vector<std::future<void>> tasks;
        for (int t = 0; t < a.jobs; ++t) tasks.push_back(std::async(std::launch::async, worker));
        for (auto& task : tasks) task.get();
    }

    write_sweep_csv(out_file(a.common, "sweep.csv"), points);

    ordered_json jpts = ordered_json::array();
    for (const auto& pt : points) {
        ordered_json e = {{"epsilon", pt.epsilon}, {"ok", pt.ok}};
        if (pt.ok) {
            e["lambda"] = pt.lambda;
            e["stderr"] = pt.stderr_;
        } else {
            e["error"] = pt.error;
        }
        jpts.push_back(e);
    }
    ordered_json j;
    j["years_per_point"] = a.years_per_point;
    j["replicas"] = a.replicas;
    j["points"] = jpts;
    j["params"] = params_json(params);
    write_json_file(out_file(a.common, "sweep.json"), j);

    size_t ok_count = 0;
    for (const auto& pt : points) {
        if (pt.ok) {
            ++ok_count;
            std::cout << "epsilon=" << pt.epsilon << " lambda=" << pt.lambda << " +- "
                      << pt.stderr_ << "\n";
        } else {
            std::cout << "epsilon=" << pt.epsilon << " FAILED: " << pt.error << "\n";
        }
    }
    // Per-point failures are data (recorded in sweep.json); a sweep with no
    // usable point is a failed run.
    if (ok_count == 0) {
        std::cerr << "error: sweep: all " << points.size() << " grid points failed\n";
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
//  calibrate
// ---------------------------------------------------------------------------

struct CalibrateArgs {
    Common common;
    std::string h_csv;
    std::string price_csv;
    long demo_years = 40;
};

ordered_json fit_json(const FitResult& fit) {
    ordered_json j;
    j["c1"] = fit.c1;
    j["c2"] = fit.c2;
    if (fit.s_star_identifiable) j["s_star"] = fit.s_star;
    j["s_star_identifiable"] = fit.s_star_identifiable;
    j["constant"] = fit.constant;
    j["condition_number"] = fit.condition_number;
    j["residual_norm"] = fit.residual_norm;
    j["correlation"] = fit.correlation;
    return j;
}

int cmd_calibrate(const CalibrateArgs& a, const Params& params) {
    if (a.h_csv.empty() != a.price_csv.empty())
        throw ConfigError("calibrate: --h-csv and --price-csv must be given together");

    std::vector<std::string> dates;
    std::vector<double> h, target;
    bool demo = a.h_csv.empty();
    FitResult truth;
    if (demo) {
        // Self-validating round trip: h from a model run, the target built
        // from the reconstructed sentiment with the configured coefficients
        // plus sigma=0.01 observation noise, so the fit should recover
        // (c1, c2, s_star) up to that noise.
        start_run(a.common, "calibrate", {a.common.seed});
        const Trajectory traj = standard_run(a.demo_years, params, a.common.seed);
        h = traj.h;
        truth.c1 = params.c1;
        truth.c2 = params.c2;
        truth.s_star = params.s_star;
        truth.trend = -params.c2 * params.s_star;
        truth.constant = 1.5;
        target = fitted_price(truth, sentiment_from_h(h, params));
        Rng noise(a.common.seed + 0x9e3779b9u);  // separate observation-noise stream
        for (auto& v : target) v += 0.01 * noise.gaussian();
        dates = make_business_dates(h.size());
    } else {
        start_run(a.common, "calibrate", {});
        const DatedSeries hs = read_dated_csv(a.h_csv);
        const DatedSeries ps = read_dated_csv(a.price_csv);
        if (hs.day_serial != ps.day_serial)
            throw ConfigError("calibrate: date columns of the two inputs differ");
        dates = hs.date;
        h = hs.value;
        target = ps.value;
    }

    const Replication rep = replicate_price(h, target, params);
    write_replication_csv(out_file(a.common, "replication.csv"), dates, rep.p_model, target);

    ordered_json j;
    j["mode"] = demo ? "synthetic-round-trip" : "files";
    j["samples"] = h.size();
    j["fit"] = fit_json(rep.fit);
    if (demo) {
        j["true"] = {{"c1", truth.c1},
                     {"c2", truth.c2},
                     {"s_star", truth.s_star},
                     {"constant", truth.constant}};
        j["relative_error"] = {
            {"c1", std::fabs(rep.fit.c1 / truth.c1 - 1.0)},
            {"c2", std::fabs(rep.fit.c2 / truth.c2 - 1.0)},
            {"s_star", std::fabs(rep.fit.s_star / truth.s_star - 1.0)}};
    }
    j["params"] = params_json(params);
    write_json_file(out_file(a.common, "calibration.json"), j);

    std::cout << "calibrate: c1=" << rep.fit.c1 << " c2=" << rep.fit.c2;
    if (rep.fit.s_star_identifiable) std::cout << " s_star=" << rep.fit.s_star;
    std::cout << " corr=" << rep.fit.correlation << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
//  efficient
// ---------------------------------------------------------------------------

struct EfficientArgs {
    Common common;
    long days = 1000000;
    double noise_std = 0.4;
    long csv_stride = 250;
};

int cmd_efficient(const EfficientArgs& a, const Params& params) {
    if (a.days < 2) throw ConfigError("efficient: --days must be >= 2");
    if (a.csv_stride < 1) throw ConfigError("efficient: --csv-stride must be >= 1");
    start_run(a.common, "efficient", {a.common.seed});

    const EfficientPath path =
        efficient_limit_path(a.days, params.epsilon, params, a.common.seed, a.noise_std);

    // increment moments
    const size_t n = path.p.size() - 1;
    double mean = 0.0;
    for (size_t i = 0; i < n; ++i) mean += path.p[i + 1] - path.p[i];
    mean /= static_cast<double>(n);
    double m2 = 0, m3 = 0, m4 = 0;
    for (size_t i = 0; i < n; ++i) {
        const double d = path.p[i + 1] - path.p[i] - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    const double sd = std::sqrt(m2);
    const double skew = m3 / (m2 * sd);
    const double ex_kurt = m4 / (m2 * m2) - 3.0;
    const double se = sd / std::sqrt(static_cast<double>(n));
    const double theory = params.c2 * params.beta2 * (params.epsilon - params.s_star / params.beta2);

    std::vector<double> t_dec, p_dec;
    for (size_t i = 0; i < path.p.size(); i += static_cast<size_t>(a.csv_stride)) {
        t_dec.push_back(path.t_days[i]);
        p_dec.push_back(path.p[i]);
    }
    write_series_csv(out_file(a.common, "efficient.csv"), "t_days", "p", t_dec, p_dec);

    ordered_json j;
    j["days"] = a.days;
    j["daily_std"] = a.noise_std;
    j["drift"] = {{"measured_per_day", mean},
                  {"stderr", se},
                  {"theory_per_day", theory},
                  {"z_score", (mean - theory) / se}};
    j["increments"] = {{"std", sd}, {"skewness", skew}, {"excess_kurtosis", ex_kurt}};
    j["csv_stride_days"] = a.csv_stride;
    j["params"] = params_json(params);
    write_json_file(out_file(a.common, "efficient.json"), j);

    std::cout << "efficient: drift=" << mean << "/day (theory " << theory << ", z="
              << (mean - theory) / se << "), skew=" << skew << ", ex.kurt=" << ex_kurt << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
//  micro-check
// ---------------------------------------------------------------------------

struct MicroArgs {
    Common common;
    long n_agents = 20000;
    int replicas = 16;
    double days = 500.0;
    double dt = 1.25;
    double amplitude = 0.5;
    double period = 100.0;
    bool scaling = false;
    int scaling_replicas = 8;
};

int cmd_micro_check(const MicroArgs& a, const Params& params) {
    if (a.replicas < 1) throw ConfigError("micro-check: --replicas must be >= 1");
    start_run(a.common, "micro-check", seed_range(a.common.seed, a.replicas));

    MicroParams micro;
    micro.n_agents = a.n_agents;
    micro.tau_s_micro = params.tau_s;
    micro.validate();

    const MicroComparison cmp =
        compare_to_mean_field(a.n_agents, a.replicas, a.common.seed, micro, params.beta1,
                              params.beta2, a.dt, a.days, a.amplitude, a.period);

    {
        const std::string path = out_file(a.common, "micro.csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write file: " + path);
        out << "t_days,s_micro,s_ode\n";
        for (size_t i = 0; i < cmp.t_days.size(); ++i)
            out << format_double(cmp.t_days[i]) << ',' << format_double(cmp.s_micro[i]) << ','
                << format_double(cmp.s_ode[i]) << '\n';
    }

    ordered_json j;
    j["n_agents"] = a.n_agents;
    j["replicas"] = a.replicas;
    j["dt_days"] = a.dt;
    j["days"] = a.days;
    j["square_wave"] = {{"amplitude", a.amplitude}, {"period_days", a.period}};
    j["sup_deviation"] = cmp.sup_deviation;

    if (a.scaling) {
        const ScalingFit fit =
            n_scaling_fit({1000, 10000, 100000}, a.scaling_replicas, a.common.seed, micro,
                          params.beta1, params.beta2, a.dt, a.days, a.amplitude, a.period);
        ordered_json pts = ordered_json::array();
        for (size_t i = 0; i < fit.n_agents.size(); ++i)
            pts.push_back({{"n_agents", fit.n_agents[i]}, {"mean_sup", fit.mean_sup[i]}});
        j["scaling"] = {{"points", pts}, {"exponent", fit.exponent}};
        std::cout << "micro-check: sup=" << cmp.sup_deviation << ", scaling exponent "
                  << fit.exponent << "\n";
    } else {
        std::cout << "micro-check: sup=" << cmp.sup_deviation << "\n";
    }
    write_json_file(out_file(a.common, "micro.json"), j);
    return 0;
}

// ---------------------------------------------------------------------------
//  error categorization
// ---------------------------------------------------------------------------

int categorize(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const std::invalid_argument*>(&e)) return 2;
    if (dynamic_cast<const std::domain_error*>(&e)) return 3;
    const std::string msg = e.what();
    if (msg.rfind("cannot ", 0) == 0 || msg.find(".csv") != std::string::npos) return 4;
    if (msg.find("config") != std::string::npos) return 2;
    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bizcycle: coupled market-economy simulator and analysis toolkit"};
    app.require_subcommand(1);

    auto add_common = [](CLI::App* sub, Common& common, RunKeys& keys) {
        sub->add_option("--config", common.config_path,
                        "key=value config: model parameters and run.* flag defaults");
        auto* out = sub->add_option("--out", common.out_dir, "output directory [out]");
        keys.add_string(out, "out", common.out_dir);
        auto* seed = sub->add_option("--seed", common.seed, "base RNG seed [1]");
        add_seed_key(keys, seed, common);
    };

    int rc = 0;
    std::function<void()> runner;

    // simulate ----------------------------------------------------------
    SimulateArgs sim;
    RunKeys sim_keys;
    {
        auto* sub = app.add_subcommand("simulate", "integrate the stochastic system");
        add_common(sub, sim.common, sim_keys);
        sim_keys.add_long(sub->add_option("--years", sim.years, "recorded span [years, 8]"),
                          "years", sim.years);
        sim_keys.add_long(
            sub->add_option("--burn-days", sim.burn_days, "discarded lead-in [days, 0]"),
            "burn_days", sim.burn_days);
        sim_keys.add_int(
            sub->add_option("--substeps", sim.substeps, "integration substeps per day [8]"),
            "substeps", sim.substeps);
        sim_keys.add_long(sub->add_option("--record-stride", sim.record_stride,
                                          "steps per recorded row [0 = daily]"),
                          "record_stride", sim.record_stride);
        sim_keys.add_string(sub->add_option("--scheme", sim.scheme, "euler | heun [heun]"),
                            "scheme", sim.scheme);
        sim_keys.add_flag(sub->add_flag("--bounded", sim.bounded,
                                        "integrate the (h,s,z) formulation instead of (h,s,p,y)"),
                          "bounded", sim.bounded);
        sim_keys.add_double(
            sub->add_option("--noise-std", sim.noise_std, "daily news-noise std [0.4]"),
            "noise_std", sim.noise_std);
        sim_keys.add_double(
            sub->add_option("--ar", sim.ar, "intraday AR(1) coefficient [0.5]"), "ar", sim.ar);
        sub->callback([&]() {
            runner = [&]() { rc = cmd_simulate(sim, load_config(sim.common, sim_keys)); };
        });
    }

    // equilibria ----------------------------------------------------------
    Common eq_common;
    RunKeys eq_keys;
    {
        auto* sub = app.add_subcommand("equilibria", "locate and classify fixed points");
        add_common(sub, eq_common, eq_keys);
        sub->callback([&]() {
            runner = [&]() { rc = cmd_equilibria(eq_common, load_config(eq_common, eq_keys)); };
        });
    }

    // portrait ----------------------------------------------------------
    PortraitArgs por;
    RunKeys por_keys;
    {
        auto* sub = app.add_subcommand("portrait",
                                       "restricted-plane phase portrait, separatrix, barriers");
        add_common(sub, por.common, por_keys);
        sub->add_option("--plane", por.planes,
                        "plane offset C in z = c1*s + C (repeatable) [-0.48 -1.11]");
        por_keys.add_int(sub->add_option("--fan", por.fan, "fan trajectories per plane [40]"),
                         "fan", por.fan);
        sub->callback([&]() {
            runner = [&]() { rc = cmd_portrait(por, load_config(por.common, por_keys)); };
        });
    }

    // cycles ----------------------------------------------------------
    CyclesArgs cyc;
    RunKeys cyc_keys;
    {
        auto* sub = app.add_subcommand("cycles",
                                       "trough-to-trough cycle histogram, growth, dwell shares");
        add_common(sub, cyc.common, cyc_keys);
        cyc_keys.add_long(sub->add_option("--years", cyc.years, "simulated span [years, 2000]"),
                          "years", cyc.years);
        sub->callback([&]() {
            runner = [&]() { rc = cmd_cycles(cyc, load_config(cyc.common, cyc_keys)); };
        });
    }

    // sweep ----------------------------------------------------------
    SweepArgs swp;
    RunKeys swp_keys;
    {
        auto* sub = app.add_subcommand("sweep", "growth rate vs news drift epsilon");
        add_common(sub, swp.common, swp_keys);
        swp_keys.add_string(
            sub->add_option("--epsilon", swp.epsilon, "grid lo:hi:step [0.01:0.05:0.01]"),
            "epsilon", swp.epsilon);
        swp_keys.add_long(sub->add_option("--years-per-point", swp.years_per_point,
                                          "simulated years per grid point [1000]"),
                          "years_per_point", swp.years_per_point);
        swp_keys.add_int(
            sub->add_option("--replicas", swp.replicas, "seeds per grid point [4]"), "replicas",
            swp.replicas);
        swp_keys.add_int(sub->add_option("--jobs", swp.jobs, "parallel workers [1]"), "jobs",
                         swp.jobs);
        sub->callback([&]() {
            runner = [&]() { rc = cmd_sweep(swp, load_config(swp.common, swp_keys)); };
        });
    }

    // calibrate ----------------------------------------------------------
    CalibrateArgs cal;
    RunKeys cal_keys;
    {
        auto* sub = app.add_subcommand(
            "calibrate", "fit the price-formation map (files, or synthetic round trip)");
        add_common(sub, cal.common, cal_keys);
        cal_keys.add_string(sub->add_option("--h-csv", cal.h_csv, "input CSV date,h"), "h_csv",
                            cal.h_csv);
        cal_keys.add_string(
            sub->add_option("--price-csv", cal.price_csv, "input CSV date,log_price"),
            "price_csv", cal.price_csv);
        cal_keys.add_long(sub->add_option("--demo-years", cal.demo_years,
                                          "synthetic round-trip span [years, 40]"),
                          "demo_years", cal.demo_years);
        sub->callback([&]() {
            runner = [&]() { rc = cmd_calibrate(cal, load_config(cal.common, cal_keys)); };
        });
    }

    // efficient ----------------------------------------------------------
    EfficientArgs eff;
    RunKeys eff_keys;
    {
        auto* sub = app.add_subcommand("efficient", "efficient-market limit path and statistics");
        add_common(sub, eff.common, eff_keys);
        eff_keys.add_long(sub->add_option("--days", eff.days, "path length [days, 1000000]"),
                          "days", eff.days);
        eff_keys.add_double(
            sub->add_option("--noise-std", eff.noise_std, "daily news-noise std [0.4]"),
            "noise_std", eff.noise_std);
        eff_keys.add_long(
            sub->add_option("--csv-stride", eff.csv_stride, "days between CSV rows [250]"),
            "csv_stride", eff.csv_stride);
        sub->callback([&]() {
            runner = [&]() { rc = cmd_efficient(eff, load_config(eff.common, eff_keys)); };
        });
    }

    // micro-check ----------------------------------------------------------
    MicroArgs mic;
    RunKeys mic_keys;
    {
        auto* sub = app.add_subcommand("micro-check",
                                       "agent-level oracle vs the mean-field sentiment equation");
        add_common(sub, mic.common, mic_keys);
        mic_keys.add_long(sub->add_option("--n-agents", mic.n_agents, "population size [20000]"),
                          "n_agents", mic.n_agents);
        mic_keys.add_int(sub->add_option("--replicas", mic.replicas, "ensemble size [16]"),
                         "replicas", mic.replicas);
        mic_keys.add_double(sub->add_option("--days", mic.days, "span [days, 500]"), "days",
                            mic.days);
        mic_keys.add_double(sub->add_option("--dt", mic.dt, "micro step [days, 1.25]"), "dt",
                            mic.dt);
        mic_keys.add_double(
            sub->add_option("--amplitude", mic.amplitude, "square-wave amplitude [0.5]"),
            "amplitude", mic.amplitude);
        mic_keys.add_double(
            sub->add_option("--period", mic.period, "square-wave period [days, 100]"), "period",
            mic.period);
        mic_keys.add_flag(sub->add_flag("--scaling", mic.scaling,
                                        "also fit the deviation-vs-N scaling exponent"),
                          "scaling", mic.scaling);
        mic_keys.add_int(sub->add_option("--scaling-replicas", mic.scaling_replicas,
                                         "replicas per N for the scaling fit [8]"),
                         "scaling_replicas", mic.scaling_replicas);
        sub->callback([&]() {
            runner = [&]() { rc = cmd_micro_check(mic, load_config(mic.common, mic_keys)); };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        runner();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return categorize(e);
    }
    return rc;
}
