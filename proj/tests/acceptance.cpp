// Release gate: one scenario per acceptance criterion, exercising the
// library directly and the CLI binary (argv[1]) for the reproducibility
// check.  Prints one [PASS]/[FAIL] line per criterion with its wall time and
// exits nonzero if anything fails.  Budgets are enforced where the criterion
// states one.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bizcycle/calibration.hpp"
#include "bizcycle/cycles.hpp"
#include "bizcycle/integrator.hpp"
#include "bizcycle/micro.hpp"
#include "bizcycle/model.hpp"
#include "bizcycle/noise.hpp"
#include "bizcycle/params.hpp"
#include "bizcycle/phase.hpp"
#include "bizcycle/rng.hpp"

namespace fs = std::filesystem;
using namespace bizcycle;

namespace {

std::string g_cli;  // path to the bizcycle binary under test

struct Report {
    bool pass = true;
    std::vector<std::string> notes;

    void fail(const std::string& why) {
        pass = false;
        notes.push_back(why);
    }
    void note(const std::string& what) { notes.push_back(what); }
    void require(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// -------------------------------------------------------------------------
//  1. equilibrium structure of the noise-free bounded system
// -------------------------------------------------------------------------
void criterion_equilibria(Report& r) {
    Params p;
    const auto eqs = find_equilibria(p);
    r.require(eqs.size() == 3, fmt("expected 3 equilibria, found %zu", eqs.size()));
    if (eqs.size() != 3) return;

    r.require(eqs[0].classification == StabilityClass::stable_focus_node &&
                  eqs[0].state.s < 0.0,
              "lowest-s equilibrium is not a stable focus-node with s < 0");
    r.require(eqs[1].classification == StabilityClass::saddle,
              "middle equilibrium is not a saddle");
    r.require(eqs[2].classification == StabilityClass::stable_focus_node &&
                  eqs[2].state.s > 0.0,
              "highest-s equilibrium is not a stable focus-node with s > 0");

    for (const auto& e : eqs) {
        const double line = std::log(p.b + p.tau_y * p.c2 * (e.state.s - p.s_star));
        const double resid = std::fabs(e.state.z - line);
        r.require(resid <= 1e-10,
                  fmt("equilibrium s=%.6f off the z(s) line by %.3g", e.state.s, resid));
        r.note(fmt("s=%+.6f h=%+.6f z=%+.6f  [%s]", e.state.s, e.state.h, e.state.z,
                   stability_name(e.classification)));
    }
}

// -------------------------------------------------------------------------
//  2. bounded (h,s,z) and full (h,s,p,y) formulations agree pathwise
// -------------------------------------------------------------------------
void criterion_formulations(Report& r) {
    Params p;
    const long days = 2500;  // 10 years
    NoiseConfig ncfg;
    ncfg.seed = 42;
    const NoisePath noise = sample_path(ncfg, days);

    SimConfig sim;  // Heun, dt = 1/8
    sim.n_days = days;
    sim.record_stride = 1;
    sim.initial_full = expansion_start(p);
    sim.initial_bounded = {sim.initial_full.h, sim.initial_full.s,
                           sim.initial_full.p - sim.initial_full.y};

    const Trajectory full = simulate_full(p, sim, noise);
    const Trajectory bnd = simulate_bounded(p, sim, noise);
    r.require(full.size() == bnd.size(), "formulations recorded different sample counts");

    double sup = 0.0;
    for (std::size_t i = 0; i < std::min(full.size(), bnd.size()); ++i)
        sup = std::max(sup, std::fabs(bnd.z[i] - (full.p[i] - full.y[i])));
    r.note(fmt("sup |z - (p-y)| = %.3g over %zu samples", sup, full.size()));
    r.require(sup <= 1e-8, "pathwise deviation exceeds 1e-8");
}

// -------------------------------------------------------------------------
//  3. agent-level Monte Carlo reproduces the mean-field sentiment law
// -------------------------------------------------------------------------
void criterion_micro(Report& r) {
    MicroParams micro;
    const double beta1 = 1.1, beta2 = 1.0;
    const double dt = 1.25, days = 500.0, amplitude = 0.5, period = 100.0;

    const MicroComparison cmp =
        compare_to_mean_field(20000, 16, 1, micro, beta1, beta2, dt, days, amplitude, period);
    r.note(fmt("ensemble sup deviation at N=20000: %.4f", cmp.sup_deviation));
    r.require(cmp.sup_deviation <= 0.02, "ensemble-mean deviation exceeds 0.02");

    const ScalingFit fit = n_scaling_fit({1000, 10000, 100000}, 8, 1, micro, beta1, beta2, dt,
                                         days, amplitude, period);
    std::ostringstream os;
    os << "single-path sups:";
    for (std::size_t i = 0; i < fit.n_agents.size(); ++i)
        os << " N=" << fit.n_agents[i] << ":" << fmt("%.4f", fit.mean_sup[i]);
    r.note(os.str());
    r.note(fmt("log-log exponent: %.3f", fit.exponent));
    r.require(fit.exponent >= -0.6 && fit.exponent <= -0.4,
              "deviation scaling exponent outside [-0.6, -0.4]");
}

// -------------------------------------------------------------------------
//  4. modal business-cycle length sits in the 4-10 year band
// -------------------------------------------------------------------------
void criterion_cycle_band(Report& r) {
    Params p;
    int hits = 0;
    for (std::uint64_t seed : {101u, 202u, 303u}) {
        const CycleStats cs = cycle_histogram(2000, p, seed);
        if (cs.modal_bin < 0) {
            r.note(fmt("seed %llu: no cycles detected", (unsigned long long)seed));
            continue;
        }
        const double lo = cs.bin_edges_years[cs.modal_bin];
        const double hi = cs.bin_edges_years[cs.modal_bin + 1];
        const bool in_band = lo >= 4.0 && hi <= 10.0;
        hits += in_band ? 1 : 0;
        r.note(fmt("seed %llu: modal bin [%g, %g) years, %zu cycles%s",
                   (unsigned long long)seed, lo, hi, cs.lengths_years.size(),
                   in_band ? "" : "  <- outside band"));
    }
    r.require(hits >= 2, fmt("modal bin within [4,10) for only %d of 3 seeds", hits));
}

// -------------------------------------------------------------------------
//  5. growth responds to the news bias; expansions outlast contractions
// -------------------------------------------------------------------------
void criterion_growth(Report& r) {
    Params p;
    const std::vector<double> grid = {0.01, 0.02, 0.03, 0.04, 0.05};
    const auto table = epsilon_sweep(grid, 1000, p, {1, 2, 3, 4});
    for (const auto& pt : table) {
        if (!pt.ok) {
            r.fail(fmt("sweep point epsilon=%.3f failed: %s", pt.epsilon, pt.error.c_str()));
            return;
        }
        r.note(fmt("epsilon=%.2f  lambda=%+.5f  se=%.5f", pt.epsilon, pt.lambda, pt.stderr_));
    }

    r.require(table[2].lambda > 0.0, "lambda at the canonical bias is not positive");
    for (std::size_t i = 0; i + 1 < table.size(); ++i) {
        const double slack = 2.0 * std::hypot(table[i].stderr_, table[i + 1].stderr_);
        r.require(table[i + 1].lambda >= table[i].lambda - slack,
                  fmt("lambda drops by more than 2 joint SE between epsilon=%.2f and %.2f",
                      table[i].epsilon, table[i + 1].epsilon));
    }

    const DwellStats dw = dwell_asymmetry(standard_run(1000, p, 7), p);
    r.note(fmt("dwell shares: expansion %.3f, contraction %.3f", dw.expansion_share,
               dw.contraction_share));
    r.require(dw.expansion_share > dw.contraction_share,
              "expansion share does not exceed contraction share");
}

// -------------------------------------------------------------------------
//  6. efficient-limit price increments: drift and gaussian shape
// -------------------------------------------------------------------------
void criterion_efficient(Report& r) {
    Params p;
    const long days = 1000000;
    const EfficientPath path = efficient_limit_path(days, p.epsilon, p, 12345);

    std::vector<double> inc(path.p.size());
    double prev = 0.0;  // p(0) = 0 by construction
    for (std::size_t i = 0; i < path.p.size(); ++i) {
        inc[i] = path.p[i] - prev;
        prev = path.p[i];
    }
    const double n = static_cast<double>(inc.size());
    double mean = 0.0;
    for (double v : inc) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : inc) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const double sd = std::sqrt(m2);
    const double se = sd / std::sqrt(n);
    const double skew = m3 / (m2 * sd);
    const double exkurt = m4 / (m2 * m2) - 3.0;
    const double theory = p.c2 * p.beta2 * (p.epsilon - p.s_star / p.beta2);

    r.note(fmt("drift %.3e vs theory %.3e (|z| = %.2f)", mean, theory,
               std::fabs(mean - theory) / se));
    r.note(fmt("skew %+.4f, excess kurtosis %+.4f", skew, exkurt));
    r.require(std::fabs(mean - theory) <= 3.0 * se, "drift more than 3 SE from theory");
    r.require(std::fabs(skew) <= 0.02, "increment skewness outside +-0.02");
    r.require(std::fabs(exkurt) <= 0.02, "increment excess kurtosis outside +-0.02");
}

// -------------------------------------------------------------------------
//  7. sentiment pitchfork across the critical coupling
// -------------------------------------------------------------------------
void criterion_pitchfork(Report& r) {
    const auto sub = sentiment_pitchfork(0.9);
    r.require(sub.size() == 1, fmt("beta1=0.9: expected 1 root, found %zu", sub.size()));
    if (sub.size() == 1) {
        r.require(std::fabs(sub[0].s) <= 1e-9 && sub[0].stable,
                  "beta1=0.9: root is not a stable origin");
    }

    const auto sup = sentiment_pitchfork(1.1);
    r.require(sup.size() == 3, fmt("beta1=1.1: expected 3 roots, found %zu", sup.size()));
    if (sup.size() == 3) {
        r.require(sup[0].s < 0.0 && sup[0].stable, "beta1=1.1: negative root not stable");
        r.require(std::fabs(sup[1].s) <= 1e-9 && !sup[1].stable,
                  "beta1=1.1: origin not an unstable root");
        r.require(sup[2].s > 0.0 && sup[2].stable, "beta1=1.1: positive root not stable");
        r.note(fmt("beta1=1.1 roots: %+.6f, %+.6f, %+.6f", sup[0].s, sup[1].s, sup[2].s));
    }
}

// -------------------------------------------------------------------------
//  8. transition barriers depend on the plane of motion
// -------------------------------------------------------------------------
void criterion_barriers(Report& r) {
    Params p;
    const auto bh = barrier_heights(p, {PlaneSpec{-0.48}, PlaneSpec{-1.11}});
    r.require(bh.size() == 2, "expected barrier reports for both reference planes");
    if (bh.size() != 2) return;

    r.note(fmt("C=%.2f: expansion %.4f%s, contraction %.4f%s", bh[0].C, bh[0].expansion,
               bh[0].expansion_clamped ? " (clamped)" : "", bh[0].contraction,
               bh[0].contraction_clamped ? " (clamped)" : ""));
    r.note(fmt("C=%.2f: expansion %.4f%s, contraction %.4f%s", bh[1].C, bh[1].expansion,
               bh[1].expansion_clamped ? " (clamped)" : "", bh[1].contraction,
               bh[1].contraction_clamped ? " (clamped)" : ""));

    r.require(bh[1].expansion < bh[0].expansion,
              "expansion-exit barrier is not smaller in the lower plane");
    r.require(bh[0].contraction < bh[1].contraction,
              "contraction-exit barrier is not smaller in the upper plane");
    for (const auto& b : bh)
        r.require(b.expansion > 0.0 && b.contraction > 0.0, "non-positive barrier height");
}

// -------------------------------------------------------------------------
//  9. price-map coefficients recovered from noisy synthetic data
// -------------------------------------------------------------------------
void criterion_calibration(Report& r) {
    Params params;
    FitResult truth;
    truth.c1 = 1.0;
    truth.c2 = 2.2e-4;
    truth.s_star = 0.03;
    truth.trend = -truth.c2 * truth.s_star;
    truth.constant = 1.5;

    // Synthetic expectation path: slow and fast tones with seed-dependent
    // phases.  The induced sentiment swings through both regimes, so the
    // cumulative-sentiment column bends away from the bare time trend and
    // keeps s* identifiable at this sample size.
    const long n = 5000;  // 20 years, daily
    const double w1 = 2.0 * 3.141592653589793 / 1500.0;
    const double w2 = 2.0 * 3.141592653589793 / 325.0;

    int good = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const double phi = 0.31 * static_cast<double>(seed);
        std::vector<double> h(n);
        for (long i = 0; i < n; ++i)
            h[i] = 0.45 * std::sin(w1 * i + phi) + 0.25 * std::sin(w2 * i + 1.7 * phi + 0.9);
        const auto s = sentiment_from_h(h, params);
        auto target = fitted_price(truth, s);
        Rng obs(seed + 0x9e3779b9u);  // independent observation-noise stream
        for (auto& v : target) v += 0.01 * obs.gaussian();

        const FitResult fit = fit_price_map(s, target);
        const bool ok = std::fabs(fit.c1 / truth.c1 - 1.0) <= 0.05 &&
                        std::fabs(fit.c2 / truth.c2 - 1.0) <= 0.05 &&
                        fit.s_star_identifiable &&
                        std::fabs(fit.s_star / truth.s_star - 1.0) <= 0.10;
        good += ok ? 1 : 0;
        if (!ok)
            r.note(fmt("seed %llu missed: c1 %+.2f%%, c2 %+.2f%%, s* %+.2f%%",
                       (unsigned long long)seed, 100.0 * (fit.c1 / truth.c1 - 1.0),
                       100.0 * (fit.c2 / truth.c2 - 1.0),
                       100.0 * (fit.s_star / truth.s_star - 1.0)));
    }
    r.note(fmt("recovered within tolerance in %d of 20 trials", good));
    r.require(good >= 18, "fewer than 18 of 20 trials within tolerance");
}

// -------------------------------------------------------------------------
//  10. identical reruns produce byte-identical outputs
// -------------------------------------------------------------------------

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// the manifest timestamp is informational; everything else must match
std::string drop_timestamp(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("\"timestamp\"") == std::string::npos) out << line << '\n';
    return out.str();
}

std::vector<std::string> relative_files(const fs::path& root) {
    std::vector<std::string> names;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) names.push_back(fs::relative(e.path(), root).string());
    std::sort(names.begin(), names.end());
    return names;
}

void criterion_determinism(Report& r) {
    const fs::path scratch = "acceptance_scratch";
    std::error_code ec;
    fs::remove_all(scratch, ec);
    fs::create_directories(scratch / "first");

    struct Cmd {
        const char* sub;
        const char* args;
    };
    const std::vector<Cmd> cmds = {
        {"simulate", "--years 2 --seed 7"},
        {"equilibria", ""},
        {"portrait", "--fan 8"},
        {"cycles", "--years 500 --seed 101"},
        {"sweep", "--epsilon 0.02:0.03:0.01 --years-per-point 100 --replicas 2 --seed 11"},
        {"calibrate", "--demo-years 12 --seed 3"},
        {"efficient", "--days 100000 --seed 5"},
        {"micro-check", "--replicas 4 --seed 9"},
    };

    for (const auto& cmd : cmds) {
        // Rerun the *identical* command line (same --out), so both runs carry
        // the same manifest; the first run's outputs are snapshotted aside.
        const fs::path out = scratch / "run" / cmd.sub;
        const fs::path snap = scratch / "first" / cmd.sub;
        std::ostringstream cl;
        cl << '"' << g_cli << "\" " << cmd.sub << ' ' << cmd.args << " --out " << out << " > "
           << (scratch / "cli.log") << " 2>&1";

        bool launch_failed = false;
        for (const char* tag : {"first", "rerun"}) {
            const int rc = std::system(cl.str().c_str());
            if (rc != 0) {
                r.fail(fmt("%s %s exited with status %d", cmd.sub, tag, rc));
                r.note("log: " + read_file(scratch / "cli.log"));
                launch_failed = true;
                break;
            }
            if (tag[0] == 'f') fs::copy(out, snap, fs::copy_options::recursive);
        }
        if (launch_failed) continue;

        const auto fa = relative_files(snap), fb = relative_files(out);
        if (fa != fb) {
            r.fail(fmt("%s: rerun produced a different file set", cmd.sub));
            continue;
        }
        std::size_t mismatches = 0;
        for (const auto& name : fa) {
            std::string ca = read_file(snap / name), cb = read_file(out / name);
            if (name == "manifest.json") {
                // identical except possibly the informational timestamp
                ca = drop_timestamp(ca);
                cb = drop_timestamp(cb);
            }
            if (ca != cb) {
                ++mismatches;
                r.fail(fmt("%s/%s differs between reruns", cmd.sub, name.c_str()));
            }
        }
        if (mismatches == 0)
            r.note(fmt("%s: %zu files byte-identical", cmd.sub, fa.size()));
    }
}

// -------------------------------------------------------------------------

struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = informational only
    std::function<void(Report&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance_tests <path-to-bizcycle-cli>\n");
        return 2;
    }
    g_cli = argv[1];

    const std::vector<Criterion> criteria = {
        {1, "equilibrium count, classes and output-line residuals", 1.0, criterion_equilibria},
        {2, "bounded and full formulations agree pathwise", 5.0, criterion_formulations},
        {3, "agent-based dynamics match the mean-field law", 60.0, criterion_micro},
        {4, "modal cycle length in the 4-10 year band", 300.0, criterion_cycle_band},
        {5, "growth rises with news bias; expansions dominate", 600.0, criterion_growth},
        {6, "efficient-limit drift and near-gaussian increments", 10.0, criterion_efficient},
        {7, "sentiment pitchfork across the critical coupling", 1.0, criterion_pitchfork},
        {8, "transition barriers depend on the plane of motion", 30.0, criterion_barriers},
        {9, "price-map recovery from noisy synthetic data", 30.0, criterion_calibration},
        {10, "identical reruns produce byte-identical outputs", 0.0, criterion_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Report rep;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(rep);
        } catch (const std::exception& e) {
            rep.fail(std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0.0 && secs > c.budget_s)
            rep.fail(fmt("exceeded %.0f s budget", c.budget_s));

        std::printf("[%s] %2d. %s (%.2f s)\n", rep.pass ? "PASS" : "FAIL", c.id, c.name, secs);
        for (const auto& n : rep.notes) std::printf("        - %s\n", n.c_str());
        failures += rep.pass ? 0 : 1;
    }

    if (failures == 0) {
        std::printf("all %zu acceptance criteria satisfied\n", criteria.size());
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", failures);
    return 1;
}
