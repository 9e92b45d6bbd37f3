#pragma once
// File formats: CSV writers/readers for the simulation artifacts, dated
// series ingestion for calibration inputs, and the per-run manifest.
//
// All CSVs use a header row, '.' decimal separator, LF line endings.
// Doubles are written with "%.17g" so files round-trip bit-exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "bizcycle/cycles.hpp"
#include "bizcycle/integrator.hpp"
#include "bizcycle/phase.hpp"

namespace bizcycle {

// Shortest exact decimal form ("%.17g").
std::string format_double(double v);

// =========================================================================
//  Trajectory / analysis CSVs
// =========================================================================

// Full runs: "t_days,h,s,p,y,z,xi".  Bounded runs: "t_days,h,s,z,xi".
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);  // header selects layout

// "bin_lo,bin_hi,count" (years).
void write_histogram_csv(const std::string& path, const CycleStats& stats);

// "epsilon,lambda,stderr"; failed points are skipped (reported in the JSON
// sidecar instead).
void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& points);

// Generic two-column numeric series.
void write_series_csv(const std::string& path, const std::string& col_a,
                      const std::string& col_b, const std::vector<double>& a,
                      const std::vector<double>& b);

// Restricted-plane artifacts, s' = s*sqrt(1+c1^2) convention:
//   fan:        "traj_id,s_prime,h" (one block per seeded trajectory)
//   separatrix: "s_prime,h"
void write_portrait_csv(const std::string& path, const PhasePortrait& portrait);
void write_polyline_csv(const std::string& path, const std::vector<PlanarPoint>& line);

// =========================================================================
//  Dated series (calibration inputs / outputs)
// =========================================================================

struct DatedSeries {
    std::vector<std::string> date;   // ISO yyyy-mm-dd, as read
    std::vector<int64_t> day_serial; // days since 1970-01-01
    std::vector<double> value;
};

// Reads "date,<value>" CSV.  Dates must be ISO, strictly increasing,
// weekdays only, with gaps of at most 5 business days; violations throw
// std::runtime_error naming the offending row.
DatedSeries read_dated_csv(const std::string& path);

// "date,p_model,p_target".
void write_replication_csv(const std::string& path, const std::vector<std::string>& date,
                           const std::vector<double>& p_model,
                           const std::vector<double>& p_target);

// Business days (Mon-Fri) strictly between two day serials.
int business_days_between(int64_t serial_a, int64_t serial_b);

// n consecutive business days (ISO strings) starting at start_iso, which
// must itself be a weekday.
std::vector<std::string> make_business_dates(std::size_t n,
                                             const std::string& start_iso = "2000-01-03");

// =========================================================================
//  Run manifest
// =========================================================================

inline constexpr const char* kToolVersion = "bizcycle 1.0.0";

// Everything needed to reproduce a run bit-exactly (the timestamp is
// informational, not an input).
struct RunManifest {
    std::string subcommand;
    std::string config_path;  // empty when defaults were used
    std::vector<std::uint64_t> seeds;
    std::string out_dir;
    std::string tool_version = kToolVersion;
    std::string rng_algorithm;
    std::string timestamp;  // ISO 8601 UTC, filled by write_manifest
};

// Writes manifest.json.  Call before producing any other outputs.
void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace bizcycle
