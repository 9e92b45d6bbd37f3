#include "bizcycle/io.hpp"

#include <json.hpp>

#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bizcycle/rng.hpp"

namespace bizcycle {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        size_t a = field.find_first_not_of(' ');
        out.push_back(a == std::string::npos ? std::string() : field.substr(a));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, const std::string& path, int line) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line) + ": bad numeric field '" + s +
                                 "'");
    }
}

}  // namespace

// =========================================================================
//  Trajectory / analysis CSVs
// =========================================================================

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    auto out = open_out(path);
    if (traj.bounded) {
        out << "t_days,h,s,z,xi\n";
        for (size_t i = 0; i < traj.size(); ++i) {
            out << format_double(traj.t_days[i]) << ',' << format_double(traj.h[i]) << ','
                << format_double(traj.s[i]) << ',' << format_double(traj.z[i]) << ','
                << format_double(traj.xi[i]) << '\n';
        }
    } else {
        out << "t_days,h,s,p,y,z,xi\n";
        for (size_t i = 0; i < traj.size(); ++i) {
            out << format_double(traj.t_days[i]) << ',' << format_double(traj.h[i]) << ','
                << format_double(traj.s[i]) << ',' << format_double(traj.p[i]) << ','
                << format_double(traj.y[i]) << ',' << format_double(traj.z[i]) << ','
                << format_double(traj.xi[i]) << '\n';
        }
    }
}

Trajectory read_trajectory_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    auto header = split_csv_line(line);

    Trajectory traj;
    bool full = false;
    if (header == std::vector<std::string>{"t_days", "h", "s", "p", "y", "z", "xi"}) {
        full = true;
        traj.bounded = false;
    } else if (header == std::vector<std::string>{"t_days", "h", "s", "z", "xi"}) {
        traj.bounded = true;
    } else {
        throw std::runtime_error(path + ": unrecognized trajectory header");
    }

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv_line(line);
        if (f.size() != header.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(header.size()) + " fields");
        size_t k = 0;
        traj.t_days.push_back(parse_double(f[k++], path, lineno));
        traj.h.push_back(parse_double(f[k++], path, lineno));
        traj.s.push_back(parse_double(f[k++], path, lineno));
        if (full) {
            traj.p.push_back(parse_double(f[k++], path, lineno));
            traj.y.push_back(parse_double(f[k++], path, lineno));
        }
        traj.z.push_back(parse_double(f[k++], path, lineno));
        traj.xi.push_back(parse_double(f[k++], path, lineno));
    }
    return traj;
}

void write_histogram_csv(const std::string& path, const CycleStats& stats) {
    auto out = open_out(path);
    out << "bin_lo,bin_hi,count\n";
    for (size_t i = 0; i < stats.counts.size(); ++i) {
        out << format_double(stats.bin_edges_years[i]) << ','
            << format_double(stats.bin_edges_years[i + 1]) << ',' << stats.counts[i] << '\n';
    }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepPoint>& points) {
    auto out = open_out(path);
    out << "epsilon,lambda,stderr\n";
    for (const auto& pt : points) {
        if (!pt.ok) continue;
        out << format_double(pt.epsilon) << ',' << format_double(pt.lambda) << ','
            << format_double(pt.stderr_) << '\n';
    }
}

void write_series_csv(const std::string& path, const std::string& col_a, const std::string& col_b,
                      const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("write_series_csv: length mismatch");
    auto out = open_out(path);
    out << col_a << ',' << col_b << '\n';
    for (size_t i = 0; i < a.size(); ++i)
        out << format_double(a[i]) << ',' << format_double(b[i]) << '\n';
}

void write_portrait_csv(const std::string& path, const PhasePortrait& portrait) {
    auto out = open_out(path);
    out << "traj_id,s_prime,h\n";
    for (size_t id = 0; id < portrait.fan.size(); ++id) {
        for (const auto& pt : portrait.fan[id].points)
            out << id << ',' << format_double(pt.s_prime) << ',' << format_double(pt.h) << '\n';
    }
}

void write_polyline_csv(const std::string& path, const std::vector<PlanarPoint>& line) {
    auto out = open_out(path);
    out << "s_prime,h\n";
    for (const auto& pt : line)
        out << format_double(pt.s_prime) << ',' << format_double(pt.h) << '\n';
}

// =========================================================================
//  Dated series
// =========================================================================

namespace {

// days since 1970-01-01 (civil calendar)
int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const int yoe = static_cast<int>(y - era * 400);
    const int doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const int doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

bool is_weekend(int64_t serial) {
    // serial 0 = 1970-01-01, a Thursday; shift so 0 = Monday
    const int dow = static_cast<int>(((serial % 7) + 10) % 7);
    return dow >= 5;
}

// weekdays in [0, n); day 0 = Thursday
int64_t weekday_count(int64_t n) {
    static const int pref[8] = {0, 1, 2, 2, 2, 3, 4, 5};  // Thu,Fri,Sat,Sun,Mon,Tue,Wed
    const int64_t q = n >= 0 ? n / 7 : -((-n + 6) / 7);
    const int64_t r = n - 7 * q;
    return 5 * q + pref[r];
}

int64_t parse_iso_date(const std::string& s, const std::string& path, int line) {
    auto fail = [&]() -> int64_t {
        throw std::runtime_error(path + ":" + std::to_string(line) + ": bad ISO date '" + s + "'");
    };
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return fail();
    for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return fail();
    const int y = std::stoi(s.substr(0, 4));
    const int m = std::stoi(s.substr(5, 2));
    const int d = std::stoi(s.substr(8, 2));
    static const int mdays[13] = {0, 31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12 || d < 1 || d > mdays[m]) return fail();
    return days_from_civil(y, m, d);
}

}  // namespace

int business_days_between(int64_t serial_a, int64_t serial_b) {
    if (serial_b <= serial_a + 1) return 0;
    return static_cast<int>(weekday_count(serial_b) - weekday_count(serial_a + 1));
}

namespace {

// inverse of days_from_civil
void civil_from_days(int64_t serial, int& y, int& m, int& d) {
    serial += 719468;
    const int64_t era = (serial >= 0 ? serial : serial - 146096) / 146097;
    const int doe = static_cast<int>(serial - era * 146097);
    const int yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const int mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yoe + era * 400) + (m <= 2);
}

std::string iso_from_serial(int64_t serial) {
    int y = 0, m = 0, d = 0;
    civil_from_days(serial, y, m, d);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

}  // namespace

std::vector<std::string> make_business_dates(std::size_t n, const std::string& start_iso) {
    int64_t serial = parse_iso_date(start_iso, "<start date>", 0);
    if (is_weekend(serial))
        throw std::invalid_argument("make_business_dates: start date is a weekend");
    std::vector<std::string> out;
    out.reserve(n);
    while (out.size() < n) {
        if (!is_weekend(serial)) out.push_back(iso_from_serial(serial));
        ++serial;
    }
    return out;
}

DatedSeries read_dated_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "date")
        throw std::runtime_error(path + ": expected header 'date,<value>'");

    DatedSeries series;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto f = split_csv_line(line);
        if (f.size() != 2)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 2 fields");
        const int64_t serial = parse_iso_date(f[0], path, lineno);
        if (is_weekend(serial))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": '" + f[0] +
                                     "' falls on a weekend");
        if (!series.day_serial.empty()) {
            const int64_t prev = series.day_serial.back();
            if (serial <= prev)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": dates must be strictly increasing");
            const int gap = business_days_between(prev, serial);
            if (gap > 5)
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": gap of " +
                                         std::to_string(gap) + " business days before '" + f[0] +
                                         "' (max 5)");
        }
        series.date.push_back(f[0]);
        series.day_serial.push_back(serial);
        series.value.push_back(parse_double(f[1], path, lineno));
    }
    if (series.value.empty()) throw std::runtime_error(path + ": no data rows");
    return series;
}

void write_replication_csv(const std::string& path, const std::vector<std::string>& date,
                           const std::vector<double>& p_model,
                           const std::vector<double>& p_target) {
    if (date.size() != p_model.size() || date.size() != p_target.size())
        throw std::invalid_argument("write_replication_csv: length mismatch");
    auto out = open_out(path);
    out << "date,p_model,p_target\n";
    for (size_t i = 0; i < date.size(); ++i)
        out << date[i] << ',' << format_double(p_model[i]) << ',' << format_double(p_target[i])
            << '\n';
}

// =========================================================================
//  Run manifest
// =========================================================================

void write_manifest(const std::string& path, const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["subcommand"] = manifest.subcommand;
    j["config_path"] = manifest.config_path;
    j["seeds"] = manifest.seeds;
    j["out_dir"] = manifest.out_dir;
    j["tool_version"] = manifest.tool_version;
    j["rng_algorithm"] = manifest.rng_algorithm.empty() ? kRngAlgorithmId : manifest.rng_algorithm;

    std::string ts = manifest.timestamp;
    if (ts.empty()) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        ts = buf;
    }
    j["timestamp"] = ts;

    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace bizcycle
