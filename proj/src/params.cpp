#include "bizcycle/params.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bizcycle {

namespace {

void require(bool ok, std::vector<std::string>& bad, const std::string& what) {
    if (!ok) bad.push_back(what);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Field table shared by the loader and the writer so the two cannot drift.
using Setter = std::function<void(Params&, double)>;
using Getter = std::function<double(const Params&)>;

struct Field {
    const char* key;
    Getter get;
    Setter set;
};

const std::vector<Field>& fields() {
    static const std::vector<Field> f = {
        {"tau_h",   [](const Params& p) { return p.tau_h; },   [](Params& p, double v) { p.tau_h = v; }},
        {"tau_s",   [](const Params& p) { return p.tau_s; },   [](Params& p, double v) { p.tau_s = v; }},
        {"tau_y",   [](const Params& p) { return p.tau_y; },   [](Params& p, double v) { p.tau_y = v; }},
        {"beta1",   [](const Params& p) { return p.beta1; },   [](Params& p, double v) { p.beta1 = v; }},
        {"beta2",   [](const Params& p) { return p.beta2; },   [](Params& p, double v) { p.beta2 = v; }},
        {"k1",      [](const Params& p) { return p.k1; },      [](Params& p, double v) { p.k1 = v; }},
        {"k2",      [](const Params& p) { return p.k2; },      [](Params& p, double v) { p.k2 = v; }},
        {"epsilon", [](const Params& p) { return p.epsilon; }, [](Params& p, double v) { p.epsilon = v; }},
        {"c1",      [](const Params& p) { return p.c1; },      [](Params& p, double v) { p.c1 = v; }},
        {"c2",      [](const Params& p) { return p.c2; },      [](Params& p, double v) { p.c2 = v; }},
        {"s_star",  [](const Params& p) { return p.s_star; },  [](Params& p, double v) { p.s_star = v; }},
        {"b",       [](const Params& p) { return p.b; },       [](Params& p, double v) { p.b = v; }},
    };
    return f;
}

}  // namespace

void Params::validate() const {
    std::vector<std::string> bad;
    require(std::isfinite(tau_h) && tau_h > 0, bad, "tau_h must be > 0");
    require(std::isfinite(tau_s) && tau_s > 0, bad, "tau_s must be > 0");
    require(std::isfinite(tau_y) && tau_y > 0, bad, "tau_y must be > 0");
    require(std::isfinite(beta1) && beta1 >= 0, bad, "beta1 must be >= 0");
    require(std::isfinite(beta2) && beta2 >= 0, bad, "beta2 must be >= 0");
    require(std::isfinite(k1) && k1 >= 0, bad, "k1 must be >= 0");
    require(std::isfinite(k2) && k2 >= 0, bad, "k2 must be >= 0");
    require(std::isfinite(c1) && c1 >= 0, bad, "c1 must be >= 0");
    require(std::isfinite(c2) && c2 >= 0, bad, "c2 must be >= 0");
    require(std::isfinite(b) && b >= 0, bad, "b must be >= 0");
    require(std::isfinite(epsilon), bad, "epsilon must be finite");
    require(std::isfinite(s_star), bad, "s_star must be finite");
    if (!bad.empty()) {
        std::string msg = "invalid Params:";
        for (const auto& m : bad) msg += " " + m + ";";
        throw std::invalid_argument(msg);
    }
}

void MicroParams::validate() const {
    std::vector<std::string> bad;
    require(std::isfinite(alpha) && alpha > 0, bad, "alpha must be > 0");
    require(std::isfinite(tau_s_micro) && tau_s_micro > 0, bad, "tau_s_micro must be > 0");
    require(n_agents >= 2, bad, "n_agents must be >= 2");
    if (!bad.empty()) {
        std::string msg = "invalid MicroParams:";
        for (const auto& m : bad) msg += " " + m + ";";
        throw std::invalid_argument(msg);
    }
}

double absorb_coupling(double beta_micro, double alpha) { return 0.5 * alpha * beta_micro; }
double unabsorb_coupling(double beta_macro, double alpha) { return 2.0 * beta_macro / alpha; }

std::vector<ConfigEntry> read_config(std::istream& in) {
    std::vector<ConfigEntry> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comment and whitespace
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r\n");
        std::string body = line.substr(first, last - first + 1);

        auto eq = body.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        out.push_back({lineno, trim(body.substr(0, eq)), trim(body.substr(eq + 1))});
    }
    return out;
}

std::vector<ConfigEntry> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return read_config(in);
}

bool apply_param(Params& p, const ConfigEntry& e) {
    for (const auto& f : fields()) {
        if (e.key != f.key) continue;
        try {
            size_t pos = 0;
            double v = std::stod(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument(e.value);
            f.set(p, v);
        } catch (const std::exception&) {
            throw std::runtime_error("config line " + std::to_string(e.line) + ": bad value '" +
                                     e.value + "' for key '" + e.key + "'");
        }
        return true;
    }
    return false;
}

Params load_params(std::istream& in) {
    Params p;
    for (const auto& e : read_config(in)) {
        if (!apply_param(p, e))
            throw std::runtime_error("config line " + std::to_string(e.line) + ": unknown key '" +
                                     e.key + "'");
    }
    p.validate();
    return p;
}

Params load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return load_params(in);
}

void save_params(std::ostream& out, const Params& p) {
    for (const auto& f : fields()) out << f.key << " = " << fmt17(f.get(p)) << "\n";
}

void save_params_file(const std::string& path, const Params& p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write config file: " + path);
    save_params(out, p);
}

}  // namespace bizcycle
