#pragma once
// Model parameter sets and flat key=value config serialization.

#include <iosfwd>
#include <string>
#include <vector>

namespace bizcycle {

// ---------------------------------------------------------------------------
//  Params: macro-level model coefficients.
//
//  Defaults are the canonical calibration (business-day time unit,
//  250 business days per year).  omega_y is derived, never stored.
// ---------------------------------------------------------------------------
struct Params {
    double tau_h  = 2.5;     // analyst expectation relaxation time [days]
    double tau_s  = 25.0;    // investor sentiment relaxation time [days]
    double tau_y  = 1000.0;  // output adjustment time [days]
    double beta1  = 1.1;     // sentiment self-coupling
    double beta2  = 1.0;     // sentiment-expectation coupling
    double k1     = 30.0;    // price-feedback gain in the news flow
    double k2     = 175.0;   // output-feedback gain in the news flow
    double epsilon = 0.03;   // long-run mean of the news flow
    double c1     = 1.0;     // instantaneous price-formation coefficient
    double c2     = 0.00022; // cumulative price-formation coefficient
    double s_star = 0.03;    // reference sentiment in price formation
    double b      = 0.5;     // demand offset in the output equation

    double omega_y() const { return 1.0 / tau_y; }

    // Throws std::invalid_argument listing every violated constraint.
    void validate() const;
};

// ---------------------------------------------------------------------------
//  MicroParams: agent-level quantities for the opinion-dynamics oracle.
//
//  The macro Params absorb alpha/2 into beta1, beta2; with the default
//  alpha = 2 the absorbed and explicit couplings coincide, so the micro
//  model can consume macro beta values unchanged.
// ---------------------------------------------------------------------------
struct MicroParams {
    double alpha       = 2.0;   // force sensitivity of the flip rates
    double tau_s_micro = 25.0;  // mean opinion-flip time [days]
    long   n_agents    = 20000; // population size

    void validate() const;
};

// Coupling conversion between explicit-alpha (micro) and absorbed (macro)
// forms: beta_macro = alpha/2 * beta_micro.
double absorb_coupling(double beta_micro, double alpha);
double unabsorb_coupling(double beta_macro, double alpha);

// ---------------------------------------------------------------------------
//  Flat key=value config (one parameter per line, '#' comments).
// ---------------------------------------------------------------------------

// One key=value assignment (comments and blank lines already dropped).
struct ConfigEntry {
    int line = 0;
    std::string key;
    std::string value;
};

// Tokenizes the shared config grammar.  Malformed lines throw
// std::runtime_error with the offending line number.  The same grammar
// carries model parameters and run-level "run.*" keys (CLI settings).
std::vector<ConfigEntry> read_config(std::istream& in);
std::vector<ConfigEntry> read_config_file(const std::string& path);

// Applies one model-parameter assignment.  Returns false when the key is
// not a model parameter; throws std::runtime_error on a bad numeric value.
bool apply_param(Params& p, const ConfigEntry& e);

// Parses a config stream.  Unknown keys and malformed lines throw
// std::runtime_error with the offending line number.  Missing keys keep
// their defaults.
Params load_params(std::istream& in);
Params load_params_file(const std::string& path);

// Writes every field with round-trip (17 significant digit) precision.
void save_params(std::ostream& out, const Params& p);
void save_params_file(const std::string& path, const Params& p);

}  // namespace bizcycle
