#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "casimir/bispherical.hpp"
#include "casimir/geometry.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/plasma_zero.hpp"

namespace casimir {

// Conductor model for a full deviation computation.
struct ModelSpec {
    Prescription prescription = Prescription::drude;
    Boundary boundary = Boundary::isolated;
    double temperature_k = 300.0;
    double omega_p1_ev = 9.0, omega_p2_ev = 9.0;  // gold default
    double gamma_ev = 0.035;

    enum class TePath { automatic, exact_plasma, pc_substitute };
    TePath te_path = TePath::automatic;  // classical TE route for the plasma model

    void validate() const;
    PermittivityModel permittivity(int sphere /*1 or 2*/) const;
};

struct DeviationResult {
    double a_um = 0.0;
    // forces in eV/um, gradients in eV/um^2
    double f_pfa = 0.0, f = 0.0, beta = 0.0;
    double fp_pfa = 0.0, fp = 0.0, beta_tilde = 0.0;
    double w = 0.0, w_tilde = 0.0;
    double f_n0 = 0.0, f_npos = 0.0;
    double beta_n0 = 0.0, beta_npos = 0.0;
    double beta_tilde_n0 = 0.0, beta_tilde_npos = 0.0;
    double f_over_ideal = 0.0, fp_over_ideal = 0.0;
    bool te_pc_substituted = false;
    std::optional<std::string> error;
};

struct DeviationOptions {
    LifshitzOptions lifshitz;
    ClassicalOptions classical;
    TePlasmaOptions te_plasma;
    std::optional<TruncationPlan> plan;  // overrides the automatic plan
    int max_exact_te_n1 = 1200;          // beyond this, PC-substitute the plasma TE part
    double identity_tol = 1e-10;
};

// Fractional classical weights w = F_PFA|n=0 / F_PFA (and gradient analog);
// radius independent by construction.
std::pair<double, double> weights(double a_um, const ModelSpec&,
                                  const LifshitzOptions& = {});

// F_PFA^id = -pi^3 hbar c R~/(360 a^3) and F'_PFA^id = pi^3 hbar c R~/(120 a^4)
// for ideal spheres at zero temperature.
std::pair<double, double> ideal_pfa_norms(const SphereGeometry&);

// Full beyond-PFA deviation bundle for one separation.
DeviationResult deviation(const SphereGeometry&, const ModelSpec&,
                          const DeviationOptions& = {});

struct SweepConfig {
    double r1_um = 0.0, r2_um = 0.0;
    std::vector<double> gaps_um;
    ModelSpec model;
    DeviationOptions options;
    enum class Format { csv, json };
    Format format = Format::csv;
    std::string output_path;  // empty = stdout
};

// Structured-JSON configuration file (single-file reproducibility of a run).
SweepConfig load_sweep_config(const std::string& path);

std::vector<DeviationResult> sweep(const SweepConfig&);

// Fixed CSV contract: forces in N, gradients in N/m.
void write_csv(std::ostream&, const std::vector<DeviationResult>&);
void write_json(std::ostream&, const std::vector<DeviationResult>&);

}  // namespace casimir
