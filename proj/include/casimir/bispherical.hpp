#pragma once

#include <optional>

#include "casimir/geometry.hpp"

namespace casimir {

// Bispherical parametrization of the two-sphere geometry. The spheres are the
// coordinate surfaces mu = mu_plus > 0 and mu = mu_minus < 0 with common foci
// at z = +-b; Z = exp(-(mu_plus + |mu_minus|)) is the single parameter the
// zero-frequency scattering matrices depend on.
struct BisphericalGeometry {
    double b_um = 0.0;
    double mu_plus = 0.0;   // sphere 1
    double mu_minus = 0.0;  // sphere 2 (<= 0; == 0 describes a plate)
    double z_plus = 0.0, z_minus = 0.0, z = 0.0;
    std::optional<SphereGeometry> spheres;  // absent for raw-parameter construction

    static BisphericalGeometry from_spheres(const SphereGeometry&);
    // direct construction (sphere-plate checks, oracles); no derivative data
    static BisphericalGeometry from_parameters(double mu_plus, double mu_minus);

    // derivatives of mu_plus and nu = |mu_minus| with respect to the gap
    double dmu_plus_da = 0.0, dnu_da = 0.0;
    double d2mu_plus_da2 = 0.0, d2nu_da2 = 0.0;
    double dz_da() const { return -z * (dmu_plus_da + dnu_da); }
    double d2z_da2() const {
        const double s = dmu_plus_da + dnu_da;
        return z * (s * s - (d2mu_plus_da2 + d2nu_da2));
    }
};

// Closed form for Z in terms of x = a/R~ and u
double z_from_xu(double x, double u);

struct ClassicalOptions {
    int l_max = 0;              // 0 = automatic from the aspect ratio
    int m_max = -1;             // -1 = automatic (Neumann m sum)
    double series_tol = 1e-14;  // termination for scalar series
    double fd_step_rel = 1e-3;  // Richardson finite-difference step, h = rel * a
    bool include_l0_m0 = true;  // keep the l = 0 bispherical mode in the Neumann m = 0 block
    bool check_convergence = true;     // re-evaluate at l_max + 8
    double convergence_tol = 1e-9;     // stability demanded of the l_max + 8 probe
};

struct ClassicalResult {
    double energy = 0.0;          // eV
    double force = 0.0;           // eV/um, negative = attractive
    double force_gradient = 0.0;  // eV/um^2
    int l_max_used = 0;
    int m_max_used = 0;
    bool converged = true;
};

// Grounded conductors (Dirichlet TM mode): exact series, analytic derivatives.
ClassicalResult dirichlet_classical(const BisphericalGeometry&, double temperature_k,
                                    const ClassicalOptions& = {});

// Isolated Drude conductors: m != 0 modes in closed form, m = 0 through the
// log-determinant of the monopole-free T-matrices; derivatives by Richardson
// finite differences of the energy.
ClassicalResult drude_isolated_classical(const BisphericalGeometry&, double temperature_k,
                                         const ClassicalOptions& = {});

// Sphere-plate closed form for the isolated-Drude classical energy (eV).
// l_max = 0 sums to the series tolerance; a positive l_max truncates both
// sums at that order (for matched-truncation comparisons).
double sphere_plate_drude_exact(double z, double temperature_k, int l_max = 0,
                                double term_tol = 1e-14);

// Perfect-conductor TE mode (Neumann scalar): per-m tridiagonal solves for the
// T-matrices, log-determinants over bispherical multipoles.
ClassicalResult neumann_classical(const BisphericalGeometry&, double temperature_k,
                                  const ClassicalOptions& = {});

// Analytic d(energy)/da for the Neumann channel (cross-check for the FD path).
double neumann_energy_derivative(const BisphericalGeometry&, double temperature_k,
                                 const ClassicalOptions& = {});

// Per-mode pieces, exposed for cross-module checks and diagnostics:
// m = 0 isolated-Drude block ln det(1 - T0^- T0^+) over l = 1..l_max
double drude_isolated_m0_logdet(double z_plus, double z_minus, int l_max);
// per-m Neumann ln det(1 - N_m)
double neumann_m_logdet(const BisphericalGeometry&, int m, int l_max, bool include_l0 = true);

struct PcClassicalResult {
    ClassicalResult total, tm, te;
};

// Perfect conductor: TM part grounded (Dirichlet) or isolated (Drude-type),
// TE part the Neumann term.
PcClassicalResult pc_classical(const BisphericalGeometry&, double temperature_k, Boundary,
                               const ClassicalOptions& = {});

enum class AsymptoticRegime { near, far };

// Asymptotic classical forces: Eq.-(40)-type near field (x < 0.05) and the
// far-field power laws (a > 10 (R1+R2)), grounded ~ a^-3, isolated ~ a^-7.
double asymptotic_drude_force(const SphereGeometry&, double temperature_k, Boundary,
                              AsymptoticRegime);

}  // namespace casimir
