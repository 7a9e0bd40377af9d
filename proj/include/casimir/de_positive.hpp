#pragma once

#include <array>
#include <iosfwd>
#include <utility>

#include "casimir/geometry.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir {

// Derivative-expansion coefficients for gold at room temperature, tabulated
// at 24 separations between 0.10 and 2.0 um (Drude and plasma prescriptions).
struct DeTableRow {
    double a_um, theta, kappa, theta_tilde, kappa_tilde;
};

const std::array<DeTableRow, 24>& de_table(Prescription p);

struct DeCoefficients {
    double theta, kappa, theta_tilde, kappa_tilde;
};

// Monotone cubic interpolation between the table nodes; refuses to
// extrapolate outside [0.10, 2.0] um.
DeCoefficients de_lookup(double a_um, Prescription p);
std::pair<double, double> theta_lookup(double a_um, Prescription p);  // (theta, theta~)

// kappa = 1 + G_{n>0}/(a F_{n>0}), kappa~ = 1 - 2 F_{n>0}/(a P_{n>0}),
// recomputed from the Lifshitz integrals for the given slab models.
std::pair<double, double> kappa_compute(double a_um, double temperature_k,
                                        const PermittivityModel& slab1,
                                        const PermittivityModel& slab2,
                                        double rel_tol = 1e-8);

struct DeForceResult {
    double pfa = 0.0;    // PFA part (eV/um for force, eV/um^2 for gradient)
    double total = 0.0;  // with the first-order beyond-PFA correction
    bool large_x_warning = false;  // a/R~ above 0.1: expansion parameter not small
};

// Positive-Matsubara force F_{n>0} = 2 pi R~ F^pp_{n>0} [1 - (theta + u kappa) a/R~]
DeForceResult force_positive(const SphereGeometry&, double temperature_k, Prescription,
                             const PermittivityModel& slab1, const PermittivityModel& slab2,
                             double rel_tol = 1e-8);
// and the gradient F'_{n>0} = -2 pi R~ P^pp_{n>0} [1 - (theta~ + u kappa~) a/R~]
DeForceResult grad_positive(const SphereGeometry&, double temperature_k, Prescription,
                            const PermittivityModel& slab1, const PermittivityModel& slab2,
                            double rel_tol = 1e-8);

// beta_{n>0} = -(theta + u kappa), beta~_{n>0} = -(theta~ + u kappa~);
// independent of the effective radius.
std::pair<double, double> beta_positive(double a_um, double u, Prescription);

// machine-readable dump of the embedded tables, for audit
void write_de_tables_csv(std::ostream& os);

}  // namespace casimir
