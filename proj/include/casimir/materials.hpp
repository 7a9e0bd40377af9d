#pragma once

#include <string>
#include <vector>

#include "casimir/interpolation.hpp"

namespace casimir {

enum class ConductorKind { drude, plasma, perfect_conductor, tabulated };

// Dielectric response of a conductor on the imaginary frequency axis.
// Frequencies are hbar*xi in eV throughout.
class PermittivityModel {
public:
    static PermittivityModel drude(double omega_p_ev, double gamma_ev);
    static PermittivityModel plasma(double omega_p_ev);
    static PermittivityModel perfect_conductor();
    // entries must be strictly increasing in xi with eps > 1
    static PermittivityModel tabulated(std::vector<double> xi_ev, std::vector<double> eps);

    ConductorKind kind() const { return kind_; }
    bool is_perfect_conductor() const { return kind_ == ConductorKind::perfect_conductor; }
    double omega_p_ev() const { return omega_p_; }
    double gamma_ev() const { return gamma_; }

    // eps(i xi), xi > 0. Returns +infinity for a perfect conductor; callers
    // must branch (fresnel() below does). Zero frequency is never evaluated
    // here: the xi -> 0 rule lives with the dedicated zero-frequency code.
    double epsilon(double xi_ev) const;

private:
    PermittivityModel() = default;
    ConductorKind kind_ = ConductorKind::perfect_conductor;
    double omega_p_ = 0.0, gamma_ = 0.0;
    MonotoneCubic table_;  // (log xi, log(eps - 1))
};

struct FresnelPair {
    double te = 0.0, tm = 0.0;
};

// Fresnel reflection coefficients of a thick slab at imaginary frequency.
// eps may be +infinity (perfect conductor limit -> (-1, +1)).
FresnelPair fresnel(double eps, double xi_ev, double kperp_per_um);

struct MatsubaraGrid {
    double temperature_k = 0.0;
    int n_max = 0;
    double lambda_t_um = 0.0;  // thermal length hbar c / (2 pi k_B T)

    double xi_ev(int n) const;        // hbar xi_n in eV, exact 2 pi n k_B T
    double xi_rad_per_s(int n) const;
};

// Grid sized so that the neglected n > n_max tail of a Lifshitz sum at gap
// a_min is below rel_tol (tail bound from the e^{-2 a xi_n / c} factor).
MatsubaraGrid matsubara_grid(double temperature_k, double a_min_um, double rel_tol = 1e-10);

// Two-column text file (hbar*xi in eV, eps), '#' comments allowed.
PermittivityModel load_permittivity_table(const std::string& path);

}  // namespace casimir
