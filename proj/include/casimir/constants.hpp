#pragma once

// Internal unit system: lengths in micrometers, energies in eV.
// Angular frequencies are carried as hbar*omega in eV, so xi/c = xi_ev/hbar_c
// is an inverse length in 1/um. This keeps all Lifshitz integrands O(1).

namespace casimir {

inline constexpr double hbar_c = 0.1973269804;         // eV um
inline constexpr double k_boltzmann = 8.617333262e-5;  // eV / K
inline constexpr double hbar_ev_s = 6.582119569e-16;   // eV s
inline constexpr double zeta3 = 1.2020569031595943;    // Riemann zeta(3)
inline constexpr double pi = 3.14159265358979323846;

// SI conversions for reporting
inline constexpr double ev_in_joule = 1.602176634e-19;
inline constexpr double force_to_newton = 1.602176634e-13;         // eV/um -> N
inline constexpr double gradient_to_newton_per_m = 1.602176634e-7; // eV/um^2 -> N/m

inline double thermal_energy_ev(double temperature_k) {
    return k_boltzmann * temperature_k;
}

}  // namespace casimir
