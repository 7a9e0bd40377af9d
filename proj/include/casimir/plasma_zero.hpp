#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "casimir/bispherical.hpp"
#include "casimir/geometry.hpp"

namespace casimir {

// Multipole truncation and compression plan for the zero-frequency TE plasma
// computation in the spherical basis. Counts follow the empirical convergence
// laws N_i = 6 R_i / a and m_max = sqrt(6 R~/a); the matrix is dominated by an
// oblique strip of half-widths Delta_i = R_i / sqrt(R~ a).
struct TruncationPlan {
    int n1 = 0, n2 = 0;  // rows/cols: l - |m| in [0, n_i)
    int m_max = 0;
    double delta1 = 0.0, delta2 = 0.0;
    double strip_width_factor = 6.0;  // strip half-width = factor * Delta_i
    int p1 = 1, p2 = 1;               // decimation block sizes

    bool decimated() const { return p1 > 1 || p2 > 1; }

    // n_i rounded up to multiples of p_i; invalid block sizes rejected
    void apply_blocks(int p1_new, int p2_new);

    static TruncationPlan automatic(const SphereGeometry&, bool allow_decimation = true);
};

// Rectangular matrix stored on an oblique band; elements outside the stored
// band are exact zeros.
struct StripMatrix {
    int rows = 0, cols = 0;
    int m = 0;
    std::vector<int> lo, hi;            // per-row column range [lo, hi)
    std::vector<std::size_t> offset;    // row start into data
    std::vector<double> data;

    double operator()(int i, int j) const {
        if (j < lo[i] || j >= hi[i]) return 0.0;
        return data[offset[i] + static_cast<std::size_t>(j - lo[i])];
    }
    std::size_t stored() const { return data.size(); }
};

// r_l = [l/(l+1)] I_{l+3/2}(w) / I_{l-1/2}(w); w = omega_p R / c
double mie_te_zero_ratio(int l, double w);

// Symmetrized zero-frequency TE plasma matrix A at azimuthal number m,
// assembled in log space and restricted to the oblique strip.
StripMatrix build_a_strip(int m, const SphereGeometry&, double wp1_ev, double wp2_ev,
                          const TruncationPlan&);

// Block decimation: the sqrt(p1 p2)-rescaled matrix of upper-left block corners.
Eigen::MatrixXd decimate(const StripMatrix&, int p1, int p2);

// ln det(1 - A A^T) for one m; decimated or banded-exact path.
double te_plasma_m_logdet(int m, const SphereGeometry&, double wp1_ev, double wp2_ev,
                          const TruncationPlan&);

struct TePlasmaOptions {
    double fd_step_rel = 1e-3;
    double m_sum_tol = 1e-12;          // stop the m sum once terms are negligible
    std::string logdet_dump_path;      // optional binary per-m dump (little endian)
    bool check_convergence = false;    // repeat with wider strip at the central gap
};

struct TePlasmaResult {
    ClassicalResult classical;
    int p1_used = 1, p2_used = 1;  // after any automatic halving
};

// Zero-frequency TE contribution of the plasma model:
// energy = kT sum'_m ln det(1 - A_m A_m^T), force and gradient by Richardson
// finite differences in the gap (matrices rebuilt at shifted gaps).
TePlasmaResult te_plasma_classical(const SphereGeometry&, double temperature_k, double wp1_ev,
                                   double wp2_ev, const TruncationPlan&,
                                   const TePlasmaOptions& = {});

struct PlasmaClassicalResult {
    ClassicalResult total, tm, te;
    int p1_used = 1, p2_used = 1;
};

// Full plasma classical term: TM from the bispherical solver (Dirichlet when
// grounded, monopole-free Drude block when isolated) plus the TE part above.
PlasmaClassicalResult plasma_classical_total(const SphereGeometry&, double temperature_k,
                                             double wp1_ev, double wp2_ev, Boundary,
                                             const TruncationPlan&, const TePlasmaOptions& = {},
                                             const ClassicalOptions& = {});

}  // namespace casimir
