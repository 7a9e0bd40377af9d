#pragma once

#include "casimir/materials.hpp"

namespace casimir {

enum class MatsubaraPart { zero_only, positive_only, all };
enum class PolarizationFilter { te_only, tm_only, both };

struct ModeFilter {
    MatsubaraPart part = MatsubaraPart::all;
    PolarizationFilter pol = PolarizationFilter::both;
};

struct ValueWithError {
    double value = 0.0;
    double error = 0.0;
};

struct LifshitzOptions {
    double rel_tol = 1e-8;     // target relative accuracy of quadrature + Matsubara sum
    int max_matsubara = 200000;
};

// Plane-parallel (slab-slab) Casimir quantities for two thick slabs in vacuum.
// All results in internal units (eV, um); quantities are per unit area.
class LifshitzPlanar {
public:
    LifshitzPlanar(PermittivityModel slab1, PermittivityModel slab2, double temperature_k,
                   LifshitzOptions opts = {});

    // free energy per unit area, eV/um^2 (negative for identical metals)
    ValueWithError free_energy(double gap_um, ModeFilter filter = {}) const;
    // pressure -d(free energy)/d(gap), eV/um^3 (negative = attractive)
    ValueWithError pressure(double gap_um, ModeFilter filter = {}) const;
    // integrated free energy of the positive modes, -int_a^inf F_{n>0}, eV/um
    ValueWithError gee(double gap_um) const;

    double temperature_k() const { return temperature_; }
    const PermittivityModel& slab1() const { return slab1_; }
    const PermittivityModel& slab2() const { return slab2_; }

private:
    enum class Quantity { free_energy, pressure, gee };
    ValueWithError evaluate(double gap_um, ModeFilter filter, Quantity q) const;
    ValueWithError term_zero(double a, PolarizationFilter pol, Quantity q) const;
    ValueWithError term_positive(double a, int n, PolarizationFilter pol, Quantity q) const;

    PermittivityModel slab1_, slab2_;
    double temperature_;
    LifshitzOptions opts_;
};

}  // namespace casimir
