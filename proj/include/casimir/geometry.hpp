#pragma once

#include <stdexcept>

namespace casimir {

enum class Boundary { grounded, isolated };
enum class Prescription { drude, plasma, perfect_conductor };

// Two-sphere geometry: radii r1, r2 and tip-to-tip gap a, all in um.
struct SphereGeometry {
    double r1_um = 0.0, r2_um = 0.0, gap_um = 0.0;

    SphereGeometry(double r1, double r2, double a) : r1_um(r1), r2_um(r2), gap_um(a) {
        if (!(r1 > 0.0) || !(r2 > 0.0) || !(a > 0.0))
            throw std::invalid_argument("SphereGeometry: radii and gap must be positive");
    }

    double effective_radius() const { return r1_um * r2_um / (r1_um + r2_um); }
    // u in (0, 1/4]; 1/4 for equal spheres, -> 0 in the sphere-plate limit
    double u() const {
        const double rt = effective_radius();
        return rt * rt / (r1_um * r2_um);
    }
    double x() const { return gap_um / effective_radius(); }
    double center_distance() const { return r1_um + r2_um + gap_um; }

    SphereGeometry with_gap(double a) const { return SphereGeometry(r1_um, r2_um, a); }
};

}  // namespace casimir
