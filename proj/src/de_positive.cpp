#include "casimir/de_positive.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/interpolation.hpp"

namespace casimir {

namespace {

// Au at room temperature, Drude prescription (wp = 9 eV, gamma = 0.035 eV)
constexpr std::array<DeTableRow, 24> de_drude = {{
    {0.10, 0.717, 0.440, 0.456, 0.245},
    {0.15, 0.694, 0.471, 0.4715, 0.270},
    {0.20, 0.664, 0.496, 0.470, 0.289},
    {0.25, 0.636, 0.515, 0.463, 0.305},
    {0.30, 0.609, 0.532, 0.454, 0.319},
    {0.35, 0.584, 0.546, 0.4445, 0.331},
    {0.40, 0.561, 0.559, 0.435, 0.342},
    {0.45, 0.540, 0.571, 0.425, 0.353},
    {0.50, 0.520, 0.583, 0.415, 0.362},
    {0.55, 0.502, 0.593, 0.4055, 0.371},
    {0.60, 0.484, 0.603, 0.396, 0.380},
    {0.65, 0.468, 0.613, 0.387, 0.389},
    {0.70, 0.453, 0.622, 0.379, 0.397},
    {0.75, 0.439, 0.630, 0.370, 0.405},
    {0.80, 0.425, 0.639, 0.362, 0.413},
    {0.85, 0.412, 0.647, 0.3545, 0.421},
    {0.90, 0.400, 0.655, 0.347, 0.429},
    {0.95, 0.389, 0.662, 0.3395, 0.437},
    {1.00, 0.378, 0.669, 0.332, 0.444},
    {1.20, 0.340, 0.696, 0.306, 0.474},
    {1.40, 0.307, 0.719, 0.282, 0.502},
    {1.60, 0.279, 0.739, 0.261, 0.529},
    {1.80, 0.256, 0.757, 0.242, 0.554},
    {2.00, 0.237, 0.774, 0.225, 0.578},
}};

// Au at room temperature, plasma prescription (wp = 9 eV)
constexpr std::array<DeTableRow, 24> de_plasma = {{
    {0.10, 0.725, 0.440, 0.463, 0.244},
    {0.15, 0.700, 0.472, 0.477, 0.269},
    {0.20, 0.670, 0.496, 0.475, 0.289},
    {0.25, 0.639, 0.515, 0.467, 0.306},
    {0.30, 0.612, 0.532, 0.458, 0.319},
    {0.35, 0.586, 0.547, 0.447, 0.332},
    {0.40, 0.563, 0.560, 0.437, 0.343},
    {0.45, 0.541, 0.572, 0.427, 0.352},
    {0.50, 0.521, 0.583, 0.417, 0.363},
    {0.55, 0.503, 0.594, 0.407, 0.372},
    {0.60, 0.486, 0.604, 0.398, 0.380},
    {0.65, 0.469, 0.613, 0.389, 0.389},
    {0.70, 0.454, 0.622, 0.380, 0.397},
    {0.75, 0.440, 0.631, 0.371, 0.406},
    {0.80, 0.426, 0.639, 0.363, 0.413},
    {0.85, 0.413, 0.647, 0.355, 0.421},
    {0.90, 0.401, 0.655, 0.348, 0.430},
    {0.95, 0.389, 0.662, 0.340, 0.437},
    {1.00, 0.378, 0.670, 0.333, 0.444},
    {1.20, 0.339, 0.696, 0.306, 0.474},
    {1.40, 0.307, 0.712, 0.282, 0.502},
    {1.60, 0.279, 0.739, 0.261, 0.529},
    {1.80, 0.256, 0.758, 0.242, 0.554},
    {2.00, 0.236, 0.774, 0.225, 0.578},
}};

struct DeInterpolants {
    MonotoneCubic theta, kappa, theta_tilde, kappa_tilde;
};

DeInterpolants build_interpolants(const std::array<DeTableRow, 24>& rows) {
    std::vector<double> a, th, ka, tht, kat;
    for (const auto& r : rows) {
        a.push_back(r.a_um);
        th.push_back(r.theta);
        ka.push_back(r.kappa);
        tht.push_back(r.theta_tilde);
        kat.push_back(r.kappa_tilde);
    }
    return {MonotoneCubic(a, th), MonotoneCubic(a, ka), MonotoneCubic(a, tht),
            MonotoneCubic(a, kat)};
}

const DeInterpolants& interpolants(Prescription p) {
    static const DeInterpolants drude = build_interpolants(de_drude);
    static const DeInterpolants plasma = build_interpolants(de_plasma);
    switch (p) {
        case Prescription::drude: return drude;
        case Prescription::plasma: return plasma;
        default:
            throw std::invalid_argument(
                "derivative-expansion tables exist for Drude and plasma prescriptions only");
    }
}

}  // namespace

const std::array<DeTableRow, 24>& de_table(Prescription p) {
    switch (p) {
        case Prescription::drude: return de_drude;
        case Prescription::plasma: return de_plasma;
        default:
            throw std::invalid_argument(
                "derivative-expansion tables exist for Drude and plasma prescriptions only");
    }
}

DeCoefficients de_lookup(double a_um, Prescription p) {
    const DeInterpolants& ip = interpolants(p);
    if (a_um < ip.theta.x_min() || a_um > ip.theta.x_max())
        throw std::domain_error("de_lookup: separation outside table range [0.10, 2.0] um");
    return {ip.theta(a_um), ip.kappa(a_um), ip.theta_tilde(a_um), ip.kappa_tilde(a_um)};
}

std::pair<double, double> theta_lookup(double a_um, Prescription p) {
    const DeCoefficients c = de_lookup(a_um, p);
    return {c.theta, c.theta_tilde};
}

std::pair<double, double> kappa_compute(double a_um, double temperature_k,
                                        const PermittivityModel& slab1,
                                        const PermittivityModel& slab2, double rel_tol) {
    if (!(a_um > 0.0)) throw std::invalid_argument("kappa_compute: gap must be positive");
    LifshitzOptions opts;
    opts.rel_tol = rel_tol;
    const LifshitzPlanar pp(slab1, slab2, temperature_k, opts);
    const ModeFilter pos{MatsubaraPart::positive_only, PolarizationFilter::both};
    const double f = pp.free_energy(a_um, pos).value;
    const double p = pp.pressure(a_um, pos).value;
    const double g = pp.gee(a_um).value;
    return {1.0 + g / (a_um * f), 1.0 - 2.0 * f / (a_um * p)};
}

namespace {

DeForceResult de_force(const SphereGeometry& geom, double temperature_k, Prescription pre,
                       const PermittivityModel& s1, const PermittivityModel& s2,
                       double rel_tol, bool gradient) {
    const DeCoefficients c = de_lookup(geom.gap_um, pre);
    LifshitzOptions opts;
    opts.rel_tol = rel_tol;
    const LifshitzPlanar pp(s1, s2, temperature_k, opts);
    const ModeFilter pos{MatsubaraPart::positive_only, PolarizationFilter::both};
    const double rt = geom.effective_radius();
    const double x = geom.x();
    DeForceResult out;
    out.large_x_warning = x > 0.1;
    if (gradient) {
        const double p = pp.pressure(geom.gap_um, pos).value;
        out.pfa = -2.0 * pi * rt * p;
        out.total = out.pfa * (1.0 - (c.theta_tilde + geom.u() * c.kappa_tilde) * x);
    } else {
        const double f = pp.free_energy(geom.gap_um, pos).value;
        out.pfa = 2.0 * pi * rt * f;
        out.total = out.pfa * (1.0 - (c.theta + geom.u() * c.kappa) * x);
    }
    return out;
}

}  // namespace

DeForceResult force_positive(const SphereGeometry& geom, double temperature_k, Prescription p,
                             const PermittivityModel& s1, const PermittivityModel& s2,
                             double rel_tol) {
    return de_force(geom, temperature_k, p, s1, s2, rel_tol, false);
}

DeForceResult grad_positive(const SphereGeometry& geom, double temperature_k, Prescription p,
                            const PermittivityModel& s1, const PermittivityModel& s2,
                            double rel_tol) {
    return de_force(geom, temperature_k, p, s1, s2, rel_tol, true);
}

std::pair<double, double> beta_positive(double a_um, double u, Prescription p) {
    if (u < 0.0 || u > 0.25)
        throw std::invalid_argument("beta_positive: u must lie in [0, 1/4]");
    const DeCoefficients c = de_lookup(a_um, p);
    return {-(c.theta + u * c.kappa), -(c.theta_tilde + u * c.kappa_tilde)};
}

void write_de_tables_csv(std::ostream& os) {
    os << "prescription,a_um,theta,kappa,theta_tilde,kappa_tilde\n";
    for (const auto& r : de_drude)
        os << "drude," << r.a_um << ',' << r.theta << ',' << r.kappa << ',' << r.theta_tilde
           << ',' << r.kappa_tilde << '\n';
    for (const auto& r : de_plasma)
        os << "plasma," << r.a_um << ',' << r.theta << ',' << r.kappa << ',' << r.theta_tilde
           << ',' << r.kappa_tilde << '\n';
}

}  // namespace casimir
