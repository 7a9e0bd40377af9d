#include "casimir/lifshitz.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/constants.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/special_functions.hpp"

namespace casimir {

namespace {

// Zero-frequency reflection coefficients. The xi -> 0 limit is a model
// property, not a table value: Drude loses the TE mode entirely, plasma
// keeps a wp-dependent TE reflection, a perfect conductor reflects both.
FresnelPair zero_frequency_reflection(const PermittivityModel& m, double kperp) {
    switch (m.kind()) {
        case ConductorKind::drude:
            return {0.0, 1.0};
        case ConductorKind::perfect_conductor:
            return {-1.0, 1.0};
        case ConductorKind::plasma: {
            const double kp = m.omega_p_ev() / hbar_c;  // wp/c in 1/um
            const double root = std::sqrt(kperp * kperp + kp * kp);
            return {(kperp - root) / (kperp + root), 1.0};
        }
        case ConductorKind::tabulated:
            throw std::invalid_argument(
                "tabulated permittivity defines no zero-frequency rule; "
                "use a Drude/plasma/perfect-conductor model for the n=0 term");
    }
    return {};
}

double polarization_sum(PolarizationFilter pol, double r_te, double r_tm, double expy,
                        int which) {
    // which: 0 -> y ln(1 - x), 1 -> y^2 x/(1-x), 2 -> Li2(x)
    double out = 0.0;
    auto add = [&](double rr) {
        const double x = rr * expy;
        switch (which) {
            case 0: out += std::log1p(-x); break;
            case 1: out += x / (1.0 - x); break;
            default: out += dilog(x); break;
        }
    };
    if (pol != PolarizationFilter::tm_only) add(r_te);
    if (pol != PolarizationFilter::te_only) add(r_tm);
    return out;
}

}  // namespace

LifshitzPlanar::LifshitzPlanar(PermittivityModel slab1, PermittivityModel slab2,
                               double temperature_k, LifshitzOptions opts)
    : slab1_(std::move(slab1)), slab2_(std::move(slab2)), temperature_(temperature_k),
      opts_(opts) {
    if (!(temperature_k > 0.0)) throw std::invalid_argument("LifshitzPlanar: T must be positive");
}

ValueWithError LifshitzPlanar::term_zero(double a, PolarizationFilter pol, Quantity q) const {
    const double kT = thermal_energy_ev(temperature_);
    auto integrand = [&](double y) {
        const double kperp = y / (2.0 * a);
        const FresnelPair r1 = zero_frequency_reflection(slab1_, kperp);
        const FresnelPair r2 = zero_frequency_reflection(slab2_, kperp);
        const double expy = std::exp(-y);
        const int which = (q == Quantity::free_energy) ? 0 : 1;
        double s = polarization_sum(pol, r1.te * r2.te, r1.tm * r2.tm, expy, which);
        return (q == Quantity::free_energy) ? y * s : y * y * s;
    };
    QuadratureResult r = integrate_exp_tail(integrand, 0.0, 0.1 * opts_.rel_tol);
    if (!r.converged) throw std::runtime_error("lifshitz: n=0 quadrature did not converge");
    const double pref = (q == Quantity::free_energy)
                            ? kT / (16.0 * pi * a * a)
                            : -kT / (16.0 * pi * a * a * a);
    return {pref * r.value, std::abs(pref) * r.error};
}

ValueWithError LifshitzPlanar::term_positive(double a, int n, PolarizationFilter pol,
                                             Quantity q) const {
    const double kT = thermal_energy_ev(temperature_);
    const double xi = 2.0 * pi * n * kT;
    const double yn = 2.0 * a * xi / hbar_c;
    const bool pc1 = slab1_.is_perfect_conductor();
    const bool pc2 = slab2_.is_perfect_conductor();
    const double eps1 = pc1 ? 0.0 : slab1_.epsilon(xi);
    const double eps2 = pc2 ? 0.0 : slab2_.epsilon(xi);
    if (yn > 1400.0) return {0.0, 0.0};  // e^{-yn} underflows

    auto integrand = [&](double y) {
        const double arg = y * y - yn * yn;
        const double kperp = arg > 0.0 ? std::sqrt(arg) / (2.0 * a) : 0.0;
        const FresnelPair r1 = pc1 ? FresnelPair{-1.0, 1.0} : fresnel(eps1, xi, kperp);
        const FresnelPair r2 = pc2 ? FresnelPair{-1.0, 1.0} : fresnel(eps2, xi, kperp);
        const double expy = std::exp(-y);
        int which = 0;
        if (q == Quantity::pressure) which = 1;
        if (q == Quantity::gee) which = 2;
        const double s =
            polarization_sum(pol, r1.te * r2.te, r1.tm * r2.tm, expy, which);
        switch (q) {
            case Quantity::free_energy: return y * s;
            case Quantity::pressure: return y * y * s;
            default: return s;
        }
    };
    QuadratureResult r = integrate_exp_tail(integrand, yn, 0.1 * opts_.rel_tol);
    if (!r.converged) throw std::runtime_error("lifshitz: n>0 quadrature did not converge");
    double pref = 0.0;
    switch (q) {
        case Quantity::free_energy: pref = kT / (8.0 * pi * a * a); break;
        case Quantity::pressure: pref = -kT / (8.0 * pi * a * a * a); break;
        case Quantity::gee: pref = kT / (8.0 * pi * a); break;
    }
    return {pref * r.value, std::abs(pref) * r.error};
}

ValueWithError LifshitzPlanar::evaluate(double gap_um, ModeFilter filter, Quantity q) const {
    if (!(gap_um > 0.0)) throw std::invalid_argument("lifshitz: gap must be positive");
    ValueWithError total;
    if (filter.part != MatsubaraPart::positive_only && q != Quantity::gee) {
        const ValueWithError t0 = term_zero(gap_um, filter.pol, q);
        total.value += t0.value;
        total.error += t0.error;
    }
    if (filter.part != MatsubaraPart::zero_only) {
        int quiet = 0;
        for (int n = 1; n <= opts_.max_matsubara; ++n) {
            const ValueWithError t = term_positive(gap_um, n, filter.pol, q);
            total.value += t.value;
            total.error += t.error;
            if (std::abs(t.value) < opts_.rel_tol * std::abs(total.value)) {
                if (++quiet >= 3) break;
            } else {
                quiet = 0;
            }
            if (n == opts_.max_matsubara)
                throw std::runtime_error("lifshitz: Matsubara sum did not converge");
        }
    }
    return total;
}

ValueWithError LifshitzPlanar::free_energy(double gap_um, ModeFilter filter) const {
    return evaluate(gap_um, filter, Quantity::free_energy);
}

ValueWithError LifshitzPlanar::pressure(double gap_um, ModeFilter filter) const {
    return evaluate(gap_um, filter, Quantity::pressure);
}

ValueWithError LifshitzPlanar::gee(double gap_um) const {
    return evaluate(gap_um, {MatsubaraPart::positive_only, PolarizationFilter::both},
                    Quantity::gee);
}

}  // namespace casimir
