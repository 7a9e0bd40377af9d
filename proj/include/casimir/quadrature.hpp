#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace casimir {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double gk_nodes[8] = {
    0.000000000000000000, 0.207784955007898468, 0.405845151377397167,
    0.586087235467691130, 0.741531185599394440, 0.864864423359769073,
    0.949107912342758525, 0.991455371120812639};
inline constexpr double gk_wk[8] = {
    0.209482141084727828, 0.204432940075298892, 0.190350578064785410,
    0.169004726639267903, 0.140653259715525919, 0.104790010322250184,
    0.063092092629978553, 0.022935322010529225};
// Gauss weights attach to nodes 0, 2, 4, 6 of the list above.
inline constexpr double gk_wg[4] = {
    0.417959183673469388, 0.381830050505118945, 0.279705391489276668,
    0.129484966168869693};

template <class F>
inline std::pair<double, double> gk15_panel(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    const double f0 = f(c);
    double k15 = gk_wk[0] * f0;
    double g7 = gk_wg[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = hl * gk_nodes[i];
        const double s = f(c + dx) + f(c - dx);
        k15 += gk_wk[i] * s;
        if (i % 2 == 0) g7 += gk_wg[i / 2] * s;
    }
    k15 *= hl;
    g7 *= hl;
    // the plain |K15 - G7| overestimates the Kronrod error; robust on the
    // log-singular endpoints of the Lifshitz integrands
    return {k15, std::abs(k15 - g7)};
}

}  // namespace detail

// Adaptive bisection on a finite interval.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                    double abs_tol = 1e-300, int max_panels = 4000) {
    QuadratureResult out;
    if (a == b) return out;
    struct Seg { double a, b, value, error; };
    auto [v0, e0] = detail::gk15_panel(f, a, b);
    std::vector<Seg> segs{{a, b, v0, e0}};
    double total = v0, total_err = e0;
    int panels = 1;
    while (total_err > std::max(rel_tol * std::abs(total), abs_tol)) {
        // split the worst segment
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[worst].error) worst = i;
        Seg s = segs[worst];
        if (panels >= max_panels || s.b - s.a < 1e-15 * (std::abs(s.a) + std::abs(s.b))) {
            out.converged = false;
            break;
        }
        const double mid = 0.5 * (s.a + s.b);
        auto [vl, el] = detail::gk15_panel(f, s.a, mid);
        auto [vr, er] = detail::gk15_panel(f, mid, s.b);
        total += vl + vr - s.value;
        total_err += el + er - s.error;
        segs[worst] = {s.a, mid, vl, el};
        segs.push_back({mid, s.b, vr, er});
        ++panels;
    }
    out.value = total;
    out.error = total_err;
    return out;
}

// Semi-infinite integral of an integrand with (at least) exponential decay,
// marched in fixed-width panels until two consecutive panels are negligible.
template <class F>
QuadratureResult integrate_exp_tail(F&& f, double a, double rel_tol,
                                    double panel_width = 10.0, int max_panels = 200) {
    QuadratureResult out;
    int quiet = 0;
    for (int k = 0; k < max_panels; ++k) {
        const double lo = a + k * panel_width;
        const double hi = lo + panel_width;
        QuadratureResult p = integrate_adaptive(f, lo, hi, rel_tol, 1e-300);
        out.value += p.value;
        out.error += p.error;
        out.converged = out.converged && p.converged;
        if (std::abs(p.value) < rel_tol * std::abs(out.value) + 1e-300) {
            if (++quiet >= 2) return out;
        } else {
            quiet = 0;
        }
    }
    out.converged = false;
    return out;
}

}  // namespace casimir
