#include "casimir/materials.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "casimir/constants.hpp"

namespace casimir {

PermittivityModel PermittivityModel::drude(double omega_p_ev, double gamma_ev) {
    if (!(omega_p_ev > 0.0)) throw std::invalid_argument("drude: omega_p must be positive");
    if (gamma_ev < 0.0) throw std::invalid_argument("drude: gamma must be non-negative");
    PermittivityModel m;
    m.kind_ = ConductorKind::drude;
    m.omega_p_ = omega_p_ev;
    m.gamma_ = gamma_ev;
    return m;
}

PermittivityModel PermittivityModel::plasma(double omega_p_ev) {
    if (!(omega_p_ev > 0.0)) throw std::invalid_argument("plasma: omega_p must be positive");
    PermittivityModel m;
    m.kind_ = ConductorKind::plasma;
    m.omega_p_ = omega_p_ev;
    return m;
}

PermittivityModel PermittivityModel::perfect_conductor() {
    PermittivityModel m;
    m.kind_ = ConductorKind::perfect_conductor;
    return m;
}

PermittivityModel PermittivityModel::tabulated(std::vector<double> xi_ev,
                                               std::vector<double> eps) {
    if (xi_ev.size() != eps.size() || xi_ev.size() < 2)
        throw std::invalid_argument("tabulated: need >= 2 matching entries");
    std::vector<double> lx(xi_ev.size()), ly(eps.size());
    for (std::size_t i = 0; i < xi_ev.size(); ++i) {
        if (!(xi_ev[i] > 0.0))
            throw std::invalid_argument("tabulated: frequencies must be positive");
        if (i > 0 && !(xi_ev[i] > xi_ev[i - 1]))
            throw std::invalid_argument("tabulated: frequencies must be strictly increasing");
        if (!(eps[i] > 1.0))
            throw std::invalid_argument("tabulated: permittivity must exceed 1");
        lx[i] = std::log(xi_ev[i]);
        ly[i] = std::log(eps[i] - 1.0);
    }
    PermittivityModel m;
    m.kind_ = ConductorKind::tabulated;
    m.table_ = MonotoneCubic(std::move(lx), std::move(ly));
    return m;
}

double PermittivityModel::epsilon(double xi_ev) const {
    if (!(xi_ev > 0.0)) throw std::domain_error("epsilon: xi must be positive");
    switch (kind_) {
        case ConductorKind::drude:
            return 1.0 + omega_p_ * omega_p_ / (xi_ev * (xi_ev + gamma_));
        case ConductorKind::plasma:
            return 1.0 + omega_p_ * omega_p_ / (xi_ev * xi_ev);
        case ConductorKind::perfect_conductor:
            return std::numeric_limits<double>::infinity();
        case ConductorKind::tabulated:
            return 1.0 + std::exp(table_(std::log(xi_ev)));
    }
    return 1.0;
}

FresnelPair fresnel(double eps, double xi_ev, double kperp_per_um) {
    if (std::isinf(eps)) return {-1.0, 1.0};
    if (!(xi_ev > 0.0)) throw std::domain_error("fresnel: xi must be positive");
    if (kperp_per_um < 0.0) throw std::domain_error("fresnel: kperp must be non-negative");
    if (eps < 1.0) throw std::domain_error("fresnel: eps must be >= 1");
    const double xc = xi_ev / hbar_c;
    const double q = std::sqrt(xc * xc + kperp_per_um * kperp_per_um);
    const double k = std::sqrt(eps * xc * xc + kperp_per_um * kperp_per_um);
    return {(q - k) / (q + k), (eps * q - k) / (eps * q + k)};
}

double MatsubaraGrid::xi_ev(int n) const {
    return 2.0 * pi * n * thermal_energy_ev(temperature_k);
}

double MatsubaraGrid::xi_rad_per_s(int n) const { return xi_ev(n) / hbar_ev_s; }

MatsubaraGrid matsubara_grid(double temperature_k, double a_min_um, double rel_tol) {
    if (!(temperature_k > 0.0)) throw std::invalid_argument("matsubara_grid: T must be positive");
    if (!(a_min_um > 0.0)) throw std::invalid_argument("matsubara_grid: a_min must be positive");
    if (!(rel_tol > 0.0) || rel_tol >= 1.0)
        throw std::invalid_argument("matsubara_grid: rel_tol must be in (0, 1)");
    MatsubaraGrid g;
    g.temperature_k = temperature_k;
    g.lambda_t_um = hbar_c / (2.0 * pi * thermal_energy_ev(temperature_k));
    // tail of sum ~ e^{-2 a xi_n / c} = e^{-2 a n / lambda_T}
    const double c_factor = 0.5 * std::log(1.0 / rel_tol);
    g.n_max = std::max(1, static_cast<int>(std::ceil(c_factor * g.lambda_t_um / a_min_um)));
    return g;
}

PermittivityModel load_permittivity_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open permittivity table: " + path);
    std::vector<double> xi, eps;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double x, e;
        if (!(ss >> x)) continue;  // blank / comment-only line
        if (!(ss >> e)) fail("expected two numeric columns (xi_eV, eps)");
        std::string extra;
        if (ss >> extra) fail("trailing garbage after two columns");
        if (!(x > 0.0)) fail("frequency must be positive");
        if (!xi.empty() && !(x > xi.back())) fail("frequencies not strictly increasing");
        if (!(e > 1.0)) fail("permittivity must exceed 1");
        xi.push_back(x);
        eps.push_back(e);
    }
    if (xi.size() < 2) throw std::runtime_error(path + ": need at least 2 data rows");
    return PermittivityModel::tabulated(std::move(xi), std::move(eps));
}

}  // namespace casimir
