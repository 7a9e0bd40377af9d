#include "casimir/bispherical.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "casimir/constants.hpp"

namespace casimir {

namespace {

constexpr double log_underflow = 690.0;  // exp(-x) underflows well below this

double acosh1p(double delta) {  // acosh(1 + delta), stable for small delta
    return std::log1p(delta + std::sqrt(delta * (2.0 + delta)));
}

// log|det| of a dense matrix by partial-pivoting LU; throws if det <= 0.
double logdet_positive(const Eigen::MatrixXd& m, const char* what) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    double logdet = 0.0;
    double sign = lu.permutationP().determinant();
    for (int i = 0; i < m.rows(); ++i) {
        const double d = lu.matrixLU()(i, i);
        if (d == 0.0) throw std::runtime_error(std::string(what) + ": singular matrix");
        if (d < 0.0) sign = -sign;
        logdet += std::log(std::abs(d));
    }
    if (sign <= 0.0)
        throw std::runtime_error(std::string(what) + ": determinant not positive");
    return logdet;
}

// Tridiagonal factorization (Thomas); the Neumann B matrices are strictly
// diagonally dominant for mu != 0, so no pivoting is required.
struct Tridiagonal {
    std::vector<double> sub, diag, sup;  // sub[i] multiplies x[i-1] in row i
    std::vector<double> denom, csup;

    void factorize() {
        const std::size_t n = diag.size();
        denom.resize(n);
        csup.resize(n);
        denom[0] = diag[0];
        if (denom[0] == 0.0) throw std::runtime_error("tridiagonal: zero pivot");
        csup[0] = n > 1 ? sup[0] / denom[0] : 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            denom[i] = diag[i] - sub[i] * csup[i - 1];
            if (denom[i] == 0.0) throw std::runtime_error("tridiagonal: zero pivot");
            if (i + 1 < n) csup[i] = sup[i] / denom[i];
        }
    }

    void solve_in_place(Eigen::Ref<Eigen::VectorXd> v) const {
        const std::size_t n = diag.size();
        v[0] /= denom[0];
        for (std::size_t i = 1; i < n; ++i) v[i] = (v[i] - sub[i] * v[i - 1]) / denom[i];
        for (std::size_t i = n - 1; i-- > 0;) v[i] -= csup[i] * v[i + 1];
    }
};

// B^(s) for sphere s = +1 (mu = mu_plus) or s = -1 (mu = mu_minus), rows
// l = l_min .. l_max at azimuthal number m.
Tridiagonal neumann_b_matrix(double mu, int s, int m, int l_min, int l_max) {
    const int n = l_max - l_min + 1;
    Tridiagonal t;
    t.sub.assign(n, 0.0);
    t.diag.assign(n, 0.0);
    t.sup.assign(n, 0.0);
    const double ch = std::cosh(mu), sh = std::sinh(mu);
    for (int i = 0; i < n; ++i) {
        const int l = l_min + i;
        t.diag[i] = (2.0 * l + 1.0) * ch + s * sh;
        if (i > 0) t.sub[i] = -(l - m);
        if (i + 1 < n) t.sup[i] = -((l + 1) + m);
    }
    t.factorize();
    return t;
}

// delta T^(s) = B^{-1} (-2 s sinh(mu) I), dense n x n
Eigen::MatrixXd neumann_delta_t(const Tridiagonal& b, double mu, int s, int n) {
    Eigen::MatrixXd dt = (-2.0 * s * std::sinh(mu)) * Eigen::MatrixXd::Identity(n, n);
    for (int j = 0; j < n; ++j) b.solve_in_place(dt.col(j));
    return dt;
}

struct NeumannBlocks {
    Eigen::MatrixXd m_minus, m_plus;  // 1 + delta T^(-), 1 + delta T^(+)
    Eigen::VectorXd s_diag;           // Z^(l + 1/2)
    int l_min = 0, n = 0;
};

NeumannBlocks neumann_blocks(double mu_plus, double nu, int m, int l_min, int l_max) {
    NeumannBlocks nb;
    nb.l_min = l_min;
    nb.n = l_max - l_min + 1;
    const Tridiagonal bp = neumann_b_matrix(mu_plus, +1, m, l_min, l_max);
    const Tridiagonal bm = neumann_b_matrix(-nu, -1, m, l_min, l_max);
    nb.m_plus = Eigen::MatrixXd::Identity(nb.n, nb.n) + neumann_delta_t(bp, mu_plus, +1, nb.n);
    nb.m_minus = Eigen::MatrixXd::Identity(nb.n, nb.n) + neumann_delta_t(bm, -nu, -1, nb.n);
    nb.s_diag.resize(nb.n);
    const double lnz = -(mu_plus + nu);
    for (int i = 0; i < nb.n; ++i) {
        const double e = (l_min + i + 0.5) * lnz;
        nb.s_diag[i] = e < -log_underflow ? 0.0 : std::exp(e);
    }
    return nb;
}

// ln det(1 - S M^- S M^+) for one azimuthal number
double neumann_term(double mu_plus, double nu, int m, int l_min, int l_max) {
    if (l_max < l_min) return 0.0;
    const NeumannBlocks nb = neumann_blocks(mu_plus, nu, m, l_min, l_max);
    const Eigen::MatrixXd n_mat = nb.s_diag.asDiagonal() * nb.m_minus *
                                  nb.s_diag.asDiagonal() * nb.m_plus;
    return logdet_positive(Eigen::MatrixXd::Identity(nb.n, nb.n) - n_mat, "neumann");
}

// The T-matrix products decay like Z^l along the diagonal (the column
// factors saturate), so ~24/|ln Z| orders give 1e-9 tail; the Neumann m sum
// decays like Z^{2m}.
int auto_l_max(double z) {
    const double lz = std::max(-std::log(z), 1e-8);
    return std::max(32, static_cast<int>(std::ceil(24.0 / lz)) + 8);
}

int auto_m_max(double z) {
    const double lz = std::max(-std::log(z), 1e-8);
    return std::max(6, static_cast<int>(std::ceil(14.0 / lz)) + 4);
}

// Richardson-extrapolated central differences of a scalar function of the gap.
struct FdDerivatives {
    double first, second;
};

FdDerivatives richardson_fd(const std::function<double(double)>& f, double a, double h,
                            double f0) {
    const double fp = f(a + h), fm = f(a - h);
    const double fp2 = f(a + 0.5 * h), fm2 = f(a - 0.5 * h);
    const double d1h = (fp - fm) / (2.0 * h);
    const double d1h2 = (fp2 - fm2) / h;
    const double d2h = (fp - 2.0 * f0 + fm) / (h * h);
    const double d2h2 = (fp2 - 2.0 * f0 + fm2) / (0.25 * h * h);
    return {(4.0 * d1h2 - d1h) / 3.0, (4.0 * d2h2 - d2h) / 3.0};
}

const SphereGeometry& require_spheres(const BisphericalGeometry& bg, const char* who) {
    if (!bg.spheres)
        throw std::invalid_argument(std::string(who) +
                                    ": geometry lacks sphere data (built from raw parameters); "
                                    "derivatives are undefined");
    return *bg.spheres;
}

}  // namespace

double z_from_xu(double x, double u) {
    const double s = x + 0.5 * x * x * u;
    return 1.0 / (1.0 + s + std::sqrt(s * (2.0 + s)));
}

BisphericalGeometry BisphericalGeometry::from_parameters(double mu_plus, double mu_minus) {
    if (!(mu_plus > 0.0) || mu_minus > 0.0)
        throw std::invalid_argument("BisphericalGeometry: need mu_plus > 0 >= mu_minus");
    BisphericalGeometry bg;
    bg.mu_plus = mu_plus;
    bg.mu_minus = mu_minus;
    bg.b_um = std::sinh(mu_plus);  // radius-1 sphere; energies depend on mu only
    bg.z_plus = std::exp(-mu_plus);
    bg.z_minus = std::exp(mu_minus);
    bg.z = bg.z_plus * bg.z_minus;
    return bg;
}

BisphericalGeometry BisphericalGeometry::from_spheres(const SphereGeometry& g) {
    const double r1 = g.r1_um, r2 = g.r2_um, a = g.gap_um;
    const double L = g.center_distance();
    // cosh(mu+) = (L^2 + R1^2 - R2^2) / (2 L R1) = 1 + a(a + 2 R2)/(2 L R1)
    const double dp = a * (a + 2.0 * r2) / (2.0 * L * r1);
    const double dm = a * (a + 2.0 * r1) / (2.0 * L * r2);
    BisphericalGeometry bg;
    bg.mu_plus = acosh1p(dp);
    const double nu = acosh1p(dm);
    bg.mu_minus = -nu;
    const double shp = std::sqrt(dp * (2.0 + dp));
    const double shm = std::sqrt(dm * (2.0 + dm));
    bg.b_um = r1 * shp;
    bg.z_plus = std::exp(-bg.mu_plus);
    bg.z_minus = std::exp(-nu);
    bg.z = std::exp(-(bg.mu_plus + nu));
    bg.spheres = g;

    // d mu/da from sinh(mu) dmu = d cosh(mu): g'(L) = (L^2 - R1^2 + R2^2)/(2 L^2 R1)
    const double gp = (L * L - r1 * r1 + r2 * r2) / (2.0 * L * L * r1);
    const double gm = (L * L - r2 * r2 + r1 * r1) / (2.0 * L * L * r2);
    bg.dmu_plus_da = gp / shp;
    bg.dnu_da = gm / shm;
    // second derivatives: cosh(mu) mu'^2 + sinh(mu) mu'' = g''(L)
    const double gpp = (r1 * r1 - r2 * r2) / (L * L * L * r1);
    const double gmp = (r2 * r2 - r1 * r1) / (L * L * L * r2);
    bg.d2mu_plus_da2 = (gpp - (1.0 + dp) * bg.dmu_plus_da * bg.dmu_plus_da) / shp;
    bg.d2nu_da2 = (gmp - (1.0 + dm) * bg.dnu_da * bg.dnu_da) / shm;

    // consistency of the two closed forms
    const double z_ref = z_from_xu(g.x(), g.u());
    if (std::abs(bg.z / z_ref - 1.0) > 1e-11)
        throw std::runtime_error("BisphericalGeometry: Z mismatch against closed form");
    const double r2_back = bg.b_um / shm;
    if (std::abs(r2_back / r2 - 1.0) > 1e-11)
        throw std::runtime_error("BisphericalGeometry: radius reproduction failed");
    return bg;
}

namespace {

// Dirichlet series sum_{l>=l0} weight(l) * ln(1 - Z^{2l+1}) and its Z-derivatives
struct DirichletSeries {
    double e = 0.0, e_z = 0.0, e_zz = 0.0;
};

DirichletSeries dirichlet_series(double z, double tol, int l0 = 0) {
    DirichletSeries s;
    const double lnz = std::log(z);
    for (long long l = l0;; ++l) {
        const double ex = (2.0 * l + 1.0) * lnz;
        if (ex < -log_underflow) break;
        const double w = std::exp(ex);
        const double term = (2.0 * l + 1.0) * std::log1p(-w);
        s.e += term;
        const double z2l = w / z;
        const double c = 2.0 * l + 1.0;
        s.e_z += -c * c * z2l / (1.0 - w);
        s.e_zz += -c * c *
                  (2.0 * l * z2l / z * (1.0 - w) + c * z2l * z2l) /
                  ((1.0 - w) * (1.0 - w));
        if (std::abs(term) < tol * std::abs(s.e) && l > l0 + 4) break;
        if (l > 100000000) throw std::runtime_error("dirichlet series: no convergence");
    }
    return s;
}

}  // namespace

ClassicalResult dirichlet_classical(const BisphericalGeometry& bg, double temperature_k,
                                    const ClassicalOptions& opt) {
    if (!(bg.z > 0.0 && bg.z < 1.0))
        throw std::invalid_argument("dirichlet_classical: Z must lie in (0, 1)");
    const double kT = thermal_energy_ev(temperature_k);
    const DirichletSeries s = dirichlet_series(bg.z, opt.series_tol);
    ClassicalResult out;
    out.energy = 0.5 * kT * s.e;
    if (bg.spheres) {
        const double zp = bg.dz_da();
        const double zpp = bg.d2z_da2();
        out.force = -0.5 * kT * s.e_z * zp;
        out.force_gradient = -0.5 * kT * (s.e_zz * zp * zp + s.e_z * zpp);
    }
    out.converged = true;
    return out;
}

double drude_isolated_m0_logdet(double z_plus, double z_minus, int l_max) {
    const auto t_matrix = [&](double zpm) {
        Eigen::MatrixXd t(l_max, l_max);
        const double one_minus_z2 = 1.0 - zpm * zpm;
        for (int i = 0; i < l_max; ++i) {
            const int l = i + 1;
            const double row = std::pow(zpm, 2.0 * l + 1.0);
            for (int j = 0; j < l_max; ++j) {
                const int lp = j + 1;
                t(i, j) = one_minus_z2 * (1.0 - std::pow(zpm, 2.0 * lp)) * row;
            }
            t(i, i) += row;
        }
        return t;
    };
    const Eigen::MatrixXd n0 = t_matrix(z_minus) * t_matrix(z_plus);
    return logdet_positive(Eigen::MatrixXd::Identity(l_max, l_max) - n0, "drude_isolated");
}

namespace {

double drude_isolated_energy(double z_plus, double z_minus, double kT, int l_max,
                             double tol) {
    const double z = z_plus * z_minus;
    // m != 0 modes carry no monopole and reproduce the Dirichlet values with
    // weight 2l; truncate consistently with the matrix block when l_max given
    double series = 0.0;
    for (int l = 1; l <= l_max; ++l) {
        const double ex = (2.0 * l + 1.0) * std::log(z);
        if (ex < -log_underflow) break;
        const double term = 2.0 * l * std::log1p(-std::exp(ex));
        series += term;
        if (std::abs(term) < tol * std::abs(series) && l > 8) break;
    }
    return 0.5 * kT * (drude_isolated_m0_logdet(z_plus, z_minus, l_max) + series);
}

}  // namespace

ClassicalResult drude_isolated_classical(const BisphericalGeometry& bg, double temperature_k,
                                         const ClassicalOptions& opt) {
    if (!(bg.z > 0.0 && bg.z < 1.0))
        throw std::invalid_argument("drude_isolated_classical: Z must lie in (0, 1)");
    const double kT = thermal_energy_ev(temperature_k);
    const int l_max = opt.l_max > 0 ? opt.l_max : auto_l_max(bg.z);
    ClassicalResult out;
    out.l_max_used = l_max;
    out.energy = drude_isolated_energy(bg.z_plus, bg.z_minus, kT, l_max, opt.series_tol);
    if (opt.check_convergence) {
        const double e8 =
            drude_isolated_energy(bg.z_plus, bg.z_minus, kT, l_max + 8, opt.series_tol);
        out.converged = std::abs(e8 - out.energy) <= opt.convergence_tol * std::abs(e8) + 1e-300;
    }
    if (bg.spheres) {
        const SphereGeometry& g = *bg.spheres;
        auto energy_at = [&](double a) {
            const BisphericalGeometry bga = BisphericalGeometry::from_spheres(g.with_gap(a));
            return drude_isolated_energy(bga.z_plus, bga.z_minus, kT, l_max, opt.series_tol);
        };
        const FdDerivatives d =
            richardson_fd(energy_at, g.gap_um, opt.fd_step_rel * g.gap_um, out.energy);
        out.force = -d.first;
        out.force_gradient = -d.second;
    }
    return out;
}

double sphere_plate_drude_exact(double z, double temperature_k, int l_max, double term_tol) {
    if (!(z > 0.0 && z < 1.0))
        throw std::invalid_argument("sphere_plate_drude_exact: Z must lie in (0, 1)");
    const double kT = thermal_energy_ev(temperature_k);
    const double lnz = std::log(z);
    double s1 = 0.0, s2 = 0.0;
    for (int l = 1; l_max == 0 || l <= l_max; ++l) {
        const double ex = (2.0 * l + 1.0) * lnz;
        if (ex < -log_underflow) break;
        const double w = std::exp(ex);
        const double t1 = (2.0 * l + 1.0) * std::log1p(-w);
        const double t2 = w * (1.0 - std::exp(2.0 * l * lnz)) / (1.0 - w);
        s1 += t1;
        s2 += t2;
        if (l_max == 0 && std::abs(t1) < term_tol * std::abs(s1) && l > 8) break;
    }
    return 0.5 * kT * (s1 + std::log1p(-(1.0 - z * z) * s2));
}

namespace {

double neumann_energy(double mu_plus, double nu, double kT, int l_max, int m_max,
                      bool include_l0, double tol) {
    double acc = 0.0;
    for (int m = 0; m <= m_max; ++m) {
        const int l_min = (m == 0) ? (include_l0 ? 0 : 1) : m;
        const double t = neumann_term(mu_plus, nu, m, l_min, l_max);
        acc += (m == 0 ? 0.5 : 1.0) * t;
        if (m > 0 && std::abs(t) < tol * std::abs(acc)) break;
    }
    return kT * acc;
}

}  // namespace

ClassicalResult neumann_classical(const BisphericalGeometry& bg, double temperature_k,
                                  const ClassicalOptions& opt) {
    if (!(bg.z > 0.0 && bg.z < 1.0))
        throw std::invalid_argument("neumann_classical: Z must lie in (0, 1)");
    const double kT = thermal_energy_ev(temperature_k);
    const int l_max = opt.l_max > 0 ? opt.l_max : auto_l_max(bg.z);
    const int m_max = opt.m_max >= 0 ? opt.m_max : auto_m_max(bg.z);
    ClassicalResult out;
    out.l_max_used = l_max;
    out.m_max_used = m_max;
    out.energy =
        neumann_energy(bg.mu_plus, -bg.mu_minus, kT, l_max, m_max, opt.include_l0_m0, 1e-12);
    if (opt.check_convergence) {
        const double e8 = neumann_energy(bg.mu_plus, -bg.mu_minus, kT, l_max + 8, m_max,
                                         opt.include_l0_m0, 1e-12);
        out.converged = std::abs(e8 - out.energy) <= opt.convergence_tol * std::abs(e8) + 1e-300;
    }
    if (bg.spheres) {
        const SphereGeometry& g = *bg.spheres;
        auto energy_at = [&](double a) {
            const BisphericalGeometry bga = BisphericalGeometry::from_spheres(g.with_gap(a));
            return neumann_energy(bga.mu_plus, -bga.mu_minus, kT, l_max, m_max,
                                  opt.include_l0_m0, 1e-12);
        };
        const FdDerivatives d =
            richardson_fd(energy_at, g.gap_um, opt.fd_step_rel * g.gap_um, out.energy);
        out.force = -d.first;
        out.force_gradient = -d.second;
    }
    return out;
}

double neumann_m_logdet(const BisphericalGeometry& bg, int m, int l_max, bool include_l0) {
    const int l_min = (m == 0) ? (include_l0 ? 0 : 1) : m;
    return neumann_term(bg.mu_plus, -bg.mu_minus, m, l_min, l_max);
}

double neumann_energy_derivative(const BisphericalGeometry& bg, double temperature_k,
                                 const ClassicalOptions& opt) {
    require_spheres(bg, "neumann_energy_derivative");
    const double kT = thermal_energy_ev(temperature_k);
    const int l_max = opt.l_max > 0 ? opt.l_max : auto_l_max(bg.z);
    const int m_max = opt.m_max >= 0 ? opt.m_max : auto_m_max(bg.z);
    const double mu_p = bg.mu_plus, nu = -bg.mu_minus;
    const double sigma = -(bg.dmu_plus_da + bg.dnu_da);  // d ln Z / da

    double acc = 0.0;
    for (int m = 0; m <= m_max; ++m) {
        const int l_min = (m == 0) ? (opt.include_l0_m0 ? 0 : 1) : m;
        if (l_max < l_min) continue;
        const NeumannBlocks nb = neumann_blocks(mu_p, nu, m, l_min, l_max);
        const int n = nb.n;
        Eigen::VectorXd j_diag(n);
        for (int i = 0; i < n; ++i) j_diag[i] = l_min + i + 0.5;

        // d(delta T)/da = mu' B^{-1} [-2 s cosh(mu) - (dB/dmu) delta T]
        auto d_delta_t = [&](double mu, int s, const Eigen::MatrixXd& m_block,
                             double dmu_da) {
            const Tridiagonal b = neumann_b_matrix(mu, s, m, l_min, l_max);
            Eigen::MatrixXd rhs = -m_block;  // start from -(delta T), add -identity term later
            rhs += Eigen::MatrixXd::Identity(n, n);  // rhs = -(delta T)
            Eigen::VectorXd db(n);
            const double ch = std::cosh(mu), sh = std::sinh(mu);
            for (int i = 0; i < n; ++i) db[i] = (2.0 * (l_min + i) + 1.0) * sh + s * ch;
            rhs = db.asDiagonal() * rhs;  // -(dB/dmu) delta T
            rhs.diagonal().array() += -2.0 * s * ch;
            for (int j = 0; j < n; ++j) b.solve_in_place(rhs.col(j));
            return (dmu_da * rhs).eval();
        };
        const Eigen::MatrixXd dmp = d_delta_t(mu_p, +1, nb.m_plus, bg.dmu_plus_da);
        const Eigen::MatrixXd dmm = d_delta_t(-nu, -1, nb.m_minus, -bg.dnu_da);

        const Eigen::MatrixXd s_mat = nb.s_diag.asDiagonal();
        const Eigen::MatrixXd ds = sigma * (j_diag.asDiagonal() * s_mat);
        const Eigen::MatrixXd n_mat = s_mat * nb.m_minus * s_mat * nb.m_plus;
        Eigen::MatrixXd dn = ds * nb.m_minus * s_mat * nb.m_plus;
        dn += s_mat * dmm * s_mat * nb.m_plus;
        dn += s_mat * nb.m_minus * ds * nb.m_plus;
        dn += s_mat * nb.m_minus * s_mat * dmp;

        const Eigen::MatrixXd one_minus_n = Eigen::MatrixXd::Identity(n, n) - n_mat;
        const double dt = -(one_minus_n.partialPivLu().solve(dn)).trace();
        acc += (m == 0 ? 0.5 : 1.0) * dt;
    }
    return kT * acc;
}

PcClassicalResult pc_classical(const BisphericalGeometry& bg, double temperature_k,
                               Boundary boundary, const ClassicalOptions& opt) {
    PcClassicalResult out;
    out.tm = (boundary == Boundary::grounded) ? dirichlet_classical(bg, temperature_k, opt)
                                              : drude_isolated_classical(bg, temperature_k, opt);
    out.te = neumann_classical(bg, temperature_k, opt);
    out.total.energy = out.tm.energy + out.te.energy;
    out.total.force = out.tm.force + out.te.force;
    out.total.force_gradient = out.tm.force_gradient + out.te.force_gradient;
    out.total.l_max_used = std::max(out.tm.l_max_used, out.te.l_max_used);
    out.total.m_max_used = out.te.m_max_used;
    out.total.converged = out.tm.converged && out.te.converged;
    return out;
}

double asymptotic_drude_force(const SphereGeometry& g, double temperature_k, Boundary boundary,
                              AsymptoticRegime regime) {
    const double kT = thermal_energy_ev(temperature_k);
    const double a = g.gap_um;
    if (regime == AsymptoticRegime::near) {
        const double x = g.x();
        if (x >= 0.05)
            throw std::domain_error("asymptotic near field requires a/R~ < 0.05");
        const double rt = g.effective_radius();
        return -kT * zeta3 * rt / (8.0 * a * a) * (1.0 + x / (6.0 * zeta3));
    }
    if (a <= 10.0 * (g.r1_um + g.r2_um))
        throw std::domain_error("asymptotic far field requires a > 10 (R1 + R2)");
    if (boundary == Boundary::grounded) return -kT * g.r1_um * g.r2_um / (a * a * a);
    const double r13 = std::pow(g.r1_um, 3), r23 = std::pow(g.r2_um, 3);
    return -18.0 * kT * r13 * r23 / std::pow(a, 7);
}

}  // namespace casimir
