#include "casimir/plasma_zero.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <stdexcept>

#include "casimir/constants.hpp"
#include "casimir/special_functions.hpp"

namespace casimir {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

std::vector<double> lgamma_table(int n) {  // lgamma_table[k] = ln(k!)
    std::vector<double> t(n + 1);
    t[0] = 0.0;
    for (int k = 1; k <= n; ++k) t[k] = t[k - 1] + std::log(static_cast<double>(k));
    return t;
}

std::vector<double> mie_ratio_row(int l_hi, double w) {
    std::vector<double> r(l_hi + 1);
    for (int l = 0; l <= l_hi; ++l) r[l] = mie_te_zero_ratio(l, w);
    return r;
}

// ---- banded SPD storage and Cholesky --------------------------------------

// Lower band, column major: element (j + d, j) at col[j * (bw + 1) + d].
struct BandedSpd {
    int n = 0, bw = 0;
    std::vector<double> col;
    double& at(int i, int j) { return col[static_cast<std::size_t>(j) * (bw + 1) + (i - j)]; }
    double at(int i, int j) const {
        return col[static_cast<std::size_t>(j) * (bw + 1) + (i - j)];
    }
};

// In-place banded Cholesky; returns false on loss of positive definiteness.
bool banded_cholesky(BandedSpd& a, double& logdet) {
    logdet = 0.0;
    const int n = a.n, bw = a.bw;
    for (int j = 0; j < n; ++j) {
        double v = a.at(j, j);
        for (int k = std::max(0, j - bw); k < j; ++k) {
            const double l = a.at(j, k);
            v -= l * l;
        }
        if (!(v > 0.0)) return false;
        const double d = std::sqrt(v);
        a.at(j, j) = d;
        logdet += 2.0 * std::log(d);
        const int i_hi = std::min(n - 1, j + bw);
        for (int i = j + 1; i <= i_hi; ++i) {
            double s = a.at(i, j);
            for (int k = std::max(0, i - bw); k < j; ++k) s -= a.at(i, k) * a.at(j, k);
            a.at(i, j) = s / d;
        }
    }
    return true;
}

// 1 - A A^T of a strip matrix, exploiting the band structure of the overlap.
BandedSpd one_minus_aat(const StripMatrix& a) {
    BandedSpd b;
    b.n = a.rows;
    int bw = 0;
    for (int i = 0; i < a.rows; ++i) {
        int d = 0;
        while (i + d + 1 < a.rows && a.lo[i + d + 1] < a.hi[i]) ++d;
        bw = std::max(bw, d);
    }
    b.bw = bw;
    b.col.assign(static_cast<std::size_t>(b.n) * (bw + 1), 0.0);
    for (int j = 0; j < a.rows; ++j) {
        for (int i = j; i <= std::min(a.rows - 1, j + bw); ++i) {
            const int c_lo = std::max(a.lo[i], a.lo[j]);
            const int c_hi = std::min(a.hi[i], a.hi[j]);
            double dot = 0.0;
            if (c_lo < c_hi) {
                const double* pi = a.data.data() + a.offset[i] + (c_lo - a.lo[i]);
                const double* pj = a.data.data() + a.offset[j] + (c_lo - a.lo[j]);
                for (int c = 0; c < c_hi - c_lo; ++c) dot += pi[c] * pj[c];
            }
            b.at(i, j) = (i == j ? 1.0 - dot : -dot);
        }
    }
    return b;
}

double logdet_banded(const StripMatrix& a) {
    BandedSpd b = one_minus_aat(a);
    double logdet = 0.0;
    if (!banded_cholesky(b, logdet))
        throw std::runtime_error("te_plasma: 1 - A A^T lost positive definiteness (m = " +
                                 std::to_string(a.m) + ")");
    return logdet;
}

double logdet_decimated(const StripMatrix& a, int p1, int p2) {
    const Eigen::MatrixXd ad = decimate(a, p1, p2);
    const int n = static_cast<int>(ad.rows());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - ad * ad.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error(
            "te_plasma: decimation blocks too large, 1 - A A^T not positive (m = " +
            std::to_string(a.m) + ")");
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

StripMatrix build_strip_impl(int m, const SphereGeometry& g, const TruncationPlan& plan,
                             const std::vector<double>& r1, const std::vector<double>& r2,
                             const std::vector<double>& lg) {
    const double big_l = g.center_distance();
    const double ln_q1 = std::log(g.r1_um / big_l);
    const double ln_q2 = std::log(g.r2_um / big_l);
    const double ratio = g.r2_um / g.r1_um;
    const double half = std::max(plan.strip_width_factor * plan.delta2,
                                 4.0 + static_cast<double>(plan.p2));

    StripMatrix a;
    a.rows = plan.n1;
    a.cols = plan.n2;
    a.m = m;
    a.lo.resize(plan.n1);
    a.hi.resize(plan.n1);
    a.offset.resize(plan.n1);
    std::size_t total = 0;
    for (int i = 0; i < plan.n1; ++i) {
        const double jc = (m + i) * ratio - m;
        int lo = static_cast<int>(std::floor(jc - half));
        int hi = static_cast<int>(std::ceil(jc + half)) + 1;
        lo = std::clamp(lo, 0, plan.n2);
        hi = std::clamp(hi, lo, plan.n2);
        a.lo[i] = lo;
        a.hi[i] = hi;
        a.offset[i] = total;
        total += static_cast<std::size_t>(hi - lo);
    }
    a.data.assign(total, 0.0);

    for (int i = 0; i < plan.n1; ++i) {
        const int l = m + i;
        if (r1[l] <= 0.0) continue;  // l = 0 row vanishes
        const double row_part = (l + 0.5) * ln_q1 + 0.5 * std::log(r1[l]) -
                                0.5 * (lg[l + m] + lg[l - m]);
        double* out = a.data.data() + a.offset[i];
        for (int j = a.lo[i]; j < a.hi[i]; ++j) {
            const int lp = m + j;
            if (r2[lp] <= 0.0) continue;
            const double ln_el = row_part + (lp + 0.5) * ln_q2 + 0.5 * std::log(r2[lp]) -
                                 0.5 * (lg[lp + m] + lg[lp - m]) + lg[l + lp];
            const double el = std::exp(ln_el);
            if (!std::isfinite(el))
                throw std::runtime_error("build_a_strip: non-finite element");
            out[j - a.lo[i]] = el;
        }
    }
    return a;
}

}  // namespace

void TruncationPlan::apply_blocks(int p1_new, int p2_new) {
    if (p1_new < 1 || p2_new < 1)
        throw std::invalid_argument("TruncationPlan: block sizes must be >= 1");
    p1 = p1_new;
    p2 = p2_new;
    n1 = ceil_div(n1, p1) * p1;
    n2 = ceil_div(n2, p2) * p2;
}

TruncationPlan TruncationPlan::automatic(const SphereGeometry& g, bool allow_decimation) {
    TruncationPlan plan;
    const double rt = g.effective_radius();
    const double a = g.gap_um;
    plan.n1 = std::max(8, static_cast<int>(std::ceil(6.0 * g.r1_um / a)));
    plan.n2 = std::max(8, static_cast<int>(std::ceil(6.0 * g.r2_um / a)));
    plan.m_max = static_cast<int>(std::ceil(std::sqrt(6.0 * rt / a)));
    plan.delta1 = g.r1_um / std::sqrt(rt * a);
    plan.delta2 = g.r2_um / std::sqrt(rt * a);
    if (allow_decimation && plan.n1 > 400) {
        const int b1 = std::clamp(static_cast<int>(std::floor(plan.delta1 / 8.0)), 1, 10);
        const int b2 = std::clamp(static_cast<int>(std::floor(plan.delta2 / 8.0)), 1, 10);
        plan.apply_blocks(b1, b2);
    }
    return plan;
}

double mie_te_zero_ratio(int l, double w) {
    if (l < 0) throw std::invalid_argument("mie_te_zero_ratio: l must be >= 0");
    if (!(w > 0.0)) throw std::invalid_argument("mie_te_zero_ratio: w must be positive");
    if (l == 0) return 0.0;
    const double nu = l - 0.5;
    return (static_cast<double>(l) / (l + 1.0)) * bessel_i_ratio(nu + 1.0, w) *
           bessel_i_ratio(nu, w);
}

StripMatrix build_a_strip(int m, const SphereGeometry& g, double wp1_ev, double wp2_ev,
                          const TruncationPlan& plan) {
    if (m < 0 || m > plan.m_max)
        throw std::invalid_argument("build_a_strip: m outside [0, m_max]");
    const int l_hi = m + std::max(plan.n1, plan.n2);
    const std::vector<double> r1 = mie_ratio_row(l_hi, wp1_ev * g.r1_um / hbar_c);
    const std::vector<double> r2 = mie_ratio_row(l_hi, wp2_ev * g.r2_um / hbar_c);
    const std::vector<double> lg = lgamma_table(2 * l_hi + 1);
    return build_strip_impl(m, g, plan, r1, r2, lg);
}

Eigen::MatrixXd decimate(const StripMatrix& a, int p1, int p2) {
    if (p1 < 1 || p2 < 1 || a.rows % p1 != 0 || a.cols % p2 != 0)
        throw std::invalid_argument("decimate: block sizes must divide the padded dimensions");
    const int n1 = a.rows / p1, n2 = a.cols / p2;
    const double scale = std::sqrt(static_cast<double>(p1) * p2);
    Eigen::MatrixXd out(n1, n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) out(i, j) = scale * a(i * p1, j * p2);
    return out;
}

double te_plasma_m_logdet(int m, const SphereGeometry& g, double wp1_ev, double wp2_ev,
                          const TruncationPlan& plan) {
    const StripMatrix a = build_a_strip(m, g, wp1_ev, wp2_ev, plan);
    return plan.decimated() ? logdet_decimated(a, plan.p1, plan.p2) : logdet_banded(a);
}

namespace {

struct TeEnergyDiagnostics {
    std::vector<std::pair<int, double>> per_m;  // (m, logdet) at the central gap
    int m_used = 0;
};

double te_energy(const SphereGeometry& g, double kT, const TruncationPlan& plan,
                 const std::vector<double>& r1, const std::vector<double>& r2,
                 const std::vector<double>& lg, double m_sum_tol,
                 TeEnergyDiagnostics* diag) {
    double acc = 0.0;
    for (int m = 0; m <= plan.m_max; ++m) {
        const StripMatrix a = build_strip_impl(m, g, plan, r1, r2, lg);
        const double t = plan.decimated() ? logdet_decimated(a, plan.p1, plan.p2)
                                          : logdet_banded(a);
        acc += (m == 0 ? 0.5 : 1.0) * t;
        if (diag) {
            diag->per_m.emplace_back(m, t);
            diag->m_used = m;
        }
        if (m > 0 && std::abs(t) < m_sum_tol * std::abs(acc)) break;
    }
    return kT * acc;
}

void dump_per_m(const std::string& path, const TeEnergyDiagnostics& diag, int dim) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open dump file: " + path);
    for (const auto& [m, v] : diag.per_m) {
        const std::uint32_t mu = static_cast<std::uint32_t>(m);
        const std::uint32_t du = static_cast<std::uint32_t>(dim);
        out.write(reinterpret_cast<const char*>(&mu), 4);
        out.write(reinterpret_cast<const char*>(&du), 4);
        out.write(reinterpret_cast<const char*>(&v), 8);
    }
}

}  // namespace

TePlasmaResult te_plasma_classical(const SphereGeometry& g, double temperature_k, double wp1_ev,
                                   double wp2_ev, const TruncationPlan& plan_in,
                                   const TePlasmaOptions& opt) {
    const double kT = thermal_energy_ev(temperature_k);
    TruncationPlan plan = plan_in;
    const int l_hi = plan.m_max + std::max(plan.n1, plan.n2) + 1;
    const std::vector<double> r1 = mie_ratio_row(l_hi, wp1_ev * g.r1_um / hbar_c);
    const std::vector<double> r2 = mie_ratio_row(l_hi, wp2_ev * g.r2_um / hbar_c);
    const std::vector<double> lg = lgamma_table(2 * l_hi + 1);

    for (int attempt = 0;; ++attempt) {
        try {
            TeEnergyDiagnostics diag;
            TePlasmaResult out;
            out.classical.energy =
                te_energy(g, kT, plan, r1, r2, lg, opt.m_sum_tol, &diag);
            if (!opt.logdet_dump_path.empty())
                dump_per_m(opt.logdet_dump_path, diag, plan.n1 / plan.p1);

            const double h = opt.fd_step_rel * g.gap_um;
            auto energy_at = [&](double a) {
                return te_energy(g.with_gap(a), kT, plan, r1, r2, lg, opt.m_sum_tol, nullptr);
            };
            const double e0 = out.classical.energy;
            const double ep = energy_at(g.gap_um + h), em = energy_at(g.gap_um - h);
            const double ep2 = energy_at(g.gap_um + 0.5 * h),
                         em2 = energy_at(g.gap_um - 0.5 * h);
            const double d1 = (4.0 * (ep2 - em2) / h - (ep - em) / (2.0 * h)) / 3.0;
            const double d2h = (ep - 2.0 * e0 + em) / (h * h);
            const double d2h2 = (ep2 - 2.0 * e0 + em2) / (0.25 * h * h);
            out.classical.force = -d1;
            out.classical.force_gradient = -(4.0 * d2h2 - d2h) / 3.0;
            out.classical.l_max_used = plan.n1;
            out.classical.m_max_used = diag.m_used;
            out.classical.converged = true;
            out.p1_used = plan.p1;
            out.p2_used = plan.p2;
            return out;
        } catch (const std::runtime_error&) {
            if (attempt > 0 || !plan.decimated()) throw;
            // positive definiteness lost: halve the blocks once and retry
            plan.apply_blocks(std::max(1, plan.p1 / 2), std::max(1, plan.p2 / 2));
        }
    }
}

PlasmaClassicalResult plasma_classical_total(const SphereGeometry& g, double temperature_k,
                                             double wp1_ev, double wp2_ev, Boundary boundary,
                                             const TruncationPlan& plan,
                                             const TePlasmaOptions& te_opt,
                                             const ClassicalOptions& tm_opt) {
    const BisphericalGeometry bg = BisphericalGeometry::from_spheres(g);
    PlasmaClassicalResult out;
    out.tm = (boundary == Boundary::grounded)
                 ? dirichlet_classical(bg, temperature_k, tm_opt)
                 : drude_isolated_classical(bg, temperature_k, tm_opt);
    const TePlasmaResult te = te_plasma_classical(g, temperature_k, wp1_ev, wp2_ev, plan, te_opt);
    out.te = te.classical;
    out.p1_used = te.p1_used;
    out.p2_used = te.p2_used;
    out.total.energy = out.tm.energy + out.te.energy;
    out.total.force = out.tm.force + out.te.force;
    out.total.force_gradient = out.tm.force_gradient + out.te.force_gradient;
    out.total.l_max_used = std::max(out.tm.l_max_used, out.te.l_max_used);
    out.total.m_max_used = out.te.m_max_used;
    out.total.converged = out.tm.converged && out.te.converged;
    return out;
}

}  // namespace casimir
