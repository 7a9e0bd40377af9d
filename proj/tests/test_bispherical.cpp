#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "casimir/bispherical.hpp"
#include "casimir/constants.hpp"

using namespace casimir;

namespace {
const double kT300 = thermal_energy_ev(300.0);
}

TEST_CASE("bispherical geometry from spheres") {
    const SphereGeometry g(40.0, 40.0, 0.4);
    const BisphericalGeometry bg = BisphericalGeometry::from_spheres(g);
    // equal spheres: symmetric coordinates
    CHECK(bg.mu_plus == doctest::Approx(-bg.mu_minus).epsilon(1e-14));
    CHECK(bg.z_plus == doctest::Approx(bg.z_minus).epsilon(1e-14));
    CHECK(bg.z_plus == doctest::Approx(std::sqrt(bg.z)).epsilon(1e-13));
    // both closed forms for Z agree
    CHECK(bg.z == doctest::Approx(z_from_xu(g.x(), g.u())).epsilon(1e-12));
    // radii reproduced from b and mu
    CHECK(bg.b_um / std::sinh(bg.mu_plus) == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(bg.b_um / std::sinh(-bg.mu_minus) == doctest::Approx(40.0).epsilon(1e-12));

    // x -> 0 drives Z -> 1
    const BisphericalGeometry tight =
        BisphericalGeometry::from_spheres(SphereGeometry(1000.0, 1000.0, 0.005));
    CHECK(tight.z > 0.995);

    // sphere-plate trend: growing R2 pushes mu_minus toward 0 and Z toward Z+
    const BisphericalGeometry sp =
        BisphericalGeometry::from_spheres(SphereGeometry(10.0, 1e6, 0.1));
    CHECK(std::abs(sp.mu_minus) < 1e-3);
    CHECK(sp.z == doctest::Approx(sp.z_plus).epsilon(1e-3));

    // dZ/da cross-checked by finite differences
    const double h = 1e-6;
    const auto zp = BisphericalGeometry::from_spheres(SphereGeometry(40.0, 80.0, 0.4 + h));
    const auto zm = BisphericalGeometry::from_spheres(SphereGeometry(40.0, 80.0, 0.4 - h));
    const auto bg2 = BisphericalGeometry::from_spheres(SphereGeometry(40.0, 80.0, 0.4));
    CHECK(bg2.dz_da() == doctest::Approx((zp.z - zm.z) / (2.0 * h)).epsilon(1e-8));
    CHECK(bg2.d2z_da2() ==
          doctest::Approx((zp.z - 2.0 * bg2.z + zm.z) / (h * h)).epsilon(1e-4));
}

TEST_CASE("dirichlet classical energy") {
    // direct-summation oracle at Z = 1/2: sum (2l+1) ln(1 - 0.5^{2l+1}) = -1.3325793079785182
    const double mu = 0.5 * std::log(2.0);
    const BisphericalGeometry bg = BisphericalGeometry::from_parameters(mu, -mu);
    CHECK(bg.z == doctest::Approx(0.5).epsilon(1e-15));
    const ClassicalResult r = dirichlet_classical(bg, 300.0);
    CHECK(r.energy == doctest::Approx(0.5 * kT300 * -1.3325793079785182).epsilon(1e-13));

    // Z -> 0: single surviving term, E ~ (kT/2) ln(1 - Z)
    const BisphericalGeometry far = BisphericalGeometry::from_parameters(8.0, -8.0);
    const ClassicalResult rf = dirichlet_classical(far, 300.0);
    CHECK(rf.energy == doctest::Approx(0.5 * kT300 * std::log1p(-far.z)).epsilon(1e-6));
}

TEST_CASE("dirichlet analytic derivatives against finite differences") {
    const SphereGeometry g(40.0, 80.0, 0.5);
    const BisphericalGeometry bg = BisphericalGeometry::from_spheres(g);
    const ClassicalResult r = dirichlet_classical(bg, 300.0);
    CHECK(r.energy < 0.0);
    CHECK(r.force < 0.0);
    CHECK(r.force_gradient > 0.0);

    const double h = 1e-3 * 0.5;
    auto energy_at = [&](double a) {
        return dirichlet_classical(BisphericalGeometry::from_spheres(g.with_gap(a)), 300.0)
            .energy;
    };
    const double e0 = energy_at(0.5);
    const double ep = energy_at(0.5 + h), em = energy_at(0.5 - h);
    const double ep2 = energy_at(0.5 + h / 2), em2 = energy_at(0.5 - h / 2);
    const double f_fd = -(4.0 * (ep2 - em2) / h - (ep - em) / (2.0 * h)) / 3.0;
    const double g_fd =
        -(4.0 * (ep2 - 2 * e0 + em2) / (0.25 * h * h) - (ep - 2 * e0 + em) / (h * h)) / 3.0;
    CHECK(std::abs(r.force - f_fd) / std::abs(r.force) < 1e-6);
    CHECK(std::abs(r.force_gradient - g_fd) / std::abs(r.force_gradient) < 1e-6);
}

TEST_CASE("dirichlet near and far asymptotics") {
    // near field: F = -kT zeta(3) R~/(8 a^2) (1 + x/(6 zeta3))
    const SphereGeometry g(40.0, 40.0, 0.1);  // x = 0.005
    const ClassicalResult r =
        dirichlet_classical(BisphericalGeometry::from_spheres(g), 300.0);
    const double near = asymptotic_drude_force(g, 300.0, Boundary::grounded,
                                               AsymptoticRegime::near);
    CHECK(r.force == doctest::Approx(near).epsilon(5e-3));

    // far field: -kT R1 R2 / a^3
    const SphereGeometry gf(1.0, 1.0, 40.0);
    const ClassicalResult rf =
        dirichlet_classical(BisphericalGeometry::from_spheres(gf), 300.0);
    const double far = asymptotic_drude_force(gf, 300.0, Boundary::grounded,
                                              AsymptoticRegime::far);
    CHECK(rf.force == doctest::Approx(far).epsilon(0.05));

    CHECK_THROWS_AS(asymptotic_drude_force(SphereGeometry(1.0, 1.0, 0.5), 300.0,
                                           Boundary::grounded, AsymptoticRegime::near),
                    std::domain_error);
    CHECK_THROWS_AS(asymptotic_drude_force(SphereGeometry(1.0, 1.0, 5.0), 300.0,
                                           Boundary::grounded, AsymptoticRegime::far),
                    std::domain_error);
}

TEST_CASE("isolated Drude sphere-plate closed form") {
    // mpmath oracle, units of kT/2: msum + m0 at Z = 0.3 is -0.12173291335098251
    const double e = sphere_plate_drude_exact(0.3, 300.0);
    CHECK(e == doctest::Approx(0.5 * kT300 * -0.12173291335098251).epsilon(1e-12));

    // matched truncation against the matrix route with the plate as mu_- = 0
    for (double z : {0.1, 0.3, 0.6, 0.9}) {
        const int l_max = 300;
        const BisphericalGeometry bg =
            BisphericalGeometry::from_parameters(-std::log(z), 0.0);
        ClassicalOptions opt;
        opt.l_max = l_max;
        opt.check_convergence = false;
        const ClassicalResult num = drude_isolated_classical(bg, 300.0, opt);
        const double closed = sphere_plate_drude_exact(z, 300.0, l_max);
        CHECK(std::abs(num.energy / closed - 1.0) < 1e-8);
    }
    // Z -> 0 kills every term
    CHECK(std::abs(sphere_plate_drude_exact(1e-12, 300.0)) < 1e-30);
}

TEST_CASE("isolated Drude two-sphere solver") {
    const SphereGeometry g(10.0, 10.0, 0.5);
    const BisphericalGeometry bg = BisphericalGeometry::from_spheres(g);
    const ClassicalResult iso = drude_isolated_classical(bg, 300.0);
    const ClassicalResult dir = dirichlet_classical(bg, 300.0);
    CHECK(iso.converged);
    CHECK(iso.energy < 0.0);
    CHECK(iso.force < 0.0);
    // grounding couples more strongly
    CHECK(std::abs(dir.energy) >= std::abs(iso.energy));
    CHECK(std::abs(dir.force) >= std::abs(iso.force));

    // far field: -18 kT R1^3 R2^3 / a^7
    const SphereGeometry gf(1.0, 1.0, 40.0);
    ClassicalOptions fd_opt;
    fd_opt.fd_step_rel = 5e-3;
    const ClassicalResult rf =
        drude_isolated_classical(BisphericalGeometry::from_spheres(gf), 300.0, fd_opt);
    const double far =
        asymptotic_drude_force(gf, 300.0, Boundary::isolated, AsymptoticRegime::far);
    CHECK(rf.force == doctest::Approx(far).epsilon(0.10));
    // isolated spheres bind far weaker than grounded ones at large separation
    const double far_grounded =
        asymptotic_drude_force(gf, 300.0, Boundary::grounded, AsymptoticRegime::far);
    CHECK(std::abs(far / far_grounded) < 1e-3);
}

TEST_CASE("u -> 0 reproduces the dedicated sphere-plate formula within 1 percent") {
    const SphereGeometry g(10.0, 1e4 * 10.0, 0.2);
    const BisphericalGeometry bg = BisphericalGeometry::from_spheres(g);
    ClassicalOptions opt;
    opt.check_convergence = false;
    const ClassicalResult two_sphere = drude_isolated_classical(bg, 300.0, opt);
    const double plate = sphere_plate_drude_exact(bg.z, 300.0);
    CHECK(std::abs(two_sphere.energy / plate - 1.0) < 0.01);
}

TEST_CASE("m0 log-determinant is invariant under diagonal similarity") {
    const double zp = 0.7, zm = 0.62;
    const int n = 60;
    const double direct = drude_isolated_m0_logdet(zp, zm, n);

    // independently built, conjugated by a positive diagonal matrix
    auto t_mat = [&](double z) {
        Eigen::MatrixXd t(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                t(i, j) = ((i == j ? 1.0 : 0.0) +
                           (1.0 - z * z) * (1.0 - std::pow(z, 2.0 * (j + 1)))) *
                          std::pow(z, 2.0 * (i + 1) + 1.0);
        return t;
    };
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = std::exp(0.4 * std::sin(3.0 * i));
    const Eigen::MatrixXd n0 = t_mat(zm) * t_mat(zp);
    const Eigen::MatrixXd conj =
        d.asDiagonal() * n0 * d.cwiseInverse().asDiagonal();
    const double logdet_conj =
        std::log((Eigen::MatrixXd::Identity(n, n) - conj).partialPivLu().determinant());
    CHECK(std::abs(logdet_conj - direct) < 1e-10);
}

TEST_CASE("neumann classical term") {
    const SphereGeometry g(20.0, 30.0, 0.5);
    const BisphericalGeometry bg = BisphericalGeometry::from_spheres(g);
    const ClassicalResult r = neumann_classical(bg, 300.0);
    CHECK(r.converged);
    CHECK(r.energy < 0.0);
    CHECK(r.force < 0.0);

    // every log-determinant lies in (0, 1): negative per-m terms
    for (int m : {0, 1, 3}) {
        const double t = neumann_m_logdet(bg, m, r.l_max_used, true);
        CHECK(t < 0.0);
        CHECK(t > -50.0);
    }

    // analytic mu-derivative route against the Richardson-FD force
    ClassicalOptions opt;
    opt.l_max = r.l_max_used;
    opt.m_max = r.m_max_used;
    const double f_analytic = -neumann_energy_derivative(bg, 300.0, opt);
    CHECK(std::abs(f_analytic - r.force) / std::abs(r.force) < 1e-6);
}

TEST_CASE("perfect conductor assembles TM and TE parts") {
    const SphereGeometry g(15.0, 15.0, 0.3);
    const BisphericalGeometry bg = BisphericalGeometry::from_spheres(g);
    const PcClassicalResult grounded = pc_classical(bg, 300.0, Boundary::grounded);
    const PcClassicalResult isolated = pc_classical(bg, 300.0, Boundary::isolated);

    const ClassicalResult dir = dirichlet_classical(bg, 300.0);
    CHECK(grounded.tm.energy == dir.energy);
    CHECK(grounded.tm.force == dir.force);
    // switching the boundary swaps only the TM part
    CHECK(grounded.te.energy == isolated.te.energy);
    CHECK(grounded.total.energy ==
          doctest::Approx(grounded.tm.energy + grounded.te.energy).epsilon(1e-15));
    CHECK(std::abs(grounded.total.energy) > std::abs(isolated.total.energy));
}
