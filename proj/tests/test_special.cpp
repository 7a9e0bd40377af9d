#include <doctest.h>

#include <cmath>
#include <vector>

#include "casimir/interpolation.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/special_functions.hpp"

using namespace casimir;

TEST_CASE("dilogarithm reference values") {
    // pinned against mpmath polylog(2, x)
    CHECK(dilog(1.0) == doctest::Approx(1.6449340668482264).epsilon(1e-14));
    CHECK(dilog(0.5) == doctest::Approx(0.58224052646501251).epsilon(1e-14));
    CHECK(dilog(-0.7) == doctest::Approx(-0.60515840233770528).epsilon(1e-14));
    CHECK(dilog(0.99) == doctest::Approx(1.5886254480763753).epsilon(1e-13));
    CHECK(dilog(0.12345) == doctest::Approx(0.12748478724742323).epsilon(1e-14));
    CHECK(dilog(0.0) == 0.0);
    CHECK(dilog(-1.0) == doctest::Approx(-0.82246703342411322).epsilon(1e-13));
    CHECK_THROWS_AS(dilog(1.0001), std::domain_error);
}

TEST_CASE("adaptive quadrature") {
    auto s = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.converged);

    // integrable log singularity at the lower end: int_0^inf y ln(1-e^-y) = -zeta(3)
    auto z = integrate_exp_tail([](double y) { return y * std::log1p(-std::exp(-y)); }, 0.0,
                                1e-10);
    CHECK(z.value == doctest::Approx(-1.2020569031595943).epsilon(1e-9));
    CHECK(z.converged);

    auto e = integrate_exp_tail([](double y) { return std::exp(-y); }, 0.0, 1e-10);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("monotone cubic interpolation") {
    std::vector<double> x{0.0, 1.0, 2.0, 3.5, 5.0};
    std::vector<double> y{0.0, 0.8, 1.0, 1.05, 1.06};
    MonotoneCubic mc(x, y);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(mc(x[i]) == doctest::Approx(y[i]).epsilon(1e-15));
    // monotone data stays monotone between nodes, no overshoot
    double prev = mc(0.0);
    for (double t = 0.01; t <= 5.0; t += 0.01) {
        const double v = mc(t);
        CHECK(v >= prev - 1e-12);
        CHECK(v <= 1.06 + 1e-12);
        prev = v;
    }
    CHECK_THROWS_AS(mc(-0.1), std::domain_error);
    CHECK_THROWS_AS(mc(5.1), std::domain_error);
    CHECK_THROWS_AS(MonotoneCubic({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);

    // two nodes degrade to the straight line
    MonotoneCubic lin({1.0, 3.0}, {2.0, 6.0});
    CHECK(lin(2.0) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("modified Bessel function ratios") {
    // I_{nu+1}/I_nu pinned against mpmath: I_{5/2}(1)/I_{1/2}(1) = 2 * r_1(1)
    const double i52_over_i12 = bessel_i_ratio(1.5, 1.0) * bessel_i_ratio(0.5, 1.0);
    CHECK(i52_over_i12 == doctest::Approx(2.0 * 0.030447071751003045).epsilon(1e-13));

    // continuity across the series/continued-fraction switch at x = 1e-3
    for (double nu : {0.5, 3.5, 40.5}) {
        const double below = bessel_i_ratio(nu, 0.999e-3);
        const double above = bessel_i_ratio(nu, 1.001e-3);
        CHECK(below / above == doctest::Approx(0.999 / 1.001).epsilon(1e-9));
    }

    // large-argument limit: ratio -> 1
    CHECK(bessel_i_ratio(2.5, 1e5) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK_THROWS_AS(bessel_i_ratio(0.5, 0.0), std::domain_error);
}
