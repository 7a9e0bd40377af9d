#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "casimir/constants.hpp"
#include "casimir/materials.hpp"

using namespace casimir;

TEST_CASE("permittivity on the imaginary axis") {
    const auto plasma = PermittivityModel::plasma(9.0);
    CHECK(plasma.epsilon(9.0) == doctest::Approx(2.0).epsilon(1e-15));

    const auto drude0 = PermittivityModel::drude(9.0, 0.0);
    CHECK(drude0.epsilon(9.0) == doctest::Approx(2.0).epsilon(1e-15));

    // gold at the first Matsubara frequency of 300 K
    const auto gold = PermittivityModel::drude(9.0, 0.035);
    const double xi1 = 2.0 * pi * thermal_energy_ev(300.0);
    CHECK(xi1 == doctest::Approx(0.16243291).epsilon(1e-7));
    CHECK(gold.epsilon(xi1) == doctest::Approx(2526.756450).epsilon(1e-8));
    CHECK(gold.epsilon(xi1) == doctest::Approx(1.0 + 81.0 / (xi1 * (xi1 + 0.035))));

    // Drude -> plasma pointwise as gamma -> 0
    const auto drude_small = PermittivityModel::drude(9.0, 1e-9);
    for (double xi : {0.05, 0.5, 5.0, 50.0})
        CHECK(drude_small.epsilon(xi) == doctest::Approx(plasma.epsilon(xi)).epsilon(1e-7));

    // eps >= 1 and non-increasing
    for (const auto& m : {gold, plasma}) {
        double prev = m.epsilon(0.01);
        for (double xi = 0.02; xi < 100.0; xi *= 1.5) {
            const double e = m.epsilon(xi);
            CHECK(e >= 1.0);
            CHECK(e <= prev);
            prev = e;
        }
    }

    CHECK(std::isinf(PermittivityModel::perfect_conductor().epsilon(1.0)));
    CHECK_THROWS_AS(gold.epsilon(0.0), std::domain_error);
    CHECK_THROWS_AS(gold.epsilon(-1.0), std::domain_error);
    CHECK_THROWS_AS(PermittivityModel::drude(-1.0, 0.0), std::invalid_argument);
}

TEST_CASE("fresnel coefficients") {
    // vacuum reflects nothing
    auto r = fresnel(1.0, 0.5, 2.0);
    CHECK(r.te == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r.tm == doctest::Approx(0.0).epsilon(1e-15));

    // eps = 4, xi/c = 1 (1/um), kperp = 0: r_te = -1/3, r_tm = 1/3
    r = fresnel(4.0, hbar_c, 0.0);
    CHECK(r.te == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
    CHECK(r.tm == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    // perfect-conductor limit
    r = fresnel(std::numeric_limits<double>::infinity(), 1.0, 1.0);
    CHECK(r.te == -1.0);
    CHECK(r.tm == 1.0);
    auto big = fresnel(1e12, 1.0, 1.0);
    CHECK(big.te == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(big.tm == doctest::Approx(1.0).epsilon(1e-5));

    // bounds and signs over a parameter grid
    for (double eps : {1.0, 1.5, 30.0, 2.6e3})
        for (double xi : {0.01, 0.8, 12.0})
            for (double kp : {0.0, 0.4, 7.0, 300.0}) {
                const auto f = fresnel(eps, xi, kp);
                CHECK(f.te <= 1e-15);
                CHECK(f.tm >= -1e-15);
                CHECK(std::abs(f.te) <= 1.0);
                CHECK(std::abs(f.tm) <= 1.0);
            }
}

TEST_CASE("matsubara grid") {
    const MatsubaraGrid g = matsubara_grid(300.0, 0.1);
    CHECK(g.lambda_t_um == doctest::Approx(1.21482147).epsilon(1e-7));
    CHECK(std::abs(g.lambda_t_um / 1.2 - 1.0) < 0.013);  // the paper quotes 1.2 um
    CHECK(g.xi_ev(0) == 0.0);
    CHECK(g.xi_ev(1) == doctest::Approx(0.16243291).epsilon(1e-7));
    CHECK(g.xi_rad_per_s(1) == doctest::Approx(2.467790e14).epsilon(1e-6));

    const MatsubaraGrid hot = matsubara_grid(600.0, 0.1);
    CHECK(hot.lambda_t_um == doctest::Approx(0.5 * g.lambda_t_um).epsilon(1e-12));

    // n_max covers the exponential tail bound
    CHECK(g.n_max >= static_cast<int>(0.5 * std::log(1e10) * g.lambda_t_um / 0.1));
    CHECK_THROWS_AS(matsubara_grid(0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(matsubara_grid(300.0, -1.0), std::invalid_argument);
}

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = std::string("/tmp/") + name;
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("permittivity table loading") {
    const std::string good = write_temp("eps_good.txt",
                                        "# gold-like imaginary-axis data\n"
                                        "0.1   3000\n"
                                        "0.2   900  # inline comment\n"
                                        "0.4   260\n"
                                        "1.0   60\n");
    const auto tab = load_permittivity_table(good);
    CHECK(tab.kind() == ConductorKind::tabulated);
    CHECK(tab.epsilon(0.1) == doctest::Approx(3000.0).epsilon(1e-12));
    CHECK(tab.epsilon(0.2) == doctest::Approx(900.0).epsilon(1e-12));

    // interpolation at the geometric midpoint stays between the end values
    const double mid = tab.epsilon(std::sqrt(0.1 * 0.2));
    CHECK(mid < 3000.0);
    CHECK(mid > 900.0);
    CHECK_THROWS_AS(tab.epsilon(0.05), std::domain_error);  // no extrapolation
    CHECK_THROWS_AS(tab.epsilon(2.0), std::domain_error);

    const std::string unordered = write_temp("eps_bad_order.txt",
                                             "0.1 3000\n"
                                             "0.3 900\n"
                                             "0.2 500\n");
    try {
        load_permittivity_table(unordered);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }

    const std::string sub_unity = write_temp("eps_bad_value.txt", "0.1 3000\n0.2 0.5\n");
    try {
        load_permittivity_table(sub_unity);
        FAIL("expected a validation error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }

    const std::string one_col = write_temp("eps_bad_cols.txt", "0.1 3000\n0.2\n");
    CHECK_THROWS_AS(load_permittivity_table(one_col), std::runtime_error);
    CHECK_THROWS_AS(load_permittivity_table("/tmp/does_not_exist_eps.txt"), std::runtime_error);
}
