#include <doctest.h>

#include <random>

#include "malshift/constants.hpp"
#include "test_util.hpp"

using namespace malshift;

TEST_CASE("local ratios: closed-form spot values") {
    ModelSpec expo = catalog_lookup("exponential", {{{"alpha", Rational(2)}}, {}});
    CHECK(local_ratio(expo, 3, 5) == 1.0);

    ModelParams pg;
    pg.scalars["gamma"] = Rational(7, 10);
    ModelSpec damped = catalog_lookup("damped", pg);
    CHECK(local_ratio(damped, 1, 1) == 0.49);
    CHECK_THROWS_AS(local_ratio(damped, 0, 1), std::domain_error);

    ModelParams pp;
    pp.scalars["p"] = Rational(1);
    ModelSpec poly = catalog_lookup("polynomial", pp);
    CHECK(local_ratio(poly, 1, 1) == 0.75);  // 3/4
}

TEST_CASE("bracket_constant: saturation reports") {
    ModelSpec zorn = catalog_lookup("zorn");
    ConstantReport rz = bracket_constant(zorn, 10);
    CHECK(rz.B_empirical == 2.0);
    CHECK(rz.B_analytic == 2.0);
    CHECK(rz.attained);
    CHECK(rz.rho == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(rz.witness == "((i=1,m=0),(j=2,n=0))");

    ModelParams pp3;
    pp3.scalars["p"] = Rational(3);
    ConstantReport rp = bracket_constant(catalog_lookup("polynomial", pp3), 50);
    CHECK(rp.B_analytic == 8.0);
    CHECK(rp.rho == doctest::Approx(0.03125));
    CHECK_FALSE(rp.attained);  // poly ratio peaks at 1 on the axes

    ModelParams pb;
    pb.scalars["b"] = Rational(10);
    ConstantReport rt = bracket_constant(catalog_lookup("tree_branching", pb), 20);
    CHECK(rt.rho == doctest::Approx(0.025));
    CHECK(rt.attained);

    CHECK_THROWS_AS(bracket_constant(zorn, 1), config_error);
}

TEST_CASE("bracket_constant: exponential ratios are identically 1") {
    ModelSpec expo = catalog_lookup("exponential", {{{"alpha", Rational(3, 2)}}, {}});
    for (std::uint32_t m = 0; m <= 12; ++m)
        for (std::uint32_t n = 0; n <= 12; ++n) CHECK(local_ratio(expo, m, n) == 1.0);
}

TEST_CASE("damped zero-mode sensitivity") {
    ModelParams pg;
    pg.scalars["gamma"] = Rational(7, 10);
    ConstantReport r1 = bracket_constant(catalog_lookup("damped", pg), 30);
    CHECK(r1.B_empirical == 0.49);
    CHECK(r1.witness == "(m=1,n=1)");
    CHECK(r1.rho == doctest::Approx(1.0 / 1.96));

    pg.scalars["min_degree"] = Rational(0);
    ConstantReport r0 = bracket_constant(catalog_lookup("damped", pg), 30);
    CHECK(r0.B_empirical == 1.0);
    CHECK(r0.rho == doctest::Approx(0.25));
}

TEST_CASE("monotone domination in the scan bound") {
    for (const auto& [name, params] : standard_table_rows()) {
        ModelSpec m = catalog_lookup(name, params);
        double prev = 0;
        for (std::uint32_t M : {5u, 10u, 20u, 50u}) {
            ConstantReport r = bracket_constant(m, M);
            INFO(name << " M=" << M);
            CHECK(r.B_empirical >= prev - 1e-15);
            CHECK(r.B_empirical <= r.B_analytic + 1e-12);
            prev = r.B_empirical;
        }
    }
}

TEST_CASE("standard table: rho column and the finite-offset row") {
    auto reports = generate_table(standard_table_rows(), 1.0, 50);
    REQUIRE(reports.size() == 10);
    const double expected_rho[] = {0.125,  0.25,  0.125,   0.03125, 1.0 / 12.0,
                                   0.025,  0.0625, 0.040726817042606514, 1.0 / 1.96, 0.125};
    for (std::size_t i = 0; i < reports.size(); ++i)
        CHECK(reports[i].rho == doctest::Approx(expected_rho[i]).epsilon(1e-9));
    // offset row: sum over D of alpha^Delta and the resulting bound
    ModelSpec off = catalog_lookup("mixed_offset", standard_table_rows()[7].second);
    double s = 1.0 / 1.3 + 1.0 + 1.3;
    CHECK(s == doctest::Approx(3.06923).epsilon(1e-5));
    CHECK(off.analytic_B() == doctest::Approx(6.13846).epsilon(1e-5));
    CHECK(off.analytic_B() == doctest::Approx(s * 2.0).epsilon(1e-12));

    // K sensitivity run: the Casas-Murua value scales every radius down
    auto reports_k = generate_table(standard_table_rows(), 1.07, 50);
    for (std::size_t i = 0; i < reports_k.size(); ++i)
        CHECK(reports_k[i].rho == doctest::Approx(expected_rho[i] / 1.07).epsilon(1e-9));

    ModelParams gbad;
    gbad.scalars["gamma"] = Rational(1);
    CHECK_THROWS_AS(generate_table({{"damped", gbad}}, 1.0, 50), config_error);
}

TEST_CASE("rho * 4KB = 1 invariant") {
    for (double K : {1.0, 1.07}) {
        for (const auto& [name, params] : standard_table_rows()) {
            ConstantReport r = bracket_constant(catalog_lookup(name, params), 10, K);
            CHECK(r.rho * 4.0 * r.K * r.B_analytic == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("poly weight inequality scan") {
    PolyScanResult r0 = poly_weight_inequality_check(0.0, 100);
    CHECK(r0.max_ratio == 1.0);
    PolyScanResult r1 = poly_weight_inequality_check(1.0, 100);
    CHECK(r1.max_ratio <= 2.0);
    // golden: the ratio peaks at 1 on the axes, first attained at (0,0)
    CHECK(r1.max_ratio == 1.0);
    CHECK(r1.arg_m == 0);
    CHECK(r1.arg_n == 0);
    PolyScanResult r2 = poly_weight_inequality_check(2.0, 100);
    CHECK(r2.max_ratio <= 4.0);
    CHECK(r2.bound == 4.0);
}

TEST_CASE("parallel scan kernels match the serial reference") {
    for (const auto& [name, params] : standard_table_rows()) {
        ModelSpec m = catalog_lookup(name, params);
        ConstantReport a = bracket_constant(m, 40, 1.0, par::Mode::serial);
        ConstantReport b = bracket_constant(m, 40, 1.0, par::Mode::openmp);
        CHECK(a.B_empirical == b.B_empirical);
        CHECK(a.witness == b.witness);
    }
    PolyScanResult ps = poly_weight_inequality_check(2.0, 150, par::Mode::serial);
    PolyScanResult pp = poly_weight_inequality_check(2.0, 150, par::Mode::openmp);
    CHECK(ps.max_ratio == pp.max_ratio);
    CHECK(ps.arg_m == pp.arg_m);
    CHECK(ps.arg_n == pp.arg_n);
}
