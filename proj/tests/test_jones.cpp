#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "sdspace/catalog.hpp"
#include "sdspace/jones.hpp"

using namespace sdspace;

TEST_CASE("cantor pairing is a bijection") {
    CHECK(cantor_pair(1, 1) == 1);
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 1; a <= 40; ++a)
        for (std::uint64_t b = 1; b <= 40; ++b) {
            std::uint64_t k = cantor_pair(a, b);
            CHECK(seen.insert(k).second);
            auto [x, y] = cantor_unpair(k);
            CHECK(x == a);
            CHECK(y == b);
        }
}

TEST_CASE("rational enumeration") {
    // Calkin-Wilf: 1, 1/2, 2, 1/3, 3/2, 2/3, 3, ...
    CHECK(calkin_wilf(1) == 1.0);
    CHECK(calkin_wilf(2) == 0.5);
    CHECK(calkin_wilf(3) == 2.0);
    CHECK(calkin_wilf(4) == doctest::Approx(1.0 / 3.0));
    CHECK(calkin_wilf(5) == 1.5);
    CHECK(calkin_wilf(6) == doctest::Approx(2.0 / 3.0));
    CHECK(calkin_wilf(7) == 3.0);

    // signed interleaving with zero first
    CHECK(rational_1d(1) == 0.0);
    CHECK(rational_1d(2) == 1.0);
    CHECK(rational_1d(3) == -1.0);
    CHECK(rational_1d(4) == 0.5);
    CHECK(rational_1d(5) == -0.5);
    CHECK(rational_1d(6) == 2.0);
    CHECK(rational_1d(7) == -2.0);

    CHECK(enumerate_rationals(2, 1) == std::vector<double>{0.0, 0.0});

    // injective over a long prefix (1-D and 2-D)
    std::set<double> pts1;
    for (std::uint64_t i = 1; i <= 10000; ++i) CHECK(pts1.insert(rational_1d(i)).second);
    std::set<std::vector<double>> pts2;
    for (std::uint64_t i = 1; i <= 10000; ++i)
        CHECK(pts2.insert(enumerate_rationals(2, i)).second);
}

TEST_CASE("cube geometry") {
    CubeFamily fam1(1);
    CubeSpec c1 = fam1.cube_flat(1);
    CHECK(c1.level == 1);
    CHECK(c1.center == std::vector<double>{0.0});
    CHECK(c1.edge == 1.0);

    CubeFamily fam2(2);
    CHECK(fam2.edge_at_level(1) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(fam2.edge_at_level(3) == doctest::Approx(1.0 / (4.0 * std::sqrt(2.0))));

    // vol(B)^2 <= (1/sqrt(n))^(2n) <= 1 across a sample
    for (int n = 1; n <= 3; ++n) {
        CubeFamily fam(n);
        for (int k = 1; k <= 100; ++k) {
            double vol = box_volume(fam.cube_box(fam.cube_flat(k)));
            CHECK(vol * vol <= std::pow(1.0 / std::sqrt((double)n), 2.0 * n) + 1e-15);
        }
    }
}

TEST_CASE("weights") {
    CHECK(weight(1) == 0.5);
    double sum = 0.0;
    for (int k = 1; k <= 30; ++k) sum += weight(k);
    CHECK(sum == doctest::Approx(1.0 - std::ldexp(1.0, -30)).epsilon(1e-15));
}

TEST_CASE("test functions are bumps on their cubes") {
    TestFunctionFamily fam(1);
    TameFunction e1 = fam.test_fn(1);
    CHECK(e1({0.0}) == 1.0);
    CHECK(e1({0.5}) == 0.0);
    CHECK(e1({0.25}) == doctest::Approx(bump_profile(0.5)));
    CHECK(e1.smoothness() == Smoothness::SmoothCompact);

    TestFunctionFamily fam2(2);
    TameFunction e = fam2.test_fn(1);
    CHECK(e({0.0, 0.0}) == 1.0);
    double half = 0.5 / std::sqrt(2.0);
    CHECK(e({half, 0.0}) == 0.0);
}

TEST_CASE("functionals are linear and bounded") {
    TestFunctionFamily fam(1);
    TameFunction one(1, parse_expr("1", 1), BoxSet(1, {{{-2.0, 2.0}}}), Smoothness::Piecewise);
    TameFunction lin(1, parse_expr("x1", 1), BoxSet(1, {{{-2.0, 2.0}}}), Smoothness::Smooth);
    double f1 = fam.functional(1, one, 1e-10);
    // oracle: integral of the unit bump over its cube
    CHECK(f1 == doctest::Approx(0.60345016121893809).epsilon(1e-9));
    CHECK(std::fabs(fam.functional(1, lin, 1e-10)) <= 1e-10);  // odd integrand

    // linearity: F(a f + b g) = a F(f) + b F(g)
    TameFunction combo(1, parse_expr("3*1+2*x1", 1), BoxSet(1, {{{-2.0, 2.0}}}),
                       Smoothness::Smooth);
    CHECK(fam.functional(1, combo, 1e-10) == doctest::Approx(3.0 * f1).epsilon(1e-8));

    // |F_k(f)| <= sup|f| * vol(B_k)
    for (int k = 1; k <= 20; ++k) {
        double v = fam.functional(k, one, 1e-10);
        CHECK(std::fabs(v) <= box_volume(fam.cubes().cube_box(fam.cubes().cube_flat(k))) + 1e-12);
    }

    TameFunction wrong(2, parse_expr("1", 2), BoxSet(2, {{{0, 1}, {0, 1}}}),
                       Smoothness::Piecewise);
    CHECK_THROWS_AS(fam.functional(1, wrong, 1e-10), OrderMismatchError);
}

TEST_CASE("norms and inner products") {
    TestFunctionFamily fam(1);
    SDConfig cfg;
    cfg.K = 20;
    cfg.quad_tol = 1e-10;
    TameFunction zero(1, parse_expr("0", 1), BoxSet(1, {{{0.0, 1.0}}}), Smoothness::Smooth);
    CHECK(sd_norm(fam, zero, cfg) == 0.0);

    TameFunction one(1, parse_expr("1", 1), BoxSet(1, {{{-2.0, 2.0}}}), Smoothness::Piecewise);
    one.set_sup_norm(1.0);
    double n2 = sd_norm(fam, one, cfg);
    CHECK(n2 > 0.0);
    CHECK(n2 * n2 == doctest::Approx(sd_inner(fam, one, one, cfg)).epsilon(1e-9));

    // homogeneity
    TameFunction three(1, parse_expr("3", 1), BoxSet(1, {{{-2.0, 2.0}}}), Smoothness::Piecewise);
    CHECK(sd_norm(fam, three, cfg) == doctest::Approx(3.0 * n2).epsilon(1e-9));

    // p-norms are dominated by the sup norm over k (SD^inf bound)
    FunctionalVector v = functional_vector(fam, one, cfg);
    for (double p : {1.0, 2.0, 4.0}) {
        auto chk = sd_infty_bound(v.values, p, "one");
        CHECK(chk.pass);
    }
}

TEST_CASE("tail certificates") {
    TestFunctionFamily fam(1);
    SDConfig c10;
    c10.K = 10;
    c10.quad_tol = 1e-10;
    SDConfig c30 = c10;
    c30.K = 30;
    Catalog cat = builtin_catalog();
    for (const char* name : {"sine", "bump1", "quadratic", "gaussian"}) {
        const TameFunction& f = cat.at(name).fn;
        FunctionalVector v10 = functional_vector(fam, f, c10);
        FunctionalVector v30 = functional_vector(fam, f, c30);
        REQUIRE(v10.tail_bound);
        double n10 = norm_from_vector(v10.values, 2.0);
        double n30 = norm_from_vector(v30.values, 2.0);
        CHECK(n10 * n10 + *v10.tail_bound >= n30 * n30 - 1e-12);
        // deeper truncation only grows the norm
        CHECK(n30 + 1e-12 >= n10);
    }
}

TEST_CASE("duality map recovers the squared norm") {
    TestFunctionFamily fam(1);
    SDConfig cfg;
    cfg.K = 15;
    cfg.quad_tol = 1e-10;
    Catalog cat = builtin_catalog();
    for (double p : {1.5, 2.0, 3.0}) {
        FunctionalVector vg = functional_vector(fam, cat.at("sine").fn, cfg);
        double lhs = duality_apply(vg.values, vg.values, p);
        double n = norm_from_vector(vg.values, p);
        CHECK(lhs == doctest::Approx(n * n).epsilon(1e-10));
    }
    CHECK_THROWS_AS(duality_apply({0.0, 0.0}, {1.0, 1.0}, 2.0), DomainError);  // g = 0
    CHECK_THROWS_AS(duality_apply({1.0}, {1.0}, 1.0), DomainError);            // p = 1
}

TEST_CASE("clarkson and parallelogram") {
    std::vector<double> vf = {0.3, -0.1, 0.7, 0.0};
    std::vector<double> vg = {-0.2, 0.5, 0.1, 0.4};
    for (double p : {2.0, 3.0, 4.0}) CHECK(clarkson_check(vf, vg, p, "synthetic").pass);
    CHECK_THROWS_AS(clarkson_check(vf, vg, 1.5, "bad"), DomainError);
}

TEST_CASE("derivative pairing on a smooth function") {
    TestFunctionFamily fam(1);
    TameFunction f(1, parse_expr("x1^2", 1), BoxSet(1, {{{-3.0, 3.0}}}), Smoothness::Smooth);
    for (int k : {1, 2, 3}) {
        for (int ord : {1, 2}) {
            MultiIndex a;
            a.set(1, ord);
            auto [lhs, rhs] = derivative_pairing(fam, f, k, a, 1e-10);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
        }
    }
    // disjoint support short-circuits to (0,0)
    TameFunction far(1, parse_expr("x1", 1), BoxSet(1, {{{50.0, 51.0}}}), Smoothness::Smooth);
    MultiIndex a;
    a.set(1, 1);
    auto [l0, r0] = derivative_pairing(fam, far, 1, a);
    CHECK(l0 == 0.0);
    CHECK(r0 == 0.0);
    // partial overlap without smoothness on the whole cube is refused
    TameFunction cut(1, parse_expr("x1", 1), BoxSet(1, {{{0.1, 0.3}}}), Smoothness::Smooth);
    CHECK_THROWS_AS(derivative_pairing(fam, cut, 1, a), DomainError);
}

TEST_CASE("kuelbs toy space") {
    std::vector<double> u = {1.0, -2.0, 0.5};
    CHECK(kuelbs_b_norm(u) == 2.0);
    double h2 = 0.5 * 1.0 + 0.25 * 4.0 + 0.125 * 0.25;
    CHECK(kuelbs_h_norm(u) == doctest::Approx(std::sqrt(h2)));
    CHECK(kuelbs_h_norm(u) <= kuelbs_b_norm(u));
    CHECK(kuelbs_inner(u, u) == doctest::Approx(h2));
}

TEST_CASE("catalog io round-trip") {
    Catalog cat = builtin_catalog();
    CHECK(cat.names().size() >= 12);
    std::string line = catalog_line(cat.at("sine"));
    auto [name, fn] = parse_catalog_line(line);
    CHECK(name == "sine");
    CHECK(fn.order() == 1);
    CHECK(fn({1.0}) == doctest::Approx(std::sin(1.0)));
    CHECK_THROWS_AS(parse_catalog_line("noequals"), ParseError);
    CHECK_THROWS_AS(parse_catalog_line("f = x1 @ support=[0,1]"), ParseError);
    CHECK_THROWS_AS(parse_catalog_line("f = x1 @ order=2 support=[0,1]"), ParseError);
}
