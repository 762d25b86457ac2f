#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sdspace/expr.hpp"

using namespace sdspace;

static double ev(const ExprPtr& e, double x) {
    double pt[1] = {x};
    return eval_expr(*e, pt);
}

TEST_CASE("parser basics") {
    CHECK(ev(parse_expr("1+2*3", 1), 0) == 7.0);
    CHECK(ev(parse_expr("(1+2)*3", 1), 0) == 9.0);
    CHECK(ev(parse_expr("2^3", 1), 0) == 8.0);
    CHECK(ev(parse_expr("-x1^2", 1), 3) == -9.0);
    CHECK(ev(parse_expr("x1^3-x1", 1), 2) == 6.0);
    CHECK(ev(parse_expr("sin(pi/2)", 1), 0) == doctest::Approx(1.0));
    CHECK(ev(parse_expr("exp(0-x1^2)", 1), 0) == 1.0);
    CHECK(ev(parse_expr("abs(0-3)", 1), 0) == 3.0);
    CHECK(ev(parse_expr("indicator(x1,0,1)", 1), 0.5) == 1.0);
    CHECK(ev(parse_expr("indicator(x1,0,1)", 1), 1.5) == 0.0);
}

TEST_CASE("parse errors carry offsets") {
    CHECK_THROWS_AS(parse_expr("x1+", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("sin(x1", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("x2", 1), ParseError);  // variable beyond order
    CHECK_THROWS_AS(parse_expr("", 1), ParseError);
    try {
        parse_expr("1+*2", 1);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.offset == 2);
    }
}

TEST_CASE("bump profile") {
    CHECK(bump_profile(0.0) == 1.0);  // peak value exactly 1
    CHECK(bump_profile(1.0) == 0.0);
    CHECK(bump_profile(-1.0) == 0.0);
    CHECK(bump_profile(2.0) == 0.0);
    CHECK(bump_profile(0.5) == doctest::Approx(0.71653131057378925).epsilon(1e-14));
    CHECK(bump_profile(0.5, 1) == doctest::Approx(-1.2738334410200698).epsilon(1e-12));
    // derivatives against central differences
    double h = 1e-6;
    CHECK(bump_profile(0.3, 1) ==
          doctest::Approx((bump_profile(0.3 + h) - bump_profile(0.3 - h)) / (2 * h))
              .epsilon(1e-6));
    CHECK(bump_profile(0.3, 2) ==
          doctest::Approx((bump_profile(0.3 + h, 1) - bump_profile(0.3 - h, 1)) / (2 * h))
              .epsilon(1e-6));
}

TEST_CASE("bump expression rescaled to a cube") {
    auto e = exprs::bump(exprs::var(1), 2.0, 0.5);  // center 2, edge 1/2
    CHECK(ev(e, 2.0) == 1.0);
    CHECK(ev(e, 2.25) == 0.0);
    CHECK(ev(e, 2.1) == doctest::Approx(bump_profile(0.4)));
}

TEST_CASE("hk_osc builtin") {
    CHECK(hk_osc_value(0.0) == 0.0);
    CHECK(hk_osc_value(1.0) == doctest::Approx(0.60233735787951358).epsilon(1e-14));
    auto e = parse_expr("hk_osc(x1)", 1);
    CHECK(ev(e, 1.0) == hk_osc_value(1.0));
    // matches the derivative of x^2 sin(1/x^2) away from 0
    double x = 0.3, h = 1e-7;
    auto F = [](double t) { return t * t * std::sin(1.0 / (t * t)); };
    CHECK(hk_osc_value(x) == doctest::Approx((F(x + h) - F(x - h)) / (2 * h)).epsilon(1e-5));
}

TEST_CASE("product short-circuits on exact zero") {
    auto e = parse_expr("x1^2*sin(1/x1^2)", 1);
    CHECK(ev(e, 0.0) == 0.0);
    CHECK(ev(e, 1.0) == doctest::Approx(std::sin(1.0)));
}

TEST_CASE("symbolic differentiation") {
    auto d = diff_expr(parse_expr("x1^3-x1", 1), 1);
    REQUIRE(d);
    CHECK(ev(*d, 2.0) == 11.0);

    auto ds = diff_expr(parse_expr("sin(2*x1)", 1), 1);
    REQUIRE(ds);
    CHECK(ev(*ds, 0.25) == doctest::Approx(2.0 * std::cos(0.5)));

    auto db = diff_expr(exprs::bump(exprs::var(1), 0.0, 1.0), 1);
    REQUIRE(db);
    CHECK(ev(*db, 0.1) == doctest::Approx(2.0 * bump_profile(0.2, 1)).epsilon(1e-12));

    // other-variable derivative vanishes
    auto dz = diff_expr(parse_expr("x1^2", 2), 2);
    REQUIRE(dz);
    CHECK(ev(*dz, 5.0) == 0.0);

    // non-differentiable nodes refuse
    CHECK(!diff_expr(parse_expr("abs(x1)", 1), 1));
    CHECK(!diff_expr(parse_expr("indicator(x1,0,1)", 1), 1));
    CHECK(!diff_expr(parse_expr("hk_osc(x1)", 1), 1));
}

TEST_CASE("print then reparse is evaluation-equivalent") {
    for (const char* src : {"x1^3-x1", "sin(2*x1)+cos(x1)", "exp(0-x1^2)", "1/sqrt(x1)",
                            "bump(x1,0,1)", "indicator(x1,-1,1)*x1", "hk_osc(x1)"}) {
        auto e = parse_expr(src, 1);
        auto r = parse_expr(print_expr(*e), 1);
        for (double x : {0.07, 0.31, 0.93}) CHECK(ev(e, x) == doctest::Approx(ev(r, x)).epsilon(1e-15));
    }
}
