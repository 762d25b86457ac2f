#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sdspace/quadrature.hpp"

using namespace sdspace;

TEST_CASE("adaptive 1-D") {
    CHECK(adaptive_quad([](double x) { return x; }, 0, 1).value == doctest::Approx(0.5));
    CHECK(adaptive_quad([](double x) { return std::sin(x); }, 0, std::numbers::pi).value ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(adaptive_quad([](double x) { return std::sin(40 * x); }, 0, 1, {1e-12}).value ==
          doctest::Approx((1.0 - std::cos(40.0)) / 40.0).epsilon(1e-10));
    CHECK(adaptive_quad([](double) { return 1.0; }, 2, 2).value == 0.0);
    CHECK_THROWS_AS(adaptive_quad([](double) { return 1.0; }, 1, 0), DomainError);
}

TEST_CASE("budget enforcement") {
    QuadOptions opt;
    opt.max_evals = 100;
    CHECK_THROWS_AS(adaptive_quad([](double x) { return std::sin(1000 * x * x); }, 0, 10, opt),
                    BudgetExceededError);
}

TEST_CASE("box quadrature") {
    QuadOptions opt{1e-10, 100'000'000};
    auto r = quad_box([](std::span<const double> x) { return x[0] * x[1]; },
                      {{0, 1}, {0, 2}}, opt);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.method == Method::AdaptiveQuad);
    CHECK_THROWS_AS(
        quad_box([](std::span<const double>) { return 1.0; }, {{0.0, kInf}}, opt),
        DomainError);
}

TEST_CASE("quad_nd over tame supports") {
    TameFunction bump(1, parse_expr("bump(x1,0,1)", 1), BoxSet(1, {{{-0.5, 0.5}}}),
                      Smoothness::SmoothCompact);
    // oracle: half the integral of exp(1-1/(1-t^2)) over [-1,1]
    CHECK(quad_nd(bump, 1e-10).value == doctest::Approx(0.60345016121893809).epsilon(1e-9));

    TameFunction split(1, parse_expr("1", 1), BoxSet(1, {{{0, 1}}, {{2, 4}}}),
                       Smoothness::Piecewise);
    CHECK(quad_nd(split, 1e-10).value == doctest::Approx(3.0));
}

TEST_CASE("limit integral of an l1-Cauchy sequence") {
    TameFunction base(1, parse_expr("x1", 1), BoxSet(1, {{{0.0, 1.0}}}), Smoothness::Smooth);
    FunctionSequence seq;
    seq.generator = [base](int m) {
        TameFunction f(1, exprs::mul(exprs::constant(1.0 - 1.0 / m), base.expr()),
                       base.support(), Smoothness::Smooth);
        return promote(f, m);
    };
    seq.declared_mode = FunctionSequence::Mode::L1Cauchy;
    IntegralResult r = limit_integral(seq, 6, 1e-10);
    CHECK(r.value == doctest::Approx(0.5 * (1.0 - 1.0 / 6.0)).epsilon(1e-8));
    CHECK(r.error_estimate > 0.0);

    seq.declared_mode = FunctionSequence::Mode::PointwiseAe;
    CHECK_THROWS_AS(limit_integral(seq, 6, 1e-10), DomainError);
}

TEST_CASE("limit integral detects non-Cauchy sequences") {
    FunctionSequence seq;
    seq.generator = [](int m) {
        TameFunction f(1, exprs::constant((m % 2 == 0) ? 1.0 : -1.0),
                       BoxSet(1, {{{0.0, 1.0}}}), Smoothness::Piecewise);
        return f;
    };
    seq.declared_mode = FunctionSequence::Mode::L1Cauchy;
    CHECK_THROWS_AS(limit_integral(seq, 8, 1e-10), NonConvergenceError);
}
