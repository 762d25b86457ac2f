#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdspace/measure.hpp"

using namespace sdspace;

TEST_CASE("box volume") {
    CHECK(box_volume({{0, 1}, {0, 2}}) == doctest::Approx(2.0));
    CHECK(box_volume({{0, 0}, {0, 2}}) == 0.0);             // degenerate side
    CHECK(box_volume({{0, 0}, {-kInf, kInf}}) == 0.0);      // degenerate beats unbounded
    CHECK(box_volume({{0, 1}, {-kInf, 2}}) == kInf);
    CHECK_THROWS_AS(Interval(1, 0), DomainError);
}

TEST_CASE("lambda_inf on unions") {
    BoxSet a(1, {{{0, 1}}});
    CHECK(lambda_inf(a) == doctest::Approx(1.0));
    // overlapping boxes are not double counted
    BoxSet b(1, {{{0, 1}}, {{0.5, 2}}});
    CHECK(lambda_inf(b) == doctest::Approx(2.0));
    BoxSet c(2, {{{0, 1}, {0, 1}}, {{2, 3}, {0, 2}}});
    CHECK(lambda_inf(c) == doctest::Approx(3.0));
    CHECK(lambda_inf(BoxSet(1)) == 0.0);
}

TEST_CASE("normalization is canonical") {
    BoxSet split(1, {{{0, 1}}, {{1, 2}}});
    BoxSet whole(1, {{{0, 2}}});
    CHECK(split == whole);
    CHECK(split.boxes().size() == 1);

    // idempotence: normalizing a normalized set changes nothing
    BoxSet again(1, split.boxes());
    CHECK(again == split);

    BoxSet grid2(2, {{{0, 1}, {0, 2}}, {{1, 2}, {0, 1}}, {{1, 2}, {1, 2}}});
    CHECK(grid2 == BoxSet(2, {{{0, 2}, {0, 2}}}));
}

TEST_CASE("union intersect complement") {
    BoxSet a(1, {{{0, 2}}});
    BoxSet b(1, {{{1, 3}}});
    CHECK(lambda_inf(box_union(a, b)) == doctest::Approx(3.0));
    CHECK(lambda_inf(box_intersect(a, b)) == doctest::Approx(1.0));
    CHECK(box_intersect(a, BoxSet(1, {{{5, 6}}})).empty());

    BoxSet comp = box_complement(a);
    CHECK(lambda_inf(comp) == kInf);
    double pt1[1] = {-1.0}, pt2[1] = {1.0};
    CHECK(comp.contains(pt1));
    CHECK(!comp.contains(pt2));
    CHECK(box_complement(comp) == a);

    CHECK_THROWS_AS(box_union(a, BoxSet(2, {{{0, 1}, {0, 1}}})), OrderMismatchError);
}

TEST_CASE("De Morgan") {
    BoxSet a(2, {{{0, 1}, {0, 1}}});
    BoxSet b(2, {{{0.5, 2}, {-1, 0.5}}});
    CHECK(box_complement(box_union(a, b)) ==
          box_intersect(box_complement(a), box_complement(b)));
    CHECK(box_complement(box_intersect(a, b)) ==
          box_union(box_complement(a), box_complement(b)));
}

TEST_CASE("translation invariance") {
    BoxSet a(2, {{{0, 1}, {0, 2}}, {{3, 4}, {0, 1}}});
    double v[2] = {1.5, -2.25};
    CHECK(lambda_inf(translate(a, v)) == lambda_inf(a));
    double back[2] = {-1.5, 2.25};
    CHECK(translate(translate(a, v), back) == a);
}

TEST_CASE("order promotion") {
    BoxSet a(1, {{{0, 2}}});
    BoxSet p = promote_order(a, 3);
    CHECK(p.order() == 3);
    CHECK(lambda_inf(p) == lambda_inf(a));
    CHECK(p.boxes()[0][1] == Interval(-0.5, 0.5));
    CHECK(promote_order(a, 1) == a);
    CHECK_THROWS_AS(promote_order(p, 2), OrderMismatchError);
}
