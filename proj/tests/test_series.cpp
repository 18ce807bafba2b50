#include <doctest.h>

#include "support.hpp"

using namespace test;

TEST_SUITE("series") {

TEST_CASE("sums and products") {
    PolyRing r = ring_q();
    Poly x = g(r, 0);
    VarSet s({"s"});
    CoIdeal t2 = CoIdeal::tm(s, 2), t1 = CoIdeal::tm(s, 1);
    MultiIndex s0(s), s1 = mi(s, {{"s", 1}}), s2 = mi(s, {{"s", 2}});
    CHECK(ser(r, t2, {{s0, k(r, 1)}, {s1, x}}) + ser(r, t2, {{s0, k(r, 1)}, {s1, -x}}) == Series::constant(r, t2, k(r, 2)));
    Series a = ser(r, t2, {{s0, k(r, 1)}, {s1, k(r, 1)}}), b = ser(r, t2, {{s0, k(r, 1)}, {s1, k(r, -1)}});
    CHECK(a * b == ser(r, t2, {{s0, k(r, 1)}, {s2, k(r, -1)}}));
    CHECK(truncate(a, t1) * truncate(b, t1) == Series::one(r, t1));
    CHECK(a + Series(r, t2) == a);

    PolyRing r2 = ring_q({"x", "y"});
    VarSet ss({"s1", "s2"});
    CoIdeal u2 = CoIdeal::tm(ss, 2);
    Series p = ser(r2, u2, {{mi(ss, {{"s1", 1}}), g(r2, 0)}}), q = ser(r2, u2, {{mi(ss, {{"s2", 1}}), g(r2, 1)}});
    CHECK(p * q == ser(r2, u2, {{mi(ss, {{"s1", 1}, {"s2", 1}}), g(r2, 0) * g(r2, 1)}}));
}

TEST_CASE("products agree with the schoolbook reference") {
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        PolyRing r = i % 2 ? ring_q({"x", "y"}) : ring_p(5, {"x"});
        CoIdeal trunc = tdeg("s", 1 + i % 2, 1 + i % 4);
        Series a = random_series(r, trunc, rng), b = random_series(r, trunc, rng);
        CHECK(a * b == brute::product(a, b));
    }
}

TEST_CASE("truncation") {
    PolyRing r = ring_q();
    VarSet s({"s"});
    MultiIndex s0(s), s1 = mi(s, {{"s", 1}}), s2 = mi(s, {{"s", 2}});
    Series a = ser(r, CoIdeal::tm(s, 2), {{s0, k(r, 1)}, {s1, k(r, 1)}, {s2, k(r, 1)}});
    CHECK(truncate(a, CoIdeal::tm(s, 1)) == ser(r, CoIdeal::tm(s, 1), {{s0, k(r, 1)}, {s1, k(r, 1)}}));
    CHECK(truncate(a, a.trunc()) == a);
    CHECK(truncate(a, CoIdeal::tm(s, 0)) == Series::one(r, CoIdeal::tm(s, 0)));
}

TEST_CASE("units and inverses") {
    PolyRing r = ring_q();
    Poly x = g(r, 0);
    VarSet s({"s"});
    CoIdeal t1 = CoIdeal::tm(s, 1), t2 = CoIdeal::tm(s, 2), t3 = CoIdeal::tm(s, 3);
    MultiIndex s0(s), s1 = mi(s, {{"s", 1}}), s2 = mi(s, {{"s", 2}}), s3 = mi(s, {{"s", 3}});
    CHECK(is_unit(ser(r, t1, {{s0, k(r, 1)}, {s1, x}})));
    CHECK_FALSE(is_unit(ser(r, t1, {{s0, x}, {s1, k(r, 1)}})));
    CHECK(is_unit(ser(r, t1, {{s0, k(r, 2)}, {s1, k(r, 1)}})));

    Series geometric = ser(r, t3, {{s0, k(r, 1)}, {s1, k(r, 1)}});
    Series expected = ser(r, t3, {{s0, k(r, 1)}, {s1, k(r, -1)}, {s2, k(r, 1)}, {s3, k(r, -1)}});
    CHECK(invert_recursive(geometric) == expected);
    CHECK(invert_partition(geometric) == expected);
    CHECK(invert_recursive(Series::one(r, t3)) == Series::one(r, t3));

    Series u = ser(r, t2, {{s0, k(r, 1)}, {s1, x}, {s2, k(r, 1)}});
    Series inv = ser(r, t2, {{s0, k(r, 1)}, {s1, -x}, {s2, x * x - k(r, 1)}});
    CHECK(invert_recursive(u) == inv);
    CHECK(invert_partition(u) == inv);
    CHECK(brute::product(u, inv) == Series::one(r, t2));
    CHECK_THROWS_AS(invert_recursive(ser(r, t1, {{s0, x}})), precondition_error);
}

TEST_CASE("partition inverse: the norm-one coefficient is negated") {
    Rng rng(9);
    PolyRing r = ring_q({"x", "y"});
    CoIdeal trunc = tdeg("s", 2, 3);
    for (int i = 0; i < 10; ++i) {
        Series u = random_unit(r, trunc, rng);
        Series inv = invert_partition(u);
        for (const auto& a : trunc.members())
            if (a.norm() == 1) CHECK(inv.coeff(a) == -u.coeff(a));
    }
}

TEST_CASE("external product") {
    PolyRing r = ring_q({"x", "y"});
    VarSet s({"s"}), t({"t"});
    CoIdeal ds = CoIdeal::tm(s, 1), dt = CoIdeal::tm(t, 1);
    Series a = ser(r, ds, {{MultiIndex(s), k(r, 1)}, {mi(s, {{"s", 1}}), k(r, 1)}});
    Series b = ser(r, dt, {{MultiIndex(t), k(r, 1)}, {mi(t, {{"t", 1}}), k(r, 1)}});
    Series ab = external_product(a, b);
    VarSet st = ab.vars();
    CHECK(ab.trunc() == product(ds, dt));
    CHECK(ab.terms().size() == 4);
    for (const auto& [idx, c] : ab.terms()) CHECK(c == k(r, 1));
    CHECK(ab.coeff(mi(st, {{"s", 1}, {"t", 1}})) == k(r, 1));
    CHECK(external_product(a, Series::one(r, dt)) == include(a, ab.trunc()));
    Series xs = ser(r, ds, {{mi(s, {{"s", 1}}), g(r, 0)}}), yt = ser(r, dt, {{mi(t, {{"t", 1}}), g(r, 1)}});
    CHECK(external_product(xs, yt) == ser(r, ab.trunc(), {{mi(st, {{"s", 1}, {"t", 1}}), g(r, 0) * g(r, 1)}}));
}

TEST_CASE("external product of units inverts factorwise") {
    Rng rng(2);
    PolyRing r = ring_q();
    for (int i = 0; i < 10; ++i) {
        Series a = random_unit(r, tdeg("s", 1, 2), rng), b = random_unit(r, tdeg("t", 1, 2), rng);
        CHECK(invert_recursive(external_product(a, b)) == external_product(invert_recursive(a), invert_recursive(b)));
        CHECK(truncate(external_product(a, b), product(CoIdeal::tm(a.vars(), 1), b.trunc())) ==
              external_product(truncate(a, CoIdeal::tm(a.vars(), 1)), b));
    }
}

TEST_CASE("series variables must avoid generator names") {
    PolyRing r = ring_q({"x"});
    CHECK_THROWS(Series(r, CoIdeal::tm(VarSet({"x"}), 1)));
}

}
