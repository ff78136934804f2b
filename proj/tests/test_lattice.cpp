#include "doctest.h"
#include "lplat/step.hpp"

#include <random>

using namespace lplat;

namespace {

Rat rr(long n, long d) { return Rat(n, d); }

StepFunction ind(long a, long b, long d) {
    return StepFunction::indicator(Scalar(Rat(a, d)), Scalar(Rat(b, d)));
}

// Random step function on [0,1) with dyadic breakpoints.
StepFunction random_step(std::mt19937_64& rng, int depth = 4, int vmax = 5) {
    int n = 1 << depth;
    std::uniform_int_distribution<int> val(-vmax, vmax);
    std::vector<StepFunction::Piece> ps;
    for (int i = 0; i < n; ++i) {
        int v = val(rng);
        if (v == 0) continue;
        ps.push_back({Scalar(Rat(i, n)), Scalar(Rat(i + 1, n)), Scalar(Rat(v, 1 + (i % 3)))});
    }
    return StepFunction(std::move(ps));
}

}  // namespace

TEST_CASE("canonical form: merging, zero dropping, idempotence") {
    StepFunction f({{Scalar(rr(0, 1)), Scalar(rr(1, 2)), Scalar(2)},
                    {Scalar(rr(1, 2)), Scalar(rr(3, 4)), Scalar(2)},
                    {Scalar(rr(3, 4)), Scalar(1), Scalar(0)}});
    CHECK(f.pieces().size() == 1);
    CHECK(f.pieces()[0].hi == Scalar(rr(3, 4)));
    StepFunction again(std::vector<StepFunction::Piece>(f.pieces()));
    CHECK(again == f);
    CHECK(StepFunction().is_zero());
}

TEST_CASE("pointwise modulus") {
    StepFunction f = ind(0, 1, 2) - ind(1, 2, 2);
    CHECK(f.abs() == StepFunction::indicator(Scalar(0), Scalar(1)));
}

TEST_CASE("join identity x v y = (x+y)/2 + |x-y|/2 on randomized pairs") {
    std::mt19937_64 rng(21);
    for (int it = 0; it < 50; ++it) {
        StepFunction x = random_step(rng), y = random_step(rng);
        StepFunction lhs = x.join(y);
        StepFunction rhs = x.avg(y) + (x - y).abs().scale(rr(1, 2));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("negative part of a positive element is zero") {
    CHECK(ind(0, 1, 2).neg_part().is_zero());
}

TEST_CASE("norms") {
    Measure leb = Measure::lebesgue_unit();
    CHECK(norm1(ind(0, 1, 2), leb) == Scalar(rr(1, 2)));

    SUBCASE("disjoint additivity at p = 1") {
        StepFunction u = ind(0, 1, 2), v = ind(1, 2, 2);
        CHECK(disjoint(u, v));
        CHECK(norm1(u + v, leb) == norm1(u, leb) + norm1(v, leb));
        CHECK(norm1(u + v, leb) == Scalar(1));
    }

    SUBCASE("|2 chi_[0,1/4)|_2 = 1") {
        StepFunction f = ind(0, 1, 4).scale(Scalar(2));
        auto n = norm_p(f, leb, PExponent{2});
        REQUIRE(std::holds_alternative<Scalar>(n));
        CHECK(std::get<Scalar>(n) == Scalar(1));
    }

    SUBCASE("p = 2 disjoint additivity via squared-norm enclosures") {
        StepFunction u = ind(0, 1, 3), v = ind(2, 3, 3).scale(Scalar(2));
        auto nu = norm_p(u, leb, PExponent{2});
        auto nv = norm_p(v, leb, PExponent{2});
        auto nsum = norm_p(u + v, leb, PExponent{2});
        // ||u||^2 = 1/3, ||v||^2 = 4/3, ||u+v||^2 = 5/3
        auto sq = [](const ScalarOrEnclosure& x) {
            if (std::holds_alternative<Scalar>(x)) {
                Rat r = std::get<Scalar>(x).as_rational();
                return Enclosure(r * r);
            }
            const auto& e = std::get<Enclosure>(x);
            return Enclosure(e.lo * e.lo, e.hi * e.hi);
        };
        Enclosure lhs = sq(nsum);
        Enclosure rhs = sq(nu) + sq(nv);
        CHECK(lhs.lo <= rhs.hi);
        CHECK(rhs.lo <= lhs.hi);
    }
}

TEST_CASE("norm triangle inequality and homogeneity on randomized pairs") {
    Measure leb = Measure::lebesgue_unit();
    std::mt19937_64 rng(33);
    for (int it = 0; it < 50; ++it) {
        StepFunction x = random_step(rng), y = random_step(rng);
        CHECK(norm1(x + y, leb) <= norm1(x, leb) + norm1(y, leb));
        CHECK(norm1(x.scale(Scalar(rr(-3, 2))), leb) == norm1(x, leb) * Scalar(rr(3, 2)));
    }
}

TEST_CASE("norm monotonicity |u| <= |v| implies |u| <= |v|") {
    Measure leb = Measure::lebesgue_unit();
    std::mt19937_64 rng(44);
    for (int it = 0; it < 30; ++it) {
        StepFunction v = random_step(rng);
        StepFunction u = v.abs().meet(random_step(rng).abs());
        CHECK(u.dominated_by(v.abs()));
        CHECK(norm1(u, leb) <= norm1(v, leb));
    }
}

TEST_CASE("restriction operator") {
    StepFunction x = StepFunction::indicator(Scalar(0), Scalar(1)).scale(Scalar(2));
    StepFunction y = ind(1, 2, 4);
    CHECK(x.restrict_to(y) == ind(1, 2, 4).scale(Scalar(2)));

    std::mt19937_64 rng(55);
    for (int it = 0; it < 30; ++it) {
        StepFunction f = random_step(rng);
        CHECK(f.restrict_to(f) == f);
        StepFunction g = random_step(rng);
        // band direct sum: f = f|b(g) + f|g-perp
        CHECK(f.restrict_to(g) + f.complement_project(g.support()) == f);
    }
}

TEST_CASE("finite-stage limit of the restriction formula") {
    // 2^n (x/2^n ^ y) equals x|supp y exactly once 2^n >= max x / min positive y
    std::mt19937_64 rng(66);
    for (int it = 0; it < 30; ++it) {
        StepFunction x = random_step(rng).abs(), y = random_step(rng).abs();
        if (x.is_zero() || y.is_zero()) continue;
        Scalar bound = x.max_abs_value() / y.min_positive_value();
        Rat pow2(1);
        while (Scalar(pow2) < bound) pow2 *= 2;
        StepFunction staged = x.scale(Rat(1) / pow2).meet(y).scale(pow2);
        CHECK(staged == x.restrict_to(y));
    }
}

TEST_CASE("support and disjointness") {
    StepFunction f = ind(0, 1, 3) + ind(2, 3, 3).scale(Scalar(2));
    IntervalSet s = f.support();
    REQUIRE(s.intervals().size() == 2);
    CHECK(s.intervals()[0].hi == Scalar(rr(1, 3)));
    CHECK(s.intervals()[1].lo == Scalar(rr(2, 3)));

    CHECK(disjoint(ind(0, 1, 2), ind(1, 2, 2)));
    CHECK(!disjoint(ind(0, 2, 3), ind(1, 3, 3)));
}

TEST_CASE("interval set algebra") {
    auto a = IntervalSet::single(Scalar(0), Scalar(rr(1, 2)));
    auto b = IntervalSet::single(Scalar(rr(1, 4)), Scalar(rr(3, 4)));
    CHECK(a.intersect(b) == IntervalSet::single(Scalar(rr(1, 4)), Scalar(rr(1, 2))));
    CHECK(a.unite(b) == IntervalSet::single(Scalar(0), Scalar(rr(3, 4))));
    CHECK(a.subtract(b) == IntervalSet::single(Scalar(0), Scalar(rr(1, 4))));
    CHECK(a.subtract(a).empty());
    CHECK(a.total_length() == Scalar(rr(1, 2)));
}

TEST_CASE("measure with non-uniform density") {
    // density 2 on [0,1/2), background 1
    Measure mu(Space::unit(), StepFunction({{Scalar(0), Scalar(rr(1, 2)), Scalar(2)}}));
    CHECK(mu.total_mass() == Scalar(rr(3, 2)));
    CHECK(mu.mass(Interval{Scalar(rr(1, 4)), Scalar(rr(3, 4))}) == Scalar(rr(3, 4)));
    CHECK(norm1(StepFunction::indicator(Scalar(0), Scalar(1)), mu) == Scalar(rr(3, 2)));
}

TEST_CASE("line space step functions") {
    Measure leb = Measure::lebesgue_line();
    StepFunction f = StepFunction::indicator(Scalar(-2), Scalar(3));
    CHECK(norm1(f, leb) == Scalar(5));
}
