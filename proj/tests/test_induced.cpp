#include "doctest.h"
#include "lplat/induced.hpp"
#include "lplat/random_gen.hpp"

#include <random>

using namespace lplat;

namespace {

AlphaRef golden_alpha() {
    static AlphaRef a = AlphaSpec::golden();
    return a;
}

InducedAut golden_induced() {
    AlphaRef a = golden_alpha();
    return InducedAut(PAMap::rotation(Scalar::alpha(a), Space::unit(a)),
                      Measure::lebesgue_unit(a));
}

}  // namespace

TEST_CASE("rotation action moves an indicator with wrap-around") {
    InducedAut A = golden_induced();
    Scalar a = Scalar::alpha(golden_alpha());
    StepFunction u = StepFunction::indicator(Scalar(0), Scalar(Rat(1, 2)));
    // alpha > 1/2, so [alpha, 1/2 + alpha) wraps past 1
    StepFunction expect({{Scalar(0), a - Scalar(Rat(1, 2)), Scalar(1)},
                         {a, Scalar(1), Scalar(1)}});
    CHECK(A.apply(u) == expect);
}

TEST_CASE("p = 1 action is an isometry on randomized inputs") {
    std::mt19937_64 rng(23);
    Measure mu = Measure::lebesgue_unit();
    for (int it = 0; it < 100; ++it) {
        PAMap sigma = random_pamap(rng, 2 + it % 4);
        InducedAut A(sigma, mu);
        StepFunction u = random_step(rng);
        CHECK(norm1(A.apply(u), mu) == norm1(u, mu));
    }
}

TEST_CASE("composition of automorphisms acts as the composed action") {
    std::mt19937_64 rng(29);
    Measure mu = Measure::lebesgue_unit();
    for (int it = 0; it < 20; ++it) {
        PAMap s = random_pamap(rng, 3);
        PAMap t = random_pamap(rng, 2);
        InducedAut As(s, mu), At(t, mu);
        InducedAut Ast = As.compose(At);
        StepFunction u = random_step(rng);
        CHECK(Ast.apply(u) == As.apply(At.apply(u)));
    }
}

TEST_CASE("action preserves lattice operations and restriction") {
    std::mt19937_64 rng(31);
    Measure mu = Measure::lebesgue_unit();
    for (int it = 0; it < 20; ++it) {
        InducedAut A(random_pamap(rng, 3), mu);
        StepFunction u = random_step(rng), v = random_step(rng);
        CHECK(A.apply(u.join(v)) == A.apply(u).join(A.apply(v)));
        CHECK(A.apply(u.meet(v)) == A.apply(u).meet(A.apply(v)));
        CHECK(A.apply(u.abs()) == A.apply(u).abs());
        StepFunction up = u.pos(), vp = v.pos();
        CHECK(A.apply(up.restrict_to(vp)) == A.apply(up).restrict_to(A.apply(vp)));
    }
}

TEST_CASE("inverse action undoes the action") {
    std::mt19937_64 rng(37);
    Measure mu = Measure::lebesgue_unit();
    for (int it = 0; it < 20; ++it) {
        InducedAut A(random_pamap(rng, 3), mu);
        StepFunction u = random_step(rng);
        CHECK(A.apply_inverse(A.apply(u)) == u);
        CHECK(A.apply_power(2, u) == A.apply(A.apply(u)));
        CHECK(A.apply_power(-1, u) == A.apply_inverse(u));
    }
}

TEST_CASE("line translation with a non-uniform density rescales mass") {
    Measure mu(Space::line(), StepFunction({{Scalar(0), Scalar(1), Scalar(2)}}));
    InducedAut A(PAMap::translation(Scalar(1), Space::line()), mu);
    StepFunction u = StepFunction::indicator(Scalar(0), Scalar(1));
    CHECK(A.apply(u) == StepFunction({{Scalar(1), Scalar(2), Scalar(2)}}));
    CHECK(norm1(A.apply(u), mu) == norm1(u, mu));
}

TEST_CASE("p = 2 exact when derivative values are perfect squares") {
    Measure mu = Measure::lebesgue_unit();
    InducedAut A(PAMap::rotation(Scalar(Rat(1, 3)), Space::unit()), mu, PExponent{Rat(2)});
    StepFunction u = StepFunction::indicator(Scalar(0), Scalar(Rat(1, 2)));
    // derivative is 1, so the p = 2 action is plain composition
    CHECK(A.apply(u) == StepFunction::indicator(Scalar(Rat(1, 3)), Scalar(Rat(5, 6))));

    std::vector<Branch> bs{{{Scalar(0), Scalar(Rat(1, 2))}, Rat(1, 4), Scalar(0)},
                           {{Scalar(Rat(1, 2)), Scalar(1)}, Rat(7, 4), Scalar(Rat(-3, 4))}};
    InducedAut B(PAMap::from_branches(Space::unit(), bs), mu, PExponent{Rat(2)});
    // indicator of the first branch: derivative 4, sqrt = 2, exact
    CHECK(B.apply(StepFunction::indicator(Scalar(0), Scalar(Rat(1, 2)))) ==
          StepFunction({{Scalar(0), Scalar(Rat(1, 8)), Scalar(2)}}));
    // full indicator touches derivative 4/7 whose root is irrational
    StepFunction full = StepFunction::indicator(Scalar(0), Scalar(1));
    CHECK_THROWS_AS(B.apply(full), error);
    auto g = B.apply_general(full, Rat(1, 1000));
    auto* es = std::get_if<EnclosedStep>(&g);
    REQUIRE(es != nullptr);
    bool found = false;
    for (const auto& p : es->pieces)
        if (p.lo == Scalar(Rat(1, 8))) {
            // contains sqrt(4/7): check 7 * v^2 straddles 4
            CHECK(p.value.lo * p.value.lo * 7 <= Rat(4));
            CHECK(p.value.hi * p.value.hi * 7 >= Rat(4));
            CHECK(p.value.width() <= Rat(1, 500));
            found = true;
        }
    CHECK(found);
}

TEST_CASE("support bisection recovers the inverse rotation pointwise") {
    InducedAut A = golden_induced();
    Scalar a = Scalar::alpha(golden_alpha());
    Scalar r(Rat(3, 10));
    Enclosure box = A.support_inf_point(r, Rat(1, 1 << 16));
    // sigma^-1(3/10) = 3/10 - alpha + 1
    Scalar expect = Scalar(Rat(13, 10)) - a;
    CHECK(Scalar(box.lo) <= expect);
    CHECK(expect <= Scalar(box.hi));
}

TEST_CASE("reconstruction returns the verified inverse transformation") {
    InducedAut A = golden_induced();
    AlphaRef al = golden_alpha();
    CHECK(A.reconstruct() ==
          PAMap::rotation(Scalar(1) - Scalar::alpha(al), Space::unit(al)));

    InducedAut I(PAMap::identity(Space::unit()), Measure::lebesgue_unit());
    CHECK(I.reconstruct().is_identity());

    std::mt19937_64 rng(41);
    for (int it = 0; it < 10; ++it) {
        PAMap sigma = random_pamap(rng, 2 + it % 3);
        InducedAut B(sigma, Measure::lebesgue_unit());
        PAMap rec = B.reconstruct();
        std::uniform_int_distribution<long> num(0, 255);
        for (int k = 0; k < 10; ++k) {
            Scalar x(Rat(num(rng), 256));
            CHECK(rec.apply(x) == sigma.inverse().apply(x));
        }
    }
}
