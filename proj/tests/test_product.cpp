#include "doctest.h"
#include "lplat/product.hpp"
#include "lplat/random_gen.hpp"

#include <random>

using namespace lplat;

namespace {

AlphaRef golden_alpha() {
    static AlphaRef a = AlphaSpec::golden();
    return a;
}

ProductSystem golden_product(const PAMap& f) {
    return ProductSystem(f, Scalar::alpha(golden_alpha()), Measure::lebesgue_unit());
}

}  // namespace

TEST_CASE("lift preserves the norm: vertical fibers carry mass 1") {
    std::mt19937_64 rng(43);
    Measure mu = Measure::lebesgue_unit();
    for (int it = 0; it < 20; ++it) {
        PAMap f = random_pamap(rng, 2 + it % 3);
        ProductSystem P = golden_product(f);
        StepFunction u = random_step(rng);
        CHECK(P.lift(u).norm1(mu) == norm1(u, mu));
    }
}

TEST_CASE("commuting square: product action after lift equals lift after action") {
    std::mt19937_64 rng(47);
    Measure mu = Measure::lebesgue_unit();
    for (int it = 0; it < 20; ++it) {
        PAMap f = random_pamap(rng, 2 + it % 3);
        ProductSystem P = golden_product(f);
        InducedAut A(f, mu);
        StepFunction u = random_step(rng);
        CHECK(P.apply(P.lift(u)) == P.lift(A.apply(u)));
    }
}

TEST_CASE("product action is invertible on genuinely 2-D data") {
    std::mt19937_64 rng(53);
    PAMap f = random_pamap(rng, 3);
    ProductSystem P = golden_product(f);
    Step2D F({{{Scalar(0), Scalar(Rat(1, 2))}, {Scalar(Rat(1, 4)), Scalar(Rat(3, 4))}, Scalar(2)},
              {{Scalar(Rat(1, 2)), Scalar(1)}, {Scalar(0), Scalar(Rat(1, 4))}, Scalar(-1)}});
    CHECK(P.apply_inverse(P.apply(F)) == F);
    CHECK(P.apply(P.apply_inverse(F)) == F);
    CHECK(P.apply(F).norm1(Measure::lebesgue_unit()) == F.norm1(Measure::lebesgue_unit()));
}

TEST_CASE("product of any map with an irrational rotation is aperiodic") {
    std::mt19937_64 rng(59);
    for (int it = 0; it < 5; ++it) {
        ProductSystem P = golden_product(random_pamap(rng, 3));
        AperiodicityReport rep = P.aperiodicity(10);
        CHECK(rep.certified_all_n);
        for (const auto& e : rep.per_n) {
            CHECK(e.verdict == PeriodicityVerdict::Aperiodic);
            CHECK(e.periodic_mass.is_zero());
        }
    }
}

TEST_CASE("rational vertical rotation is rejected") {
    CHECK_THROWS_AS(ProductSystem(PAMap::identity(Space::unit()), Scalar(Rat(1, 3)),
                                  Measure::lebesgue_unit()),
                    error);
}

TEST_CASE("rectangle algebra: addition, subtraction, pointwise lookup") {
    Step2D F({{{Scalar(0), Scalar(Rat(1, 2))}, {Scalar(0), Scalar(1)}, Scalar(1)}});
    Step2D G({{{Scalar(Rat(1, 4)), Scalar(Rat(3, 4))}, {Scalar(0), Scalar(Rat(1, 2))}, Scalar(3)}});
    Step2D H = F + G;
    CHECK(H.at(Scalar(Rat(3, 8)), Scalar(Rat(1, 4))) == Scalar(4));
    CHECK(H.at(Scalar(Rat(3, 8)), Scalar(Rat(3, 4))) == Scalar(1));
    CHECK(H.at(Scalar(Rat(5, 8)), Scalar(Rat(1, 4))) == Scalar(3));
    CHECK((H - G) == F);
    CHECK((F - F).is_zero());
}
