#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "generators.hpp"
#include "ipl/algebra.hpp"
#include "ipl/oracle.hpp"

using namespace ipl;

TEST_CASE("g4ip on intuitionistic theorems") {
    CHECK(g4ip_provable(parse("(P | Q) & ~Q -> P")));
    CHECK(g4ip_provable(parse("P -> P")));
    CHECK(g4ip_provable(parse("P -> Q -> P")));
    CHECK(g4ip_provable(parse("(P -> Q -> R) -> (P -> Q) -> P -> R")));
    CHECK(g4ip_provable(parse("false -> P")));
    CHECK(g4ip_provable(parse("~~(P | ~P)")));
    CHECK(g4ip_provable(parse("(P -> Q) -> ~Q -> ~P")));
    CHECK(g4ip_provable(parse("~(P | Q) <-> ~P & ~Q")));
    CHECK(g4ip_provable(parse("~P | ~Q -> ~(P & Q)")));
    CHECK(g4ip_provable(parse("(P & Q -> R) <-> (P -> Q -> R)")));
    CHECK(g4ip_provable(parse("~~~P <-> ~P")));
    CHECK(g4ip_provable(parse("((P -> Q) -> R) -> P -> Q -> R")));
    CHECK(g4ip_provable(parse("(P | P) <-> P")));
}

TEST_CASE("g4ip rejects classically-valid but intuitionistically-unprovable formulas") {
    CHECK_FALSE(g4ip_provable(parse("P | ~P")));
    CHECK_FALSE(g4ip_provable(parse("~~P -> P")));
    CHECK_FALSE(g4ip_provable(parse("((P -> Q) -> P) -> P")));
    CHECK_FALSE(g4ip_provable(parse("(P -> Q) | (Q -> P)")));
    CHECK_FALSE(g4ip_provable(parse("(~Q -> ~P) -> P -> Q")));
    CHECK_FALSE(g4ip_provable(parse("~(P & Q) -> ~P | ~Q")));
    CHECK_FALSE(g4ip_provable(parse("(~P -> Q | R) -> (~P -> Q) | (~P -> R)")));
    CHECK_FALSE(g4ip_provable(parse("P"))); // and plain non-theorems
    CHECK_FALSE(g4ip_provable(Formula::bottom()));
}

TEST_CASE("g4ip sequent form") {
    Sequent s{{parse("P"), parse("P -> Q")}, parse("Q")};
    CHECK(g4ip_provable(s));
    Sequent bad{{parse("P | Q")}, parse("P")};
    CHECK_FALSE(g4ip_provable(bad));
}

TEST_CASE("whatever g4ip proves holds classically") {
    std::mt19937 rng(17);
    HeytingAlgebra two = HeytingAlgebra::two();
    int provable = 0;
    for (int n = 0; n < 500; ++n) {
        Formula f = testgen::random_formula(rng, {"P", "Q", "R"}, 4);
        if (g4ip_provable(f)) {
            ++provable;
            CAPTURE(render(f));
            CHECK(models(two, f));
        }
    }
    CHECK(provable > 20); // the corpus is not degenerate
}
