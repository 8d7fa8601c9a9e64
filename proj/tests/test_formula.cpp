#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "generators.hpp"
#include "ipl/formula.hpp"

using namespace ipl;

namespace {
const Formula P = Formula::var("P");
const Formula Q = Formula::var("Q");
const Formula R = Formula::var("R");
} // namespace

TEST_CASE("parser follows the documented precedence") {
    CHECK(parse("P -> Q -> R") == Formula::imp(P, Formula::imp(Q, R)));
    CHECK(parse("~P") == Formula::imp(P, Formula::bottom()));
    CHECK(parse("(P | Q) & ~Q -> P") ==
          Formula::imp(Formula::conj(Formula::disj(P, Q), Formula::neg(Q)), P));
    CHECK(parse("P & Q | R") == Formula::disj(Formula::conj(P, Q), R));
    CHECK(parse("~P & Q") == Formula::conj(Formula::neg(P), Q));
    CHECK(parse("P | Q -> R") == Formula::imp(Formula::disj(P, Q), R));
    CHECK(parse("P & Q & R") == Formula::conj(Formula::conj(P, Q), R));
    CHECK(parse("P <-> Q") == Formula::conj(Formula::imp(P, Q), Formula::imp(Q, P)));
    CHECK(parse("P <-> Q <-> R") == Formula::iff(P, Formula::iff(Q, R)));
    CHECK(parse("true") == Formula::top());
    CHECK(parse("false") == Formula::bottom());
    CHECK(parse("~~P") == Formula::neg(Formula::neg(P)));
    CHECK(parse("  P\t->\nQ ") == Formula::imp(P, Q));
    CHECK(parse("trueish") == Formula::var("trueish"));
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(parse("P ->"), ParseError);
    CHECK_THROWS_AS(parse("(P"), ParseError);
    CHECK_THROWS_AS(parse("P Q"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("P # Q"), ParseError);
    try {
        parse("P & ) Q");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position == 5);
        CHECK(std::string(e.what()).find("position 5") != std::string::npos);
    }
}

TEST_CASE("render elides brackets and prints negation sugar") {
    CHECK(render(Formula::imp(P, Formula::imp(Q, R))) == "P -> Q -> R");
    CHECK(render(Formula::imp(Formula::imp(P, Q), R)) == "(P -> Q) -> R");
    CHECK(render(Formula::imp(P, Formula::bottom())) == "~P");
    CHECK(render(Formula::conj(Formula::disj(P, Q), Formula::neg(Q))) == "(P | Q) & ~Q");
    CHECK(render(Formula::neg(Formula::conj(P, Q))) == "~(P & Q)");
    CHECK(render(Formula::neg(Formula::neg(P))) == "~~P");
    CHECK(render(Formula::disj(P, Formula::imp(Q, R))) == "P | (Q -> R)");
    CHECK(render(Formula::conj(P, Formula::conj(Q, R))) == "P & (Q & R)");
    CHECK(render(Formula::top()) == "true");
}

TEST_CASE("parse after render is the identity on a random corpus") {
    std::mt19937 rng(20240811);
    for (int i = 0; i < 500; ++i) {
        Formula f = testgen::random_formula(rng, {"P", "Q", "R", "S"}, 5);
        CAPTURE(render(f));
        CHECK(parse(render(f)) == f);
    }
}

TEST_CASE("substitution") {
    CHECK(substitute(Formula::imp(P, Q), "P", Formula::top()) == Formula::imp(Formula::top(), Q));
    CHECK(substitute(Formula::imp(P, P), "P", Q) == Formula::imp(Q, Q));
    CHECK(substitute(Q, "P", Formula::top()) == Q);

    // Sequential substitution agrees with the simultaneous one when the
    // variables are distinct and the second does not occur in the first
    // replacement.
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        Formula c = testgen::random_formula(rng, {"P", "Q", "R"}, 4);
        Formula a = testgen::random_formula(rng, {"R"}, 2); // never mentions Q
        Formula b = testgen::random_formula(rng, {"P", "R"}, 2);
        Formula sequential = substitute(substitute(c, "P", a), "Q", b);
        Formula simultaneous = substitute_all(c, {{"P", a}, {"Q", b}});
        CHECK(sequential == simultaneous);
    }
}

TEST_CASE("subformulas enumerates distinct non-atomic shapes in pre-order") {
    Formula ex1 = parse("(P | Q) & ~Q -> P");
    auto subs = subformulas(ex1);
    REQUIRE(subs.size() == 4);
    CHECK(subs[0] == ex1);
    CHECK(subs[1] == parse("(P | Q) & ~Q"));
    CHECK(subs[2] == parse("P | Q"));
    CHECK(subs[3] == parse("~Q"));

    CHECK(subformulas(P).empty());
    CHECK(subformulas(Formula::bottom()).empty());

    Formula shared = Formula::conj(Formula::imp(P, Q), Formula::imp(P, Q));
    auto s2 = subformulas(shared);
    REQUIRE(s2.size() == 2);
    CHECK(s2[0] == shared);
    CHECK(s2[1] == Formula::imp(P, Q));
}

TEST_CASE("subformula lists are closed under non-atomic children") {
    std::mt19937 rng(99);
    for (int i = 0; i < 200; ++i) {
        Formula f = testgen::random_formula(rng, {"P", "Q"}, 4);
        auto subs = subformulas(f);
        auto contains = [&subs](const Formula& g) {
            for (const auto& s : subs)
                if (s == g) return true;
            return false;
        };
        for (const auto& s : subs) {
            if (!s.left().is_atomic()) CHECK(contains(s.left()));
            if (!s.right().is_atomic()) CHECK(contains(s.right()));
        }
    }
}

TEST_CASE("connective_count") {
    CHECK(connective_count(P) == 0);
    CHECK(connective_count(Formula::neg(P)) == 1);
    CHECK(connective_count(parse("(P -> Q) -> R")) == 2);
    CHECK(connective_count(Formula::top()) == 0);

    std::mt19937 rng(3);
    for (int i = 0; i < 100; ++i) {
        Formula a = testgen::random_formula(rng, {"P", "Q"}, 3);
        Formula b = testgen::random_formula(rng, {"Q", "R"}, 3);
        CHECK(connective_count(Formula::conj(a, b)) == 1 + connective_count(a) + connective_count(b));
        CHECK(connective_count(Formula::imp(a, b)) == 1 + connective_count(a) + connective_count(b));
    }
}

TEST_CASE("variables are reported in lexicographic order") {
    auto vars = variables(parse("Zeta & Alpha -> Alpha | Mid"));
    CHECK(vars == std::set<std::string>{"Alpha", "Mid", "Zeta"});
    CHECK(variables(Formula::bottom()).empty());
}
