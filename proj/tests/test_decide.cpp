#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "generators.hpp"
#include "ipl/decide.hpp"
#include "ipl/oracle.hpp"

using namespace ipl;

namespace {

const Element F = Element::two(false);
const Element T = Element::two(true);

Element old1(const Element& e) { return Element::old(Element::tuple({e})); }

BasicFormula basic(const std::string& text) {
    auto b = classify_basic(parse(text));
    REQUIRE(b.has_value());
    return *b;
}

RegularFormula goal_of(const std::vector<std::string>& conjuncts, const std::string& succedent) {
    std::vector<BasicFormula> ctx;
    for (const auto& c : conjuncts) ctx.push_back(basic(c));
    return RegularFormula(std::move(ctx),
                          succedent == "false" ? Atom::bottom() : Atom::variable(succedent));
}

const Element& assigned(const CounterModel& m, const std::string& var) {
    auto it = m.interpretation.assignment.find(var);
    REQUIRE(it != m.interpretation.assignment.end());
    return it->second;
}

void check_rank_descent(const TraceNode& node) {
    for (const auto& child : node.children) {
        CAPTURE(node.goal, child.goal);
        CHECK(child.rank < node.rank);
        CHECK(child.s <= node.s);
        check_rank_descent(child);
    }
}

int trace_depth(const TraceNode& node) {
    int d = 0;
    for (const auto& c : node.children) d = std::max(d, trace_depth(c));
    return d + 1;
}

} // namespace

TEST_CASE("decide reproduces the worked examples exactly") {
    SECTION("disjunctive syllogism instance is provable") {
        Verdict v = decide(parse("(P | Q) & ~Q -> P"));
        CHECK(v.is_provable());
    }
    SECTION("Peirce's law is refuted in J_1") {
        Verdict v = decide(parse("((P -> Q) -> P) -> P"));
        REQUIRE_FALSE(v.is_provable());
        const CounterModel& m = v.model();
        CHECK(m.algebra() == jaskowski(1));
        CHECK(m.algebra() == HeytingAlgebra::gamma(HeytingAlgebra::product({HeytingAlgebra::two()})));
        CHECK(assigned(m, "P") == Element::star());
        CHECK(assigned(m, "Q") == old1(F));
        CHECK(m.value != top_of(m.algebra()));
        CHECK(m.value == Element::star());
        CHECK(verify_countermodel(m).ok);
    }
    SECTION("prelinearity is refuted in Gamma(B^2)") {
        Verdict v = decide(parse("(P -> Q) | (Q -> P)"));
        REQUIRE_FALSE(v.is_provable());
        const CounterModel& m = v.model();
        CHECK(m.algebra() ==
              HeytingAlgebra::gamma(HeytingAlgebra::product({HeytingAlgebra::two(), HeytingAlgebra::two()})));
        CHECK(assigned(m, "P") == Element::old(Element::tuple({T, F})));
        CHECK(assigned(m, "Q") == Element::old(Element::tuple({F, T})));
        CHECK(m.value == Element::star());
    }
    SECTION("double negation elimination is refuted at star") {
        Verdict v = decide(parse("~~P -> P"));
        REQUIRE_FALSE(v.is_provable());
        CHECK(v.model().algebra() == jaskowski(1));
        CHECK(assigned(v.model(), "P") == Element::star());
        CHECK(v.model().value == Element::star());
    }
}

TEST_CASE("decide_regular base cases") {
    Verdict v = decide_regular(goal_of({"P"}, "Q"));
    REQUIRE_FALSE(v.is_provable());
    CHECK(v.model().algebra() == HeytingAlgebra::two());
    CHECK(assigned(v.model(), "P") == T);
    CHECK(assigned(v.model(), "Q") == F);

    CHECK(decide_regular(goal_of({"P"}, "P")).is_provable());

    Verdict empty = decide_regular(RegularFormula({}, Atom::variable("Z")));
    REQUIRE_FALSE(empty.is_provable());
    CHECK(empty.model().algebra() == HeytingAlgebra::two());
    CHECK(assigned(empty.model(), "Z") == F);

    // Case i: no variable conjuncts, no degree: the all-f interpretation.
    Verdict ci = decide_regular(goal_of({"P -> Q", "~R", "P & Q -> R"}, "S"));
    REQUIRE_FALSE(ci.is_provable());
    CHECK(ci.model().algebra() == HeytingAlgebra::two());
    for (const auto& [var, e] : ci.model().interpretation.assignment) CHECK(e == F);
}

TEST_CASE("case_two_step outcomes") {
    SECTION("hypothesis equal to the succedent") {
        auto out = case_two_step(goal_of({"P", "Q -> P"}, "P"), "P");
        CHECK(out.kind == CaseTwoOutcome::Kind::Provable);
    }
    SECTION("unused variable is dropped") {
        auto out = case_two_step(goal_of({"P", "Q -> R"}, "Q"), "P");
        REQUIRE(out.kind == CaseTwoOutcome::Kind::Drop);
        CHECK(out.goal->text() == "Q -> R |- Q");
    }
    SECTION("simplification inside the first conjunct mentioning the variable") {
        auto out = case_two_step(goal_of({"P", "Q -> P"}, "Q"), "P");
        REQUIRE(out.kind == CaseTwoOutcome::Kind::Rewrite);
        CHECK(out.goal->text() == "P |- Q"); // Q -> P discharged
    }
    SECTION("a conjunction result splits into two variable conjuncts") {
        auto out = case_two_step(goal_of({"P1", "P1 -> P2 & P3", "P2 & P3 -> P1"}, "P"), "P1");
        REQUIRE(out.kind == CaseTwoOutcome::Kind::Rewrite);
        CHECK(out.goal->text() == "P1, P2, P2 & P3 -> P1, P3 |- P");
    }
    SECTION("disjunctive conjunct with the variable as antecedent splits the goal") {
        auto out = case_two_step(goal_of({"P1", "P2", "P2 -> P | Q", "P3"}, "P"), "P2");
        REQUIRE(out.kind == CaseTwoOutcome::Kind::Split);
        CHECK(out.goal->text() == "P, P1, P2, P3 |- P");
        CHECK(out.goal_right->text() == "P1, P2, P3, Q |- P");
    }
    SECTION("contradiction yields provable") {
        auto out = case_two_step(goal_of({"P", "~P"}, "Q"), "P");
        CHECK(out.kind == CaseTwoOutcome::Kind::Provable);
    }
    SECTION("precondition violations throw") {
        CHECK_THROWS_AS(case_two_step(goal_of({"P -> Q"}, "Q"), "P"), std::invalid_argument);
    }
}

TEST_CASE("simp_var_step implements the substitute-top-then-reduce table") {
    auto step = [](const std::string& var, const std::string& b) {
        return render(simp_var_step(var, basic(b)));
    };
    CHECK(step("P", "P -> Q") == "Q");
    CHECK(step("P", "Q -> P") == "true");
    CHECK(step("P", "~P") == "false");
    CHECK(step("P", "P -> Q & R") == "Q & R");
    CHECK(step("P", "X -> P & R") == "X -> R");
    CHECK(step("P", "P & Q -> R") == "Q -> R");
    CHECK(step("P", "P | Q -> R") == "R");
    CHECK(step("P", "X -> P | R") == "true");
    CHECK(step("P", "P -> Q -> R") == "Q -> R");
    CHECK(step("P", "X -> P -> R") == "X -> R");
    CHECK(step("P", "X -> Q -> P") == "true");
    CHECK(step("P", "P -> ~Q") == "~Q");
    CHECK(step("P", "X -> ~P") == "~X");
    CHECK(step("P", "(P -> Q) -> R") == "Q -> R");
    CHECK(step("P", "(Q -> P) -> R") == "R");
    CHECK(step("P", "(Q -> X) -> P") == "true");
    CHECK(step("P", "~P -> Q") == "true");
    CHECK(step("P", "~Q -> P") == "true");
    // repeated-variable degenerates resolve by the same rule
    CHECK(step("P", "P -> P & R") == "R");
    CHECK(step("P", "P -> P") == "true");
    CHECK(step("P", "P & P -> R") == "R");
    CHECK(step("P", "(P -> P) -> R") == "R");
    CHECK(step("P", "~P -> P") == "true");
    CHECK(step("P", "P -> ~P") == "false");

    CHECK_THROWS_AS(simp_var_step("P", basic("P")), std::invalid_argument);
    CHECK_THROWS_AS(simp_var_step("P", basic("P -> Q | R")), std::invalid_argument);
    CHECK_THROWS_AS(simp_var_step("P", basic("Q -> R")), std::invalid_argument);
    // but a disjunctive conjunct where P is not the antecedent is fine
    CHECK(step("P", "X -> P | R") == "true");
}

TEST_CASE("make_subgoal builds K_i & P_i & (E_i -> R_i) -> E_i") {
    RegularFormula peirce = goal_of({"(P -> Q) -> P"}, "P");
    RegularFormula sub = make_subgoal(peirce, 0);
    CHECK(sub.text() == "P, Q -> P |- Q");

    RegularFormula neg = goal_of({"~P -> R"}, "F");
    RegularFormula sub2 = make_subgoal(neg, 0);
    CHECK(sub2.text() == "P |- false"); // E = bottom drops the top conjunct f -> R

    // The first subgoal that comes up when deciding prelinearity.
    RegularFormula ex3 = goal_of({"P1", "P2 -> Z", "P2 -> P3 | P4", "P3 | P4 -> P2",
                                  "P3 -> P -> Q", "(P -> Q) -> P3", "P4 -> Q -> P", "(Q -> P) -> P4"},
                                 "Z");
    std::size_t idx = 0;
    while (ex3.context()[idx].key() != "(P -> Q) -> P3") ++idx;
    CHECK_THROWS_AS(make_subgoal(ex3, idx), std::invalid_argument); // still has variable conjuncts

    RegularFormula ex3v0 = goal_of({"P2 -> Z", "P2 -> P3 | P4", "P3 | P4 -> P2", "P3 -> P -> Q",
                                    "(P -> Q) -> P3", "P4 -> Q -> P", "(Q -> P) -> P4"},
                                   "Z");
    idx = 0;
    while (ex3v0.context()[idx].key() != "(P -> Q) -> P3") ++idx;
    RegularFormula c1 = make_subgoal(ex3v0, idx);
    CHECK(c1.succedent() == Atom::variable("Q"));
    CHECK(c1.text() ==
          "(Q -> P) -> P4, P, P2 -> P3 | P4, P2 -> Z, P3 -> P -> Q, P3 | P4 -> P2, P4 -> Q -> P, "
          "Q -> P3 |- Q");

    CHECK_THROWS_AS(make_subgoal(goal_of({"P -> Q"}, "Q"), 0), std::invalid_argument);
}

TEST_CASE("apply_simp_imp_imp replaces the conjunct by its consequent") {
    RegularFormula r = goal_of({"(P -> P) -> Q"}, "Q");
    REQUIRE(decide_regular(make_subgoal(r, 0)).is_provable()); // the rewrite's hypothesis
    RegularFormula rewritten = apply_simp_imp_imp(r, 0);
    CHECK(rewritten.text() == "Q |- Q");
    CHECK(decide_regular(rewritten).is_provable());
    CHECK(decide(parse("((P -> P) -> Q) -> Q")).is_provable());
    CHECK(g4ip_provable(parse("((P -> P) -> Q) -> Q")));

    RegularFormula neg = goal_of({"~P -> R", "~P"}, "F");
    std::size_t idx = neg.context()[0].tag() == BasicTag::NotImp ? 0 : 1;
    CHECK(apply_simp_imp_imp(neg, idx).text() == "R, ~P |- F");
    CHECK_THROWS_AS(apply_simp_imp_imp(neg, 1 - idx), std::invalid_argument);
}

TEST_CASE("lift_refutation composes part models through alpha") {
    SECTION("the Peirce lift") {
        RegularFormula peirce = goal_of({"(P -> Q) -> P"}, "P");
        Interpretation part_i{HeytingAlgebra::two(), {}};
        part_i.assignment.insert_or_assign("P", T);
        part_i.assignment.insert_or_assign("Q", F);
        CounterModel part{part_i, make_subgoal(peirce, 0), F};
        REQUIRE(verify_countermodel(part).ok);
        CounterModel lifted = lift_refutation({{0, part}}, peirce);
        CHECK(lifted.algebra() == jaskowski(1));
        CHECK(assigned(lifted, "P") == Element::star());
        CHECK(assigned(lifted, "Q") == old1(F));
        CHECK(verify_countermodel(lifted).ok);
    }
    SECTION("a conjunct outside the degree family stays top under the lift") {
        RegularFormula r = goal_of({"P -> Q", "(R -> S) -> V"}, "U");
        std::size_t idx = r.context()[0].key() == "(R -> S) -> V" ? 0 : 1;
        RegularFormula c = make_subgoal(r, idx);
        Interpretation part_i{HeytingAlgebra::two(), {}};
        for (const auto& var : c.all_variables()) part_i.assignment.insert_or_assign(var, F);
        part_i.assignment.insert_or_assign("R", T);
        part_i.assignment.insert_or_assign("V", T);
        CounterModel part{part_i, c, F};
        REQUIRE(verify_countermodel(part).ok);
        CounterModel lifted = lift_refutation({{idx, part}}, r);
        CHECK(evaluate(lifted.interpretation, parse("P -> Q")) == top_of(lifted.algebra()));
        CHECK(verify_countermodel(lifted).ok);
    }
    CHECK_THROWS_AS(lift_refutation({}, goal_of({"P -> Q"}, "Q")), std::invalid_argument);
}

TEST_CASE("verify_countermodel diagnoses failures") {
    RegularFormula r = goal_of({"P"}, "P");
    Interpretation i{HeytingAlgebra::two(), {}};
    i.assignment.insert_or_assign("P", T);
    CounterModel bogus{i, r, T};
    auto check = verify_countermodel(bogus);
    CHECK_FALSE(check.ok);
    CHECK(check.diagnostic.find("succedent") != std::string::npos);

    Interpretation j{HeytingAlgebra::two(), {}};
    j.assignment.insert_or_assign("P", F);
    CounterModel bad_ctx{j, r, F};
    auto check2 = verify_countermodel(bad_ctx);
    CHECK_FALSE(check2.ok);
    CHECK(check2.diagnostic.find("P") != std::string::npos);

    CounterModel formula_model{j, parse("P | ~P"), F};
    CHECK_FALSE(verify_countermodel(formula_model).ok); // P | ~P is top at P = f
}

TEST_CASE("traces descend strictly in rank and never increase s") {
    std::mt19937 rng(53);
    for (int n = 0; n < 200; ++n) {
        Formula f = testgen::random_formula(rng, {"P", "Q", "R"}, 4);
        Verdict v = decide(f);
        check_rank_descent(v.trace());
        Measure m = measure_parts(regularize(f).goal);
        CHECK(trace_depth(v.trace()) <= m.rank() + 1);
    }
    // Goals revisited across case-iii branches come back as memo leaves.
    Verdict v = decide_regular(goal_of({"(P -> Q) -> R", "(P -> Q) -> S"}, "T"));
    std::function<bool(const TraceNode&)> has_memo = [&](const TraceNode& nd) {
        if (nd.label.rfind("memo", 0) == 0) return true;
        for (const auto& c : nd.children)
            if (has_memo(c)) return true;
        return false;
    };
    CHECK(has_memo(v.trace()));
}

TEST_CASE("decide agrees with the oracle on small formulas") {
    auto atoms = std::vector<Formula>{Formula::var("P"), Formula::var("Q"), Formula::bottom(),
                                      Formula::top()};
    for (const auto& f : testgen::exhaustive_formulas(atoms, 2)) {
        CAPTURE(render(f));
        CHECK(decide(f).is_provable() == g4ip_provable(f));
    }
    std::mt19937 rng(61);
    for (int n = 0; n < 300; ++n) {
        Formula f = testgen::random_formula(rng, {"P", "Q", "R", "S"}, 4);
        CAPTURE(render(f));
        CHECK(decide(f).is_provable() == g4ip_provable(f));
    }
}

TEST_CASE("refuted formulas evaluate below top under the returned model") {
    std::mt19937 rng(71);
    int refuted = 0;
    for (int n = 0; n < 300; ++n) {
        Formula f = testgen::random_formula(rng, {"P", "Q", "R"}, 4);
        Verdict v = decide(f);
        if (v.is_provable()) continue;
        ++refuted;
        const CounterModel& m = v.model();
        CHECK(std::get<Formula>(m.target) == f);
        CHECK(evaluate(m.interpretation, f) != top_of(m.algebra()));
        CHECK(verify_countermodel(m).ok);
    }
    CHECK(refuted > 100);
}

TEST_CASE("jaskowski_level measures where an algebra first fits") {
    CHECK(jaskowski_level(HeytingAlgebra::two()) == 0);
    CHECK(jaskowski_level(jaskowski(1)) == 1);
    CHECK(jaskowski_level(jaskowski(2)) == 2);
    HeytingAlgebra two = HeytingAlgebra::two();
    CHECK(jaskowski_level(HeytingAlgebra::gamma(HeytingAlgebra::product({two, two}))) == 2);
    CHECK(jaskowski_level(HeytingAlgebra::gamma(HeytingAlgebra::product({jaskowski(1), two}))) == 2);
    CHECK(jaskowski_level(HeytingAlgebra::gamma(two)) == 1);
    CHECK_THROWS_AS(jaskowski_level(HeytingAlgebra::product({two, two})), std::invalid_argument);
}

TEST_CASE("embed_into_jaskowski is a strict homomorphism from Gamma(B^2) to J_2") {
    HeytingAlgebra two = HeytingAlgebra::two();
    HeytingAlgebra gb2 = HeytingAlgebra::gamma(HeytingAlgebra::product({two, two}));
    HeytingAlgebra j2 = jaskowski(2);
    auto embed = [&](const Element& x) { return embed_into_jaskowski(gb2, 2, x); };
    CHECK(embed(top_of(gb2)) == top_of(j2));
    CHECK(embed(bottom_of(gb2)) == bottom_of(j2));
    for (const auto& x : enumerate_elements(gb2)) {
        CHECK(well_formed(j2, embed(x)));
        if (x != top_of(gb2)) CHECK(embed(x) != top_of(j2));
        for (const auto& y : enumerate_elements(gb2))
            for (Op op : {Op::Meet, Op::Join, Op::Impl}) {
                CAPTURE(x.text(), y.text(), static_cast<int>(op));
                CHECK(embed(operate(gb2, op, x, y)) == operate(j2, op, embed(x), embed(y)));
            }
    }
}

TEST_CASE("counter-models restate inside the Jaskowski sequence") {
    Verdict peirce = decide(parse("((P -> Q) -> P) -> P"));
    CounterModel p1 = restate_in_jaskowski(peirce.model());
    CHECK(p1.algebra() == jaskowski(1)); // already J_1
    CHECK(assigned(p1, "P") == Element::star());

    Verdict prelin = decide(parse("(P -> Q) | (Q -> P)"));
    CounterModel p2 = restate_in_jaskowski(prelin.model());
    CHECK(p2.algebra() == jaskowski(2));
    CHECK(p2.value == Element::star()); // still evaluates to the co-atom of J_2
    CHECK(verify_countermodel(p2).ok);

    CounterModel p3 = restate_in_jaskowski(prelin.model(), 3);
    CHECK(p3.algebra() == jaskowski(3));
    CHECK(verify_countermodel(p3).ok);
}
