#pragma once

// The decision procedure.  A regular goal K -> F is decided by recursion on
// its measure:
//
//   case i    no variable conjuncts, no (P -> E) -> R conjuncts: the all-f
//             interpretation in B strongly refutes the goal;
//   case ii   some conjunct is a bare variable P: if P is the succedent the
//             goal is provable; if P occurs nowhere else it is dropped (a
//             refutation is repaired by sending P to top); if P is the
//             antecedent of P -> Q | R the goal splits in two; otherwise the
//             conjunct containing P is simplified by substituting top for P;
//   case iii  no variable conjuncts but some (P -> E) -> R: for each such
//             conjunct decide the subgoal K' /\ P /\ (E -> R) -> E.  The
//             first provable subgoal licenses rewriting the conjunct to R
//             (iii(a)); if every subgoal is refuted, the refutations combine
//             into a product interpretation whose composition with the map
//             into Gamma(product) strongly refutes the goal (iii(b)).
//
// Every refutation returned anywhere is re-verified by evaluation; a
// verification failure signals a bug, never an expected condition.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ipl/algebra.hpp"
#include "ipl/formula.hpp"
#include "ipl/normalize.hpp"

namespace ipl {

// ---------------------------------------------------------------------------
// Counter-models.

struct CounterModel {
    Interpretation interpretation;
    /// What the interpretation refutes: a regular goal (context must be top,
    /// succedent non-top) or a plain formula (value non-top).
    std::variant<Formula, RegularFormula> target;
    /// Evaluation of the succedent (regular goal) or of the formula.
    Element value;

    const HeytingAlgebra& algebra() const { return interpretation.algebra; }
};

inline CheckResult verify_countermodel(const CounterModel& m) {
    const Element top = top_of(m.algebra());
    if (const auto* goal = std::get_if<RegularFormula>(&m.target)) {
        for (const auto& b : goal->context()) {
            if (evaluate(m.interpretation, b.formula()) != top)
                return {false, "context entry not top: " + b.key()};
        }
        Element succ = evaluate(m.interpretation, goal->succedent().to_formula());
        if (succ == top) return {false, "succedent evaluates to top"};
        if (succ != m.value) return {false, "recorded value does not match evaluation"};
        return {};
    }
    const Formula& f = std::get<Formula>(m.target);
    Element val = evaluate(m.interpretation, f);
    if (val == top) return {false, "formula evaluates to top"};
    if (val != m.value) return {false, "recorded value does not match evaluation"};
    return {};
}

// ---------------------------------------------------------------------------
// Traces.

struct TraceNode {
    std::string label;
    std::string goal;
    int s = 0;    // the measure c + d + v
    int rank = 0; // 2c + d + v, the strictly decreasing quantity
    std::vector<TraceNode> children;
};

namespace detail {
inline void render_trace_into(const TraceNode& n, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(2 * depth), ' ');
    out += "[" + n.label + "] " + n.goal + " s=" + std::to_string(n.s) + "\n";
    for (const auto& c : n.children) render_trace_into(c, depth + 1, out);
}
} // namespace detail

inline std::string render_trace(const TraceNode& n) {
    std::string out;
    detail::render_trace_into(n, 0, out);
    return out;
}

class Verdict {
public:
    static Verdict provable(TraceNode trace) { return Verdict(true, std::nullopt, std::move(trace)); }
    static Verdict refuted(CounterModel model, TraceNode trace) {
        return Verdict(false, std::move(model), std::move(trace));
    }

    bool is_provable() const { return provable_; }
    const CounterModel& model() const {
        if (provable_) throw std::logic_error("Verdict::model: provable verdict");
        return *model_;
    }
    const TraceNode& trace() const { return trace_; }

private:
    Verdict(bool p, std::optional<CounterModel> m, TraceNode t)
        : provable_(p), model_(std::move(m)), trace_(std::move(t)) {}

    bool provable_;
    std::optional<CounterModel> model_;
    TraceNode trace_;
};

// ---------------------------------------------------------------------------
// The individual steps, exposed for direct testing.

/// Substitutes top for p in b and reduces.  The result has strictly fewer
/// connectives and is top, bottom, a variable, a conjunction of two
/// variables, or again basic.
inline Formula simp_var_step(const std::string& p, const BasicFormula& b) {
    if (b.tag() == BasicTag::Var) throw std::invalid_argument("simp_var_step: bare variable conjunct");
    if (b.tag() == BasicTag::ImpVOr && b.formula().left().name() == p)
        throw std::invalid_argument("simp_var_step: disjunctive conjunct " + b.key() + " must be split");
    if (!variables(b.formula()).count(p))
        throw std::invalid_argument("simp_var_step: " + p + " does not occur in " + b.key());
    Formula c = reduce(substitute(b.formula(), p, Formula::top()));
    if (connective_count(c) >= connective_count(b.formula()))
        throw std::logic_error("simp_var_step did not shrink " + b.key());
    return c;
}

struct CaseTwoOutcome {
    enum class Kind { Provable, Drop, Rewrite, Split };
    Kind kind;
    std::optional<RegularFormula> goal;       // Drop/Rewrite, and the left Split goal
    std::optional<RegularFormula> goal_right; // right Split goal
    std::string note;
};

namespace detail {

inline RegularFormula replace_conjunct(const RegularFormula& r, const BasicFormula& victim,
                                       const std::vector<BasicFormula>& with) {
    std::vector<BasicFormula> ctx;
    for (const auto& c : r.context())
        if (c != victim) ctx.push_back(c);
    for (const auto& c : with) ctx.push_back(c);
    return RegularFormula(std::move(ctx), r.succedent());
}

inline BasicFormula var_conjunct(const std::string& name) {
    return BasicFormula(Formula::var(name), BasicTag::Var);
}

inline BasicFormula classify_or_die(const Formula& f) {
    auto b = classify_basic(f);
    if (!b) throw std::logic_error("expected a basic formula: " + render(f));
    return std::move(*b);
}

} // namespace detail

/// One case-ii step on the variable conjunct p.
inline CaseTwoOutcome case_two_step(const RegularFormula& r, const std::string& p) {
    const BasicFormula p_entry = detail::var_conjunct(p);
    bool present = false;
    for (const auto& c : r.context()) present |= (c == p_entry);
    if (!present) throw std::invalid_argument("case_two_step: " + p + " is not a conjunct");

    if (!r.succedent().is_bottom() && r.succedent().name() == p)
        return {CaseTwoOutcome::Kind::Provable, std::nullopt, std::nullopt, "succedent " + p + " is a hypothesis"};

    const BasicFormula* b = nullptr;
    for (const auto& c : r.context()) {
        if (c == p_entry) continue;
        if (variables(c.formula()).count(p)) {
            b = &c;
            break;
        }
    }
    if (!b)
        return {CaseTwoOutcome::Kind::Drop, detail::replace_conjunct(r, p_entry, {}), std::nullopt,
                "drop unused " + p};

    if (b->tag() == BasicTag::ImpVOr && b->formula().left().name() == p) {
        Formula q = b->formula().right().left(), s = b->formula().right().right();
        auto left = detail::replace_conjunct(r, *b, {detail::var_conjunct(q.name())});
        auto right = detail::replace_conjunct(r, *b, {detail::var_conjunct(s.name())});
        return {CaseTwoOutcome::Kind::Split, std::move(left), std::move(right), "split " + b->key()};
    }

    Formula c = simp_var_step(p, *b);
    if (c.is(Kind::Bottom))
        return {CaseTwoOutcome::Kind::Provable, std::nullopt, std::nullopt,
                b->key() + " collapses to false"};
    if (c.is(Kind::Top))
        return {CaseTwoOutcome::Kind::Rewrite, detail::replace_conjunct(r, *b, {}), std::nullopt,
                "discharge " + b->key()};
    std::vector<BasicFormula> with;
    if (c.is(Kind::And)) { // a conjunction of two variables
        with.push_back(detail::classify_or_die(c.left()));
        with.push_back(detail::classify_or_die(c.right()));
    } else {
        with.push_back(detail::classify_or_die(c));
    }
    return {CaseTwoOutcome::Kind::Rewrite, detail::replace_conjunct(r, *b, with), std::nullopt,
            "simplify " + b->key() + " to " + render(c)};
}

/// The case-iii subgoal K_i /\ P_i /\ (E_i -> R_i) -> E_i for conjunct i of
/// shape (P_i -> E_i) -> R_i.  When E_i is bottom the conjunct E_i -> R_i
/// reduces to top and is omitted.
inline RegularFormula make_subgoal(const RegularFormula& r, std::size_t i) {
    if (i >= r.context().size()) throw std::invalid_argument("make_subgoal: index out of range");
    if (measure_parts(r).variables != 0)
        throw std::invalid_argument("make_subgoal: goal still has variable conjuncts");
    const BasicFormula& b = r.context()[i];
    if (!counts_toward_degree(b.tag()))
        throw std::invalid_argument("make_subgoal: conjunct " + b.key() + " is not (P -> E) -> R");
    Formula antecedent = b.formula().left(); // P -> E
    Formula succ_var = b.formula().right();  // R
    std::string p = antecedent.left().name();
    Atom e = *as_atom(antecedent.right());

    std::vector<BasicFormula> ctx;
    for (std::size_t j = 0; j < r.context().size(); ++j)
        if (j != i) ctx.push_back(r.context()[j]);
    ctx.push_back(detail::var_conjunct(p));
    if (!e.is_bottom())
        ctx.push_back(detail::classify_or_die(Formula::imp(e.to_formula(), succ_var)));
    return RegularFormula(std::move(ctx), std::move(e));
}

/// Case iii(a): once K_i /\ P_i /\ (E_i -> R_i) -> E_i is known provable,
/// conjunct i may be replaced by R_i without changing provability.
inline RegularFormula apply_simp_imp_imp(const RegularFormula& r, std::size_t i) {
    if (i >= r.context().size()) throw std::invalid_argument("apply_simp_imp_imp: index out of range");
    const BasicFormula& b = r.context()[i];
    if (!counts_toward_degree(b.tag()))
        throw std::invalid_argument("apply_simp_imp_imp: conjunct " + b.key() + " is not (P -> E) -> R");
    return detail::replace_conjunct(r, b, {detail::var_conjunct(b.formula().right().name())});
}

/// Case iii(b): combine one strong refutation per (P -> E) -> R conjunct into
/// a refutation of r itself.  The part interpretations form a product
/// interpretation I (variables a part does not assign default to bottom in
/// that component) and the returned interpretation is alpha composed with I,
/// living in Gamma(product of the part algebras).
inline CounterModel lift_refutation(const std::vector<std::pair<std::size_t, CounterModel>>& parts,
                                    const RegularFormula& r) {
    if (parts.empty()) throw std::invalid_argument("lift_refutation: no parts");
    std::vector<HeytingAlgebra> factors;
    factors.reserve(parts.size());
    for (const auto& [idx, m] : parts) {
        (void)idx;
        factors.push_back(m.algebra());
    }
    HeytingAlgebra product = HeytingAlgebra::product(factors);
    HeytingAlgebra lifted = HeytingAlgebra::gamma(product);

    Interpretation interp{lifted, {}};
    for (const auto& var : r.all_variables()) {
        std::vector<Element> comps;
        comps.reserve(parts.size());
        for (const auto& [idx, m] : parts) {
            (void)idx;
            auto it = m.interpretation.assignment.find(var);
            comps.push_back(it != m.interpretation.assignment.end() ? it->second
                                                                    : bottom_of(m.algebra()));
        }
        interp.assignment.insert_or_assign(var, alpha(product, Element::tuple(std::move(comps))));
    }
    Element value = evaluate(interp, r.succedent().to_formula());
    CounterModel model{std::move(interp), r, std::move(value)};
    if (auto check = verify_countermodel(model); !check)
        throw std::logic_error("lift_refutation produced an invalid model: " + check.diagnostic);
    return model;
}

// ---------------------------------------------------------------------------
// The engine.

namespace detail {

struct Outcome {
    bool provable = false;
    std::optional<CounterModel> model;
};

class Engine {
public:
    Outcome run(const RegularFormula& r, TraceNode& node) {
        Measure m = measure_parts(r);
        node.goal = r.text();
        node.s = m.s();
        node.rank = m.rank();
        if (auto it = memo_.find(node.goal); it != memo_.end()) {
            node.label = it->second.provable ? "memo: provable" : "memo: refuted";
            return it->second;
        }
        Outcome out = dispatch(r, m, node);
        if (!out.provable) {
            if (auto check = verify_countermodel(*out.model); !check)
                throw std::logic_error("counter-model for " + node.goal +
                                       " failed verification: " + check.diagnostic);
        }
        memo_.emplace(node.goal, out);
        return out;
    }

private:
    Outcome dispatch(const RegularFormula& r, const Measure& m, TraceNode& node) {
        // The succedent occurring as a hypothesis settles the goal at once.
        if (!r.succedent().is_bottom()) {
            const BasicFormula f_entry = var_conjunct(r.succedent().name());
            for (const auto& c : r.context())
                if (c == f_entry) {
                    node.label = "case ii: hypothesis " + r.succedent().name();
                    return {true, std::nullopt};
                }
        }
        if (m.variables == 0 && m.degree == 0) return case_one(r, node);
        if (m.variables > 0) return case_two(r, node);
        return case_three(r, node);
    }

    // Every basic formula outside the variable and (P -> E) -> R families is
    // top under the interpretation sending every variable to f, and the
    // succedent is not.
    Outcome case_one(const RegularFormula& r, TraceNode& node) {
        node.label = "case i: refuted in B";
        HeytingAlgebra two = HeytingAlgebra::two();
        Interpretation interp{two, {}};
        for (const auto& var : r.all_variables()) interp.assignment.insert_or_assign(var, Element::two(false));
        Element value = evaluate(interp, r.succedent().to_formula());
        return refute({std::move(interp), r, std::move(value)});
    }

    Outcome case_two(const RegularFormula& r, TraceNode& node) {
        bool all_vars = true;
        const BasicFormula* p_entry = nullptr;
        for (const auto& c : r.context()) {
            if (c.tag() == BasicTag::Var) {
                if (!p_entry) p_entry = &c;
            } else {
                all_vars = false;
            }
        }
        if (all_vars) {
            // Hypotheses to t, the (necessarily absent) succedent to f.
            node.label = "case ii: all hypotheses are variables";
            HeytingAlgebra two = HeytingAlgebra::two();
            Interpretation interp{two, {}};
            for (const auto& c : r.context())
                interp.assignment.insert_or_assign(c.formula().name(), Element::two(true));
            if (!r.succedent().is_bottom())
                interp.assignment.insert_or_assign(r.succedent().name(), Element::two(false));
            Element value = evaluate(interp, r.succedent().to_formula());
            return refute({std::move(interp), r, std::move(value)});
        }

        const std::string p = p_entry->formula().name();
        CaseTwoOutcome step = case_two_step(r, p);
        node.label = "case ii: " + step.note;
        switch (step.kind) {
        case CaseTwoOutcome::Kind::Provable: return {true, std::nullopt};
        case CaseTwoOutcome::Kind::Drop: {
            Outcome sub = recurse(*step.goal, node);
            if (sub.provable) return sub;
            // p occurs nowhere in the reduced goal; mapping it to top keeps
            // the dropped conjunct top and repairs the refutation.
            return refute(retarget(*sub.model, r, {{p, top_of(sub.model->algebra())}}));
        }
        case CaseTwoOutcome::Kind::Rewrite: {
            Outcome sub = recurse(*step.goal, node);
            if (sub.provable) return sub;
            return refute(retarget(*sub.model, r, {}));
        }
        case CaseTwoOutcome::Kind::Split: {
            Outcome left = recurse(*step.goal, node);
            if (!left.provable) return refute(retarget(*left.model, r, {}));
            Outcome right = recurse(*step.goal_right, node);
            if (!right.provable) return refute(retarget(*right.model, r, {}));
            return {true, std::nullopt};
        }
        }
        throw std::logic_error("unreachable");
    }

    Outcome case_three(const RegularFormula& r, TraceNode& node) {
        std::vector<std::pair<std::size_t, CounterModel>> parts;
        for (std::size_t i = 0; i < r.context().size(); ++i) {
            if (!counts_toward_degree(r.context()[i].tag())) continue;
            RegularFormula subgoal = make_subgoal(r, i);
            Outcome sub = recurse(subgoal, node);
            if (sub.provable) {
                node.label = "case iii(a): replace " + r.context()[i].key() + " by " +
                             r.context()[i].formula().right().name();
                Outcome rest = recurse(apply_simp_imp_imp(r, i), node);
                if (rest.provable) return rest;
                return refute(retarget(*rest.model, r, {}));
            }
            parts.emplace_back(i, *sub.model);
        }
        node.label = "case iii(b): lift " + std::to_string(parts.size()) + " refutation(s)";
        return refute(lift_refutation(parts, r));
    }

    // Recursion targets must sit strictly below their parent in rank.
    Outcome recurse(const RegularFormula& goal, TraceNode& parent) {
        if (measure_parts(goal).rank() >= parent.rank)
            throw std::logic_error("descent measure did not decrease: [" + parent.goal + "] -> [" +
                                   goal.text() + "]");
        parent.children.emplace_back();
        return run(goal, parent.children.back());
    }

    /// Re-aims a sub-goal model at goal r: keeps the algebra, assigns every
    /// variable of r (overrides first, then the sub-model's values, bottom
    /// for anything the smaller goal no longer mentions).
    static CounterModel retarget(const CounterModel& m, const RegularFormula& r,
                                 const std::map<std::string, Element>& overrides) {
        Interpretation interp{m.algebra(), {}};
        for (const auto& var : r.all_variables()) {
            if (auto it = overrides.find(var); it != overrides.end()) {
                interp.assignment.insert_or_assign(var, it->second);
            } else if (auto it2 = m.interpretation.assignment.find(var);
                       it2 != m.interpretation.assignment.end()) {
                interp.assignment.insert_or_assign(var, it2->second);
            } else {
                interp.assignment.insert_or_assign(var, bottom_of(m.algebra()));
            }
        }
        Element value = evaluate(interp, r.succedent().to_formula());
        return CounterModel{std::move(interp), r, std::move(value)};
    }

    static Outcome refute(CounterModel m) { return {false, std::move(m)}; }

    std::map<std::string, Outcome> memo_;
};

} // namespace detail

// ---------------------------------------------------------------------------
// Entry points.

/// Decides a regular goal.  Memoization is scoped to this one call.
inline Verdict decide_regular(const RegularFormula& r) {
    detail::Engine engine;
    TraceNode root;
    detail::Outcome out = engine.run(r, root);
    if (out.provable) return Verdict::provable(std::move(root));
    return Verdict::refuted(std::move(*out.model), std::move(root));
}

/// Decides an arbitrary formula: reduce, regularize, decide the goal, and on
/// refutation carry the interpretation back to the original formula (the
/// regularization keeps V(a) <= V(succedent) whenever the context is top, so
/// the same interpretation works).
inline Verdict decide(const Formula& a) {
    RegularizationResult reg = regularize(a);
    detail::Engine engine;
    TraceNode root;
    detail::Outcome out = engine.run(reg.goal, root);
    if (out.provable) return Verdict::provable(std::move(root));

    const CounterModel& goal_model = *out.model;
    Interpretation interp{goal_model.algebra(), {}};
    for (const auto& var : variables(a)) {
        auto it = goal_model.interpretation.assignment.find(var);
        interp.assignment.insert_or_assign(var, it != goal_model.interpretation.assignment.end()
                                                    ? it->second
                                                    : bottom_of(goal_model.algebra()));
    }
    Element value = evaluate(interp, a);
    CounterModel model{std::move(interp), a, std::move(value)};
    if (auto check = verify_countermodel(model); !check)
        throw std::logic_error("refutation of " + render(a) +
                               " failed verification: " + check.diagnostic);
    return Verdict::refuted(std::move(model), std::move(root));
}

// ---------------------------------------------------------------------------
// Restating a counter-model inside a Jaskowski algebra.  The algebras the
// procedure produces are B or Gamma(product of smaller such algebras); each
// embeds into J_d for d at least its level below.

inline unsigned jaskowski_level(const HeytingAlgebra& h) {
    switch (h.kind()) {
    case HeytingAlgebra::Kind::Two: return 0;
    case HeytingAlgebra::Kind::Gamma: {
        const HeytingAlgebra& base = h.base();
        const bool is_product = base.kind() == HeytingAlgebra::Kind::Product;
        std::size_t arity = is_product ? base.factors().size() : 1;
        unsigned level = 0;
        for (std::size_t i = 0; i < arity; ++i) {
            const HeytingAlgebra& f = is_product ? base.factors()[i] : base;
            level = std::max(level, jaskowski_level(f) + 1);
        }
        return std::max<unsigned>(level, static_cast<unsigned>(arity));
    }
    case HeytingAlgebra::Kind::Product:
        throw std::invalid_argument("jaskowski_level: bare product " + h.text());
    }
    throw std::logic_error("unreachable");
}

/// Maps an element of `from` into jaskowski(d), d >= jaskowski_level(from),
/// through diagonal padding.  Top-preserving, strict (non-top stays non-top)
/// and a Heyting homomorphism on the algebras the engine produces.
inline Element embed_into_jaskowski(const HeytingAlgebra& from, unsigned d, const Element& x) {
    if (!well_formed(from, x)) throw std::invalid_argument("embed_into_jaskowski: malformed element");
    if (from.kind() == HeytingAlgebra::Kind::Two) {
        Element e = x;
        for (unsigned k = 1; k <= d; ++k) e = Element::old(Element::tuple(std::vector<Element>(k, e)));
        return e;
    }
    if (from.kind() != HeytingAlgebra::Kind::Gamma)
        throw std::invalid_argument("embed_into_jaskowski: unsupported algebra " + from.text());
    if (d < jaskowski_level(from))
        throw std::invalid_argument("embed_into_jaskowski: level " + std::to_string(d) + " too small for " +
                                    from.text());
    if (x.kind() == Element::Kind::Star) return Element::star();
    const HeytingAlgebra& base = from.base();
    const bool is_product = base.kind() == HeytingAlgebra::Kind::Product;
    std::vector<Element> comps;
    if (is_product) {
        for (std::size_t i = 0; i < base.factors().size(); ++i)
            comps.push_back(embed_into_jaskowski(base.factors()[i], d - 1, x.inner().parts()[i]));
    } else {
        comps.push_back(embed_into_jaskowski(base, d - 1, x.inner()));
    }
    while (comps.size() < d) comps.push_back(comps.front());
    return Element::old(Element::tuple(std::move(comps)));
}

/// Restates a counter-model inside J_d (by default the smallest level that
/// fits).  The embedded model is re-verified before being returned.
inline CounterModel restate_in_jaskowski(const CounterModel& m,
                                         std::optional<unsigned> level = std::nullopt) {
    unsigned d = std::max(level.value_or(0), jaskowski_level(m.algebra()));
    Interpretation interp{jaskowski(d), {}};
    for (const auto& [var, e] : m.interpretation.assignment)
        interp.assignment.insert_or_assign(var, embed_into_jaskowski(m.algebra(), d, e));
    Element value = [&] {
        if (const auto* goal = std::get_if<RegularFormula>(&m.target))
            return evaluate(interp, goal->succedent().to_formula());
        return evaluate(interp, std::get<Formula>(m.target));
    }();
    CounterModel out{std::move(interp), m.target, std::move(value)};
    if (auto check = verify_countermodel(out); !check)
        throw std::logic_error("restated model failed verification: " + check.diagnostic);
    return out;
}

} // namespace ipl
