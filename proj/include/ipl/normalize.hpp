#pragma once

// The normal-form pipeline.  A formula is *reduced* when top never appears as
// an operand of a connective and bottom appears only as the right operand of
// an implication.  A *basic* formula is a reduced formula that is a variable
// or an implication with a variable on one side and at most one connective on
// the other.  A *regular* formula is K -> F where K is a conjunction of
// pairwise distinct basic formulas and F is a variable or bottom.  Every
// formula is equiprovable with a regular one; regularize builds it by naming
// each non-atomic subformula with a fresh variable (a definitional,
// Tseitin-style unnesting).

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ipl/algebra.hpp"
#include "ipl/formula.hpp"

namespace ipl {

// ---------------------------------------------------------------------------
// Reduction.

/// Rewrites to a reduced formula equivalent in every Heyting algebra:
/// t&A=A, f&A=f, t|A=t, f|A=A, t->A=A, A->t=t, f->A=t (and mirrored).
/// Single bottom-up pass; idempotent.
inline Formula reduce(const Formula& a) {
    switch (a.kind()) {
    case Kind::Var:
    case Kind::Bottom:
    case Kind::Top: return a;
    case Kind::And: {
        Formula l = reduce(a.left()), r = reduce(a.right());
        if (l.is(Kind::Bottom) || r.is(Kind::Bottom)) return Formula::bottom();
        if (l.is(Kind::Top)) return r;
        if (r.is(Kind::Top)) return l;
        return Formula::conj(std::move(l), std::move(r));
    }
    case Kind::Or: {
        Formula l = reduce(a.left()), r = reduce(a.right());
        if (l.is(Kind::Top) || r.is(Kind::Top)) return Formula::top();
        if (l.is(Kind::Bottom)) return r;
        if (r.is(Kind::Bottom)) return l;
        return Formula::disj(std::move(l), std::move(r));
    }
    case Kind::Imp: {
        Formula l = reduce(a.left()), r = reduce(a.right());
        if (l.is(Kind::Bottom) || r.is(Kind::Top)) return Formula::top();
        if (l.is(Kind::Top)) return r;
        return Formula::imp(std::move(l), std::move(r));
    }
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Basic formulas.  The eleven shapes, writing P, Q, R for variables:
//
//   P    P->Q   P->Q&R   P->Q|R   P->Q->R     P->~Q
//   ~P   P&Q->R P|Q->R   (P->Q)->R   ~P->Q
//
// ImpImp and NotImp together are the family (P -> E) -> R (E a variable or
// bottom); that family is what the degree counts.

enum class BasicTag {
    Var,     // P
    ImpVV,   // P -> Q
    NotV,    // ~P
    ImpVAnd, // P -> Q & R
    ImpVOr,  // P -> Q | R
    ImpVImp, // P -> Q -> R
    ImpVNot, // P -> ~Q
    AndImp,  // P & Q -> R
    OrImp,   // P | Q -> R
    ImpImp,  // (P -> Q) -> R
    NotImp,  // ~P -> Q
};

inline bool counts_toward_degree(BasicTag t) { return t == BasicTag::ImpImp || t == BasicTag::NotImp; }

class BasicFormula {
public:
    BasicFormula(Formula f, BasicTag tag) : formula_(std::move(f)), tag_(tag), key_(render(formula_)) {}

    const Formula& formula() const { return formula_; }
    BasicTag tag() const { return tag_; }
    /// Canonical sort/identity key; equal keys means structural equality.
    const std::string& key() const { return key_; }

    friend bool operator==(const BasicFormula& a, const BasicFormula& b) { return a.key_ == b.key_; }
    friend bool operator!=(const BasicFormula& a, const BasicFormula& b) { return !(a == b); }
    friend bool operator<(const BasicFormula& a, const BasicFormula& b) { return a.key_ < b.key_; }

private:
    Formula formula_;
    BasicTag tag_;
    std::string key_;
};

/// Classifies a reduced formula against the eleven basic shapes; nullopt when
/// it matches none of them.
inline std::optional<BasicFormula> classify_basic(const Formula& f) {
    auto basic = [&f](BasicTag t) { return BasicFormula(f, t); };
    if (f.is(Kind::Var)) return basic(BasicTag::Var);
    if (!f.is(Kind::Imp)) return std::nullopt;
    Formula l = f.left(), r = f.right();
    if (l.is(Kind::Var)) {
        if (r.is(Kind::Var)) return basic(BasicTag::ImpVV);
        if (r.is(Kind::Bottom)) return basic(BasicTag::NotV);
        if (r.is(Kind::And) && r.left().is(Kind::Var) && r.right().is(Kind::Var))
            return basic(BasicTag::ImpVAnd);
        if (r.is(Kind::Or) && r.left().is(Kind::Var) && r.right().is(Kind::Var))
            return basic(BasicTag::ImpVOr);
        if (r.is(Kind::Imp) && r.left().is(Kind::Var)) {
            if (r.right().is(Kind::Var)) return basic(BasicTag::ImpVImp);
            if (r.right().is(Kind::Bottom)) return basic(BasicTag::ImpVNot);
        }
        return std::nullopt;
    }
    if (!r.is(Kind::Var)) return std::nullopt;
    if (l.is(Kind::And) && l.left().is(Kind::Var) && l.right().is(Kind::Var))
        return basic(BasicTag::AndImp);
    if (l.is(Kind::Or) && l.left().is(Kind::Var) && l.right().is(Kind::Var))
        return basic(BasicTag::OrImp);
    if (l.is(Kind::Imp) && l.left().is(Kind::Var)) {
        if (l.right().is(Kind::Var)) return basic(BasicTag::ImpImp);
        if (l.right().is(Kind::Bottom)) return basic(BasicTag::NotImp);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Regular formulas.

class RegularFormula {
public:
    RegularFormula(std::vector<BasicFormula> context, Atom succedent)
        : context_(std::move(context)), succedent_(std::move(succedent)) {
        canonicalize();
    }

    /// Sorted and duplicate-free.  Empty denotes the trivial context (top);
    /// regularize never emits that, only internal subgoals use it.
    const std::vector<BasicFormula>& context() const { return context_; }
    const Atom& succedent() const { return succedent_; }

    /// Canonical form "B1, B2, ... |- F"; identical goals serialize identically.
    std::string text() const {
        std::string out;
        for (std::size_t i = 0; i < context_.size(); ++i) {
            if (i) out += ", ";
            out += context_[i].key();
        }
        out += " |- ";
        out += succedent_.text();
        return out;
    }

    std::set<std::string> all_variables() const {
        std::set<std::string> vars;
        for (const auto& b : context_) {
            auto vs = variables(b.formula());
            vars.insert(vs.begin(), vs.end());
        }
        if (!succedent_.is_bottom()) vars.insert(succedent_.name());
        return vars;
    }

    friend bool operator==(const RegularFormula& a, const RegularFormula& b) {
        return a.succedent_ == b.succedent_ && a.context_ == b.context_;
    }

private:
    void canonicalize() {
        std::sort(context_.begin(), context_.end());
        context_.erase(std::unique(context_.begin(), context_.end()), context_.end());
    }

    std::vector<BasicFormula> context_;
    Atom succedent_;
};

/// K -> F as a plain formula (left-folded conjunction); just F for the
/// trivial context.
inline Formula goal_as_formula(const RegularFormula& r) {
    if (r.context().empty()) return r.succedent().to_formula();
    Formula k = r.context().front().formula();
    for (std::size_t i = 1; i < r.context().size(); ++i)
        k = Formula::conj(std::move(k), r.context()[i].formula());
    return Formula::imp(std::move(k), r.succedent().to_formula());
}

// ---------------------------------------------------------------------------
// Measure.

struct Measure {
    int connectives = 0; // c: connective occurrences in the context entries
    int degree = 0;      // d: entries of shape (P -> E) -> R
    int variables = 0;   // v: bare-variable entries

    int s() const { return connectives + degree + variables; }
    /// Strictly decreases across every step of the decision procedure
    /// (s alone stays flat on two of the variable-elimination rewrites).
    int rank() const { return 2 * connectives + degree + variables; }
};

inline Measure measure_parts(const RegularFormula& r) {
    Measure m;
    for (const auto& b : r.context()) {
        m.connectives += connective_count(b.formula());
        if (counts_toward_degree(b.tag())) ++m.degree;
        if (b.tag() == BasicTag::Var) ++m.variables;
    }
    return m;
}

/// d(A): how many context entries have shape (P -> E) -> R.
inline int degree(const RegularFormula& r) { return measure_parts(r).degree; }

/// s(A) = c(A) + d(A) + v(A).
inline int measure(const RegularFormula& r) { return measure_parts(r).s(); }

// ---------------------------------------------------------------------------
// Regularization.

struct RegularizationResult {
    RegularFormula goal;
    /// Introduced variable -> the subformula it abbreviates, in introduction order.
    std::vector<std::pair<std::string, Formula>> fresh_table;
    Formula original;
};

namespace detail {

class FreshNames {
public:
    explicit FreshNames(std::set<std::string> taken) : taken_(std::move(taken)) {}

    std::string next(const std::string& stem) {
        std::size_t& counter = counters_[stem];
        for (;;) {
            ++counter;
            std::string name = "_" + stem + std::to_string(counter);
            if (taken_.insert(name).second) return name;
        }
    }

private:
    std::set<std::string> taken_;
    std::map<std::string, std::size_t> counters_;
};

/// Tries to read a reduced formula directly as a regular formula: an
/// implication whose antecedent flattens into a conjunction of basic
/// formulas and whose succedent is atomic.
inline std::optional<RegularFormula> as_regular(const Formula& f) {
    if (!f.is(Kind::Imp)) return std::nullopt;
    auto succedent = as_atom(f.right());
    if (!succedent) return std::nullopt;
    std::vector<Formula> conjuncts;
    std::vector<Formula> stack{f.left()};
    while (!stack.empty()) {
        Formula c = stack.back();
        stack.pop_back();
        if (c.is(Kind::And)) {
            stack.push_back(c.right());
            stack.push_back(c.left());
        } else {
            conjuncts.push_back(c);
        }
    }
    std::vector<BasicFormula> context;
    for (auto& c : conjuncts) {
        auto b = classify_basic(c);
        if (!b) return std::nullopt;
        context.push_back(std::move(*b));
    }
    return RegularFormula(std::move(context), std::move(*succedent));
}

} // namespace detail

/// Converts a to an equiprovable regular goal.  Whenever an interpretation
/// makes the whole context top, the value of a is bounded by the value of the
/// succedent, which is what lets a strong refutation of the goal refute a
/// itself.
inline RegularizationResult regularize(const Formula& a) {
    Formula r = reduce(a);
    detail::FreshNames fresh(variables(a));

    // Degenerate shapes first.
    if (r.is(Kind::Top)) {
        std::string z = fresh.next("z");
        RegularFormula goal({BasicFormula(Formula::var(z), BasicTag::Var)}, Atom::variable(z));
        return {std::move(goal), {}, a};
    }
    if (r.is(Kind::Bottom)) {
        std::string m = fresh.next("p");
        std::string z = fresh.next("z");
        RegularFormula goal({BasicFormula(Formula::var(m), BasicTag::Var)}, Atom::variable(z));
        return {std::move(goal), {}, a};
    }
    if (r.is(Kind::Var)) {
        // Succedent must be the variable itself so that refutations of the
        // goal keep the semantic bound V(a) <= V(succedent).
        std::string m = fresh.next("p");
        RegularFormula goal({BasicFormula(Formula::var(m), BasicTag::Var)}, Atom::variable(r.name()));
        return {std::move(goal), {}, a};
    }
    if (auto direct = detail::as_regular(r)) return {std::move(*direct), {}, a};

    // If r is already B -> E with E atomic we unnest B and keep E as the
    // succedent; otherwise we protect r behind a fresh variable Z and unnest
    // K := r -> Z.
    Formula k = r;
    Atom succedent = Atom::bottom();
    if (r.is(Kind::Imp) && as_atom(r.right())) {
        succedent = *as_atom(r.right());
        k = r.left();
    } else {
        std::string z = fresh.next("z");
        succedent = Atom::variable(z);
        k = Formula::imp(r, Formula::var(z));
    }

    std::vector<Formula> subs = subformulas(k); // pre-order, k itself first
    std::map<std::string, std::string> name_of; // render(subformula) -> fresh name
    std::vector<std::pair<std::string, Formula>> table;
    for (const auto& s : subs) {
        std::string p = fresh.next("p");
        name_of[render(s)] = p;
        table.emplace_back(p, s);
    }
    auto atom_for = [&](const Formula& f) -> Formula {
        if (f.is_atomic()) return f;
        return Formula::var(name_of.at(render(f)));
    };

    std::vector<BasicFormula> context;
    auto push = [&context](const Formula& f) {
        auto b = classify_basic(f);
        if (!b) throw std::logic_error("regularize: unnested conjunct is not basic: " + render(f));
        context.push_back(std::move(*b));
    };
    push(Formula::var(table.front().first)); // P1
    for (const auto& [p, sub] : table) {
        Formula body = [&] {
            Formula g = atom_for(sub.left()), h = atom_for(sub.right());
            switch (sub.kind()) {
            case Kind::And: return Formula::conj(std::move(g), std::move(h));
            case Kind::Or: return Formula::disj(std::move(g), std::move(h));
            case Kind::Imp: return Formula::imp(std::move(g), std::move(h));
            default: throw std::logic_error("regularize: atomic subformula enumerated");
            }
        }();
        push(Formula::imp(Formula::var(p), body));
        push(Formula::imp(body, Formula::var(p)));
    }
    RegularFormula goal(std::move(context), std::move(succedent));
    return {std::move(goal), std::move(table), a};
}

} // namespace ipl
