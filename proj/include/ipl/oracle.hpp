#pragma once

// Independent provability oracle: terminating backward proof search in a
// contraction-free sequent calculus of the G4ip family, with the
// left-implication rule split by the shape of the antecedent.  Exists purely
// to cross-check the decision procedure in tests, so it deliberately shares
// nothing with the normalization pipeline and only answers yes/no.

#include <string>
#include <utility>
#include <vector>

#include "ipl/formula.hpp"

namespace ipl {

struct Sequent {
    std::vector<Formula> antecedents; // multiset
    Formula succedent;
};

namespace detail {

inline bool has_hypothesis_var(const std::vector<Formula>& ctx, const std::string& name) {
    for (const auto& h : ctx)
        if (h.is_var(name)) return true;
    return false;
}

inline bool g4ip_prove(std::vector<Formula> ctx, Formula goal) {
    // Invertible rules first, to a fixpoint.
    for (;;) {
        if (goal.is(Kind::Top)) return true;
        if (goal.is(Kind::And))
            return g4ip_prove(ctx, goal.left()) && g4ip_prove(std::move(ctx), goal.right());
        if (goal.is(Kind::Imp)) {
            ctx.push_back(goal.left());
            goal = goal.right();
            continue;
        }
        bool changed = false;
        for (std::size_t i = 0; i < ctx.size() && !changed; ++i) {
            const Formula h = ctx[i];
            switch (h.kind()) {
            case Kind::Bottom: return true;
            case Kind::Top:
                ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            case Kind::And:
                ctx[i] = h.left();
                ctx.push_back(h.right());
                changed = true;
                break;
            case Kind::Or: {
                ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(i));
                std::vector<Formula> other = ctx;
                ctx.push_back(h.left());
                other.push_back(h.right());
                return g4ip_prove(std::move(ctx), goal) && g4ip_prove(std::move(other), std::move(goal));
            }
            case Kind::Imp: {
                const Formula a = h.left(), b = h.right();
                if (a.is(Kind::Bottom) || b.is(Kind::Top)) {
                    ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(i));
                    changed = true;
                } else if (a.is(Kind::Top)) {
                    ctx[i] = b;
                    changed = true;
                } else if (a.is(Kind::And)) {
                    ctx[i] = Formula::imp(a.left(), Formula::imp(a.right(), b));
                    changed = true;
                } else if (a.is(Kind::Or)) {
                    ctx[i] = Formula::imp(a.left(), b);
                    ctx.push_back(Formula::imp(a.right(), b));
                    changed = true;
                } else if (a.is(Kind::Var) && has_hypothesis_var(ctx, a.name())) {
                    ctx[i] = b;
                    changed = true;
                }
                break;
            }
            default: break; // atoms stay
            }
        }
        if (!changed) break;
    }

    if (goal.is(Kind::Var) && has_hypothesis_var(ctx, goal.name())) return true;

    // Non-invertible choices: a disjunctive goal, and each (A -> B) -> C on
    // the left.
    if (goal.is(Kind::Or)) {
        if (g4ip_prove(ctx, goal.left())) return true;
        if (g4ip_prove(ctx, goal.right())) return true;
    }
    for (std::size_t i = 0; i < ctx.size(); ++i) {
        const Formula& h = ctx[i];
        if (!h.is(Kind::Imp) || !h.left().is(Kind::Imp)) continue;
        const Formula a = h.left().left(), b = h.left().right(), c = h.right();
        std::vector<Formula> first, second;
        first.reserve(ctx.size());
        second.reserve(ctx.size());
        for (std::size_t j = 0; j < ctx.size(); ++j) {
            if (j == i) continue;
            first.push_back(ctx[j]);
            second.push_back(ctx[j]);
        }
        first.push_back(Formula::imp(b, c));
        second.push_back(c);
        if (g4ip_prove(std::move(first), Formula::imp(a, b)) && g4ip_prove(std::move(second), goal))
            return true;
    }
    return false;
}

} // namespace detail

inline bool g4ip_provable(const Sequent& s) {
    return detail::g4ip_prove(s.antecedents, s.succedent);
}

/// True iff a is provable in intuitionistic propositional logic.
inline bool g4ip_provable(const Formula& a) { return detail::g4ip_prove({}, a); }

} // namespace ipl
