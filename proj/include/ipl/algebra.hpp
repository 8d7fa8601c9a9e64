#pragma once

// Finite Heyting algebras represented structurally: the two-element algebra B,
// Gamma(H) (H with one new co-atom adjoined), and finite products.  Because
// the representation is structural, operations work symbolically and an
// algebra like J_4 (cardinality ~10^12) costs nothing to construct; only
// enumeration-style helpers (models, check_heyting, ...) need the carrier to
// be small, and those take an explicit budget.
//
// Gamma(H) has carrier H + {*} with x < * < t for every non-top x of H.  With
// x, y ranging over non-top elements of H and a(.) the map fixing non-top
// elements and sending t to *, the operations are:
//
//   meet  | y        *     t          join  | y        *   t        impl  | y      *   t
//   ------+---------------------      ------+-----------------      ------+----------------
//     x   | x/\y     x     x            x   | a(x\/y)  *   t          x   | x->y   t   t
//     *   | y        *     *            *   | *        *   t          *   | y      t   t
//     t   | y        *     t            t   | t        t   t          t   | y      *   t
//
// Meet and implication restricted to H agree with H; join does not (that is
// the point of a(.)), so the inclusion of H into Gamma(H) is not a
// join-homomorphism.

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ipl/formula.hpp"

namespace ipl {

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

constexpr std::uint64_t kDefaultBudget = 1'000'000;

class HeytingAlgebra {
public:
    enum class Kind { Two, Gamma, Product };

    static HeytingAlgebra two() { return HeytingAlgebra(Kind::Two); }
    static HeytingAlgebra gamma(HeytingAlgebra base) {
        HeytingAlgebra h(Kind::Gamma);
        h.base_ = std::make_shared<HeytingAlgebra>(std::move(base));
        return h;
    }
    static HeytingAlgebra product(std::vector<HeytingAlgebra> factors) {
        if (factors.empty()) throw std::invalid_argument("product of no algebras");
        HeytingAlgebra h(Kind::Product);
        h.factors_ = std::move(factors);
        return h;
    }

    Kind kind() const { return kind_; }
    const HeytingAlgebra& base() const {
        if (kind_ != Kind::Gamma) throw std::logic_error("HeytingAlgebra::base: not a Gamma");
        return *base_;
    }
    const std::vector<HeytingAlgebra>& factors() const {
        if (kind_ != Kind::Product) throw std::logic_error("HeytingAlgebra::factors: not a product");
        return factors_;
    }

    /// Number of elements, saturating at the uint64 maximum.
    std::uint64_t cardinality() const {
        switch (kind_) {
        case Kind::Two: return 2;
        case Kind::Gamma: return sat_add(base_->cardinality(), 1);
        case Kind::Product: {
            std::uint64_t n = 1;
            for (const auto& f : factors_) n = sat_mul(n, f.cardinality());
            return n;
        }
        }
        throw std::logic_error("unreachable");
    }

    /// Serialized form: B, G(<algebra>), P(<algebra>,...).
    std::string text() const {
        switch (kind_) {
        case Kind::Two: return "B";
        case Kind::Gamma: return "G(" + base_->text() + ")";
        case Kind::Product: {
            std::string out = "P(";
            for (std::size_t i = 0; i < factors_.size(); ++i) {
                if (i) out += ',';
                out += factors_[i].text();
            }
            return out + ")";
        }
        }
        throw std::logic_error("unreachable");
    }

    friend bool operator==(const HeytingAlgebra& a, const HeytingAlgebra& b) {
        if (a.kind_ != b.kind_) return false;
        switch (a.kind_) {
        case Kind::Two: return true;
        case Kind::Gamma: return *a.base_ == *b.base_;
        case Kind::Product: return a.factors_ == b.factors_;
        }
        throw std::logic_error("unreachable");
    }
    friend bool operator!=(const HeytingAlgebra& a, const HeytingAlgebra& b) { return !(a == b); }

private:
    explicit HeytingAlgebra(Kind k) : kind_(k) {}

    static std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
        constexpr auto mx = std::numeric_limits<std::uint64_t>::max();
        return a > mx - b ? mx : a + b;
    }
    static std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
        constexpr auto mx = std::numeric_limits<std::uint64_t>::max();
        if (a == 0 || b == 0) return 0;
        return a > mx / b ? mx : a * b;
    }

    Kind kind_;
    std::shared_ptr<const HeytingAlgebra> base_;
    std::vector<HeytingAlgebra> factors_;
};

/// J_0 = B, J_{k+1} = Gamma(J_k^{k+1}).  Constant-time: the result is a
/// structural description, never a materialized carrier.
inline HeytingAlgebra jaskowski(unsigned k) {
    HeytingAlgebra h = HeytingAlgebra::two();
    for (unsigned i = 1; i <= k; ++i)
        h = HeytingAlgebra::gamma(HeytingAlgebra::product(std::vector<HeytingAlgebra>(i, h)));
    return h;
}

// ---------------------------------------------------------------------------
// Elements.  An element mirrors the structure of its algebra: a boolean for
// Two, old(x)/star for Gamma, a tuple for Product.  An Element only means
// anything relative to an algebra; well_formed checks the shapes line up.

class Element {
public:
    enum class Kind { Bool, Star, Old, Tuple };

    static Element two(bool v) {
        Element e(Kind::Bool);
        e.bool_ = v;
        return e;
    }
    static Element star() { return Element(Kind::Star); }
    static Element old(Element inner) {
        Element e(Kind::Old);
        e.old_ = std::make_shared<Element>(std::move(inner));
        return e;
    }
    static Element tuple(std::vector<Element> parts) {
        if (parts.empty()) throw std::invalid_argument("empty tuple element");
        Element e(Kind::Tuple);
        e.tuple_ = std::move(parts);
        return e;
    }

    Kind kind() const { return kind_; }
    bool bool_value() const {
        if (kind_ != Kind::Bool) throw std::logic_error("Element::bool_value");
        return bool_;
    }
    const Element& inner() const {
        if (kind_ != Kind::Old) throw std::logic_error("Element::inner");
        return *old_;
    }
    const std::vector<Element>& parts() const {
        if (kind_ != Kind::Tuple) throw std::logic_error("Element::parts");
        return tuple_;
    }

    /// Serialized form: f, t, *, old(<element>), (<element>,...).
    std::string text() const {
        switch (kind_) {
        case Kind::Bool: return bool_ ? "t" : "f";
        case Kind::Star: return "*";
        case Kind::Old: return "old(" + old_->text() + ")";
        case Kind::Tuple: {
            std::string out = "(";
            for (std::size_t i = 0; i < tuple_.size(); ++i) {
                if (i) out += ',';
                out += tuple_[i].text();
            }
            return out + ")";
        }
        }
        throw std::logic_error("unreachable");
    }

    friend bool operator==(const Element& a, const Element& b) {
        if (a.kind_ != b.kind_) return false;
        switch (a.kind_) {
        case Kind::Bool: return a.bool_ == b.bool_;
        case Kind::Star: return true;
        case Kind::Old: return *a.old_ == *b.old_;
        case Kind::Tuple: return a.tuple_ == b.tuple_;
        }
        throw std::logic_error("unreachable");
    }
    friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

private:
    explicit Element(Kind k) : kind_(k) {}

    Kind kind_;
    bool bool_ = false;
    std::shared_ptr<const Element> old_;
    std::vector<Element> tuple_;
};

inline std::ostream& operator<<(std::ostream& os, const Element& e) { return os << e.text(); }

inline Element top_of(const HeytingAlgebra& h) {
    switch (h.kind()) {
    case HeytingAlgebra::Kind::Two: return Element::two(true);
    case HeytingAlgebra::Kind::Gamma: return Element::old(top_of(h.base()));
    case HeytingAlgebra::Kind::Product: {
        std::vector<Element> parts;
        parts.reserve(h.factors().size());
        for (const auto& f : h.factors()) parts.push_back(top_of(f));
        return Element::tuple(std::move(parts));
    }
    }
    throw std::logic_error("unreachable");
}

inline Element bottom_of(const HeytingAlgebra& h) {
    switch (h.kind()) {
    case HeytingAlgebra::Kind::Two: return Element::two(false);
    case HeytingAlgebra::Kind::Gamma: return Element::old(bottom_of(h.base()));
    case HeytingAlgebra::Kind::Product: {
        std::vector<Element> parts;
        parts.reserve(h.factors().size());
        for (const auto& f : h.factors()) parts.push_back(bottom_of(f));
        return Element::tuple(std::move(parts));
    }
    }
    throw std::logic_error("unreachable");
}

inline bool well_formed(const HeytingAlgebra& h, const Element& e) {
    switch (h.kind()) {
    case HeytingAlgebra::Kind::Two: return e.kind() == Element::Kind::Bool;
    case HeytingAlgebra::Kind::Gamma:
        if (e.kind() == Element::Kind::Star) return true;
        return e.kind() == Element::Kind::Old && well_formed(h.base(), e.inner());
    case HeytingAlgebra::Kind::Product: {
        if (e.kind() != Element::Kind::Tuple) return false;
        const auto& fs = h.factors();
        const auto& ps = e.parts();
        if (fs.size() != ps.size()) return false;
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (!well_formed(fs[i], ps[i])) return false;
        return true;
    }
    }
    throw std::logic_error("unreachable");
}

/// The map a : H -> Gamma(H) fixing non-top elements and sending top to *.
inline Element alpha(const HeytingAlgebra& h, const Element& x) {
    if (!well_formed(h, x)) throw std::invalid_argument("alpha: element not in algebra " + h.text());
    if (x == top_of(h)) return Element::star();
    return Element::old(x);
}

enum class Op { Meet, Join, Impl };

namespace detail {

inline Element operate_unchecked(const HeytingAlgebra& h, Op op, const Element& x, const Element& y) {
    switch (h.kind()) {
    case HeytingAlgebra::Kind::Two: {
        bool a = x.bool_value(), b = y.bool_value();
        switch (op) {
        case Op::Meet: return Element::two(a && b);
        case Op::Join: return Element::two(a || b);
        case Op::Impl: return Element::two(!a || b);
        }
        throw std::logic_error("unreachable");
    }
    case HeytingAlgebra::Kind::Product: {
        const auto& fs = h.factors();
        std::vector<Element> parts;
        parts.reserve(fs.size());
        for (std::size_t i = 0; i < fs.size(); ++i)
            parts.push_back(operate_unchecked(fs[i], op, x.parts()[i], y.parts()[i]));
        return Element::tuple(std::move(parts));
    }
    case HeytingAlgebra::Kind::Gamma: {
        const HeytingAlgebra& b = h.base();
        const bool xs = x.kind() == Element::Kind::Star;
        const bool ys = y.kind() == Element::Kind::Star;
        const Element tb = top_of(b);
        switch (op) {
        case Op::Meet:
            if (xs && ys) return Element::star();
            if (xs) return alpha(b, y.inner());
            if (ys) return alpha(b, x.inner());
            return Element::old(operate_unchecked(b, Op::Meet, x.inner(), y.inner()));
        case Op::Join:
            if (xs && ys) return Element::star();
            if (xs) return y.inner() == tb ? Element::old(tb) : Element::star();
            if (ys) return x.inner() == tb ? Element::old(tb) : Element::star();
            if (x.inner() == tb || y.inner() == tb) return Element::old(tb);
            return alpha(b, operate_unchecked(b, Op::Join, x.inner(), y.inner()));
        case Op::Impl:
            if (xs && ys) return Element::old(tb);
            if (xs) return Element::old(y.inner());
            if (ys) return x.inner() == tb ? Element::star() : Element::old(tb);
            return Element::old(operate_unchecked(b, Op::Impl, x.inner(), y.inner()));
        }
        throw std::logic_error("unreachable");
    }
    }
    throw std::logic_error("unreachable");
}

} // namespace detail

inline Element operate(const HeytingAlgebra& h, Op op, const Element& x, const Element& y) {
    if (!well_formed(h, x) || !well_formed(h, y))
        throw std::invalid_argument("operate: element not in algebra " + h.text());
    return detail::operate_unchecked(h, op, x, y);
}

/// Lattice order, derived from meet.
inline bool leq(const HeytingAlgebra& h, const Element& x, const Element& y) {
    return operate(h, Op::Meet, x, y) == x;
}

// ---------------------------------------------------------------------------
// Interpretations and evaluation.

struct Interpretation {
    HeytingAlgebra algebra;
    std::map<std::string, Element> assignment;
};

struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

/// Extends the variable assignment to the whole language, reading bottom,
/// top, /\, \/ and -> as f, t, meet, join and impl.
inline Element evaluate(const Interpretation& i, const Formula& a) {
    switch (a.kind()) {
    case Kind::Var: {
        auto it = i.assignment.find(a.name());
        if (it == i.assignment.end()) throw EvalError("unassigned variable " + a.name());
        if (!well_formed(i.algebra, it->second))
            throw EvalError("assignment for " + a.name() + " is not an element of " + i.algebra.text());
        return it->second;
    }
    case Kind::Bottom: return bottom_of(i.algebra);
    case Kind::Top: return top_of(i.algebra);
    case Kind::And:
        return detail::operate_unchecked(i.algebra, Op::Meet, evaluate(i, a.left()), evaluate(i, a.right()));
    case Kind::Or:
        return detail::operate_unchecked(i.algebra, Op::Join, evaluate(i, a.left()), evaluate(i, a.right()));
    case Kind::Imp:
        return detail::operate_unchecked(i.algebra, Op::Impl, evaluate(i, a.left()), evaluate(i, a.right()));
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Budgeted enumeration.

/// All elements of h.  Gamma lists the base carrier first and * last;
/// products are in row-major order.
inline std::vector<Element> enumerate_elements(const HeytingAlgebra& h,
                                               std::uint64_t budget = kDefaultBudget) {
    if (h.cardinality() > budget)
        throw BudgetExceeded("cannot enumerate " + std::to_string(h.cardinality()) +
                             " elements of " + h.text() + " within budget " + std::to_string(budget));
    switch (h.kind()) {
    case HeytingAlgebra::Kind::Two: return {Element::two(false), Element::two(true)};
    case HeytingAlgebra::Kind::Gamma: {
        std::vector<Element> out;
        for (auto& e : enumerate_elements(h.base(), budget)) out.push_back(Element::old(std::move(e)));
        out.push_back(Element::star());
        return out;
    }
    case HeytingAlgebra::Kind::Product: {
        std::vector<std::vector<Element>> per_factor;
        for (const auto& f : h.factors()) per_factor.push_back(enumerate_elements(f, budget));
        std::vector<Element> out;
        std::vector<std::size_t> idx(per_factor.size(), 0);
        for (;;) {
            std::vector<Element> parts;
            parts.reserve(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) parts.push_back(per_factor[i][idx[i]]);
            out.push_back(Element::tuple(std::move(parts)));
            std::size_t i = idx.size();
            while (i > 0) {
                --i;
                if (++idx[i] < per_factor[i].size()) break;
                idx[i] = 0;
                if (i == 0) return out;
            }
        }
    }
    }
    throw std::logic_error("unreachable");
}

/// Brute-force validity: does every assignment of the variables of a make a
/// evaluate to top?  Refuses (BudgetExceeded) when the assignment space
/// exceeds the budget.
inline bool models(const HeytingAlgebra& h, const Formula& a, std::uint64_t budget = kDefaultBudget) {
    const std::set<std::string> var_set = variables(a);
    std::vector<std::string> vars(var_set.begin(), var_set.end());
    const std::uint64_t card = h.cardinality();
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (card != 0 && combos > budget / card) {
            combos = budget + 1;
            break;
        }
        combos *= card;
    }
    if (combos > budget)
        throw BudgetExceeded("models: " + std::to_string(vars.size()) + " variables over " +
                             h.text() + " exceed budget " + std::to_string(budget));
    if (vars.empty()) return evaluate(Interpretation{h, {}}, a) == top_of(h);
    std::vector<Element> elems = enumerate_elements(h, budget);
    const Element top = top_of(h);
    Interpretation interp{h, {}};
    std::vector<std::size_t> idx(vars.size(), 0);
    for (;;) {
        for (std::size_t i = 0; i < vars.size(); ++i)
            interp.assignment.insert_or_assign(vars[i], elems[idx[i]]);
        if (evaluate(interp, a) != top) return false;
        std::size_t i = idx.size();
        for (;;) {
            if (i == 0) return true;
            --i;
            if (++idx[i] < elems.size()) break;
            idx[i] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Axiom checking.

struct CheckResult {
    bool ok = true;
    std::string diagnostic;
    explicit operator bool() const { return ok; }
};

using BinaryTable = std::function<Element(const Element&, const Element&)>;

/// Checks bounded-lattice axioms and residuation (x/\y <= z iff x <= y->z)
/// against explicitly supplied operations.  Kept separate from check_heyting
/// so tests can probe deliberately corrupted tables.
inline CheckResult check_heyting_tables(const std::vector<Element>& elems, const BinaryTable& meet,
                                        const BinaryTable& join, const BinaryTable& impl,
                                        const Element& top, const Element& bottom) {
    auto fail = [](const std::string& what) { return CheckResult{false, what}; };
    auto le = [&](const Element& x, const Element& y) { return meet(x, y) == x; };
    for (const auto& x : elems) {
        if (meet(x, top) != x) return fail("x /\\ t != x at x=" + x.text());
        if (join(x, bottom) != x) return fail("x \\/ f != x at x=" + x.text());
    }
    for (const auto& x : elems)
        for (const auto& y : elems) {
            if (meet(x, y) != meet(y, x)) return fail("meet not commutative at x=" + x.text() + ", y=" + y.text());
            if (join(x, y) != join(y, x)) return fail("join not commutative at x=" + x.text() + ", y=" + y.text());
            if (meet(x, join(x, y)) != x) return fail("absorption x/\\(x\\/y) fails at x=" + x.text() + ", y=" + y.text());
            if (join(x, meet(x, y)) != x) return fail("absorption x\\/(x/\\y) fails at x=" + x.text() + ", y=" + y.text());
        }
    for (const auto& x : elems)
        for (const auto& y : elems)
            for (const auto& z : elems) {
                if (meet(meet(x, y), z) != meet(x, meet(y, z)))
                    return fail("meet not associative at x=" + x.text() + ", y=" + y.text() + ", z=" + z.text());
                if (join(join(x, y), z) != join(x, join(y, z)))
                    return fail("join not associative at x=" + x.text() + ", y=" + y.text() + ", z=" + z.text());
                if (le(meet(x, y), z) != le(x, impl(y, z)))
                    return fail("residuation fails at x=" + x.text() + ", y=" + y.text() + ", z=" + z.text());
            }
    return {};
}

/// Exhaustively verifies that h really is a Heyting algebra.
inline CheckResult check_heyting(const HeytingAlgebra& h, std::uint64_t budget = kDefaultBudget) {
    if (h.cardinality() > budget)
        throw BudgetExceeded("check_heyting: " + h.text() + " has " + std::to_string(h.cardinality()) +
                             " elements, budget " + std::to_string(budget));
    std::vector<Element> elems = enumerate_elements(h, budget);
    auto table = [&h](Op op) {
        return [&h, op](const Element& x, const Element& y) { return detail::operate_unchecked(h, op, x, y); };
    };
    return check_heyting_tables(elems, table(Op::Meet), table(Op::Join), table(Op::Impl),
                                top_of(h), bottom_of(h));
}

/// The diagonal map H -> Gamma(H^m), x |-> old((x,...,x)).  For algebras with
/// a join-irreducible top (B and every Gamma(...)) this is a Heyting algebra
/// homomorphism that preserves top and sends non-top elements to non-top
/// elements, which is what lets counter-models found low in the Jaskowski
/// sequence be restated higher up.
inline Element embed_diagonal(const HeytingAlgebra& h, std::size_t m, const Element& x) {
    if (m == 0) throw std::invalid_argument("embed_diagonal: m must be positive");
    if (!well_formed(h, x)) throw std::invalid_argument("embed_diagonal: element not in " + h.text());
    return Element::old(Element::tuple(std::vector<Element>(m, x)));
}

// ---------------------------------------------------------------------------
// Parsing of the serialized forms.

namespace detail {

inline HeytingAlgebra parse_algebra_at(std::string_view s, std::size_t& pos);

inline void skip_term_ws(std::string_view s, std::size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

inline void expect_char(std::string_view s, std::size_t& pos, char c) {
    skip_term_ws(s, pos);
    if (pos >= s.size() || s[pos] != c)
        throw ParseError(pos + 1, std::string("expected '") + c + "' in algebra/element term");
    ++pos;
}

inline bool eat_char(std::string_view s, std::size_t& pos, char c) {
    skip_term_ws(s, pos);
    if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
    }
    return false;
}

inline HeytingAlgebra parse_algebra_at(std::string_view s, std::size_t& pos) {
    skip_term_ws(s, pos);
    if (pos >= s.size()) throw ParseError(pos + 1, "expected algebra term");
    char c = s[pos];
    if (c == 'B') {
        ++pos;
        return HeytingAlgebra::two();
    }
    if (c == 'G') {
        ++pos;
        expect_char(s, pos, '(');
        HeytingAlgebra base = parse_algebra_at(s, pos);
        expect_char(s, pos, ')');
        return HeytingAlgebra::gamma(std::move(base));
    }
    if (c == 'P') {
        ++pos;
        expect_char(s, pos, '(');
        std::vector<HeytingAlgebra> fs;
        fs.push_back(parse_algebra_at(s, pos));
        while (eat_char(s, pos, ',')) fs.push_back(parse_algebra_at(s, pos));
        expect_char(s, pos, ')');
        return HeytingAlgebra::product(std::move(fs));
    }
    throw ParseError(pos + 1, std::string("unexpected character '") + c + "' in algebra term");
}

inline Element parse_element_at(std::string_view s, std::size_t& pos) {
    skip_term_ws(s, pos);
    if (pos >= s.size()) throw ParseError(pos + 1, "expected element term");
    char c = s[pos];
    if (c == 'f' || c == 't') {
        ++pos;
        return Element::two(c == 't');
    }
    if (c == '*') {
        ++pos;
        return Element::star();
    }
    if (c == '(') {
        ++pos;
        std::vector<Element> parts;
        parts.push_back(parse_element_at(s, pos));
        while (eat_char(s, pos, ',')) parts.push_back(parse_element_at(s, pos));
        expect_char(s, pos, ')');
        return Element::tuple(std::move(parts));
    }
    if (s.substr(pos, 4) == "old(") {
        pos += 4;
        Element inner = parse_element_at(s, pos);
        expect_char(s, pos, ')');
        return Element::old(std::move(inner));
    }
    throw ParseError(pos + 1, std::string("unexpected character '") + c + "' in element term");
}

} // namespace detail

inline HeytingAlgebra parse_algebra(std::string_view s) {
    std::size_t pos = 0;
    HeytingAlgebra h = detail::parse_algebra_at(s, pos);
    detail::skip_term_ws(s, pos);
    if (pos != s.size()) throw ParseError(pos + 1, "trailing input after algebra term");
    return h;
}

inline Element parse_element(std::string_view s) {
    std::size_t pos = 0;
    Element e = detail::parse_element_at(s, pos);
    detail::skip_term_ws(s, pos);
    if (pos != s.size()) throw ParseError(pos + 1, "trailing input after element term");
    return e;
}

} // namespace ipl
