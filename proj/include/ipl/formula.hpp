#pragma once

// Propositional syntax for intuitionistic logic: immutable formula trees,
// a recursive-descent parser, a bracket-eliding printer, substitution and
// structural metrics.  Negation and equivalence are sugar: ~A is A -> false,
// A <-> B is (A -> B) & (B -> A).

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ipl {

enum class Kind { Var, Bottom, Top, And, Or, Imp };

class Formula {
public:
    static Formula var(std::string name) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Var;
        n->name = std::move(name);
        return Formula(std::move(n));
    }
    static Formula bottom() { return nullary(Kind::Bottom); }
    static Formula top() { return nullary(Kind::Top); }
    static Formula conj(Formula l, Formula r) { return binary(Kind::And, std::move(l), std::move(r)); }
    static Formula disj(Formula l, Formula r) { return binary(Kind::Or, std::move(l), std::move(r)); }
    static Formula imp(Formula l, Formula r) { return binary(Kind::Imp, std::move(l), std::move(r)); }
    static Formula neg(Formula a) { return imp(std::move(a), bottom()); }
    static Formula iff(Formula a, Formula b) {
        Formula forward = imp(a, b);
        Formula backward = imp(std::move(b), std::move(a));
        return conj(std::move(forward), std::move(backward));
    }

    Kind kind() const { return node_->kind; }

    const std::string& name() const {
        if (node_->kind != Kind::Var) throw std::logic_error("Formula::name: not a variable");
        return node_->name;
    }
    Formula left() const {
        if (!node_->left) throw std::logic_error("Formula::left: not a binary formula");
        return Formula(node_->left);
    }
    Formula right() const {
        if (!node_->right) throw std::logic_error("Formula::right: not a binary formula");
        return Formula(node_->right);
    }

    bool is_atomic() const {
        Kind k = node_->kind;
        return k == Kind::Var || k == Kind::Bottom || k == Kind::Top;
    }
    bool is(Kind k) const { return node_->kind == k; }
    bool is_var(const std::string& x) const { return node_->kind == Kind::Var && node_->name == x; }

    /// ~A, i.e. A -> false.
    bool is_negation() const {
        return node_->kind == Kind::Imp && node_->right->kind == Kind::Bottom;
    }

    friend bool operator==(const Formula& a, const Formula& b) { return equal(a.node_.get(), b.node_.get()); }
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
    struct Node {
        Kind kind = Kind::Bottom;
        std::string name;
        std::shared_ptr<const Node> left, right;
    };

    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Formula nullary(Kind k) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        return Formula(std::move(n));
    }
    static Formula binary(Kind k, Formula l, Formula r) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->left = l.node_;
        n->right = r.node_;
        return Formula(std::move(n));
    }

    static bool equal(const Node* a, const Node* b) {
        if (a == b) return true;
        if (a->kind != b->kind) return false;
        switch (a->kind) {
        case Kind::Var: return a->name == b->name;
        case Kind::Bottom:
        case Kind::Top: return true;
        default: return equal(a->left.get(), b->left.get()) && equal(a->right.get(), b->right.get());
        }
    }

    std::shared_ptr<const Node> node_;
};

// An atom in the sense of the metavariables E/F: a variable or falsity.
class Atom {
public:
    static Atom variable(std::string name) { return Atom(std::move(name)); }
    static Atom bottom() { return Atom(std::nullopt); }

    bool is_bottom() const { return !name_.has_value(); }
    const std::string& name() const {
        if (!name_) throw std::logic_error("Atom::name: bottom");
        return *name_;
    }
    Formula to_formula() const { return name_ ? Formula::var(*name_) : Formula::bottom(); }
    std::string text() const { return name_ ? *name_ : "false"; }

    friend bool operator==(const Atom& a, const Atom& b) { return a.name_ == b.name_; }
    friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }

private:
    explicit Atom(std::optional<std::string> n) : name_(std::move(n)) {}
    std::optional<std::string> name_;
};

inline std::optional<Atom> as_atom(const Formula& f) {
    if (f.is(Kind::Var)) return Atom::variable(f.name());
    if (f.is(Kind::Bottom)) return Atom::bottom();
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Printing.  Precedence, loosest to tightest: <->, ->, |, &, ~.  `->` is
// right associative, `&` and `|` left associative.  A -> false prints as ~A.

namespace detail {

inline void render_into(const Formula& f, int min_prec, std::string& out) {
    switch (f.kind()) {
    case Kind::Var: out += f.name(); return;
    case Kind::Bottom: out += "false"; return;
    case Kind::Top: out += "true"; return;
    case Kind::And:
        if (3 < min_prec) {
            out += '(';
            render_into(f, 0, out);
            out += ')';
            return;
        }
        render_into(f.left(), 3, out);
        out += " & ";
        render_into(f.right(), 4, out);
        return;
    case Kind::Or:
        if (2 < min_prec) {
            out += '(';
            render_into(f, 0, out);
            out += ')';
            return;
        }
        render_into(f.left(), 2, out);
        out += " | ";
        render_into(f.right(), 3, out);
        return;
    case Kind::Imp:
        if (f.is_negation()) {
            out += '~';
            render_into(f.left(), 4, out);
            return;
        }
        if (1 < min_prec) {
            out += '(';
            render_into(f, 0, out);
            out += ')';
            return;
        }
        render_into(f.left(), 2, out);
        out += " -> ";
        render_into(f.right(), 1, out);
        return;
    }
}

} // namespace detail

inline std::string render(const Formula& f) {
    std::string out;
    detail::render_into(f, 0, out);
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << render(f); }

// ---------------------------------------------------------------------------
// Parsing.

struct ParseError : std::runtime_error {
    ParseError(std::size_t pos, const std::string& what)
        : std::runtime_error("parse error at position " + std::to_string(pos) + ": " + what),
          position(pos) {}
    std::size_t position; // 1-based character index
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Formula parse() {
        Formula f = iff_level();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return f;
    }

private:
    Formula iff_level() {
        Formula a = imp_level();
        if (eat("<->")) return Formula::iff(std::move(a), iff_level());
        return a;
    }
    Formula imp_level() {
        Formula a = or_level();
        if (eat("->")) return Formula::imp(std::move(a), imp_level());
        return a;
    }
    Formula or_level() {
        Formula a = and_level();
        while (eat("|")) a = Formula::disj(std::move(a), and_level());
        return a;
    }
    Formula and_level() {
        Formula a = unary_level();
        while (eat("&")) a = Formula::conj(std::move(a), unary_level());
        return a;
    }
    Formula unary_level() {
        if (eat("~")) return Formula::neg(unary_level());
        return primary();
    }
    Formula primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Formula f = iff_level();
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
            ++pos_;
            return f;
        }
        // Leading '_' is accepted beyond the documented grammar so that
        // machine-introduced names round-trip through the printer.
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string word(text_.substr(start, pos_ - start));
            if (word == "true") return Formula::top();
            if (word == "false") return Formula::bottom();
            return Formula::var(std::move(word));
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool eat(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) != tok) return false;
        pos_ += tok.size();
        return true;
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(pos_ + 1, msg); }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Formula parse(std::string_view text) { return detail::Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Structural operations.

/// Replaces every occurrence of the variable x by a.
inline Formula substitute(const Formula& c, const std::string& x, const Formula& a) {
    switch (c.kind()) {
    case Kind::Var: return c.name() == x ? a : c;
    case Kind::Bottom:
    case Kind::Top: return c;
    case Kind::And: return Formula::conj(substitute(c.left(), x, a), substitute(c.right(), x, a));
    case Kind::Or: return Formula::disj(substitute(c.left(), x, a), substitute(c.right(), x, a));
    case Kind::Imp: return Formula::imp(substitute(c.left(), x, a), substitute(c.right(), x, a));
    }
    throw std::logic_error("unreachable");
}

/// Simultaneous substitution of several variables.
inline Formula substitute_all(const Formula& c, const std::map<std::string, Formula>& subst) {
    switch (c.kind()) {
    case Kind::Var: {
        auto it = subst.find(c.name());
        return it == subst.end() ? c : it->second;
    }
    case Kind::Bottom:
    case Kind::Top: return c;
    case Kind::And: return Formula::conj(substitute_all(c.left(), subst), substitute_all(c.right(), subst));
    case Kind::Or: return Formula::disj(substitute_all(c.left(), subst), substitute_all(c.right(), subst));
    case Kind::Imp: return Formula::imp(substitute_all(c.left(), subst), substitute_all(c.right(), subst));
    }
    throw std::logic_error("unreachable");
}

namespace detail {
inline void collect_subformulas(const Formula& f, std::vector<Formula>& out,
                                std::unordered_set<std::string>& seen) {
    if (f.is_atomic()) return;
    if (seen.insert(render(f)).second) out.push_back(f);
    collect_subformulas(f.left(), out, seen);
    collect_subformulas(f.right(), out, seen);
}
} // namespace detail

/// Pre-order enumeration of the structurally distinct non-atomic subformulas;
/// the whole formula comes first when it is non-atomic.
inline std::vector<Formula> subformulas(const Formula& f) {
    std::vector<Formula> out;
    std::unordered_set<std::string> seen;
    detail::collect_subformulas(f, out, seen);
    return out;
}

inline int connective_count(const Formula& f) {
    switch (f.kind()) {
    case Kind::Var:
    case Kind::Bottom:
    case Kind::Top: return 0;
    default: return 1 + connective_count(f.left()) + connective_count(f.right());
    }
}

namespace detail {
inline void collect_variables(const Formula& f, std::set<std::string>& out) {
    switch (f.kind()) {
    case Kind::Var: out.insert(f.name()); return;
    case Kind::Bottom:
    case Kind::Top: return;
    default:
        collect_variables(f.left(), out);
        collect_variables(f.right(), out);
    }
}
} // namespace detail

/// Variables of f, lexicographically ordered.
inline std::set<std::string> variables(const Formula& f) {
    std::set<std::string> out;
    detail::collect_variables(f, out);
    return out;
}

} // namespace ipl
