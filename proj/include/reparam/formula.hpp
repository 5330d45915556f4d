#pragma once

#include <cctype>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reparam {

/// Syntax tree for the query logic: letter tests a(x), order atoms x<y and
/// x=y, membership x in X, boolean connectives, and first-order or set
/// quantifiers. First-order variables are lowercase identifiers, set
/// variables start with an uppercase letter. `forall`, `->` and `<->` are
/// parser sugar; the tree only carries the core connectives.
struct Formula {
    enum class Kind { Letter, Less, Equal, In, Not, And, Or, ExistsFo, ExistsSet };

    Kind kind;
    char letter = 0;        // Letter
    std::string var1;       // atoms: first var; quantifiers: bound var
    std::string var2;       // Less/Equal/In: second var
    std::shared_ptr<const Formula> lhs, rhs;

    static std::shared_ptr<const Formula> make(Formula f) {
        return std::make_shared<const Formula>(std::move(f));
    }
};

using FormulaPtr = std::shared_ptr<const Formula>;

inline bool is_set_var(std::string_view name) {
    return !name.empty() && std::isupper(static_cast<unsigned char>(name[0]));
}

namespace detail {

struct FormulaParser {
    std::string_view text;
    std::size_t at = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("formula parse error at column " + std::to_string(at + 1) +
                                    ": " + what);
    }

    void skip_space() {
        while (at < text.size() && std::isspace(static_cast<unsigned char>(text[at])))
            ++at;
    }

    bool peek(std::string_view token) {
        skip_space();
        if (text.substr(at, token.size()) != token)
            return false;
        if (std::isalpha(static_cast<unsigned char>(token[0]))) {
            std::size_t end = at + token.size();
            if (end < text.size() &&
                (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
                return false;
        }
        return true;
    }

    bool eat(std::string_view token) {
        if (!peek(token))
            return false;
        at += token.size();
        return true;
    }

    std::string identifier() {
        skip_space();
        std::size_t begin = at;
        while (at < text.size() && (std::isalnum(static_cast<unsigned char>(text[at])) ||
                                    text[at] == '_'))
            ++at;
        if (at == begin)
            fail("expected a variable name");
        return std::string(text.substr(begin, at - begin));
    }

    bool at_quantifier() {
        return peek("exists") || peek("\xE2\x88\x83") || peek("forall") || peek("\xE2\x88\x80");
    }

    // precedence, loosest first: quantifiers (scope extends right as far as
    // possible), <->, ->, |, &, !, atoms
    FormulaPtr formula() {
        if (eat("exists") || eat("\xE2\x88\x83")) {
            std::string var = identifier();
            Formula f;
            f.kind = is_set_var(var) ? Formula::Kind::ExistsSet : Formula::Kind::ExistsFo;
            f.var1 = var;
            f.lhs = formula();
            return Formula::make(std::move(f));
        }
        if (eat("forall") || eat("\xE2\x88\x80")) {  // forall x f == !exists x !f
            std::string var = identifier();
            Formula neg_body;
            neg_body.kind = Formula::Kind::Not;
            neg_body.lhs = formula();
            Formula inner;
            inner.kind = is_set_var(var) ? Formula::Kind::ExistsSet : Formula::Kind::ExistsFo;
            inner.var1 = var;
            inner.lhs = Formula::make(std::move(neg_body));
            Formula outer;
            outer.kind = Formula::Kind::Not;
            outer.lhs = Formula::make(std::move(inner));
            return Formula::make(std::move(outer));
        }
        return iff();
    }

    static FormulaPtr make_implies(FormulaPtr a, FormulaPtr b) {
        Formula neg;
        neg.kind = Formula::Kind::Not;
        neg.lhs = std::move(a);
        Formula f;
        f.kind = Formula::Kind::Or;
        f.lhs = Formula::make(std::move(neg));
        f.rhs = std::move(b);
        return Formula::make(std::move(f));
    }

    FormulaPtr iff() {
        FormulaPtr left = implies();
        while (eat("<->")) {
            FormulaPtr right = implies();
            Formula f;
            f.kind = Formula::Kind::And;
            f.lhs = make_implies(left, right);
            f.rhs = make_implies(right, left);
            left = Formula::make(std::move(f));
        }
        return left;
    }

    FormulaPtr implies() {
        FormulaPtr left = disjunct();
        if (peek("<->"))
            return left;
        if (eat("->"))  // right associative
            return make_implies(std::move(left), implies());
        return left;
    }

    FormulaPtr disjunct() {
        FormulaPtr left = conjunct();
        while (eat("|") || eat("\xE2\x88\xA8")) {
            Formula f;
            f.kind = Formula::Kind::Or;
            f.lhs = std::move(left);
            f.rhs = conjunct();
            left = Formula::make(std::move(f));
        }
        return left;
    }

    FormulaPtr conjunct() {
        FormulaPtr left = unary();
        while (eat("&") || eat("\xE2\x88\xA7")) {
            Formula f;
            f.kind = Formula::Kind::And;
            f.lhs = std::move(left);
            f.rhs = unary();
            left = Formula::make(std::move(f));
        }
        return left;
    }

    FormulaPtr unary() {
        if (eat("!") || eat("\xC2\xAC")) {
            Formula f;
            f.kind = Formula::Kind::Not;
            f.lhs = unary();
            return Formula::make(std::move(f));
        }
        if (at_quantifier())
            fail("a quantifier inside a connective needs parentheses, e.g. (exists x ...)");
        if (eat("(")) {
            FormulaPtr inner = formula();
            if (!eat(")"))
                fail("expected ')'");
            return inner;
        }
        return atom();
    }

    FormulaPtr atom() {
        skip_space();
        if (at >= text.size())
            fail("expected an atom");
        if (!std::isalnum(static_cast<unsigned char>(text[at])))
            fail("unexpected character '" + std::string(1, text[at]) + "'");
        std::string first = identifier();
        skip_space();
        if (first.size() == 1 && at < text.size() && text[at] == '(') {
            ++at;
            std::string var = identifier();
            if (is_set_var(var))
                fail("letter predicates take a first-order variable");
            if (!eat(")"))
                fail("expected ')'");
            Formula f;
            f.kind = Formula::Kind::Letter;
            f.letter = first[0];
            f.var1 = var;
            return Formula::make(std::move(f));
        }
        Formula f;
        f.var1 = first;
        if (peek("<->"))
            fail("'<->' connects formulas, not variables");
        if (eat("<"))
            f.kind = Formula::Kind::Less;
        else if (eat("="))
            f.kind = Formula::Kind::Equal;
        else if (eat("in") || eat("\xE2\x88\x88"))
            f.kind = Formula::Kind::In;
        else
            fail("expected '<', '=' or 'in' after '" + first + "'");
        f.var2 = identifier();
        if (f.kind == Formula::Kind::In) {
            if (is_set_var(f.var1))
                fail("left side of 'in' must be a first-order variable");
            if (!is_set_var(f.var2))
                fail("right side of 'in' must be a set variable (uppercase)");
        } else if (is_set_var(f.var1) || is_set_var(f.var2)) {
            fail("order atoms take first-order variables");
        }
        return Formula::make(std::move(f));
    }
};

struct VarScan {
    std::set<std::string> bound_stack;
    std::set<std::string> ever_bound;
    std::set<std::string> free_fo;
    bool uses_sets = false;

    void visit(const FormulaPtr& f) {
        switch (f->kind) {
            case Formula::Kind::Letter:
                free_use(f->var1);
                break;
            case Formula::Kind::Less:
            case Formula::Kind::Equal:
                free_use(f->var1);
                free_use(f->var2);
                break;
            case Formula::Kind::In:
                uses_sets = true;
                free_use(f->var1);
                if (!bound_stack.count(f->var2))
                    throw std::invalid_argument("free set variable '" + f->var2 + "'");
                break;
            case Formula::Kind::Not:
                visit(f->lhs);
                break;
            case Formula::Kind::And:
            case Formula::Kind::Or:
                visit(f->lhs);
                visit(f->rhs);
                break;
            case Formula::Kind::ExistsFo:
            case Formula::Kind::ExistsSet:
                if (f->kind == Formula::Kind::ExistsSet)
                    uses_sets = true;
                if (bound_stack.count(f->var1))
                    throw std::invalid_argument("variable '" + f->var1 + "' is bound twice");
                bound_stack.insert(f->var1);
                ever_bound.insert(f->var1);
                visit(f->lhs);
                bound_stack.erase(f->var1);
                break;
        }
    }

    void free_use(const std::string& name) {
        if (!bound_stack.count(name))
            free_fo.insert(name);
    }

    void finish() const {
        for (const std::string& name : free_fo)
            if (ever_bound.count(name))
                throw std::invalid_argument("variable '" + name +
                                            "' is used both free and bound");
    }
};

inline VarScan scan_vars(const FormulaPtr& f) {
    VarScan scan;
    scan.visit(f);
    scan.finish();
    return scan;
}

}  // namespace detail

inline FormulaPtr parse_formula(std::string_view text) {
    detail::FormulaParser p{text};
    FormulaPtr f = p.formula();
    p.skip_space();
    if (p.at != text.size())
        p.fail("trailing input");
    return f;
}

/// Free first-order variables, sorted by name. Track t of the compiled query
/// carries the t-th name in this order.
inline std::vector<std::string> free_variables(const FormulaPtr& f) {
    auto scan = detail::scan_vars(f);
    return {scan.free_fo.begin(), scan.free_fo.end()};
}

/// True when the formula stays in the first-order fragment (no set atoms,
/// no set quantifiers).
inline bool is_fo(const FormulaPtr& f) {
    return !detail::scan_vars(f).uses_sets;
}

}  // namespace reparam
