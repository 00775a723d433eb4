#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "npspec/ast.hpp"
#include "npspec/relation.hpp"

namespace npspec {

enum class AspDialect { dlv, gringo };
enum class GuessEncoding { disjunctive, choice };
enum class PermCheck { pairwise, aggregate };

struct EmitOptions {
    AspDialect dialect = AspDialect::gringo;
    GuessEncoding guess = GuessEncoding::disjunctive;
    PermCheck perm_check = PermCheck::pairwise;
    int maxint_multiplier = 1;
};

inline const char* dialect_name(AspDialect d) {
    return d == AspDialect::dlv ? "dlv" : "gringo";
}
inline const char* guess_encoding_name(GuessEncoding g) {
    return g == GuessEncoding::disjunctive ? "disjunctive" : "choice";
}
inline const char* perm_check_name(PermCheck p) {
    return p == PermCheck::pairwise ? "constraints" : "aggregate";
}

// Terms of the target language. Symbols cover both data constants and
// (gringo) references to #const names.
struct AspTerm {
    enum Kind { integer, symbol, variable, anon, range, arith, abs_fn } kind = integer;
    std::int64_t value = 0;
    std::string name;
    ArithOp op = ArithOp::add;
    std::vector<AspTerm> kids;  // range: {lo,hi}; arith: {lhs,rhs}; abs: {arg}

    static AspTerm make_int(std::int64_t v) {
        AspTerm t;
        t.kind = integer;
        t.value = v;
        return t;
    }
    static AspTerm make_symbol(std::string n) {
        AspTerm t;
        t.kind = symbol;
        t.name = std::move(n);
        return t;
    }
    static AspTerm make_variable(std::string n) {
        AspTerm t;
        t.kind = variable;
        t.name = std::move(n);
        return t;
    }
    static AspTerm make_anon() {
        AspTerm t;
        t.kind = anon;
        return t;
    }
    static AspTerm make_range(AspTerm lo, AspTerm hi) {
        AspTerm t;
        t.kind = range;
        t.kids.push_back(std::move(lo));
        t.kids.push_back(std::move(hi));
        return t;
    }
    static AspTerm make_arith(ArithOp op, AspTerm lhs, AspTerm rhs) {
        AspTerm t;
        t.kind = arith;
        t.op = op;
        t.kids.push_back(std::move(lhs));
        t.kids.push_back(std::move(rhs));
        return t;
    }
    static AspTerm make_abs(AspTerm arg) {
        AspTerm t;
        t.kind = abs_fn;
        t.kids.push_back(std::move(arg));
        return t;
    }

    bool atomic() const {
        return kind == integer || kind == symbol || kind == variable || kind == anon;
    }
};

struct AspAtom {
    bool strong_neg = false;
    std::string pred;
    std::vector<AspTerm> args;
};

struct AspLit {
    bool naf = false;  // default negation ("not")
    AspAtom atom;
};

struct AspCmp {
    AspTerm lhs;
    CmpOp op = CmpOp::eq;
    AspTerm rhs;
};

// One aggregate literal. Semantically the value is computed over the SET of
// distinct projection tuples matching the element atom; the guard either
// equates it with a variable or demands at least two.
struct AspAggLit {
    AggFunc func = AggFunc::count;
    std::vector<AspTerm> projection;  // star-position variables, in order
    AspAtom atom;
    enum Guard { eq_var, at_least_two } guard = eq_var;
    std::string var;  // eq_var guard
};

using AspBodyLit = std::variant<AspLit, AspCmp, AspAggLit>;

struct AspChoiceHead {
    AspAtom element;                   // may carry a range argument
    std::optional<AspAtom> condition;  // {p(X) : d(X)}
    std::optional<std::int64_t> lo;
    std::optional<std::int64_t> hi;
};

// monostate = constraint (no head).
using AspHead = std::variant<std::monostate, std::vector<AspAtom>, AspChoiceHead>;

struct AspRule {
    enum Role { guess, uniqueness_pairwise, uniqueness_aggregate, translated };
    Role role = translated;
    int metafact = -1;     // guess/uniqueness rules
    int source_rule = -1;  // translated rules
    AspHead head;
    std::vector<AspBodyLit> body;
};

struct AspDirective {
    enum Kind { const_def, maxint } kind = const_def;
    std::string name;
    std::int64_t value = 0;
};

struct AspProgram {
    EmitOptions opts;
    std::vector<AspDirective> directives;
    std::vector<AspAtom> facts;  // emission order; args may be ranges
    std::vector<AspRule> rules;
    std::vector<std::string> guessed_preds;
    std::vector<std::string> derived_preds;
    std::map<std::string, std::int64_t> const_values;
};

}  // namespace npspec
