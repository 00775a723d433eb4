#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "npspec/diag.hpp"

namespace npspec {

// Terms appear as atom arguments and comparison operands. Structural equality
// everywhere ignores source positions so reparsed output compares equal.

enum class TermKind { integer, symbol, variable, anon, binary, abs };
enum class ArithOp { add, sub, mul, div, pow };

struct Term {
    TermKind kind = TermKind::integer;
    std::int64_t value = 0;    // integer
    std::string name;          // symbol or variable
    ArithOp op = ArithOp::add; // binary
    std::vector<Term> kids;    // binary: {lhs, rhs}; abs: {arg}
    SourcePos pos;

    static Term make_int(std::int64_t v, SourcePos p = {}) {
        Term t;
        t.kind = TermKind::integer;
        t.value = v;
        t.pos = p;
        return t;
    }
    static Term make_symbol(std::string n, SourcePos p = {}) {
        Term t;
        t.kind = TermKind::symbol;
        t.name = std::move(n);
        t.pos = p;
        return t;
    }
    static Term make_variable(std::string n, SourcePos p = {}) {
        Term t;
        t.kind = TermKind::variable;
        t.name = std::move(n);
        t.pos = p;
        return t;
    }
    static Term make_anon(SourcePos p = {}) {
        Term t;
        t.kind = TermKind::anon;
        t.pos = p;
        return t;
    }
    static Term make_binary(ArithOp o, Term lhs, Term rhs, SourcePos p = {}) {
        Term t;
        t.kind = TermKind::binary;
        t.op = o;
        t.kids.push_back(std::move(lhs));
        t.kids.push_back(std::move(rhs));
        t.pos = p;
        return t;
    }
    static Term make_abs(Term arg, SourcePos p = {}) {
        Term t;
        t.kind = TermKind::abs;
        t.kids.push_back(std::move(arg));
        t.pos = p;
        return t;
    }
};

inline bool operator==(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case TermKind::integer: return a.value == b.value;
        case TermKind::symbol:
        case TermKind::variable: return a.name == b.name;
        case TermKind::anon: return true;
        case TermKind::abs: return a.kids == b.kids;
        case TermKind::binary: return a.op == b.op && a.kids == b.kids;
    }
    return false;
}
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }

struct Atom {
    std::string pred;
    std::vector<Term> args;
    SourcePos pos;

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.pred == b.pred && a.args == b.args;
    }
};

struct NegAtom {
    Atom atom;

    friend bool operator==(const NegAtom& a, const NegAtom& b) { return a.atom == b.atom; }
};

enum class CmpOp { eq, ne, lt, le, gt, ge };

inline const char* cmp_op_text(CmpOp op) {
    switch (op) {
        case CmpOp::eq: return "==";
        case CmpOp::ne: return "!=";
        case CmpOp::lt: return "<";
        case CmpOp::le: return "<=";
        case CmpOp::gt: return ">";
        case CmpOp::ge: return ">=";
    }
    return "?";
}

struct Comparison {
    Term lhs;
    CmpOp op = CmpOp::eq;
    Term rhs;
    SourcePos pos;

    friend bool operator==(const Comparison& a, const Comparison& b) {
        return a.op == b.op && a.lhs == b.lhs && a.rhs == b.rhs;
    }
};

enum class AggFunc { count, sum, min, max };

inline const char* agg_func_text(AggFunc f) {
    switch (f) {
        case AggFunc::count: return "COUNT";
        case AggFunc::sum: return "SUM";
        case AggFunc::min: return "MIN";
        case AggFunc::max: return "MAX";
    }
    return "?";
}

enum class AggArgKind { star, anon, variable, integer, symbol };

struct AggArg {
    AggArgKind kind = AggArgKind::anon;
    std::string name;        // variable or symbol
    std::int64_t value = 0;  // integer
    SourcePos pos;

    friend bool operator==(const AggArg& a, const AggArg& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case AggArgKind::star:
            case AggArgKind::anon: return true;
            case AggArgKind::variable:
            case AggArgKind::symbol: return a.name == b.name;
            case AggArgKind::integer: return a.value == b.value;
        }
        return false;
    }
};

// e.g. SUM(p(*,_,Y),Z:lo..hi): template over p, result variable Z, range check.
struct Aggregate {
    AggFunc func = AggFunc::count;
    std::string pred;
    std::vector<AggArg> args;
    std::string result_var;
    Term lo;
    Term hi;
    SourcePos pos;

    friend bool operator==(const Aggregate& a, const Aggregate& b) {
        return a.func == b.func && a.pred == b.pred && a.args == b.args &&
               a.result_var == b.result_var && a.lo == b.lo && a.hi == b.hi;
    }
};

using BodyElem = std::variant<Atom, NegAtom, Comparison, Aggregate>;

struct Rule {
    bool is_fail = false;
    Atom head;  // meaningful only when !is_fail
    std::vector<BodyElem> body;
    SourcePos pos;

    friend bool operator==(const Rule& a, const Rule& b) {
        if (a.is_fail != b.is_fail) return false;
        if (!a.is_fail && !(a.head == b.head)) return false;
        return a.body == b.body;
    }
};

enum class DomainOp { pred, range, cross, unite, intersect, subtract };

struct DomainExpr {
    DomainOp op = DomainOp::pred;
    std::string pred;              // pred leaf
    Term lo;                       // range leaf bounds (integer or named constant)
    Term hi;
    std::vector<DomainExpr> kids;  // binary node: {lhs, rhs}
    SourcePos pos;

    static DomainExpr make_pred(std::string name, SourcePos p = {}) {
        DomainExpr d;
        d.op = DomainOp::pred;
        d.pred = std::move(name);
        d.pos = p;
        return d;
    }
    static DomainExpr make_range(Term lo, Term hi, SourcePos p = {}) {
        DomainExpr d;
        d.op = DomainOp::range;
        d.lo = std::move(lo);
        d.hi = std::move(hi);
        d.pos = p;
        return d;
    }
    static DomainExpr make_binary(DomainOp o, DomainExpr lhs, DomainExpr rhs,
                                  SourcePos p = {}) {
        DomainExpr d;
        d.op = o;
        d.kids.push_back(std::move(lhs));
        d.kids.push_back(std::move(rhs));
        d.pos = p;
        return d;
    }

    friend bool operator==(const DomainExpr& a, const DomainExpr& b) {
        if (a.op != b.op) return false;
        switch (a.op) {
            case DomainOp::pred: return a.pred == b.pred;
            case DomainOp::range: return a.lo == b.lo && a.hi == b.hi;
            default: return a.kids == b.kids;
        }
    }
};

enum class MetafactKind { subset, permutation, partition, intfunc };

inline const char* metafact_kind_text(MetafactKind k) {
    switch (k) {
        case MetafactKind::subset: return "Subset";
        case MetafactKind::permutation: return "Permutation";
        case MetafactKind::partition: return "Partition";
        case MetafactKind::intfunc: return "IntFunc";
    }
    return "?";
}

struct Metafact {
    MetafactKind kind = MetafactKind::subset;
    DomainExpr domain;
    std::string target;
    Term k;   // partition: number of classes
    Term lo;  // intfunc bounds
    Term hi;
    SourcePos pos;

    friend bool operator==(const Metafact& a, const Metafact& b) {
        if (a.kind != b.kind || !(a.domain == b.domain) || a.target != b.target)
            return false;
        switch (a.kind) {
            case MetafactKind::partition: return a.k == b.k;
            case MetafactKind::intfunc: return a.lo == b.lo && a.hi == b.hi;
            default: return true;
        }
    }
};

struct ConstDef {
    std::string name;
    std::int64_t value = 0;
    SourcePos pos;

    friend bool operator==(const ConstDef& a, const ConstDef& b) {
        return a.name == b.name && a.value == b.value;
    }
};

struct RelDef {
    std::string name;
    bool is_range = false;
    Term lo;  // range form bounds (integer or named constant)
    Term hi;
    std::vector<std::vector<Term>> tuples;  // explicit form; elements are constants
    SourcePos pos;

    friend bool operator==(const RelDef& a, const RelDef& b) {
        if (a.name != b.name || a.is_range != b.is_range) return false;
        if (a.is_range) return a.lo == b.lo && a.hi == b.hi;
        return a.tuples == b.tuples;
    }
};

struct Program {
    std::vector<ConstDef> constants;
    std::vector<RelDef> relations;
    std::vector<Metafact> metafacts;
    std::vector<Rule> rules;

    friend bool operator==(const Program& a, const Program& b) {
        return a.constants == b.constants && a.relations == b.relations &&
               a.metafacts == b.metafacts && a.rules == b.rules;
    }
};

}  // namespace npspec
