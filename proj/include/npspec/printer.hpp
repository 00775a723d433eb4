#pragma once

#include <string>

#include "npspec/ast.hpp"

namespace npspec {

namespace detail {

// Operator tiers for minimal parenthesization: 0 none, 1 additive,
// 2 multiplicative, 3 power.
inline int arith_tier(ArithOp op) {
    switch (op) {
        case ArithOp::add:
        case ArithOp::sub: return 1;
        case ArithOp::mul:
        case ArithOp::div: return 2;
        case ArithOp::pow: return 3;
    }
    return 0;
}

inline const char* arith_op_text(ArithOp op) {
    switch (op) {
        case ArithOp::add: return "+";
        case ArithOp::sub: return "-";
        case ArithOp::mul: return "*";
        case ArithOp::div: return "/";
        case ArithOp::pow: return "^";
    }
    return "?";
}

inline void print_term_prec(std::string& out, const Term& t, int min_tier) {
    switch (t.kind) {
        case TermKind::integer:
            if (t.value < 0 && min_tier > 0) {
                out += "(";
                out += std::to_string(t.value);
                out += ")";
            } else {
                out += std::to_string(t.value);
            }
            return;
        case TermKind::symbol:
        case TermKind::variable: out += t.name; return;
        case TermKind::anon: out += "_"; return;
        case TermKind::abs:
            out += "abs(";
            print_term_prec(out, t.kids[0], 0);
            out += ")";
            return;
        case TermKind::binary: {
            int tier = arith_tier(t.op);
            bool parens = tier < min_tier;
            if (parens) out += "(";
            if (t.op == ArithOp::pow) {
                print_term_prec(out, t.kids[0], tier + 1);
                out += arith_op_text(t.op);
                print_term_prec(out, t.kids[1], tier);
            } else {
                print_term_prec(out, t.kids[0], tier);
                out += arith_op_text(t.op);
                print_term_prec(out, t.kids[1], tier + 1);
            }
            if (parens) out += ")";
            return;
        }
    }
}

}  // namespace detail

inline std::string print_term(const Term& t) {
    std::string out;
    detail::print_term_prec(out, t, 0);
    return out;
}

inline std::string print_atom(const Atom& a) {
    std::string out = a.pred;
    out += "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ",";
        detail::print_term_prec(out, a.args[i], 0);
    }
    out += ")";
    return out;
}

inline std::string print_agg_arg(const AggArg& a) {
    switch (a.kind) {
        case AggArgKind::star: return "*";
        case AggArgKind::anon: return "_";
        case AggArgKind::variable:
        case AggArgKind::symbol: return a.name;
        case AggArgKind::integer: return std::to_string(a.value);
    }
    return "?";
}

inline std::string print_aggregate(const Aggregate& agg) {
    std::string out = agg_func_text(agg.func);
    out += "(";
    out += agg.pred;
    out += "(";
    for (std::size_t i = 0; i < agg.args.size(); ++i) {
        if (i) out += ",";
        out += print_agg_arg(agg.args[i]);
    }
    out += "),";
    out += agg.result_var;
    out += ":";
    out += print_term(agg.lo);
    out += "..";
    out += print_term(agg.hi);
    out += ")";
    return out;
}

inline std::string print_body_elem(const BodyElem& e) {
    struct Printer {
        std::string operator()(const Atom& a) const { return print_atom(a); }
        std::string operator()(const NegAtom& n) const { return "NOT " + print_atom(n.atom); }
        std::string operator()(const Comparison& c) const {
            return print_term(c.lhs) + " " + cmp_op_text(c.op) + " " + print_term(c.rhs);
        }
        std::string operator()(const Aggregate& agg) const { return print_aggregate(agg); }
    };
    return std::visit(Printer{}, e);
}

inline std::string print_rule(const Rule& r) {
    std::string out = r.is_fail ? "fail" : print_atom(r.head);
    out += " <-- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (i) out += ", ";
        out += print_body_elem(r.body[i]);
    }
    out += ".";
    return out;
}

namespace detail {

inline const char* domain_op_text(DomainOp op) {
    switch (op) {
        case DomainOp::cross: return "><";
        case DomainOp::unite: return "+";
        case DomainOp::intersect: return "*";
        case DomainOp::subtract: return "-";
        default: return "?";
    }
}

inline void print_domain_rec(std::string& out, const DomainExpr& d, bool parenthesize) {
    switch (d.op) {
        case DomainOp::pred: out += d.pred; return;
        case DomainOp::range:
            out += "{";
            print_term_prec(out, d.lo, 0);
            out += "..";
            print_term_prec(out, d.hi, 0);
            out += "}";
            return;
        default: break;
    }
    if (parenthesize) out += "(";
    const DomainExpr& lhs = d.kids[0];
    const DomainExpr& rhs = d.kids[1];
    bool lhs_parens = lhs.op != DomainOp::pred && lhs.op != DomainOp::range && lhs.op != d.op;
    bool rhs_parens = rhs.op != DomainOp::pred && rhs.op != DomainOp::range;
    print_domain_rec(out, lhs, lhs_parens);
    out += domain_op_text(d.op);
    print_domain_rec(out, rhs, rhs_parens);
    if (parenthesize) out += ")";
}

}  // namespace detail

inline std::string print_domain(const DomainExpr& d) {
    std::string out;
    detail::print_domain_rec(out, d, false);
    return out;
}

inline std::string print_metafact(const Metafact& m) {
    std::string out = metafact_kind_text(m.kind);
    out += "(";
    out += print_domain(m.domain);
    out += ",";
    out += m.target;
    if (m.kind == MetafactKind::partition) {
        out += ",";
        out += print_term(m.k);
    } else if (m.kind == MetafactKind::intfunc) {
        out += ",";
        out += print_term(m.lo);
        out += "..";
        out += print_term(m.hi);
    }
    out += ").";
    return out;
}

inline std::string print_program(const Program& p) {
    std::string out = "DATABASE\n";
    for (const ConstDef& c : p.constants) {
        out += "    ";
        out += c.name;
        out += " = ";
        out += std::to_string(c.value);
        out += ";\n";
    }
    for (const RelDef& r : p.relations) {
        out += "    ";
        out += r.name;
        out += " = {";
        if (r.is_range) {
            out += print_term(r.lo);
            out += "..";
            out += print_term(r.hi);
        } else {
            for (std::size_t i = 0; i < r.tuples.size(); ++i) {
                if (i) out += ",";
                const auto& tuple = r.tuples[i];
                if (tuple.size() == 1) {
                    out += print_term(tuple[0]);
                } else {
                    out += "(";
                    for (std::size_t j = 0; j < tuple.size(); ++j) {
                        if (j) out += ",";
                        out += print_term(tuple[j]);
                    }
                    out += ")";
                }
            }
        }
        out += "};\n";
    }
    out += "SPECIFICATION\n";
    for (const Metafact& m : p.metafacts) {
        out += "    ";
        out += print_metafact(m);
        out += "\n";
    }
    for (const Rule& r : p.rules) {
        out += "    ";
        out += print_rule(r);
        out += "\n";
    }
    return out;
}

}  // namespace npspec
