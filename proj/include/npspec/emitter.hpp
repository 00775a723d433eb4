#pragma once

#include <sstream>
#include <string>

#include "npspec/asp.hpp"

namespace npspec {

namespace detail {

class Emitter {
  public:
    explicit Emitter(const AspProgram& p) : p_(p) {}

    std::string run() {
        for (const AspDirective& d : p_.directives) directive(d);
        facts();
        for (const AspRule& r : p_.rules) rule(r);
        return out_.str();
    }

  private:
    const AspProgram& p_;
    std::ostringstream out_;

    bool dlv() const { return p_.opts.dialect == AspDialect::dlv; }

    void directive(const AspDirective& d) {
        if (d.kind == AspDirective::maxint)
            out_ << "#maxint=" << d.value << ".\n";
        else
            out_ << "#const " << d.name << "=" << d.value << ".\n";
    }

    // Facts for one predicate share a line, wrapped near 100 columns.
    void facts() {
        std::size_t i = 0;
        while (i < p_.facts.size()) {
            const std::string& pred = p_.facts[i].pred;
            std::string line;
            while (i < p_.facts.size() && p_.facts[i].pred == pred) {
                std::string one = atom(p_.facts[i]) + ".";
                if (!line.empty() && line.size() + 1 + one.size() > 100) {
                    out_ << line << "\n";
                    line.clear();
                }
                line += line.empty() ? one : " " + one;
                ++i;
            }
            if (!line.empty()) out_ << line << "\n";
        }
    }

    void rule(const AspRule& r) {
        std::string head_text;
        if (const auto* disj = std::get_if<std::vector<AspAtom>>(&r.head)) {
            const char* sep = dlv() ? " v " : " | ";
            for (std::size_t i = 0; i < disj->size(); ++i) {
                if (i) head_text += sep;
                head_text += atom((*disj)[i]);
            }
        } else if (const auto* choice = std::get_if<AspChoiceHead>(&r.head)) {
            std::string inner = atom(choice->element);
            if (choice->condition) inner += " : " + atom(*choice->condition);
            std::string braces = "{" + inner + "}";
            if (choice->lo && choice->hi)
                head_text = std::to_string(*choice->lo) + " " + braces + " " +
                            std::to_string(*choice->hi);
            else
                head_text = braces;
        }

        std::string body_text;
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            if (i) body_text += ", ";
            body_text += body_lit(r.body[i]);
        }

        if (head_text.empty() && body_text.empty()) return;
        if (head_text.empty())
            out_ << ":- " << body_text << ".\n";
        else if (body_text.empty())
            out_ << head_text << ".\n";
        else
            out_ << head_text << " :- " << body_text << ".\n";
    }

    std::string body_lit(const AspBodyLit& lit) {
        if (const AspLit* al = std::get_if<AspLit>(&lit))
            return (al->naf ? "not " : "") + atom(al->atom);
        if (const AspCmp* c = std::get_if<AspCmp>(&lit))
            return term(c->lhs) + " " + cmp_text(c->op) + " " + term(c->rhs);
        return aggregate(std::get<AspAggLit>(lit));
    }

    static std::string cmp_text(CmpOp op) {
        switch (op) {
            case CmpOp::eq: return "=";
            case CmpOp::ne: return "!=";
            case CmpOp::lt: return "<";
            case CmpOp::le: return "<=";
            case CmpOp::gt: return ">";
            case CmpOp::ge: return ">=";
        }
        return "=";
    }

    static const char* agg_name(AggFunc f) {
        switch (f) {
            case AggFunc::count: return "count";
            case AggFunc::sum: return "sum";
            case AggFunc::min: return "min";
            case AggFunc::max: return "max";
        }
        return "count";
    }

    std::string aggregate(const AspAggLit& g) {
        if (dlv()) {
            std::string proj;
            for (std::size_t i = 0; i < g.projection.size(); ++i) {
                if (i) proj += ",";
                proj += term(g.projection[i]);
            }
            std::string core = "#" + std::string(agg_name(g.func)) + "{" + proj +
                               " : " + atom(g.atom) + "}";
            if (g.guard == AspAggLit::at_least_two) return core + " > 1";
            return core + " = " + g.var;
        }
        // gringo-3: #count over atoms, weighted forms for the value
        // aggregates, with lower and upper guards around the braces.
        std::string core;
        if (g.func == AggFunc::count) {
            core = "#count{" + atom(g.atom) + "}";
        } else {
            core = "#" + std::string(agg_name(g.func)) + "[" + atom(g.atom) + " = " +
                   term(g.projection[0]) + "]";
        }
        if (g.guard == AspAggLit::at_least_two) return "2 " + core;
        return g.var + " " + core + " " + g.var;
    }

    std::string atom(const AspAtom& a) {
        std::string text = (a.strong_neg ? "-" : "") + a.pred;
        if (a.args.empty()) return text;
        text += "(";
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (i) text += ",";
            text += term(a.args[i]);
        }
        return text + ")";
    }

    std::string term(const AspTerm& t) { return term_prec(t, 0); }

    static int tier(ArithOp op) {
        switch (op) {
            case ArithOp::add:
            case ArithOp::sub: return 1;
            case ArithOp::mul:
            case ArithOp::div: return 2;
            case ArithOp::pow: return 3;
        }
        return 1;
    }

    static const char* op_text(ArithOp op) {
        switch (op) {
            case ArithOp::add: return "+";
            case ArithOp::sub: return "-";
            case ArithOp::mul: return "*";
            case ArithOp::div: return "/";
            case ArithOp::pow: return "**";
        }
        return "+";
    }

    std::string term_prec(const AspTerm& t, int parent) {
        switch (t.kind) {
            case AspTerm::integer: {
                std::string text = std::to_string(t.value);
                if (t.value < 0 && parent > 0) return "(" + text + ")";
                return text;
            }
            case AspTerm::symbol: return t.name;
            case AspTerm::variable: return t.name;
            case AspTerm::anon: return "_";
            case AspTerm::range:
                return term_prec(t.kids[0], 0) + ".." + term_prec(t.kids[1], 0);
            case AspTerm::abs_fn: return "#abs(" + term_prec(t.kids[0], 0) + ")";
            case AspTerm::arith: {
                if (t.op == ArithOp::pow)
                    return "#pow(" + term_prec(t.kids[0], 0) + "," +
                           term_prec(t.kids[1], 0) + ")";
                int mine = tier(t.op);
                std::string text = term_prec(t.kids[0], mine) +
                                   op_text(t.op) + term_prec(t.kids[1], mine + 1);
                if (mine < parent) return "(" + text + ")";
                return text;
            }
        }
        return "_";
    }
};

}  // namespace detail

inline std::string emit(const AspProgram& p) { return detail::Emitter(p).run(); }

}  // namespace npspec
