#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "npspec/ast.hpp"
#include "npspec/lexer.hpp"

namespace npspec {

namespace detail {

inline bool lowercase_initial(const std::string& name) {
    return !name.empty() && std::islower(static_cast<unsigned char>(name[0]));
}

}  // namespace detail

class Parser {
  public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Program run() {
        Program p;
        expect(TokenKind::kw_database, "a program starts with the DATABASE section");
        while (!at(TokenKind::kw_specification) && !at(TokenKind::end_of_input))
            parse_db_item(p);
        expect(TokenKind::kw_specification,
               "the SPECIFICATION section must follow the DATABASE section");
        while (!at(TokenKind::end_of_input)) parse_spec_item(p);
        finalize(p);
        return p;
    }

  private:
    std::vector<Token> toks_;
    std::size_t at_ = 0;

    const Token& cur() const { return toks_[at_]; }
    const Token& peek(std::size_t ahead = 1) const {
        std::size_t i = at_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(TokenKind k) const { return cur().kind == k; }

    Token take() { return toks_[at_++]; }

    bool accept(TokenKind k) {
        if (!at(k)) return false;
        ++at_;
        return true;
    }

    Token expect(TokenKind k, std::string_view why) {
        if (!at(k))
            throw CompileError(ErrorCode::syntax_error,
                               std::string("expected ") + token_kind_name(k) + ", found " +
                                   token_kind_name(cur().kind) + " (" + std::string(why) + ")",
                               cur().pos);
        return take();
    }

    [[noreturn]] void fail_here(const std::string& msg) const {
        throw CompileError(ErrorCode::syntax_error, msg, cur().pos);
    }

    // ---- DATABASE section ----

    void parse_db_item(Program& p) {
        if (!at(TokenKind::identifier))
            fail_here("expected a constant or relation definition");
        Token name = take();
        if (!detail::lowercase_initial(name.text))
            throw CompileError(ErrorCode::syntax_error,
                               "database names start with a lowercase letter", name.pos);
        expect(TokenKind::assign, "definitions use '='");
        if (at(TokenKind::lbrace)) {
            parse_relation(p, name);
        } else {
            ConstDef c;
            c.name = name.text;
            c.pos = name.pos;
            c.value = parse_signed_integer("a constant definition needs an integer value");
            expect(TokenKind::semicolon, "database definitions end with ';'");
            p.constants.push_back(std::move(c));
        }
    }

    std::int64_t parse_signed_integer(std::string_view why) {
        bool neg = accept(TokenKind::minus);
        Token t = expect(TokenKind::integer, why);
        return neg ? -t.value : t.value;
    }

    // A scalar in tuples, ranges and metafact parameters: integer, negated
    // integer, or a name that must resolve to a defined constant.
    Term parse_scalar(std::string_view why) {
        SourcePos pos = cur().pos;
        if (at(TokenKind::minus) || at(TokenKind::integer))
            return Term::make_int(parse_signed_integer(why), pos);
        if (at(TokenKind::identifier)) {
            Token t = take();
            if (!detail::lowercase_initial(t.text))
                throw CompileError(ErrorCode::syntax_error,
                                   "variables cannot appear here; expected " +
                                       std::string(why),
                                   t.pos);
            return Term::make_symbol(t.text, t.pos);
        }
        fail_here(std::string(why) + ", found " + token_kind_name(cur().kind));
    }

    void parse_relation(Program& p, const Token& name) {
        RelDef r;
        r.name = name.text;
        r.pos = name.pos;
        expect(TokenKind::lbrace, "relation definitions use '{'");
        if (at(TokenKind::rbrace))
            fail_here("a relation needs at least one tuple; its arity comes from them");
        if (!at(TokenKind::lparen)) {
            Term first = parse_scalar("a tuple element");
            if (accept(TokenKind::dotdot)) {
                r.is_range = true;
                r.lo = std::move(first);
                r.hi = parse_scalar("the upper range bound");
                expect(TokenKind::rbrace, "ranges close with '}'");
                expect(TokenKind::semicolon, "database definitions end with ';'");
                p.relations.push_back(std::move(r));
                return;
            }
            r.tuples.push_back({std::move(first)});
            while (accept(TokenKind::comma)) r.tuples.push_back(parse_tuple());
        } else {
            r.tuples.push_back(parse_tuple());
            while (accept(TokenKind::comma)) r.tuples.push_back(parse_tuple());
        }
        expect(TokenKind::rbrace, "tuple lists close with '}'");
        expect(TokenKind::semicolon, "database definitions end with ';'");
        std::size_t arity = r.tuples.front().size();
        for (const auto& t : r.tuples)
            if (t.size() != arity)
                throw CompileError(ErrorCode::syntax_error,
                                   "tuple arity mismatch in relation '" + r.name + "'",
                                   r.pos);
        p.relations.push_back(std::move(r));
    }

    std::vector<Term> parse_tuple() {
        if (!accept(TokenKind::lparen)) return {parse_scalar("a tuple element")};
        std::vector<Term> tuple;
        tuple.push_back(parse_scalar("a tuple element"));
        while (accept(TokenKind::comma)) tuple.push_back(parse_scalar("a tuple element"));
        expect(TokenKind::rparen, "tuples close with ')'");
        return tuple;
    }

    // ---- SPECIFICATION section ----

    void parse_spec_item(Program& p) {
        switch (cur().kind) {
            case TokenKind::kw_subset:
            case TokenKind::kw_permutation:
            case TokenKind::kw_partition:
            case TokenKind::kw_intfunc: p.metafacts.push_back(parse_metafact()); return;
            case TokenKind::identifier:
            case TokenKind::kw_fail: p.rules.push_back(parse_rule()); return;
            default: fail_here("expected a metafact or a rule");
        }
    }

    Metafact parse_metafact() {
        Metafact m;
        m.pos = cur().pos;
        TokenKind kw = take().kind;
        switch (kw) {
            case TokenKind::kw_subset: m.kind = MetafactKind::subset; break;
            case TokenKind::kw_permutation: m.kind = MetafactKind::permutation; break;
            case TokenKind::kw_partition: m.kind = MetafactKind::partition; break;
            default: m.kind = MetafactKind::intfunc; break;
        }
        expect(TokenKind::lparen, "metafacts take parenthesized arguments");
        m.domain = parse_domain();
        expect(TokenKind::comma, "a metafact names its guessed predicate after the domain");
        Token target = expect(TokenKind::identifier, "the guessed predicate name");
        if (!detail::lowercase_initial(target.text))
            throw CompileError(ErrorCode::syntax_error,
                               "predicate names start with a lowercase letter", target.pos);
        m.target = target.text;
        if (m.kind == MetafactKind::partition) {
            expect(TokenKind::comma, "Partition takes a class count");
            m.k = parse_scalar("the number of classes");
        } else if (m.kind == MetafactKind::intfunc) {
            expect(TokenKind::comma, "IntFunc takes a value range");
            m.lo = parse_scalar("the lower value bound");
            expect(TokenKind::dotdot, "IntFunc value ranges use '..'");
            m.hi = parse_scalar("the upper value bound");
        }
        expect(TokenKind::rparen, "metafacts close with ')'");
        expect(TokenKind::dot, "metafacts end with '.'");
        return m;
    }

    DomainExpr parse_domain() {
        DomainExpr lhs = parse_domain_primary();
        DomainOp pending = DomainOp::pred;  // none yet
        bool have_op = false;
        for (;;) {
            DomainOp op;
            switch (cur().kind) {
                case TokenKind::cross: op = DomainOp::cross; break;
                case TokenKind::plus: op = DomainOp::unite; break;
                case TokenKind::star: op = DomainOp::intersect; break;
                case TokenKind::minus: op = DomainOp::subtract; break;
                default: return lhs;
            }
            if (have_op && op != pending)
                fail_here("mixed domain operators need parentheses");
            SourcePos pos = take().pos;
            DomainExpr rhs = parse_domain_primary();
            lhs = DomainExpr::make_binary(op, std::move(lhs), std::move(rhs), pos);
            pending = op;
            have_op = true;
        }
    }

    DomainExpr parse_domain_primary() {
        if (at(TokenKind::identifier)) {
            Token t = take();
            if (!detail::lowercase_initial(t.text))
                throw CompileError(ErrorCode::syntax_error,
                                   "domains are built from relation names and ranges",
                                   t.pos);
            return DomainExpr::make_pred(t.text, t.pos);
        }
        if (at(TokenKind::lbrace)) {
            SourcePos pos = take().pos;
            Term lo = parse_scalar("the lower range bound");
            expect(TokenKind::dotdot, "domain ranges use '..'");
            Term hi = parse_scalar("the upper range bound");
            expect(TokenKind::rbrace, "ranges close with '}'");
            return DomainExpr::make_range(std::move(lo), std::move(hi), pos);
        }
        if (accept(TokenKind::lparen)) {
            DomainExpr d = parse_domain();
            expect(TokenKind::rparen, "parenthesized domains close with ')'");
            return d;
        }
        fail_here("expected a relation name, a range, or a parenthesized domain");
    }

    Rule parse_rule() {
        Rule r;
        r.pos = cur().pos;
        if (accept(TokenKind::kw_fail)) {
            r.is_fail = true;
        } else {
            r.head = parse_atom();
            for (const Term& arg : r.head.args)
                check_head_term(arg);
        }
        expect(TokenKind::arrow, "rules use '<--' between head and body");
        r.body.push_back(parse_body_elem());
        while (accept(TokenKind::comma)) r.body.push_back(parse_body_elem());
        expect(TokenKind::dot, "rules end with '.'");
        check_anon_placement(r);
        return r;
    }

    // '_' is only meaningful as a direct argument of a positive body atom
    // (and in aggregate templates, which use their own argument kind).
    void check_anon_placement(const Rule& r) {
        auto reject_anon = [](const Term& t, const char* where) {
            struct Walk {
                const char* where;
                void operator()(const Term& t) const {
                    if (t.kind == TermKind::anon)
                        throw CompileError(ErrorCode::syntax_error,
                                           std::string("'_' cannot appear ") + where,
                                           t.pos);
                    for (const Term& k : t.kids) (*this)(k);
                }
            };
            Walk{where}(t);
        };
        for (const BodyElem& e : r.body) {
            if (const Atom* a = std::get_if<Atom>(&e)) {
                for (const Term& arg : a->args)
                    for (const Term& k : arg.kids) reject_anon(k, "inside arithmetic");
            } else if (const NegAtom* n = std::get_if<NegAtom>(&e)) {
                for (const Term& arg : n->atom.args)
                    reject_anon(arg, "in a negated atom");
            } else if (const Comparison* c = std::get_if<Comparison>(&e)) {
                reject_anon(c->lhs, "in a comparison");
                reject_anon(c->rhs, "in a comparison");
            }
        }
    }

    void check_head_term(const Term& t) {
        if (t.kind == TermKind::anon)
            throw CompileError(ErrorCode::syntax_error,
                               "'_' cannot appear in a rule head", t.pos);
        for (const Term& k : t.kids) check_head_term(k);
    }

    BodyElem parse_body_elem() {
        switch (cur().kind) {
            case TokenKind::kw_not: {
                take();
                return NegAtom{parse_atom()};
            }
            case TokenKind::kw_count:
            case TokenKind::kw_sum:
            case TokenKind::kw_min:
            case TokenKind::kw_max: return parse_aggregate();
            case TokenKind::kw_fail:
                fail_here("'fail' cannot appear in a rule body");
            case TokenKind::identifier:
                if (detail::lowercase_initial(cur().text) && peek().is(TokenKind::lparen))
                    return parse_atom();
                break;
            default: break;
        }
        Comparison c;
        c.pos = cur().pos;
        c.lhs = parse_term();
        switch (cur().kind) {
            case TokenKind::eq: c.op = CmpOp::eq; break;
            case TokenKind::ne: c.op = CmpOp::ne; break;
            case TokenKind::lt: c.op = CmpOp::lt; break;
            case TokenKind::le: c.op = CmpOp::le; break;
            case TokenKind::gt: c.op = CmpOp::gt; break;
            case TokenKind::ge: c.op = CmpOp::ge; break;
            case TokenKind::assign:
                fail_here("comparisons are written '==', not '='");
            default: fail_here("expected a comparison operator");
        }
        take();
        c.rhs = parse_term();
        return c;
    }

    Atom parse_atom() {
        Token name = expect(TokenKind::identifier, "an atom starts with its predicate name");
        if (!detail::lowercase_initial(name.text))
            throw CompileError(ErrorCode::syntax_error,
                               "predicate names start with a lowercase letter", name.pos);
        Atom a;
        a.pred = name.text;
        a.pos = name.pos;
        expect(TokenKind::lparen, "atoms take parenthesized arguments");
        a.args.push_back(parse_term());
        while (accept(TokenKind::comma)) a.args.push_back(parse_term());
        expect(TokenKind::rparen, "atoms close with ')'");
        return a;
    }

    Aggregate parse_aggregate() {
        Aggregate agg;
        agg.pos = cur().pos;
        switch (take().kind) {
            case TokenKind::kw_count: agg.func = AggFunc::count; break;
            case TokenKind::kw_sum: agg.func = AggFunc::sum; break;
            case TokenKind::kw_min: agg.func = AggFunc::min; break;
            default: agg.func = AggFunc::max; break;
        }
        expect(TokenKind::lparen, "aggregates take parenthesized arguments");
        Token pred = expect(TokenKind::identifier, "the aggregated predicate name");
        if (!detail::lowercase_initial(pred.text))
            throw CompileError(ErrorCode::syntax_error,
                               "predicate names start with a lowercase letter", pred.pos);
        agg.pred = pred.text;
        expect(TokenKind::lparen, "the aggregate template lists argument positions");
        agg.args.push_back(parse_agg_arg());
        while (accept(TokenKind::comma)) agg.args.push_back(parse_agg_arg());
        expect(TokenKind::rparen, "the aggregate template closes with ')'");
        expect(TokenKind::comma, "aggregates name a result variable after the template");
        Token rv = expect(TokenKind::identifier, "the result variable");
        if (detail::lowercase_initial(rv.text))
            throw CompileError(ErrorCode::syntax_error,
                               "the aggregate result must be a variable", rv.pos);
        agg.result_var = rv.text;
        expect(TokenKind::colon, "the result variable is followed by ':' and a range");
        agg.lo = parse_scalar("the lower range bound");
        expect(TokenKind::dotdot, "aggregate ranges use '..'");
        agg.hi = parse_scalar("the upper range bound");
        expect(TokenKind::rparen, "aggregates close with ')'");

        int stars = 0;
        for (const AggArg& a : agg.args) {
            if (a.kind == AggArgKind::star) ++stars;
            if (a.kind == AggArgKind::variable && a.name == agg.result_var)
                throw CompileError(ErrorCode::syntax_error,
                                   "the result variable cannot occur in the template",
                                   a.pos);
        }
        if (agg.func == AggFunc::count && stars < 1)
            throw CompileError(ErrorCode::syntax_error,
                               "COUNT needs at least one '*' position", agg.pos);
        if (agg.func != AggFunc::count && stars != 1)
            throw CompileError(ErrorCode::syntax_error,
                               std::string(agg_func_text(agg.func)) +
                                   " needs exactly one '*' position",
                               agg.pos);
        return agg;
    }

    AggArg parse_agg_arg() {
        AggArg a;
        a.pos = cur().pos;
        if (accept(TokenKind::star)) {
            a.kind = AggArgKind::star;
        } else if (accept(TokenKind::underscore)) {
            a.kind = AggArgKind::anon;
        } else if (at(TokenKind::minus) || at(TokenKind::integer)) {
            a.kind = AggArgKind::integer;
            a.value = parse_signed_integer("an aggregate template constant");
        } else if (at(TokenKind::identifier)) {
            Token t = take();
            a.kind = detail::lowercase_initial(t.text) ? AggArgKind::symbol
                                                       : AggArgKind::variable;
            a.name = t.text;
        } else {
            fail_here("expected '*', '_', a variable, or a constant in the template");
        }
        return a;
    }

    // ---- terms ----

    Term parse_term() { return parse_additive(); }

    Term parse_additive() {
        Term lhs = parse_multiplicative();
        for (;;) {
            if (at(TokenKind::plus) || at(TokenKind::minus)) {
                ArithOp op = at(TokenKind::plus) ? ArithOp::add : ArithOp::sub;
                SourcePos pos = take().pos;
                Term rhs = parse_multiplicative();
                lhs = Term::make_binary(op, std::move(lhs), std::move(rhs), pos);
            } else {
                return lhs;
            }
        }
    }

    Term parse_multiplicative() {
        Term lhs = parse_power();
        for (;;) {
            if (at(TokenKind::star) || at(TokenKind::slash)) {
                ArithOp op = at(TokenKind::star) ? ArithOp::mul : ArithOp::div;
                SourcePos pos = take().pos;
                Term rhs = parse_power();
                lhs = Term::make_binary(op, std::move(lhs), std::move(rhs), pos);
            } else {
                return lhs;
            }
        }
    }

    Term parse_power() {
        Term base = parse_unary();
        if (at(TokenKind::caret)) {
            SourcePos pos = take().pos;
            Term exp = parse_power();  // right-associative
            return Term::make_binary(ArithOp::pow, std::move(base), std::move(exp), pos);
        }
        return base;
    }

    Term parse_unary() {
        if (at(TokenKind::minus)) {
            SourcePos pos = take().pos;
            Token t = expect(TokenKind::integer, "'-' only negates integer literals");
            return Term::make_int(-t.value, pos);
        }
        return parse_primary();
    }

    Term parse_primary() {
        switch (cur().kind) {
            case TokenKind::integer: {
                Token t = take();
                return Term::make_int(t.value, t.pos);
            }
            case TokenKind::underscore: {
                Token t = take();
                return Term::make_anon(t.pos);
            }
            case TokenKind::identifier: {
                Token t = take();
                if (detail::lowercase_initial(t.text)) {
                    if (at(TokenKind::lparen))
                        throw CompileError(ErrorCode::syntax_error,
                                           "atoms cannot nest inside terms", cur().pos);
                    return Term::make_symbol(t.text, t.pos);
                }
                return Term::make_variable(t.text, t.pos);
            }
            case TokenKind::kw_abs: {
                SourcePos pos = take().pos;
                expect(TokenKind::lparen, "abs takes a parenthesized argument");
                Term arg = parse_term();
                expect(TokenKind::rparen, "abs closes with ')'");
                return Term::make_abs(std::move(arg), pos);
            }
            case TokenKind::lparen: {
                take();
                Term t = parse_term();
                expect(TokenKind::rparen, "parenthesized terms close with ')'");
                return t;
            }
            default: fail_here("expected a term");
        }
    }

    // ---- whole-program checks ----

    void finalize(const Program& p) {
        std::set<std::string> names;
        for (const ConstDef& c : p.constants)
            if (!names.insert(c.name).second)
                throw CompileError(ErrorCode::duplicate_definition,
                                   "'" + c.name + "' is defined twice", c.pos);
        for (const RelDef& r : p.relations)
            if (!names.insert(r.name).second)
                throw CompileError(ErrorCode::duplicate_definition,
                                   "'" + r.name + "' is defined twice", r.pos);
        for (const Metafact& m : p.metafacts)
            if (!names.insert(m.target).second)
                throw CompileError(ErrorCode::duplicate_definition,
                                   "guessed predicate '" + m.target +
                                       "' collides with an existing name",
                                   m.pos);
    }
};

inline Program parse(std::vector<Token> tokens) { return Parser(std::move(tokens)).run(); }

inline Program parse_program(std::string_view source) { return parse(tokenize(source)); }

}  // namespace npspec
