#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "npspec/analyzer.hpp"
#include "npspec/asp.hpp"

namespace npspec {

// ---- safety of emitted programs ----

struct AspObligation {
    int rule_index = -1;
    std::string var;
};

namespace detail {

inline void asp_term_vars(const AspTerm& t, std::set<std::string>& out) {
    if (t.kind == AspTerm::variable) out.insert(t.name);
    for (const AspTerm& k : t.kids) asp_term_vars(k, out);
}

inline void asp_atom_vars(const AspAtom& a, std::set<std::string>& out) {
    for (const AspTerm& t : a.args) asp_term_vars(t, out);
}

}  // namespace detail

// Unbound-variable analysis over emitted rules, mirroring what the target
// solvers accept: plain arguments of positive atoms bind, `V = expr`
// assignments bind once the expression's variables are bound, choice
// conditions bind their element's variables, and variables occurring only
// inside one aggregate literal are local to it.
inline std::vector<AspObligation> asp_check_safety(const AspProgram& p) {
    std::vector<AspObligation> out;
    for (std::size_t ri = 0; ri < p.rules.size(); ++ri) {
        const AspRule& r = p.rules[ri];
        std::set<std::string> occurring, bound;
        std::map<std::string, int> agg_only_count;  // var -> aggregates touching it
        std::set<std::string> outside_aggs;

        auto note_outside = [&](const std::set<std::string>& vars) {
            for (const auto& v : vars) outside_aggs.insert(v);
        };

        if (const auto* disj = std::get_if<std::vector<AspAtom>>(&r.head)) {
            for (const AspAtom& a : *disj) {
                std::set<std::string> vars;
                detail::asp_atom_vars(a, vars);
                occurring.insert(vars.begin(), vars.end());
                note_outside(vars);
            }
        } else if (const auto* choice = std::get_if<AspChoiceHead>(&r.head)) {
            std::set<std::string> vars;
            detail::asp_atom_vars(choice->element, vars);
            occurring.insert(vars.begin(), vars.end());
            note_outside(vars);
            if (choice->condition) {
                std::set<std::string> cvars;
                detail::asp_atom_vars(*choice->condition, cvars);
                occurring.insert(cvars.begin(), cvars.end());
                note_outside(cvars);
                for (const AspTerm& t : choice->condition->args)
                    if (t.kind == AspTerm::variable) bound.insert(t.name);
            }
        }

        for (const AspBodyLit& lit : r.body) {
            if (const AspLit* al = std::get_if<AspLit>(&lit)) {
                std::set<std::string> vars;
                detail::asp_atom_vars(al->atom, vars);
                occurring.insert(vars.begin(), vars.end());
                note_outside(vars);
                if (!al->naf)
                    for (const AspTerm& t : al->atom.args)
                        if (t.kind == AspTerm::variable) bound.insert(t.name);
            } else if (const AspCmp* c = std::get_if<AspCmp>(&lit)) {
                std::set<std::string> vars;
                detail::asp_term_vars(c->lhs, vars);
                detail::asp_term_vars(c->rhs, vars);
                occurring.insert(vars.begin(), vars.end());
                note_outside(vars);
            } else if (const AspAggLit* g = std::get_if<AspAggLit>(&lit)) {
                std::set<std::string> vars;
                for (const AspTerm& t : g->projection) detail::asp_term_vars(t, vars);
                detail::asp_atom_vars(g->atom, vars);
                for (const auto& v : vars) {
                    occurring.insert(v);
                    agg_only_count[v] += 1;
                }
                if (g->guard == AspAggLit::eq_var) {
                    occurring.insert(g->var);
                    outside_aggs.insert(g->var);
                }
            }
        }

        // Assignment fixpoint.
        bool changed = true;
        while (changed) {
            changed = false;
            for (const AspBodyLit& lit : r.body) {
                const AspCmp* c = std::get_if<AspCmp>(&lit);
                if (!c || c->op != CmpOp::eq) continue;
                auto try_bind = [&](const AspTerm& target, const AspTerm& source) {
                    if (target.kind != AspTerm::variable) return;
                    if (bound.count(target.name)) return;
                    std::set<std::string> src;
                    detail::asp_term_vars(source, src);
                    for (const auto& v : src)
                        if (!bound.count(v)) return;
                    bound.insert(target.name);
                    changed = true;
                };
                try_bind(c->lhs, c->rhs);
                try_bind(c->rhs, c->lhs);
            }
        }

        for (const auto& v : occurring) {
            if (bound.count(v)) continue;
            bool agg_local = agg_only_count.count(v) && agg_only_count.at(v) == 1 &&
                             !outside_aggs.count(v);
            if (agg_local) continue;
            out.push_back({static_cast<int>(ri), v});
        }
    }
    return out;
}

// ---- translation ----

namespace detail {

class FreshVars {
  public:
    explicit FreshVars(std::set<std::string> taken) : taken_(std::move(taken)) {}

    std::string next() {
        for (;;) {
            std::string name = "V" + std::to_string(++counter_);
            if (taken_.insert(name).second) return name;
        }
    }

  private:
    std::set<std::string> taken_;
    int counter_ = 0;
};

inline void rule_var_names(const Rule& r, std::set<std::string>& out) {
    struct {
        std::set<std::string>& out;
        void walk(const Term& t) {
            if (t.kind == TermKind::variable) out.insert(t.name);
            for (const Term& k : t.kids) walk(k);
        }
    } w{out};
    if (!r.is_fail)
        for (const Term& t : r.head.args) w.walk(t);
    for (const BodyElem& e : r.body) {
        if (const Atom* a = std::get_if<Atom>(&e)) {
            for (const Term& t : a->args) w.walk(t);
        } else if (const NegAtom* n = std::get_if<NegAtom>(&e)) {
            for (const Term& t : n->atom.args) w.walk(t);
        } else if (const Comparison* c = std::get_if<Comparison>(&e)) {
            w.walk(c->lhs);
            w.walk(c->rhs);
        } else if (const Aggregate* g = std::get_if<Aggregate>(&e)) {
            for (const AggArg& arg : g->args)
                if (arg.kind == AggArgKind::variable) out.insert(arg.name);
            out.insert(g->result_var);
        }
    }
}

class Translator {
  public:
    Translator(const Analysis& a, EmitOptions opts) : a_(a), opts_(opts) {}

    AspProgram run() {
        validate_dialect();
        collect_taken();
        out_.opts = opts_;
        directives();
        database_facts();
        metafact_domains();
        guesses();
        rules();
        check_invariants();
        return std::move(out_);
    }

  private:
    const Analysis& a_;
    EmitOptions opts_;
    AspProgram out_;
    std::set<std::string> taken_;
    int domain_counter_ = 0;
    int agg_counter_ = 0;

    struct DomainRef {
        std::string pred;
        bool is_range = false;  // single range fact instead of enumerated tuples
    };
    std::vector<DomainRef> domain_refs_;          // per metafact
    std::map<int, std::string> value_refs_;       // metafact -> value-range predicate
    std::string univ_ref_;

    bool dlv() const { return opts_.dialect == AspDialect::dlv; }

    // Rules are rendered from the original program under gringo so defined
    // constants stay symbolic; dlv inlines them via the resolved program.
    const Program& source() const { return dlv() ? a_.resolved : a_.original; }

    // ---- validation ----

    void validate_dialect() {
        if (!dlv()) return;
        if (opts_.guess == GuessEncoding::choice)
            throw CompileError(ErrorCode::dialect_choice_unsupported,
                               "choice rules are not available in dlv output");
        for (const GuessDecl& g : a_.guesses) {
            if (g.has_values() && g.lo < 0)
                throw CompileError(ErrorCode::dialect_negative_integer,
                                   "dlv output cannot carry negative integers "
                                   "(value range of '" +
                                       g.target + "')",
                                   g.pos);
            for (const GroundTuple& t : g.domain.tuples())
                for (const Value& v : t)
                    if (is_int(v) && as_int(v) < 0)
                        throw CompileError(ErrorCode::dialect_negative_integer,
                                           "dlv output cannot carry negative integers "
                                           "(domain of '" +
                                               g.target + "')",
                                           g.pos);
        }
        for (const std::string& name : a_.relation_order)
            for (const GroundTuple& t : a_.relations.at(name).tuples())
                for (const Value& v : t)
                    if (is_int(v) && as_int(v) < 0)
                        throw CompileError(ErrorCode::dialect_negative_integer,
                                           "dlv output cannot carry negative integers "
                                           "(relation '" +
                                               name + "')");
        for (const Rule& r : a_.resolved.rules) {
            if (!r.is_fail)
                for (const Term& t : r.head.args) validate_dlv_term(t);
            for (const BodyElem& e : r.body) {
                if (const Atom* at = std::get_if<Atom>(&e)) {
                    for (const Term& t : at->args) validate_dlv_term(t);
                } else if (const NegAtom* n = std::get_if<NegAtom>(&e)) {
                    for (const Term& t : n->atom.args) validate_dlv_term(t);
                } else if (const Comparison* c = std::get_if<Comparison>(&e)) {
                    validate_dlv_term(c->lhs);
                    validate_dlv_term(c->rhs);
                } else if (const Aggregate* g = std::get_if<Aggregate>(&e)) {
                    for (const AggArg& arg : g->args)
                        if (arg.kind == AggArgKind::integer && arg.value < 0)
                            throw CompileError(ErrorCode::dialect_negative_integer,
                                               "dlv output cannot carry negative "
                                               "integers",
                                               arg.pos);
                    validate_dlv_term(g->lo);
                    validate_dlv_term(g->hi);
                }
            }
        }
    }

    void validate_dlv_term(const Term& t) {
        switch (t.kind) {
            case TermKind::integer:
                if (t.value < 0)
                    throw CompileError(ErrorCode::dialect_negative_integer,
                                       "dlv output cannot carry negative integers",
                                       t.pos);
                break;
            case TermKind::abs:
                throw CompileError(ErrorCode::dialect_unsupported_operator,
                                   "dlv output has no absolute-value operator", t.pos);
            case TermKind::binary:
                if (t.op == ArithOp::pow)
                    throw CompileError(ErrorCode::dialect_unsupported_operator,
                                       "dlv output has no exponentiation operator",
                                       t.pos);
                break;
            default: break;
        }
        for (const Term& k : t.kids) validate_dlv_term(k);
    }

    // ---- naming ----

    void collect_taken() {
        for (const auto& [name, _] : a_.constants) taken_.insert(name);
        for (const auto& [name, _] : a_.relations) taken_.insert(name);
        for (const GuessDecl& g : a_.guesses) taken_.insert(g.target);
        for (const std::string& d : a_.derived_order) taken_.insert(d);
    }

    std::string fresh_domain_name() {
        for (;;) {
            ++domain_counter_;
            std::string name =
                domain_counter_ == 1 ? "d" : "d" + std::to_string(domain_counter_);
            if (taken_.insert(name).second) return name;
        }
    }

    std::string fresh_agg_name() {
        for (;;) {
            ++agg_counter_;
            std::string name = "agg_dom_" + std::to_string(agg_counter_);
            if (taken_.insert(name).second) return name;
        }
    }

    std::string universal_name() {
        if (!univ_ref_.empty()) return univ_ref_;
        std::string name = "npspec_univ";
        for (int i = 2; !taken_.insert(name).second; ++i)
            name = "npspec_univ" + std::to_string(i);
        univ_ref_ = name;
        for (const GroundTuple& t : a_.universe.tuples())
            out_.facts.push_back({false, univ_ref_, {value_term(t[0])}});
        return univ_ref_;
    }

    static AspTerm value_term(const Value& v) {
        if (is_int(v)) return AspTerm::make_int(as_int(v));
        return AspTerm::make_symbol(std::get<std::string>(v));
    }

    // ---- directives and facts ----

    void directives() {
        if (dlv()) {
            AspDirective d;
            d.kind = AspDirective::maxint;
            d.value = a_.max_int > kValueBoundCap / opts_.maxint_multiplier
                          ? kValueBoundCap
                          : a_.max_int * opts_.maxint_multiplier;
            out_.directives.push_back(d);
        } else {
            for (const std::string& name : a_.constant_order) {
                AspDirective d;
                d.kind = AspDirective::const_def;
                d.name = name;
                d.value = a_.constants.at(name);
                out_.directives.push_back(d);
            }
        }
        out_.const_values = a_.constants;
    }

    AspTerm scalar_term(const Term& t) const {
        if (t.kind == TermKind::integer) return AspTerm::make_int(t.value);
        return AspTerm::make_symbol(t.name);
    }

    void database_facts() {
        for (const RelDef& r : source().relations) {
            if (r.is_range) {
                out_.facts.push_back(
                    {false, r.name,
                     {AspTerm::make_range(scalar_term(r.lo), scalar_term(r.hi))}});
                continue;
            }
            std::set<std::vector<std::pair<int, std::string>>> seen;
            for (const auto& tuple : r.tuples) {
                std::vector<std::pair<int, std::string>> key;
                for (const Term& t : tuple)
                    key.push_back(t.kind == TermKind::integer
                                      ? std::make_pair(0, std::to_string(t.value))
                                      : std::make_pair(1, t.name));
                if (!seen.insert(key).second) continue;
                AspAtom a;
                a.pred = r.name;
                for (const Term& t : tuple) a.args.push_back(scalar_term(t));
                out_.facts.push_back(std::move(a));
            }
        }
    }

    void metafact_domains() {
        for (std::size_t i = 0; i < a_.guesses.size(); ++i) {
            const DomainExpr& original = a_.original.metafacts[i].domain;
            const DomainExpr& resolved = a_.resolved.metafacts[i].domain;
            DomainRef ref;
            if (original.op == DomainOp::pred) {
                ref.pred = original.pred;
            } else if (original.op == DomainOp::range) {
                ref.pred = fresh_domain_name();
                ref.is_range = true;
                const DomainExpr& src = dlv() ? resolved : original;
                out_.facts.push_back(
                    {false, ref.pred,
                     {AspTerm::make_range(scalar_term(src.lo), scalar_term(src.hi))}});
            } else {
                ref.pred = fresh_domain_name();
                for (const GroundTuple& t : a_.guesses[i].domain.tuples()) {
                    AspAtom a;
                    a.pred = ref.pred;
                    for (const Value& v : t) a.args.push_back(value_term(v));
                    out_.facts.push_back(std::move(a));
                }
            }
            domain_refs_.push_back(std::move(ref));
        }
    }

    // ---- guess encodings ----

    static std::vector<std::string> schema_vars(int n, const char* base) {
        std::vector<std::string> out;
        if (n == 1) {
            out.push_back(base);
            return out;
        }
        for (int i = 1; i <= n; ++i) out.push_back(std::string(base) + std::to_string(i));
        return out;
    }

    static AspAtom var_atom(const std::string& pred, const std::vector<std::string>& vars) {
        AspAtom a;
        a.pred = pred;
        for (const std::string& v : vars) a.args.push_back(AspTerm::make_variable(v));
        return a;
    }

    void guesses() {
        for (std::size_t i = 0; i < a_.guesses.size(); ++i) {
            const GuessDecl& g = a_.guesses[i];
            const DomainRef& dom = domain_refs_[i];
            std::vector<std::string> xs = schema_vars(g.domain_arity, "X");
            AspAtom dom_atom = var_atom(dom.pred, xs);

            if (g.kind == MetafactKind::subset) {
                if (opts_.guess == GuessEncoding::disjunctive) {
                    AspRule r;
                    r.role = AspRule::guess;
                    r.metafact = static_cast<int>(i);
                    AspAtom pos = var_atom(g.target, xs);
                    AspAtom neg = pos;
                    neg.strong_neg = true;
                    r.head = std::vector<AspAtom>{pos, neg};
                    r.body.push_back(AspLit{false, dom_atom});
                    out_.rules.push_back(std::move(r));
                } else {
                    AspRule r;
                    r.role = AspRule::guess;
                    r.metafact = static_cast<int>(i);
                    AspChoiceHead h;
                    h.element = var_atom(g.target, xs);
                    h.condition = dom_atom;
                    r.head = std::move(h);
                    out_.rules.push_back(std::move(r));
                }
            } else {
                if (opts_.guess == GuessEncoding::disjunctive) {
                    AspRule r;
                    r.role = AspRule::guess;
                    r.metafact = static_cast<int>(i);
                    std::vector<AspAtom> disj;
                    for (std::int64_t v = g.lo; v <= g.hi; ++v) {
                        AspAtom at = var_atom(g.target, xs);
                        at.args.push_back(AspTerm::make_int(v));
                        disj.push_back(std::move(at));
                    }
                    r.head = std::move(disj);
                    r.body.push_back(AspLit{false, dom_atom});
                    out_.rules.push_back(std::move(r));
                } else {
                    AspRule r;
                    r.role = AspRule::guess;
                    r.metafact = static_cast<int>(i);
                    AspChoiceHead h;
                    AspAtom elem = var_atom(g.target, xs);
                    elem.args.push_back(AspTerm::make_range(AspTerm::make_int(g.lo),
                                                            AspTerm::make_int(g.hi)));
                    h.element = std::move(elem);
                    h.lo = 1;
                    h.hi = 1;
                    r.head = std::move(h);
                    r.body.push_back(AspLit{false, dom_atom});
                    out_.rules.push_back(std::move(r));
                }
                if (g.kind == MetafactKind::permutation) uniqueness(i, g);
            }
        }
    }

    void uniqueness(std::size_t mf, const GuessDecl& g) {
        std::vector<std::string> xs = schema_vars(g.domain_arity, "X");
        if (opts_.perm_check == PermCheck::pairwise) {
            std::vector<std::string> ys = schema_vars(g.domain_arity, "Y");
            for (int i = 0; i < g.domain_arity; ++i) {
                AspRule r;
                r.role = AspRule::uniqueness_pairwise;
                r.metafact = static_cast<int>(mf);
                AspAtom left = var_atom(g.target, xs);
                left.args.push_back(AspTerm::make_variable("A"));
                AspAtom right = var_atom(g.target, ys);
                right.args.push_back(AspTerm::make_variable("A"));
                r.body.push_back(AspLit{false, std::move(left)});
                r.body.push_back(AspLit{false, std::move(right)});
                AspCmp ne;
                ne.lhs = AspTerm::make_variable(xs[i]);
                ne.op = CmpOp::ne;
                ne.rhs = AspTerm::make_variable(ys[i]);
                r.body.push_back(std::move(ne));
                out_.rules.push_back(std::move(r));
            }
        } else {
            AspRule r;
            r.role = AspRule::uniqueness_aggregate;
            r.metafact = static_cast<int>(mf);
            AspAggLit agg;
            agg.func = AggFunc::count;
            for (const std::string& v : xs) agg.projection.push_back(AspTerm::make_variable(v));
            AspAtom inner = var_atom(g.target, xs);
            inner.args.push_back(AspTerm::make_variable("A"));
            agg.atom = std::move(inner);
            agg.guard = AspAggLit::at_least_two;
            r.body.push_back(std::move(agg));
            AspAtom anchor;
            anchor.pred = g.target;
            for (int i = 0; i < g.domain_arity; ++i) anchor.args.push_back(AspTerm::make_anon());
            anchor.args.push_back(AspTerm::make_variable("A"));
            r.body.push_back(AspLit{false, std::move(anchor)});
            out_.rules.push_back(std::move(r));
        }
    }

    // ---- rule translation ----

    void rules() {
        for (std::size_t i = 0; i < source().rules.size(); ++i)
            out_.rules.push_back(translate_rule(source().rules[i], static_cast<int>(i)));
        for (const GuessDecl& g : a_.guesses) out_.guessed_preds.push_back(g.target);
        out_.derived_preds = a_.derived_order;
    }

    AspRule translate_rule(const Rule& src, int index) {
        std::set<std::string> names;
        rule_var_names(src, names);
        FreshVars fresh(std::move(names));
        std::vector<AspCmp> eqs;

        AspRule out;
        out.role = AspRule::translated;
        out.source_rule = index;

        if (src.is_fail) {
            out.head = std::monostate{};
        } else {
            AspAtom h;
            h.pred = src.head.pred;
            for (const Term& t : src.head.args) h.args.push_back(arg_term(t, eqs, fresh));
            out.head = std::vector<AspAtom>{std::move(h)};
        }

        for (const BodyElem& e : src.body) {
            if (const Atom* at = std::get_if<Atom>(&e)) {
                AspAtom a;
                a.pred = at->pred;
                for (const Term& t : at->args) a.args.push_back(arg_term(t, eqs, fresh));
                out.body.push_back(AspLit{false, std::move(a)});
            } else if (const NegAtom* n = std::get_if<NegAtom>(&e)) {
                AspAtom a;
                a.pred = n->atom.pred;
                for (const Term& t : n->atom.args)
                    a.args.push_back(arg_term(t, eqs, fresh));
                out.body.push_back(AspLit{true, std::move(a)});
            } else if (const Comparison* c = std::get_if<Comparison>(&e)) {
                out.body.push_back(comparison(*c, eqs, fresh));
            } else if (const Aggregate* g = std::get_if<Aggregate>(&e)) {
                aggregate(*g, out.body, fresh);
            }
        }

        for (AspCmp& c : eqs) out.body.push_back(std::move(c));

        for (const Binder& b : a_.repairs[index]) out.body.push_back(binder_atom(b));

        return out;
    }

    // Translate an atom argument. Under dlv, arithmetic is replaced by a
    // fresh variable defined through an appended assignment.
    AspTerm arg_term(const Term& t, std::vector<AspCmp>& eqs, FreshVars& fresh) {
        if (!dlv()) return direct_term(t);
        if (t.kind == TermKind::binary || t.kind == TermKind::abs)
            return flatten(t, eqs, fresh);
        return direct_term(t);
    }

    AspTerm direct_term(const Term& t) const {
        switch (t.kind) {
            case TermKind::integer: return AspTerm::make_int(t.value);
            case TermKind::symbol: return AspTerm::make_symbol(t.name);
            case TermKind::variable: return AspTerm::make_variable(t.name);
            case TermKind::anon: return AspTerm::make_anon();
            case TermKind::abs: return AspTerm::make_abs(direct_term(t.kids[0]));
            case TermKind::binary:
                return AspTerm::make_arith(t.op, direct_term(t.kids[0]),
                                           direct_term(t.kids[1]));
        }
        return AspTerm::make_anon();
    }

    // Reduce to an atomic term, appending one single-operation assignment
    // per arithmetic node (dlv allows one operation per builtin).
    AspTerm flatten(const Term& t, std::vector<AspCmp>& eqs, FreshVars& fresh) {
        AspTerm shallow = flatten_shallow(t, eqs, fresh);
        if (shallow.atomic()) return shallow;
        AspTerm v = AspTerm::make_variable(fresh.next());
        AspCmp c;
        c.lhs = v;
        c.op = CmpOp::eq;
        c.rhs = std::move(shallow);
        eqs.push_back(std::move(c));
        return v;
    }

    // Atomic, or a single arithmetic operation over atomic operands.
    AspTerm flatten_shallow(const Term& t, std::vector<AspCmp>& eqs, FreshVars& fresh) {
        if (t.kind == TermKind::binary)
            return AspTerm::make_arith(t.op, flatten(t.kids[0], eqs, fresh),
                                       flatten(t.kids[1], eqs, fresh));
        return direct_term(t);
    }

    AspBodyLit comparison(const Comparison& c, std::vector<AspCmp>& eqs,
                          FreshVars& fresh) {
        AspCmp out;
        out.op = c.op;
        if (!dlv()) {
            out.lhs = direct_term(c.lhs);
            out.rhs = direct_term(c.rhs);
            return out;
        }
        if (c.op == CmpOp::eq) {
            // One side may keep a single operation (dlv's assignment form).
            if (c.lhs.kind == TermKind::binary && c.rhs.kind != TermKind::binary) {
                out.lhs = flatten_shallow(c.lhs, eqs, fresh);
                out.rhs = flatten(c.rhs, eqs, fresh);
            } else {
                out.lhs = flatten(c.lhs, eqs, fresh);
                out.rhs = flatten_shallow(c.rhs, eqs, fresh);
            }
            return out;
        }
        out.lhs = flatten(c.lhs, eqs, fresh);
        out.rhs = flatten(c.rhs, eqs, fresh);
        return out;
    }

    void aggregate(const Aggregate& g, std::vector<AspBodyLit>& body, FreshVars& fresh) {
        AspAggLit lit;
        lit.func = g.func;
        AspAtom inner;
        inner.pred = g.pred;
        for (const AggArg& arg : g.args) {
            switch (arg.kind) {
                case AggArgKind::star: {
                    AspTerm v = AspTerm::make_variable(fresh.next());
                    lit.projection.push_back(v);
                    inner.args.push_back(v);
                    break;
                }
                case AggArgKind::anon: inner.args.push_back(AspTerm::make_anon()); break;
                case AggArgKind::variable:
                    inner.args.push_back(AspTerm::make_variable(arg.name));
                    break;
                case AggArgKind::integer:
                    inner.args.push_back(AspTerm::make_int(arg.value));
                    break;
                case AggArgKind::symbol:
                    inner.args.push_back(AspTerm::make_symbol(arg.name));
                    break;
            }
        }
        lit.atom = std::move(inner);
        lit.guard = AspAggLit::eq_var;
        lit.var = g.result_var;
        body.push_back(std::move(lit));

        std::string guard_pred = fresh_agg_name();
        out_.facts.push_back(
            {false, guard_pred,
             {AspTerm::make_range(scalar_term(g.lo), scalar_term(g.hi))}});
        AspAtom guard;
        guard.pred = guard_pred;
        guard.args.push_back(AspTerm::make_variable(g.result_var));
        body.push_back(AspLit{false, std::move(guard)});
    }

    AspBodyLit binder_atom(const Binder& b) {
        if (b.kind == Binder::universal) {
            AspAtom a;
            a.pred = universal_name();
            a.args.push_back(AspTerm::make_variable(b.var));
            return AspLit{false, std::move(a)};
        }
        const GuessDecl& g = a_.guesses[b.metafact];
        if (b.kind == Binder::metafact_domain) {
            AspAtom a;
            a.pred = domain_refs_[b.metafact].pred;
            int arity = domain_refs_[b.metafact].is_range ? 1 : g.domain_arity;
            for (int i = 0; i < arity; ++i)
                a.args.push_back(i == b.position ? AspTerm::make_variable(b.var)
                                                 : AspTerm::make_anon());
            return AspLit{false, std::move(a)};
        }
        auto it = value_refs_.find(b.metafact);
        if (it == value_refs_.end()) {
            std::string name = fresh_domain_name();
            out_.facts.push_back({false, name,
                                  {AspTerm::make_range(AspTerm::make_int(g.lo),
                                                       AspTerm::make_int(g.hi))}});
            it = value_refs_.emplace(b.metafact, std::move(name)).first;
        }
        AspAtom a;
        a.pred = it->second;
        a.args.push_back(AspTerm::make_variable(b.var));
        return AspLit{false, std::move(a)};
    }

    // ---- invariants ----

    void check_invariants() {
        auto obligations = asp_check_safety(out_);
        if (!obligations.empty())
            throw CompileError(ErrorCode::internal_error,
                               "emitted rule " + std::to_string(obligations[0].rule_index) +
                                   " left variable " + obligations[0].var + " unbound");

        std::map<std::string, int> arity;
        auto check = [&](const AspAtom& a) {
            auto [it, fresh] = arity.try_emplace(a.pred, static_cast<int>(a.args.size()));
            if (!fresh && it->second != static_cast<int>(a.args.size()))
                throw CompileError(ErrorCode::internal_error,
                                   "inconsistent arity emitted for '" + a.pred + "'");
        };
        for (const AspAtom& f : out_.facts) check(f);
        for (const AspRule& r : out_.rules) {
            if (const auto* disj = std::get_if<std::vector<AspAtom>>(&r.head))
                for (const AspAtom& a : *disj) check(a);
            if (const auto* choice = std::get_if<AspChoiceHead>(&r.head)) {
                check(choice->element);
                if (choice->condition) check(*choice->condition);
            }
            for (const AspBodyLit& lit : r.body) {
                if (const AspLit* al = std::get_if<AspLit>(&lit)) check(al->atom);
                if (const AspAggLit* g = std::get_if<AspAggLit>(&lit)) check(g->atom);
            }
        }
    }
};

}  // namespace detail

inline AspProgram translate(const Analysis& a, EmitOptions opts) {
    return detail::Translator(a, opts).run();
}

}  // namespace npspec
