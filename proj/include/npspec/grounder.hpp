#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "npspec/asp.hpp"
#include "npspec/diag.hpp"
#include "npspec/relation.hpp"

namespace npspec {

// A ground aggregate keeps its local template slots symbolic; everything
// else in a ground rule is resolved to atom ids.
struct GroundAggArg {
    enum Kind { fixed, local } kind = fixed;
    Value value;
    int slot = -1;           // local slot id, consistent within the aggregate
    bool projected = false;  // this position feeds the projection tuple
};

struct GroundAgg {
    AggFunc func = AggFunc::count;
    std::string pred;
    std::vector<GroundAggArg> args;
    bool at_least_two = false;
    std::int64_t target = 0;  // when not at_least_two: computed value must equal
};

struct GroundRule {
    enum Kind { definite, disjunctive, choice, constraint } kind = definite;
    std::vector<int> heads;
    std::int64_t lo = -1, hi = -1;  // choice bounds; -1 = unbounded
    std::vector<int> pos, naf;
    std::vector<GroundAgg> aggs;
    int level = 0;  // evaluation stratum for definite rules
};

struct GroundAtomInfo {
    bool strong_neg = false;
    std::string pred;
    GroundTuple args;
    std::string text;
};

struct GroundProgram {
    std::vector<GroundAtomInfo> atoms;
    std::vector<bool> fact;
    std::vector<GroundRule> rules;
    int max_level = 0;
};

struct GroundOptions {
    std::uint64_t work_limit = 10'000'000;
};

namespace detail {

class Grounder {
  public:
    Grounder(const AspProgram& p, GroundOptions opts) : p_(p), opts_(opts) {}

    GroundProgram run() {
        read_directives();
        collect_head_preds();
        expand_facts();
        build_universe();
        for (const AspRule& r : p_.rules) ground_rule(r);
        simplify();
        stratify();
        return std::move(out_);
    }

  private:
    const AspProgram& p_;
    GroundOptions opts_;
    GroundProgram out_;
    std::map<std::string, int> atom_ids_;
    std::map<std::string, std::vector<GroundTuple>> fact_ext_;
    std::vector<Value> universe_;
    std::set<std::string> head_preds_;
    bool dlv_ = false;
    std::int64_t maxint_ = 0;
    std::uint64_t spent_ = 0;

    // Substitutions hold a handful of variables, so a flat pair list beats a
    // tree map inside the grounding loop.
    struct Subst {
        std::vector<std::pair<std::string, Value>> slots;

        const Value* find(const std::string& name) const {
            for (const auto& [n, v] : slots)
                if (n == name) return &v;
            return nullptr;
        }

        // Returns false when the name is already bound to a different value.
        bool bind(const std::string& name, const Value& value) {
            for (const auto& [n, v] : slots)
                if (n == name) return v == value;
            slots.emplace_back(name, value);
            return true;
        }
    };

    void read_directives() {
        dlv_ = p_.opts.dialect == AspDialect::dlv;
        for (const AspDirective& d : p_.directives)
            if (d.kind == AspDirective::maxint) maxint_ = d.value;
    }

    void collect_head_preds() {
        for (const AspRule& r : p_.rules) {
            if (const auto* disj = std::get_if<std::vector<AspAtom>>(&r.head))
                for (const AspAtom& a : *disj) head_preds_.insert(a.pred);
            if (const auto* choice = std::get_if<AspChoiceHead>(&r.head))
                head_preds_.insert(choice->element.pred);
        }
    }

    // A predicate that never appears in a rule head holds exactly its facts
    // in every candidate, so its body literals can be settled immediately.
    bool database_only(const std::string& pred) const {
        return head_preds_.count(pred) == 0;
    }

    std::int64_t const_or_int(const AspTerm& t) const {
        if (t.kind == AspTerm::integer) return t.value;
        if (t.kind == AspTerm::symbol) {
            auto it = p_.const_values.find(t.name);
            if (it != p_.const_values.end()) return it->second;
        }
        throw CompileError(ErrorCode::internal_error,
                           "range bound is not an integer constant");
    }

    // ---- atoms ----

    static std::string atom_text(bool neg, const std::string& pred,
                                 const GroundTuple& args) {
        std::string text = (neg ? "-" : "") + pred;
        if (!args.empty()) text += tuple_text(args);
        return text;
    }

    int intern(bool neg, const std::string& pred, GroundTuple args) {
        std::string text = atom_text(neg, pred, args);
        auto it = atom_ids_.find(text);
        if (it != atom_ids_.end()) return it->second;
        int id = static_cast<int>(out_.atoms.size());
        atom_ids_.emplace(text, id);
        out_.atoms.push_back({neg, pred, std::move(args), std::move(text)});
        out_.fact.push_back(false);
        return id;
    }

    // ---- facts ----

    void expand_facts() {
        for (const AspAtom& f : p_.facts) {
            std::vector<GroundTuple> tuples{{}};
            for (const AspTerm& arg : f.args) {
                std::vector<Value> values;
                if (arg.kind == AspTerm::integer) {
                    values.push_back(arg.value);
                } else if (arg.kind == AspTerm::symbol) {
                    auto it = p_.const_values.find(arg.name);
                    if (it != p_.const_values.end())
                        values.push_back(it->second);
                    else
                        values.push_back(arg.name);
                } else if (arg.kind == AspTerm::range) {
                    std::int64_t lo = const_or_int(arg.kids[0]);
                    std::int64_t hi = const_or_int(arg.kids[1]);
                    if (hi >= lo &&
                        static_cast<std::uint64_t>(hi - lo + 1) > opts_.work_limit)
                        throw CompileError(ErrorCode::ground_ceiling,
                                           "a fact range for '" + f.pred +
                                               "' expands past the grounding limit");
                    for (std::int64_t v = lo; v <= hi; ++v) values.push_back(v);
                } else {
                    throw CompileError(ErrorCode::internal_error,
                                       "fact arguments must be constants or ranges");
                }
                std::vector<GroundTuple> next;
                if (tuples.size() * std::max<std::size_t>(values.size(), 1) >
                    opts_.work_limit)
                    throw CompileError(ErrorCode::ground_ceiling,
                                       "facts for '" + f.pred +
                                           "' expand past the grounding limit");
                for (const GroundTuple& t : tuples)
                    for (const Value& v : values) {
                        GroundTuple copy = t;
                        copy.push_back(v);
                        next.push_back(std::move(copy));
                    }
                tuples = std::move(next);
            }
            for (GroundTuple& t : tuples) {
                int id = intern(f.strong_neg, f.pred, t);
                out_.fact[id] = true;
                fact_ext_[f.pred].push_back(std::move(t));
            }
        }
    }

    // ---- universe ----

    void add_universe(const Value& v) { universe_.push_back(v); }

    void collect_term_constants(const AspTerm& t) {
        // Only whole-argument constants join the universe; integers inside
        // arithmetic never name themselves as atom arguments directly.
        if (t.kind == AspTerm::integer) add_universe(t.value);
        if (t.kind == AspTerm::symbol) {
            auto it = p_.const_values.find(t.name);
            if (it != p_.const_values.end())
                add_universe(it->second);
            else
                add_universe(t.name);
        }
        if (t.kind == AspTerm::range) {
            std::int64_t lo = const_or_int(t.kids[0]);
            std::int64_t hi = const_or_int(t.kids[1]);
            for (std::int64_t v = lo; v <= hi; ++v) add_universe(v);
        }
    }

    void collect_atom_constants(const AspAtom& a) {
        for (const AspTerm& t : a.args) collect_term_constants(t);
    }

    void build_universe() {
        for (const auto& [pred, tuples] : fact_ext_)
            for (const GroundTuple& t : tuples)
                for (const Value& v : t) add_universe(v);
        for (const AspRule& r : p_.rules) {
            if (const auto* disj = std::get_if<std::vector<AspAtom>>(&r.head))
                for (const AspAtom& a : *disj) collect_atom_constants(a);
            if (const auto* choice = std::get_if<AspChoiceHead>(&r.head)) {
                collect_atom_constants(choice->element);
                if (choice->condition) collect_atom_constants(*choice->condition);
            }
            for (const AspBodyLit& lit : r.body) {
                if (const AspLit* al = std::get_if<AspLit>(&lit))
                    collect_atom_constants(al->atom);
                if (const AspAggLit* g = std::get_if<AspAggLit>(&lit))
                    collect_atom_constants(g->atom);
            }
        }
        if (dlv_) {
            if (static_cast<std::uint64_t>(maxint_) + 1 > opts_.work_limit)
                throw CompileError(ErrorCode::ground_ceiling,
                                   "the declared integer range expands past the "
                                   "grounding limit");
            for (std::int64_t v = 0; v <= maxint_; ++v) add_universe(v);
        }
        std::sort(universe_.begin(), universe_.end());
        universe_.erase(std::unique(universe_.begin(), universe_.end()),
                        universe_.end());
    }

    // ---- term evaluation under a substitution ----

    struct EvalResult {
        bool ok = true;  // false: instance cannot hold (range cap, bad arith)
        Value value;
    };

    EvalResult eval_term(const AspTerm& t, const Subst& s) const {
        switch (t.kind) {
            case AspTerm::integer: return {true, t.value};
            case AspTerm::symbol: {
                auto it = p_.const_values.find(t.name);
                if (it != p_.const_values.end()) return {true, it->second};
                return {true, t.name};
            }
            case AspTerm::variable: {
                const Value* bound = s.find(t.name);
                if (!bound)
                    throw CompileError(ErrorCode::internal_error,
                                       "variable '" + t.name +
                                           "' missing from grounding substitution");
                return {true, *bound};
            }
            case AspTerm::anon:
                throw CompileError(ErrorCode::internal_error,
                                   "placeholder outside aggregate template");
            case AspTerm::abs_fn: {
                EvalResult a = eval_term(t.kids[0], s);
                if (!a.ok || !is_int(a.value)) return {false, {}};
                std::int64_t v = as_int(a.value);
                return cap(v < 0 ? -v : v);
            }
            case AspTerm::range:
                throw CompileError(ErrorCode::internal_error,
                                   "range term outside fact or choice element");
            case AspTerm::arith: {
                EvalResult a = eval_term(t.kids[0], s);
                EvalResult b = eval_term(t.kids[1], s);
                if (!a.ok || !b.ok || !is_int(a.value) || !is_int(b.value))
                    return {false, {}};
                std::int64_t x = as_int(a.value), y = as_int(b.value), r = 0;
                switch (t.op) {
                    case ArithOp::add:
                        if (__builtin_add_overflow(x, y, &r)) return {false, {}};
                        break;
                    case ArithOp::sub:
                        if (__builtin_sub_overflow(x, y, &r)) return {false, {}};
                        break;
                    case ArithOp::mul:
                        if (__builtin_mul_overflow(x, y, &r)) return {false, {}};
                        break;
                    case ArithOp::div:
                        if (y == 0) return {false, {}};
                        r = x / y;
                        break;
                    case ArithOp::pow: {
                        if (y < 0) return {false, {}};
                        std::int64_t base = x, e = y;
                        r = 1;
                        while (e > 0) {
                            if (e & 1) {
                                if (__builtin_mul_overflow(r, base, &r))
                                    return {false, {}};
                            }
                            e >>= 1;
                            if (e && __builtin_mul_overflow(base, base, &base))
                                return {false, {}};
                        }
                        break;
                    }
                }
                return cap(r);
            }
        }
        return {false, {}};
    }

    // dlv arithmetic lives in 0..#maxint; results outside leave the
    // instance unsatisfiable rather than wrapping.
    EvalResult cap(std::int64_t v) const {
        if (dlv_ && (v < 0 || v > maxint_)) return {false, {}};
        return {true, v};
    }

    // ---- rule grounding ----

    static void term_vars(const AspTerm& t, std::set<std::string>& out) {
        if (t.kind == AspTerm::variable) out.insert(t.name);
        for (const AspTerm& k : t.kids) term_vars(k, out);
    }

    static void atom_vars(const AspAtom& a, std::set<std::string>& out) {
        for (const AspTerm& t : a.args) term_vars(t, out);
    }

    void ground_rule(const AspRule& input) {
        // Placeholders in plain body atoms behave as fresh one-off
        // variables; rewrite them so the substitution loop sees them.
        AspRule rule = input;
        int next_anon = 0;
        for (AspBodyLit& lit : rule.body)
            if (AspLit* al = std::get_if<AspLit>(&lit))
                for (AspTerm& t : al->atom.args)
                    if (t.kind == AspTerm::anon) {
                        t.kind = AspTerm::variable;
                        t.name = "_G" + std::to_string(next_anon++);
                    }
        // Once a substitution fixes every variable, each body literal is an
        // independent filter, so the cheap comparisons go first and atom
        // interning only happens for substitutions that survive them.
        std::stable_sort(rule.body.begin(), rule.body.end(),
                         [](const AspBodyLit& a, const AspBodyLit& b) {
                             auto rank = [](const AspBodyLit& l) {
                                 return std::holds_alternative<AspCmp>(l) ? 0 : 1;
                             };
                             return rank(a) < rank(b);
                         });
        const AspRule& r = rule;

        // Variables substituted over the universe: everything except slots
        // local to an aggregate template or to a conditioned choice head.
        std::set<std::string> vars;
        std::set<std::string> choice_local;
        if (const auto* disj = std::get_if<std::vector<AspAtom>>(&r.head))
            for (const AspAtom& a : *disj) atom_vars(a, vars);
        if (const auto* choice = std::get_if<AspChoiceHead>(&r.head)) {
            if (choice->condition) {
                std::set<std::string> head_vars;
                atom_vars(choice->element, head_vars);
                atom_vars(*choice->condition, head_vars);
                std::set<std::string> body_vars;
                for (const AspBodyLit& lit : r.body)
                    if (const AspLit* al = std::get_if<AspLit>(&lit))
                        atom_vars(al->atom, body_vars);
                for (const std::string& v : head_vars)
                    if (!body_vars.count(v)) choice_local.insert(v);
            } else {
                atom_vars(choice->element, vars);
            }
        }
        for (const AspBodyLit& lit : r.body) {
            if (const AspLit* al = std::get_if<AspLit>(&lit)) {
                atom_vars(al->atom, vars);
            } else if (const AspCmp* c = std::get_if<AspCmp>(&lit)) {
                term_vars(c->lhs, vars);
                term_vars(c->rhs, vars);
            } else if (const AspAggLit* g = std::get_if<AspAggLit>(&lit)) {
                if (g->guard == AspAggLit::eq_var) vars.insert(g->var);
            }
        }
        // Aggregate template variables shared with the rest of the rule are
        // substituted; purely local ones stay symbolic.
        std::vector<std::string> order(vars.begin(), vars.end());

        if (!order.empty() && universe_.empty()) return;

        std::uint64_t work = 1;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (work > opts_.work_limit / universe_.size() + 1)
                throw CompileError(ErrorCode::ground_ceiling,
                                   "rule grounding exceeds the substitution limit");
            work *= universe_.size();
        }
        spent_ += work;
        if (spent_ > opts_.work_limit)
            throw CompileError(ErrorCode::ground_ceiling,
                               "rule grounding exceeds the substitution limit");

        Subst s;
        for (const std::string& name : order)
            s.slots.emplace_back(name, universe_.empty() ? Value{} : universe_[0]);
        std::vector<std::size_t> odo(order.size(), 0);
        for (;;) {
            emit_instance(r, s, choice_local);
            std::size_t i = order.size();
            for (;;) {
                if (i == 0) return;
                --i;
                if (++odo[i] < universe_.size()) break;
                odo[i] = 0;
                s.slots[i].second = universe_[0];
            }
            s.slots[i].second = universe_[odo[i]];
        }
    }

    void emit_instance(const AspRule& r, const Subst& s,
                       const std::set<std::string>& choice_local) {
        GroundRule out;

        for (const AspBodyLit& lit : r.body) {
            if (const AspLit* al = std::get_if<AspLit>(&lit)) {
                GroundTuple args;
                for (const AspTerm& t : al->atom.args) {
                    EvalResult e = eval_term(t, s);
                    if (!e.ok) return;
                    args.push_back(std::move(e.value));
                }
                if (!al->atom.strong_neg && database_only(al->atom.pred)) {
                    std::string text =
                        atom_text(false, al->atom.pred, args);
                    auto it = atom_ids_.find(text);
                    bool holds = it != atom_ids_.end() && out_.fact[it->second];
                    if (holds == al->naf) return;
                    continue;
                }
                int id = intern(al->atom.strong_neg, al->atom.pred, std::move(args));
                (al->naf ? out.naf : out.pos).push_back(id);
            } else if (const AspCmp* c = std::get_if<AspCmp>(&lit)) {
                EvalResult a = eval_term(c->lhs, s);
                EvalResult b = eval_term(c->rhs, s);
                if (!a.ok || !b.ok) return;
                if (!compare(c->op, a.value, b.value)) return;
            } else if (const AspAggLit* g = std::get_if<AspAggLit>(&lit)) {
                GroundAgg agg;
                if (!ground_aggregate(*g, s, agg)) return;
                out.aggs.push_back(std::move(agg));
            }
        }

        if (std::holds_alternative<std::monostate>(r.head)) {
            out.kind = GroundRule::constraint;
        } else if (const auto* disj = std::get_if<std::vector<AspAtom>>(&r.head)) {
            for (const AspAtom& a : *disj) {
                GroundTuple args;
                for (const AspTerm& t : a.args) {
                    EvalResult e = eval_term(t, s);
                    if (!e.ok) return;
                    args.push_back(std::move(e.value));
                }
                out.heads.push_back(intern(a.strong_neg, a.pred, std::move(args)));
            }
            out.kind = out.heads.size() == 1 ? GroundRule::definite
                                             : GroundRule::disjunctive;
        } else {
            const AspChoiceHead& choice = std::get<AspChoiceHead>(r.head);
            out.kind = GroundRule::choice;
            if (choice.lo) out.lo = *choice.lo;
            if (choice.hi) out.hi = *choice.hi;
            // An element list that expands to nothing still matters when a
            // lower bound asks for at least one atom.
            if (!expand_choice(choice, s, choice_local, out.heads)) return;
        }

        spent_ += out.heads.size();
        if (spent_ > opts_.work_limit)
            throw CompileError(ErrorCode::ground_ceiling,
                               "the ground rule instances expand past the "
                               "grounding limit");
        out_.rules.push_back(std::move(out));
    }

    static bool compare(CmpOp op, const Value& l, const Value& r) {
        switch (op) {
            case CmpOp::eq: return l == r;
            case CmpOp::ne: return l != r;
            default: break;
        }
        if (!is_int(l) || !is_int(r)) return false;
        std::int64_t a = as_int(l), b = as_int(r);
        switch (op) {
            case CmpOp::lt: return a < b;
            case CmpOp::le: return a <= b;
            case CmpOp::gt: return a > b;
            case CmpOp::ge: return a >= b;
            default: return false;
        }
    }

    bool ground_aggregate(const AspAggLit& g, const Subst& s, GroundAgg& out) {
        out.func = g.func;
        out.pred = g.atom.pred;
        out.at_least_two = g.guard == AspAggLit::at_least_two;
        if (!out.at_least_two) {
            const Value* bound = s.find(g.var);
            if (!bound || !is_int(*bound)) return false;
            out.target = as_int(*bound);
        }
        std::set<std::string> proj;
        for (const AspTerm& t : g.projection)
            if (t.kind == AspTerm::variable) proj.insert(t.name);
        std::map<std::string, int> locals;
        int next_local = 0;
        for (const AspTerm& t : g.atom.args) {
            GroundAggArg arg;
            if (t.kind == AspTerm::variable) {
                if (const Value* bound = s.find(t.name)) {
                    arg.kind = GroundAggArg::fixed;
                    arg.value = *bound;
                } else {
                    arg.kind = GroundAggArg::local;
                    auto [lit, fresh] = locals.try_emplace(t.name, next_local);
                    if (fresh) ++next_local;
                    arg.slot = lit->second;
                    arg.projected = proj.count(t.name) > 0;
                }
            } else if (t.kind == AspTerm::anon) {
                arg.kind = GroundAggArg::local;
                arg.slot = next_local++;
            } else if (t.kind == AspTerm::integer) {
                arg.value = t.value;
            } else if (t.kind == AspTerm::symbol) {
                auto it = p_.const_values.find(t.name);
                arg.value = it != p_.const_values.end() ? Value(it->second)
                                                        : Value(t.name);
            } else {
                throw CompileError(ErrorCode::internal_error,
                                   "aggregate templates hold plain terms only");
            }
            out.args.push_back(std::move(arg));
        }
        return true;
    }

    bool expand_choice(const AspChoiceHead& choice, const Subst& s,
                       const std::set<std::string>& local, std::vector<int>& heads) {
        if (choice.condition) {
            // {p(X) : d(X)}: the condition ranges over the facts of its
            // predicate; every match contributes one element.
            auto it = fact_ext_.find(choice.condition->pred);
            if (it == fact_ext_.end()) return true;  // no facts, no elements
            for (const GroundTuple& tuple : it->second) {
                Subst extended = s;
                bool match = true;
                const auto& cargs = choice.condition->args;
                if (cargs.size() != tuple.size()) continue;
                for (std::size_t i = 0; match && i < cargs.size(); ++i) {
                    const AspTerm& t = cargs[i];
                    if (t.kind == AspTerm::variable && local.count(t.name)) {
                        match = extended.bind(t.name, tuple[i]);
                    } else {
                        EvalResult e = eval_term(t, extended);
                        if (!e.ok || !(e.value == tuple[i])) match = false;
                    }
                }
                if (!match) continue;
                if (!append_elements(choice.element, extended, heads)) return false;
            }
            return true;
        }
        return append_elements(choice.element, s, heads);
    }

    // Range arguments inside a choice element multiply out into one atom
    // per value.
    bool append_elements(const AspAtom& element, const Subst& s,
                         std::vector<int>& heads) {
        std::vector<GroundTuple> tuples{{}};
        for (const AspTerm& t : element.args) {
            std::vector<Value> values;
            if (t.kind == AspTerm::range) {
                std::int64_t lo = const_or_int(t.kids[0]);
                std::int64_t hi = const_or_int(t.kids[1]);
                if (hi >= lo &&
                    static_cast<std::uint64_t>(hi - lo + 1) > opts_.work_limit)
                    throw CompileError(
                        ErrorCode::ground_ceiling,
                        "choice elements expand past the grounding limit");
                for (std::int64_t v = lo; v <= hi; ++v) values.push_back(v);
            } else {
                EvalResult e = eval_term(t, s);
                if (!e.ok) return false;
                values.push_back(std::move(e.value));
            }
            std::vector<GroundTuple> next;
            for (const GroundTuple& base : tuples)
                for (const Value& v : values) {
                    GroundTuple copy = base;
                    copy.push_back(v);
                    next.push_back(std::move(copy));
                }
            tuples = std::move(next);
            if (tuples.size() > opts_.work_limit)
                throw CompileError(ErrorCode::ground_ceiling,
                                   "choice elements expand past the grounding limit");
        }
        for (GroundTuple& t : tuples)
            heads.push_back(intern(element.strong_neg, element.pred, std::move(t)));
        return true;
    }

    // ---- simplification ----

    void simplify() {
        for (;;) {
            std::vector<bool> possible(out_.atoms.size(), false);
            for (std::size_t i = 0; i < out_.atoms.size(); ++i)
                if (out_.fact[i]) possible[i] = true;
            for (const GroundRule& r : out_.rules)
                for (int h : r.heads) possible[h] = true;

            bool changed = false;
            std::vector<GroundRule> kept;
            for (GroundRule& r : out_.rules) {
                bool drop = false;
                for (int p : r.pos)
                    if (!possible[p]) {
                        drop = true;
                        break;
                    }
                if (drop) {
                    changed = true;
                    continue;
                }
                std::vector<int> naf;
                for (int n : r.naf) {
                    if (!possible[n]) {
                        changed = true;  // never true, literal holds trivially
                        continue;
                    }
                    naf.push_back(n);
                }
                r.naf = std::move(naf);
                kept.push_back(std::move(r));
            }
            out_.rules = std::move(kept);
            if (!changed) break;
        }
    }

    // ---- stratification of the ground program ----

    void stratify() {
        std::map<std::string, int> level;
        std::set<std::string> derived;
        for (const GroundRule& r : out_.rules)
            if (r.kind == GroundRule::definite)
                derived.insert(out_.atoms[r.heads[0]].pred);
        for (const std::string& d : derived) level[d] = 0;

        std::size_t n = derived.size();
        bool changed = true;
        while (changed) {
            changed = false;
            for (const GroundRule& r : out_.rules) {
                if (r.kind != GroundRule::definite) continue;
                const std::string& h = out_.atoms[r.heads[0]].pred;
                auto lift = [&](const std::string& p, int delta) {
                    if (!derived.count(p)) return;
                    int need = level[p] + delta;
                    if (need > level[h]) {
                        if (static_cast<std::size_t>(need) > n)
                            throw CompileError(
                                ErrorCode::not_stratified,
                                "the ground program recurses through negation or "
                                "aggregation at '" +
                                    h + "'");
                        level[h] = need;
                        changed = true;
                    }
                };
                for (int p : r.pos) lift(out_.atoms[p].pred, 0);
                for (int p : r.naf) lift(out_.atoms[p].pred, 1);
                for (const GroundAgg& g : r.aggs) lift(g.pred, 1);
            }
        }

        for (GroundRule& r : out_.rules) {
            if (r.kind != GroundRule::definite) continue;
            r.level = level[out_.atoms[r.heads[0]].pred];
            out_.max_level = std::max(out_.max_level, r.level);
        }
    }
};

}  // namespace detail

inline GroundProgram ground(const AspProgram& p, GroundOptions opts = {}) {
    return detail::Grounder(p, opts).run();
}

}  // namespace npspec
