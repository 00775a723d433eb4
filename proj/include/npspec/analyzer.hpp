#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "npspec/ast.hpp"
#include "npspec/relation.hpp"

namespace npspec {

inline constexpr std::int64_t kMaterializeCeiling = 10'000'000;

// Saturation point for integer reach estimates; targets whose integer
// range must be declared up front refuse programs that reach it.
inline constexpr std::int64_t kValueBoundCap = 1'000'000'000'000'000;

// One metafact after materialization: the concrete domain, the guessed
// predicate's arity, and its value range (unused for Subset).
struct GuessDecl {
    MetafactKind kind = MetafactKind::subset;
    std::string target;
    int domain_arity = 0;
    int arity = 0;
    Extension domain;
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    SourcePos pos;

    bool has_values() const { return kind != MetafactKind::subset; }
    std::int64_t value_count() const { return has_values() ? hi - lo + 1 : 0; }
};

struct DepEdge {
    std::string from;
    std::string to;
    enum Kind { positive, negative, aggregate } kind = positive;
};

struct StratificationReport {
    std::vector<std::vector<std::string>> strata;  // derived predicates per level
    std::map<std::string, int> level;
    std::vector<DepEdge> edges;
};

struct SafetyObligation {
    int rule_index = -1;
    std::string var;
    enum Reason { head_only, negated_only, builtin_only, aggregate_result } reason =
        head_only;
    SourcePos pos;
};

inline const char* obligation_reason_text(SafetyObligation::Reason r) {
    switch (r) {
        case SafetyObligation::head_only: return "head-only";
        case SafetyObligation::negated_only: return "negated-only";
        case SafetyObligation::builtin_only: return "builtin-only";
        case SafetyObligation::aggregate_result: return "aggregate-result";
    }
    return "?";
}

// How an unbound variable gets a positive binding occurrence: through the
// domain predicate of a metafact whose guessed atom mentions it, through
// that metafact's value range, or through the universal constant pool.
struct Binder {
    std::string var;
    enum Kind { metafact_domain, metafact_values, universal } kind = universal;
    int metafact = -1;
    int position = -1;
};

struct Analysis {
    Program original;
    Program resolved;
    std::vector<std::string> constant_order;
    std::map<std::string, std::int64_t> constants;
    std::vector<std::string> relation_order;
    std::map<std::string, Extension> relations;
    std::vector<GuessDecl> guesses;
    std::map<std::string, int> guess_index;
    std::vector<std::string> derived_order;  // first-head-occurrence order
    std::set<std::string> derived;
    std::map<std::string, int> arity;
    StratificationReport strat;
    std::vector<SafetyObligation> obligations;
    std::vector<std::vector<Binder>> repairs;  // parallel to resolved.rules
    Extension universe;                        // every active-domain constant
    std::int64_t max_int = 0;  // bound on every value written or computed

    bool is_guessed(const std::string& p) const { return guess_index.count(p) > 0; }
    bool is_db(const std::string& p) const { return relations.count(p) > 0; }
    bool is_derived(const std::string& p) const { return derived.count(p) > 0; }
};

namespace detail {

class Analyzer {
  public:
    explicit Analyzer(const Program& p) { a_.original = p; }

    Analysis run() {
        resolve();
        build_database();
        build_guesses();
        collect_rule_predicates();
        check_atoms();
        stratify();
        build_universe();
        safety();
        collect_max_int();
        return std::move(a_);
    }

  private:
    Analysis a_;

    // ---- constant resolution ----

    void resolve() {
        for (const ConstDef& c : a_.original.constants) {
            a_.constant_order.push_back(c.name);
            a_.constants.emplace(c.name, c.value);
        }
        a_.resolved = a_.original;
        for (RelDef& r : a_.resolved.relations) {
            if (r.is_range) {
                resolve_term(r.lo);
                resolve_term(r.hi);
            } else {
                for (auto& tuple : r.tuples)
                    for (Term& t : tuple) resolve_term(t);
            }
        }
        for (Metafact& m : a_.resolved.metafacts) {
            resolve_domain(m.domain);
            if (m.kind == MetafactKind::partition) resolve_term(m.k);
            if (m.kind == MetafactKind::intfunc) {
                resolve_term(m.lo);
                resolve_term(m.hi);
            }
        }
        for (Rule& r : a_.resolved.rules) {
            if (!r.is_fail)
                for (Term& t : r.head.args) resolve_term(t);
            for (BodyElem& e : r.body) {
                if (Atom* at = std::get_if<Atom>(&e)) {
                    for (Term& t : at->args) resolve_term(t);
                } else if (NegAtom* n = std::get_if<NegAtom>(&e)) {
                    for (Term& t : n->atom.args) resolve_term(t);
                } else if (Comparison* c = std::get_if<Comparison>(&e)) {
                    resolve_term(c->lhs);
                    resolve_term(c->rhs);
                } else if (Aggregate* agg = std::get_if<Aggregate>(&e)) {
                    for (AggArg& arg : agg->args)
                        if (arg.kind == AggArgKind::symbol) {
                            auto it = a_.constants.find(arg.name);
                            if (it != a_.constants.end()) {
                                arg.kind = AggArgKind::integer;
                                arg.value = it->second;
                                arg.name.clear();
                            }
                        }
                    resolve_term(agg->lo);
                    resolve_term(agg->hi);
                }
            }
        }
    }

    void resolve_term(Term& t) {
        if (t.kind == TermKind::symbol) {
            auto it = a_.constants.find(t.name);
            if (it != a_.constants.end()) {
                t = Term::make_int(it->second, t.pos);
                return;
            }
        }
        for (Term& k : t.kids) resolve_term(k);
    }

    void resolve_domain(DomainExpr& d) {
        if (d.op == DomainOp::range) {
            resolve_term(d.lo);
            resolve_term(d.hi);
        }
        for (DomainExpr& k : d.kids) resolve_domain(k);
    }

    std::int64_t require_int(const Term& t, const char* what) const {
        if (t.kind != TermKind::integer)
            throw CompileError(ErrorCode::undefined_constant,
                               std::string(what) + " must be an integer or a defined constant",
                               t.pos);
        return t.value;
    }

    // ---- database materialization ----

    void build_database() {
        for (const RelDef& r : a_.resolved.relations) {
            Extension ext(r.name, 0);
            if (r.is_range) {
                std::int64_t lo = require_int(r.lo, "a range bound");
                std::int64_t hi = require_int(r.hi, "a range bound");
                ext = materialize_range(r.name, lo, hi, r.pos);
            } else {
                ext = Extension(r.name, static_cast<int>(r.tuples.front().size()));
                for (const auto& tuple : r.tuples) {
                    GroundTuple g;
                    for (const Term& t : tuple) {
                        if (t.kind == TermKind::integer)
                            g.push_back(t.value);
                        else
                            g.push_back(t.name);
                    }
                    ext.add(std::move(g));
                }
            }
            a_.relation_order.push_back(r.name);
            a_.relations.emplace(r.name, std::move(ext));
            a_.arity[r.name] = a_.relations.at(r.name).arity();
        }
    }

    static Extension materialize_range(const std::string& name, std::int64_t lo,
                                       std::int64_t hi, SourcePos pos) {
        Extension ext(name, 1);
        if (lo > hi) return ext;  // empty relation
        if (hi - lo + 1 > kMaterializeCeiling)
            throw CompileError(ErrorCode::ground_ceiling,
                               "range " + std::to_string(lo) + ".." + std::to_string(hi) +
                                   " is too large to materialize",
                               pos);
        for (std::int64_t v = lo; v <= hi; ++v) ext.add({v});
        return ext;
    }

    // ---- metafacts ----

    Extension eval_domain(const DomainExpr& d) {
        switch (d.op) {
            case DomainOp::pred: {
                auto it = a_.relations.find(d.pred);
                if (it == a_.relations.end()) {
                    if (a_.guess_index.count(d.pred))
                        throw CompileError(ErrorCode::domain_error,
                                           "domains are built from database relations; '" +
                                               d.pred + "' is guessed",
                                           d.pos);
                    throw CompileError(ErrorCode::undefined_predicate,
                                       "unknown relation '" + d.pred + "' in a domain",
                                       d.pos);
                }
                return it->second;
            }
            case DomainOp::range: {
                std::int64_t lo = require_int(d.lo, "a range bound");
                std::int64_t hi = require_int(d.hi, "a range bound");
                return materialize_range("", lo, hi, d.pos);
            }
            default: break;
        }
        Extension lhs = eval_domain(d.kids[0]);
        Extension rhs = eval_domain(d.kids[1]);
        if (d.op == DomainOp::cross) {
            std::int64_t size = static_cast<std::int64_t>(lhs.size()) *
                                static_cast<std::int64_t>(rhs.size());
            if (size > kMaterializeCeiling)
                throw CompileError(ErrorCode::ground_ceiling,
                                   "product domain is too large to materialize", d.pos);
            Extension out("", lhs.arity() + rhs.arity());
            for (const GroundTuple& l : lhs.tuples())
                for (const GroundTuple& r : rhs.tuples()) {
                    GroundTuple g = l;
                    g.insert(g.end(), r.begin(), r.end());
                    out.add(std::move(g));
                }
            return out;
        }
        if (lhs.arity() != rhs.arity())
            throw CompileError(ErrorCode::arity_mismatch,
                               "domain operands have arities " +
                                   std::to_string(lhs.arity()) + " and " +
                                   std::to_string(rhs.arity()),
                               d.pos);
        Extension out("", lhs.arity());
        switch (d.op) {
            case DomainOp::unite:
                for (const GroundTuple& t : lhs.tuples()) out.add(t);
                for (const GroundTuple& t : rhs.tuples()) out.add(t);
                break;
            case DomainOp::intersect:
                for (const GroundTuple& t : lhs.tuples())
                    if (rhs.contains(t)) out.add(t);
                break;
            default:  // subtract
                for (const GroundTuple& t : lhs.tuples())
                    if (!rhs.contains(t)) out.add(t);
                break;
        }
        return out;
    }

    void build_guesses() {
        for (const Metafact& m : a_.resolved.metafacts) {
            GuessDecl g;
            g.kind = m.kind;
            g.target = m.target;
            g.pos = m.pos;
            g.domain = eval_domain(m.domain);
            g.domain_arity = g.domain.arity();
            switch (m.kind) {
                case MetafactKind::subset:
                    g.arity = g.domain_arity;
                    break;
                case MetafactKind::permutation:
                    g.arity = g.domain_arity + 1;
                    g.lo = 1;
                    g.hi = static_cast<std::int64_t>(g.domain.size());
                    break;
                case MetafactKind::partition: {
                    std::int64_t k = require_int(m.k, "the class count");
                    if (k < 1)
                        throw CompileError(ErrorCode::bad_metafact,
                                           "Partition needs at least one class", m.pos);
                    g.arity = g.domain_arity + 1;
                    g.lo = 0;
                    g.hi = k - 1;
                    break;
                }
                case MetafactKind::intfunc: {
                    std::int64_t lo = require_int(m.lo, "the lower value bound");
                    std::int64_t hi = require_int(m.hi, "the upper value bound");
                    if (lo > hi)
                        throw CompileError(ErrorCode::bad_metafact,
                                           "IntFunc needs a nonempty value range", m.pos);
                    g.arity = g.domain_arity + 1;
                    g.lo = lo;
                    g.hi = hi;
                    break;
                }
            }
            if (g.domain_arity == 0)
                throw CompileError(ErrorCode::bad_metafact, "the domain is empty and untyped",
                                   m.pos);
            a_.guess_index.emplace(g.target, static_cast<int>(a_.guesses.size()));
            a_.arity[g.target] = g.arity;
            a_.guesses.push_back(std::move(g));
        }
    }

    // ---- rules: predicate discovery and consistency ----

    void collect_rule_predicates() {
        for (const Rule& r : a_.resolved.rules) {
            if (r.is_fail) continue;
            const std::string& h = r.head.pred;
            if (a_.constants.count(h))
                throw CompileError(ErrorCode::invalid_rule,
                                   "rule head '" + h + "' is already a constant", r.head.pos);
            if (a_.relations.count(h))
                throw CompileError(ErrorCode::invalid_rule,
                                   "rules cannot derive into database relation '" + h + "'",
                                   r.head.pos);
            if (a_.guess_index.count(h))
                throw CompileError(ErrorCode::invalid_rule,
                                   "rules cannot derive into guessed predicate '" + h + "'",
                                   r.head.pos);
            if (a_.derived.insert(h).second) a_.derived_order.push_back(h);
        }
    }

    void check_atom(const Atom& at) {
        if (!a_.is_db(at.pred) && !a_.is_guessed(at.pred) && !a_.is_derived(at.pred))
            throw CompileError(ErrorCode::undefined_predicate,
                               "unknown predicate '" + at.pred + "'", at.pos);
        auto it = a_.arity.find(at.pred);
        if (it == a_.arity.end()) {
            a_.arity[at.pred] = static_cast<int>(at.args.size());
        } else if (it->second != static_cast<int>(at.args.size())) {
            throw CompileError(ErrorCode::arity_mismatch,
                               "'" + at.pred + "' is used with arity " +
                                   std::to_string(at.args.size()) + " but has arity " +
                                   std::to_string(it->second),
                               at.pos);
        }
    }

    void check_atoms() {
        // Fix derived arities from their first head occurrence, then check
        // every use.
        for (const Rule& r : a_.resolved.rules) {
            if (r.is_fail) continue;
            auto it = a_.arity.find(r.head.pred);
            if (it == a_.arity.end())
                a_.arity[r.head.pred] = static_cast<int>(r.head.args.size());
        }
        for (const Rule& r : a_.resolved.rules) {
            if (!r.is_fail) check_atom(r.head);
            for (const BodyElem& e : r.body) {
                if (const Atom* at = std::get_if<Atom>(&e)) {
                    check_atom(*at);
                } else if (const NegAtom* n = std::get_if<NegAtom>(&e)) {
                    check_atom(n->atom);
                } else if (const Aggregate* agg = std::get_if<Aggregate>(&e)) {
                    if (!a_.is_db(agg->pred) && !a_.is_guessed(agg->pred) &&
                        !a_.is_derived(agg->pred))
                        throw CompileError(ErrorCode::undefined_predicate,
                                           "unknown predicate '" + agg->pred +
                                               "' in an aggregate",
                                           agg->pos);
                    if (a_.arity.at(agg->pred) != static_cast<int>(agg->args.size()))
                        throw CompileError(ErrorCode::arity_mismatch,
                                           "aggregate template arity " +
                                               std::to_string(agg->args.size()) +
                                               " does not match '" + agg->pred + "'",
                                           agg->pos);
                    require_int(agg->lo, "an aggregate range bound");
                    require_int(agg->hi, "an aggregate range bound");
                }
            }
        }
    }

    // ---- stratification ----

    void stratify() {
        std::map<std::string, int> level;
        for (const std::string& d : a_.derived_order) level[d] = 0;

        for (const Rule& r : a_.resolved.rules) {
            if (r.is_fail) continue;
            for (const BodyElem& e : r.body) {
                const std::string* from = nullptr;
                DepEdge::Kind kind = DepEdge::positive;
                if (const Atom* at = std::get_if<Atom>(&e)) {
                    from = &at->pred;
                } else if (const NegAtom* n = std::get_if<NegAtom>(&e)) {
                    from = &n->atom.pred;
                    kind = DepEdge::negative;
                } else if (const Aggregate* agg = std::get_if<Aggregate>(&e)) {
                    from = &agg->pred;
                    kind = DepEdge::aggregate;
                }
                if (from && a_.is_derived(*from))
                    a_.strat.edges.push_back({*from, r.head.pred, kind});
            }
        }

        // In a stratifiable program no level exceeds the predicate count, so
        // a level climbing past it proves a cycle through a non-positive edge.
        int n = static_cast<int>(level.size());
        bool changed = true;
        while (changed) {
            changed = false;
            for (const DepEdge& e : a_.strat.edges) {
                int need = level[e.from] + (e.kind == DepEdge::positive ? 0 : 1);
                int& cur = level[e.to];
                if (cur < need) {
                    if (need > n) return report_negative_cycle();
                    cur = need;
                    changed = true;
                }
            }
        }

        int max_level = 0;
        for (const auto& [pred, l] : level) max_level = std::max(max_level, l);
        a_.strat.level = level;
        a_.strat.strata.assign(static_cast<std::size_t>(max_level) + 1, {});
        for (const auto& [pred, l] : level) a_.strat.strata[l].push_back(pred);
        for (auto& s : a_.strat.strata) std::sort(s.begin(), s.end());
        if (a_.derived.empty()) a_.strat.strata.clear();
    }

    [[noreturn]] void report_negative_cycle() {
        // A cycle with a negative or aggregate edge exists; name the
        // predicates of an offending strongly connected component.
        std::map<std::string, std::vector<std::pair<std::string, DepEdge::Kind>>> graph;
        for (const DepEdge& e : a_.strat.edges) graph[e.from].push_back({e.to, e.kind});

        std::map<std::string, int> index, low;
        std::vector<std::string> stack;
        std::set<std::string> on_stack;
        int counter = 0;
        std::vector<std::vector<std::string>> components;

        struct Frame {
            std::string node;
            std::size_t next_edge = 0;
        };
        for (const std::string& start : a_.derived_order) {
            if (index.count(start)) continue;
            std::vector<Frame> frames{{start}};
            index[start] = low[start] = counter++;
            stack.push_back(start);
            on_stack.insert(start);
            while (!frames.empty()) {
                Frame& f = frames.back();
                auto& edges = graph[f.node];
                if (f.next_edge < edges.size()) {
                    const std::string& next = edges[f.next_edge++].first;
                    if (!index.count(next)) {
                        index[next] = low[next] = counter++;
                        stack.push_back(next);
                        on_stack.insert(next);
                        frames.push_back({next});
                    } else if (on_stack.count(next)) {
                        low[f.node] = std::min(low[f.node], index[next]);
                    }
                } else {
                    if (low[f.node] == index[f.node]) {
                        std::vector<std::string> comp;
                        for (;;) {
                            std::string top = stack.back();
                            stack.pop_back();
                            on_stack.erase(top);
                            comp.push_back(top);
                            if (top == f.node) break;
                        }
                        components.push_back(std::move(comp));
                    }
                    std::string done = f.node;
                    frames.pop_back();
                    if (!frames.empty())
                        low[frames.back().node] =
                            std::min(low[frames.back().node], low[done]);
                }
            }
        }

        for (const auto& comp : components) {
            std::set<std::string> members(comp.begin(), comp.end());
            for (const DepEdge& e : a_.strat.edges) {
                if (e.kind == DepEdge::positive) continue;
                if (members.count(e.from) && members.count(e.to)) {
                    std::vector<std::string> sorted(comp.begin(), comp.end());
                    std::sort(sorted.begin(), sorted.end());
                    std::string names;
                    for (std::size_t i = 0; i < sorted.size(); ++i) {
                        if (i) names += ", ";
                        names += sorted[i];
                    }
                    throw CompileError(ErrorCode::not_stratified,
                                       "recursion through negation or aggregation "
                                       "involving: " +
                                           names);
                }
            }
        }
        throw CompileError(ErrorCode::internal_error,
                           "stratification failed to converge");
    }

    // ---- universe ----

    void add_universe_term(const Term& t) {
        if (t.kind == TermKind::integer)
            a_.universe.add({t.value});
        else if (t.kind == TermKind::symbol)
            a_.universe.add({t.name});
        for (const Term& k : t.kids) add_universe_term(k);
    }

    void build_universe() {
        a_.universe = Extension("npspec_univ", 1);
        for (const std::string& name : a_.relation_order)
            for (const GroundTuple& t : a_.relations.at(name).tuples())
                for (const Value& v : t) a_.universe.add({v});
        for (const GuessDecl& g : a_.guesses) {
            for (const GroundTuple& t : g.domain.tuples())
                for (const Value& v : t) a_.universe.add({v});
            if (g.has_values())
                for (std::int64_t v = g.lo; v <= g.hi; ++v) a_.universe.add({v});
        }
        for (const Rule& r : a_.resolved.rules) {
            if (!r.is_fail)
                for (const Term& t : r.head.args) add_universe_term(t);
            for (const BodyElem& e : r.body) {
                if (const Atom* at = std::get_if<Atom>(&e)) {
                    for (const Term& t : at->args) add_universe_term(t);
                } else if (const NegAtom* n = std::get_if<NegAtom>(&e)) {
                    for (const Term& t : n->atom.args) add_universe_term(t);
                } else if (const Comparison* c = std::get_if<Comparison>(&e)) {
                    add_universe_term(c->lhs);
                    add_universe_term(c->rhs);
                } else if (const Aggregate* agg = std::get_if<Aggregate>(&e)) {
                    for (const AggArg& arg : agg->args) {
                        if (arg.kind == AggArgKind::integer) a_.universe.add({arg.value});
                        if (arg.kind == AggArgKind::symbol) a_.universe.add({arg.name});
                    }
                }
            }
        }
    }

    // ---- safety ----

    struct VarInfo {
        int first_seen = 0;
        bool bound_positive = false;   // plain argument of a positive body atom
        bool in_builtin = false;       // comparison operand or nested in arithmetic
        bool in_negated = false;
        bool in_aggregate = false;     // template variable or result variable
        SourcePos pos;
    };

    static void scan_term(const Term& t, bool nested, int& seq,
                          std::map<std::string, VarInfo>& vars,
                          bool bound_if_plain, bool builtin_ctx, bool negated_ctx) {
        if (t.kind == TermKind::variable) {
            auto [it, fresh] = vars.try_emplace(t.name);
            if (fresh) {
                it->second.first_seen = seq++;
                it->second.pos = t.pos;
            }
            VarInfo& v = it->second;
            if (!nested && bound_if_plain) v.bound_positive = true;
            if (builtin_ctx || nested) v.in_builtin = true;
            if (negated_ctx) v.in_negated = true;
            return;
        }
        for (const Term& k : t.kids)
            scan_term(k, true, seq, vars, bound_if_plain, builtin_ctx, negated_ctx);
    }

    void safety() {
        a_.repairs.resize(a_.resolved.rules.size());
        for (std::size_t ri = 0; ri < a_.resolved.rules.size(); ++ri) {
            const Rule& r = a_.resolved.rules[ri];
            std::map<std::string, VarInfo> vars;
            int seq = 0;

            if (!r.is_fail)
                for (const Term& t : r.head.args)
                    scan_term(t, false, seq, vars, false, false, false);
            for (const BodyElem& e : r.body) {
                if (const Atom* at = std::get_if<Atom>(&e)) {
                    for (const Term& t : at->args)
                        scan_term(t, false, seq, vars, true, false, false);
                } else if (const NegAtom* n = std::get_if<NegAtom>(&e)) {
                    for (const Term& t : n->atom.args)
                        scan_term(t, false, seq, vars, false, false, true);
                } else if (const Comparison* c = std::get_if<Comparison>(&e)) {
                    scan_term(c->lhs, false, seq, vars, false, true, false);
                    scan_term(c->rhs, false, seq, vars, false, true, false);
                } else if (const Aggregate* agg = std::get_if<Aggregate>(&e)) {
                    std::set<std::string> template_vars;
                    for (const AggArg& arg : agg->args)
                        if (arg.kind == AggArgKind::variable) template_vars.insert(arg.name);
                    for (const AggArg& arg : agg->args) {
                        if (arg.kind != AggArgKind::variable) continue;
                        // A variable seen nowhere else in the rule is local to
                        // the template; it only registers if shared.
                        if (!vars.count(arg.name) && !shared_elsewhere(r, e, arg.name))
                            continue;
                        auto [it, fresh] = vars.try_emplace(arg.name);
                        if (fresh) {
                            it->second.first_seen = seq++;
                            it->second.pos = arg.pos;
                        }
                        it->second.in_aggregate = true;
                    }
                    auto [it, fresh] = vars.try_emplace(agg->result_var);
                    if (fresh) {
                        it->second.first_seen = seq++;
                        it->second.pos = agg->pos;
                    }
                    it->second.in_aggregate = true;
                }
            }

            std::vector<std::pair<int, std::string>> order;
            for (const auto& [name, info] : vars)
                if (!info.bound_positive) order.push_back({info.first_seen, name});
            std::sort(order.begin(), order.end());

            for (const auto& [_, name] : order) {
                const VarInfo& info = vars.at(name);
                SafetyObligation ob;
                ob.rule_index = static_cast<int>(ri);
                ob.var = name;
                ob.pos = info.pos;
                if (info.in_builtin)
                    ob.reason = SafetyObligation::builtin_only;
                else if (info.in_aggregate)
                    ob.reason = SafetyObligation::aggregate_result;
                else if (info.in_negated)
                    ob.reason = SafetyObligation::negated_only;
                else
                    ob.reason = SafetyObligation::head_only;
                a_.obligations.push_back(ob);
                plan_binder(r, static_cast<int>(ri), name, ob.reason);
            }
        }
    }

    // Does var occur anywhere in the rule outside the given body element?
    bool shared_elsewhere(const Rule& r, const BodyElem& self, const std::string& var) {
        auto term_has = [&](const Term& t) {
            struct Find {
                const std::string& var;
                bool operator()(const Term& t) const {
                    if (t.kind == TermKind::variable && t.name == var) return true;
                    for (const Term& k : t.kids)
                        if ((*this)(k)) return true;
                    return false;
                }
            };
            return Find{var}(t);
        };
        if (!r.is_fail)
            for (const Term& t : r.head.args)
                if (term_has(t)) return true;
        for (const BodyElem& e : r.body) {
            if (&e == &self) continue;
            if (const Atom* at = std::get_if<Atom>(&e)) {
                for (const Term& t : at->args)
                    if (term_has(t)) return true;
            } else if (const NegAtom* n = std::get_if<NegAtom>(&e)) {
                for (const Term& t : n->atom.args)
                    if (term_has(t)) return true;
            } else if (const Comparison* c = std::get_if<Comparison>(&e)) {
                if (term_has(c->lhs) || term_has(c->rhs)) return true;
            } else if (const Aggregate* agg = std::get_if<Aggregate>(&e)) {
                for (const AggArg& arg : agg->args)
                    if (arg.kind == AggArgKind::variable && arg.name == var) return true;
                if (agg->result_var == var) return true;
            }
        }
        return false;
    }

    // An aggregate's result variable is given its value by the rewritten
    // aggregate plus its range guard, so it needs no extra binder.
    bool is_aggregate_result(const Rule& r, const std::string& var) const {
        for (const BodyElem& e : r.body)
            if (const Aggregate* agg = std::get_if<Aggregate>(&e))
                if (agg->result_var == var) return true;
        return false;
    }

    void plan_binder(const Rule& r, int rule_index, const std::string& var,
                     SafetyObligation::Reason) {
        if (is_aggregate_result(r, var)) return;

        auto try_atom_args = [&](const std::string& pred,
                                 const std::vector<Term>& args) -> bool {
            auto git = a_.guess_index.find(pred);
            if (git == a_.guess_index.end()) return false;
            const GuessDecl& g = a_.guesses[git->second];
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (args[i].kind != TermKind::variable || args[i].name != var) continue;
                Binder b;
                b.var = var;
                b.metafact = git->second;
                if (static_cast<int>(i) < g.domain_arity) {
                    b.kind = Binder::metafact_domain;
                    b.position = static_cast<int>(i);
                } else {
                    b.kind = Binder::metafact_values;
                }
                a_.repairs[rule_index].push_back(b);
                return true;
            }
            return false;
        };

        for (const BodyElem& e : r.body) {
            if (const Atom* at = std::get_if<Atom>(&e)) {
                if (try_atom_args(at->pred, at->args)) return;
            } else if (const NegAtom* n = std::get_if<NegAtom>(&e)) {
                if (try_atom_args(n->atom.pred, n->atom.args)) return;
            } else if (const Aggregate* agg = std::get_if<Aggregate>(&e)) {
                auto git = a_.guess_index.find(agg->pred);
                if (git == a_.guess_index.end()) continue;
                const GuessDecl& g = a_.guesses[git->second];
                for (std::size_t i = 0; i < agg->args.size(); ++i) {
                    if (agg->args[i].kind != AggArgKind::variable ||
                        agg->args[i].name != var)
                        continue;
                    Binder b;
                    b.var = var;
                    b.metafact = git->second;
                    if (static_cast<int>(i) < g.domain_arity) {
                        b.kind = Binder::metafact_domain;
                        b.position = static_cast<int>(i);
                    } else {
                        b.kind = Binder::metafact_values;
                    }
                    a_.repairs[rule_index].push_back(b);
                    return;
                }
            }
        }
        a_.repairs[rule_index].push_back({var, Binder::universal, -1, -1});
    }

    // ---- integer ceiling data ----

    void note_int(std::int64_t v) { a_.max_int = std::max(a_.max_int, v); }

    void collect_term_ints(const Term& t) {
        if (t.kind == TermKind::integer) note_int(t.value);
        for (const Term& k : t.kids) collect_term_ints(k);
    }

    static std::int64_t sat_add(std::int64_t a, std::int64_t b) {
        return a > kValueBoundCap - b ? kValueBoundCap : a + b;
    }
    static std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
        if (a == 0 || b == 0) return 0;
        return a > kValueBoundCap / b ? kValueBoundCap : a * b;
    }

    // Largest absolute value the term can evaluate to when every variable
    // ranges over values no larger than base.
    static std::int64_t term_bound(const Term& t, std::int64_t base) {
        switch (t.kind) {
            case TermKind::integer: return t.value < 0 ? -t.value : t.value;
            case TermKind::symbol: return 0;
            case TermKind::variable:
            case TermKind::anon: return base;
            case TermKind::abs: return term_bound(t.kids[0], base);
            case TermKind::binary: {
                std::int64_t l = term_bound(t.kids[0], base);
                std::int64_t r = term_bound(t.kids[1], base);
                switch (t.op) {
                    case ArithOp::add:
                    case ArithOp::sub: return sat_add(l, r);
                    case ArithOp::mul: return sat_mul(l, r);
                    case ArithOp::div: return l;
                    case ArithOp::pow: {
                        std::int64_t out = 1;
                        for (std::int64_t i = 0; i < r && out < kValueBoundCap; ++i)
                            out = sat_mul(out, l);
                        return out;
                    }
                }
                return kValueBoundCap;
            }
        }
        return kValueBoundCap;
    }

    void collect_max_int() {
        for (const GroundTuple& t : a_.universe.tuples())
            if (is_int(t[0])) note_int(as_int(t[0]));
        for (const GuessDecl& g : a_.guesses)
            if (g.has_values()) {
                note_int(g.lo);
                note_int(g.hi);
            }
        for (const Rule& r : a_.resolved.rules) {
            if (!r.is_fail)
                for (const Term& t : r.head.args) collect_term_ints(t);
            for (const BodyElem& e : r.body) {
                if (const Atom* at = std::get_if<Atom>(&e)) {
                    for (const Term& t : at->args) collect_term_ints(t);
                } else if (const NegAtom* n = std::get_if<NegAtom>(&e)) {
                    for (const Term& t : n->atom.args) collect_term_ints(t);
                } else if (const Comparison* c = std::get_if<Comparison>(&e)) {
                    collect_term_ints(c->lhs);
                    collect_term_ints(c->rhs);
                } else if (const Aggregate* agg = std::get_if<Aggregate>(&e)) {
                    collect_term_ints(agg->lo);
                    collect_term_ints(agg->hi);
                    for (const AggArg& arg : agg->args)
                        if (arg.kind == AggArgKind::integer) note_int(arg.value);
                }
            }
        }

        // Rule arithmetic can compute values above every written constant,
        // and a bounded-integer target must still represent each
        // intermediate, so the ceiling covers every expression's reach.
        std::int64_t base = a_.max_int;
        auto note_bound = [&](const Term& t) { note_int(term_bound(t, base)); };
        for (const Rule& r : a_.resolved.rules) {
            if (!r.is_fail)
                for (const Term& t : r.head.args) note_bound(t);
            for (const BodyElem& e : r.body) {
                if (const Atom* at = std::get_if<Atom>(&e)) {
                    for (const Term& t : at->args) note_bound(t);
                } else if (const NegAtom* n = std::get_if<NegAtom>(&e)) {
                    for (const Term& t : n->atom.args) note_bound(t);
                } else if (const Comparison* c = std::get_if<Comparison>(&e)) {
                    note_bound(c->lhs);
                    note_bound(c->rhs);
                }
            }
        }
    }
};

}  // namespace detail

inline Analysis analyze(const Program& p) { return detail::Analyzer(p).run(); }

}  // namespace npspec
