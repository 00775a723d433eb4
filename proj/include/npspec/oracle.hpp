#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "npspec/analyzer.hpp"

namespace npspec {

// ---- exact candidate-space size ----

class BigUint {
  public:
    BigUint() : digits_{0} {}
    explicit BigUint(std::uint64_t v) {
        digits_.clear();
        do {
            digits_.push_back(static_cast<std::uint32_t>(v % kBase));
            v /= kBase;
        } while (v);
    }

    void mul(std::uint64_t m) {
        unsigned __int128 carry = 0;
        for (std::uint32_t& d : digits_) {
            unsigned __int128 cur = static_cast<unsigned __int128>(d) * m + carry;
            d = static_cast<std::uint32_t>(cur % kBase);
            carry = cur / kBase;
        }
        while (carry) {
            digits_.push_back(static_cast<std::uint32_t>(carry % kBase));
            carry /= kBase;
        }
        while (digits_.size() > 1 && digits_.back() == 0) digits_.pop_back();
    }

    bool exceeds(std::uint64_t limit) const {
        BigUint l(limit);
        if (digits_.size() != l.digits_.size())
            return digits_.size() > l.digits_.size();
        for (std::size_t i = digits_.size(); i-- > 0;)
            if (digits_[i] != l.digits_[i]) return digits_[i] > l.digits_[i];
        return false;
    }

    // Valid only when the value does not exceed the u64 range.
    std::uint64_t low() const {
        std::uint64_t v = 0;
        for (std::size_t i = digits_.size(); i-- > 0;) v = v * kBase + digits_[i];
        return v;
    }

    std::string decimal() const {
        std::string out = std::to_string(digits_.back());
        for (std::size_t i = digits_.size() - 1; i-- > 0;) {
            std::string part = std::to_string(digits_[i]);
            out += std::string(9 - part.size(), '0') + part;
        }
        return out;
    }

  private:
    static constexpr std::uint64_t kBase = 1'000'000'000;
    std::vector<std::uint32_t> digits_;  // little-endian, base 1e9
};

inline BigUint guess_space(const Analysis& a) {
    BigUint total(1);
    for (const GuessDecl& g : a.guesses) {
        std::uint64_t n = g.domain.tuples().size();
        switch (g.kind) {
            case MetafactKind::subset:
                for (std::uint64_t i = 0; i < n; ++i) total.mul(2);
                break;
            case MetafactKind::permutation:
                for (std::uint64_t i = 2; i <= n; ++i) total.mul(i);
                break;
            case MetafactKind::partition:
            case MetafactKind::intfunc:
                for (std::uint64_t i = 0; i < n; ++i)
                    total.mul(static_cast<std::uint64_t>(g.value_count()));
                break;
        }
    }
    return total;
}

// ---- results ----

struct OracleAnswer {
    // Guessed and derived atoms of one model, sorted.
    std::vector<std::pair<std::string, GroundTuple>> atoms;

    bool operator==(const OracleAnswer& o) const { return atoms == o.atoms; }
    bool operator<(const OracleAnswer& o) const { return atoms < o.atoms; }
};

enum class SolveMode { first, all, count };

struct SolveOptions {
    SolveMode mode = SolveMode::all;
    std::uint64_t guess_limit = 10'000'000;
    std::uint64_t answer_limit = 0;  // 0 = unlimited (first/all modes)
};

struct OracleResult {
    std::vector<OracleAnswer> answers;  // enumeration order
    std::uint64_t count = 0;
    bool complete = true;
};

namespace detail {

// ---- candidate enumeration ----
//
// Every metafact enumerates deterministically: subsets count up through a
// bitmask over the domain tuples, permutations walk value assignments in
// lexicographic order, partitions and integer functions tick an odometer
// whose last tuple moves fastest. Across metafacts the first one declared
// is the outermost loop.

class GuessState {
  public:
    explicit GuessState(const GuessDecl& g) : g_(&g), n_(g.domain.tuples().size()) {
        reset();
    }

    void reset() {
        mask_ = 0;
        idx_.resize(n_);
        std::iota(idx_.begin(), idx_.end(), 0);
        digits_.assign(n_, 0);
    }

    // Advance to the next candidate; false when wrapping back to the first.
    bool advance() {
        switch (g_->kind) {
            case MetafactKind::subset:
                ++mask_;
                if (n_ < 64 && mask_ == (std::uint64_t{1} << n_)) {
                    mask_ = 0;
                    return false;
                }
                return true;
            case MetafactKind::permutation:
                return std::next_permutation(idx_.begin(), idx_.end());
            case MetafactKind::partition:
            case MetafactKind::intfunc: {
                for (std::size_t i = n_; i-- > 0;) {
                    if (++digits_[i] < g_->value_count()) return true;
                    digits_[i] = 0;
                }
                return false;
            }
        }
        return false;
    }

    Extension extension() const {
        Extension out(g_->target, g_->arity);
        const auto& tuples = g_->domain.tuples();
        for (std::size_t i = 0; i < n_; ++i) {
            switch (g_->kind) {
                case MetafactKind::subset:
                    if ((mask_ >> i) & 1) out.add(tuples[i]);
                    break;
                case MetafactKind::permutation: {
                    GroundTuple t = tuples[i];
                    t.push_back(static_cast<std::int64_t>(idx_[i]) + 1);
                    out.add(std::move(t));
                    break;
                }
                case MetafactKind::partition:
                case MetafactKind::intfunc: {
                    GroundTuple t = tuples[i];
                    t.push_back(g_->lo + digits_[i]);
                    out.add(std::move(t));
                    break;
                }
            }
        }
        return out;
    }

  private:
    const GuessDecl* g_;
    std::size_t n_;
    std::uint64_t mask_ = 0;
    std::vector<std::size_t> idx_;
    std::vector<std::int64_t> digits_;
};

// ---- term evaluation ----

using Bindings = std::map<std::string, Value>;

inline bool term_vars_bound(const Term& t, const Bindings& b) {
    if (t.kind == TermKind::variable) return b.count(t.name) > 0;
    for (const Term& k : t.kids)
        if (!term_vars_bound(k, b)) return false;
    return true;
}

inline std::int64_t int_operand(const Value& v, const SourcePos& pos) {
    if (!is_int(v))
        throw CompileError(ErrorCode::evaluation_error,
                           "arithmetic needs integer operands, got '" +
                               std::get<std::string>(v) + "'",
                           pos);
    return as_int(v);
}

inline std::int64_t checked_arith(ArithOp op, std::int64_t a, std::int64_t b,
                                  const SourcePos& pos) {
    std::int64_t out = 0;
    switch (op) {
        case ArithOp::add:
            if (__builtin_add_overflow(a, b, &out))
                throw CompileError(ErrorCode::evaluation_error, "arithmetic overflow",
                                   pos);
            return out;
        case ArithOp::sub:
            if (__builtin_sub_overflow(a, b, &out))
                throw CompileError(ErrorCode::evaluation_error, "arithmetic overflow",
                                   pos);
            return out;
        case ArithOp::mul:
            if (__builtin_mul_overflow(a, b, &out))
                throw CompileError(ErrorCode::evaluation_error, "arithmetic overflow",
                                   pos);
            return out;
        case ArithOp::div:
            if (b == 0)
                throw CompileError(ErrorCode::evaluation_error, "division by zero", pos);
            return a / b;
        case ArithOp::pow: {
            if (b < 0)
                throw CompileError(ErrorCode::evaluation_error,
                                   "negative exponent", pos);
            std::int64_t base = a, result = 1, exp = b;
            while (exp > 0) {
                if (exp & 1) {
                    if (__builtin_mul_overflow(result, base, &result))
                        throw CompileError(ErrorCode::evaluation_error,
                                           "arithmetic overflow", pos);
                }
                exp >>= 1;
                if (exp && __builtin_mul_overflow(base, base, &base))
                    throw CompileError(ErrorCode::evaluation_error,
                                       "arithmetic overflow", pos);
            }
            return result;
        }
    }
    return out;
}

inline Value eval_term(const Term& t, const Bindings& b) {
    switch (t.kind) {
        case TermKind::integer: return t.value;
        case TermKind::symbol: return t.name;
        case TermKind::variable: {
            auto it = b.find(t.name);
            if (it == b.end())
                throw CompileError(ErrorCode::internal_error,
                                   "variable '" + t.name + "' unbound at evaluation",
                                   t.pos);
            return it->second;
        }
        case TermKind::anon:
            throw CompileError(ErrorCode::internal_error,
                               "placeholder reached evaluation", t.pos);
        case TermKind::abs: {
            std::int64_t v = int_operand(eval_term(t.kids[0], b), t.pos);
            if (v == std::numeric_limits<std::int64_t>::min())
                throw CompileError(ErrorCode::evaluation_error, "arithmetic overflow",
                                   t.pos);
            return v < 0 ? -v : v;
        }
        case TermKind::binary: {
            std::int64_t a = int_operand(eval_term(t.kids[0], b), t.kids[0].pos);
            std::int64_t c = int_operand(eval_term(t.kids[1], b), t.kids[1].pos);
            return checked_arith(t.op, a, c, t.pos);
        }
    }
    throw CompileError(ErrorCode::internal_error, "unreachable term kind", t.pos);
}

inline bool eval_comparison(CmpOp op, const Value& l, const Value& r,
                            const SourcePos& pos) {
    switch (op) {
        case CmpOp::eq: return l == r;
        case CmpOp::ne: return l != r;
        default: break;
    }
    std::int64_t a = int_operand(l, pos);
    std::int64_t b = int_operand(r, pos);
    switch (op) {
        case CmpOp::lt: return a < b;
        case CmpOp::le: return a <= b;
        case CmpOp::gt: return a > b;
        case CmpOp::ge: return a >= b;
        default: return false;
    }
}

// ---- rule evaluation ----

class Evaluator {
  public:
    explicit Evaluator(const Analysis& a) : a_(a) {
        prepare_pools();
        for (std::size_t i = 0; i < a_.resolved.rules.size(); ++i) prepare_rule(i);
        for (const auto& entry : a_.strat.level) levels_.insert(entry.second);
    }

    // One candidate: true when it satisfies every fail rule.
    bool evaluate(const std::vector<Extension>& guessed, OracleAnswer* out) {
        facts_.clear();
        for (const std::string& name : a_.relation_order)
            facts_.emplace(name, a_.relations.at(name));
        for (const Extension& e : guessed) facts_.emplace(e.name(), e);
        for (const std::string& name : a_.derived_order)
            facts_.emplace(name, Extension(name, a_.arity.at(name)));

        for (int level : levels_) {
            bool changed = true;
            while (changed) {
                changed = false;
                for (PreparedRule& r : derive_rules_) {
                    if (r.level != level) continue;
                    std::vector<GroundTuple> fresh;
                    Bindings b;
                    join(r, 0, b, [&] {
                        GroundTuple t;
                        for (const Term& arg : r.rule->head.args)
                            t.push_back(eval_term(arg, b));
                        fresh.push_back(std::move(t));
                        return true;
                    });
                    Extension& target = facts_.at(r.rule->head.pred);
                    for (GroundTuple& t : fresh)
                        if (target.add(std::move(t))) changed = true;
                }
            }
        }

        for (PreparedRule& r : fail_rules_) {
            bool violated = false;
            Bindings b;
            join(r, 0, b, [&] {
                violated = true;
                return false;
            });
            if (violated) return false;
        }

        if (out) {
            out->atoms.clear();
            for (const Extension& e : guessed)
                for (const GroundTuple& t : e.tuples())
                    out->atoms.emplace_back(e.name(), t);
            for (const std::string& name : a_.derived_order)
                for (const GroundTuple& t : facts_.at(name).tuples())
                    out->atoms.emplace_back(name, t);
            std::sort(out->atoms.begin(), out->atoms.end());
        }
        return true;
    }

  private:
    struct JoinAtom {
        std::string pred;                // named extension, or
        const Extension* fixed = nullptr;  // a binder pool
        std::vector<Term> args;
    };

    struct PreparedRule {
        const Rule* rule = nullptr;
        int level = 0;
        std::vector<JoinAtom> positives;
        std::vector<const BodyElem*> rest;  // comparisons, negations, aggregates
    };

    const Analysis& a_;
    std::map<std::string, Extension> facts_;
    std::vector<PreparedRule> derive_rules_;
    std::vector<PreparedRule> fail_rules_;
    std::set<int> levels_;
    std::map<std::pair<int, int>, Extension> domain_pools_;  // (metafact, position)
    std::map<int, Extension> value_pools_;                   // metafact

    void prepare_pools() {
        for (std::size_t ri = 0; ri < a_.repairs.size(); ++ri) {
            for (const Binder& b : a_.repairs[ri]) {
                if (b.kind == Binder::metafact_domain) {
                    auto key = std::make_pair(b.metafact, b.position);
                    if (domain_pools_.count(key)) continue;
                    Extension pool("", 1);
                    for (const GroundTuple& t :
                         a_.guesses[b.metafact].domain.tuples())
                        pool.add({t[b.position]});
                    domain_pools_.emplace(key, std::move(pool));
                } else if (b.kind == Binder::metafact_values) {
                    if (value_pools_.count(b.metafact)) continue;
                    const GuessDecl& g = a_.guesses[b.metafact];
                    Extension pool("", 1);
                    for (std::int64_t v = g.lo; v <= g.hi; ++v) pool.add({v});
                    value_pools_.emplace(b.metafact, std::move(pool));
                }
            }
        }
    }

    void prepare_rule(std::size_t index) {
        const Rule& rule = a_.resolved.rules[index];
        PreparedRule out;
        out.rule = &rule;
        out.level = rule.is_fail ? 0 : a_.strat.level.at(rule.head.pred);

        for (const BodyElem& e : rule.body) {
            if (const Atom* at = std::get_if<Atom>(&e)) {
                JoinAtom ja;
                ja.pred = at->pred;
                ja.args = at->args;
                out.positives.push_back(std::move(ja));
            } else {
                out.rest.push_back(&e);
            }
        }
        for (const Binder& b : a_.repairs[index]) {
            JoinAtom ja;
            if (b.kind == Binder::metafact_domain)
                ja.fixed = &domain_pools_.at({b.metafact, b.position});
            else if (b.kind == Binder::metafact_values)
                ja.fixed = &value_pools_.at(b.metafact);
            else
                ja.fixed = &a_.universe;
            ja.args.push_back(Term::make_variable(b.var, {}));
            out.positives.push_back(std::move(ja));
        }

        if (rule.is_fail)
            fail_rules_.push_back(std::move(out));
        else
            derive_rules_.push_back(std::move(out));
    }

    // Arguments holding arithmetic over still-unbound variables defer until
    // a later atom binds them.
    struct Pending {
        const Term* expr;
        Value expect;
        bool resolved = false;
    };

    template <typename Callback>
    bool join(PreparedRule& r, std::size_t i, Bindings& b, Callback&& cb,
              std::vector<Pending>* pending = nullptr) {
        std::vector<Pending> local_pending;
        if (!pending) pending = &local_pending;

        if (i == r.positives.size()) {
            for (const Pending& p : *pending)
                if (!p.resolved)
                    throw CompileError(ErrorCode::internal_error,
                                       "deferred arithmetic stayed unresolved");
            return eval_rest(r, b, cb);
        }

        const JoinAtom& ja = r.positives[i];
        const Extension& ext = ja.fixed ? *ja.fixed : facts_.at(ja.pred);
        // Snapshot: recursive rules add tuples between passes, not mid-join.
        const std::vector<GroundTuple>& tuples = ext.tuples();
        std::size_t tuple_count = tuples.size();

        for (std::size_t ti = 0; ti < tuple_count; ++ti) {
            const GroundTuple& tuple = tuples[ti];
            std::vector<std::string> bound_here;
            std::size_t pending_before = pending->size();
            std::vector<std::size_t> resolved_here;
            bool ok = true;

            for (std::size_t pos = 0; ok && pos < ja.args.size(); ++pos) {
                const Term& arg = ja.args[pos];
                switch (arg.kind) {
                    case TermKind::variable: {
                        auto it = b.find(arg.name);
                        if (it != b.end()) {
                            ok = it->second == tuple[pos];
                        } else {
                            b.emplace(arg.name, tuple[pos]);
                            bound_here.push_back(arg.name);
                        }
                        break;
                    }
                    case TermKind::anon: break;
                    case TermKind::integer:
                        ok = is_int(tuple[pos]) && as_int(tuple[pos]) == arg.value;
                        break;
                    case TermKind::symbol:
                        ok = !is_int(tuple[pos]) &&
                             std::get<std::string>(tuple[pos]) == arg.name;
                        break;
                    case TermKind::binary:
                    case TermKind::abs:
                        pending->push_back({&arg, tuple[pos], false});
                        break;
                }
            }

            if (ok) {
                for (std::size_t pi = 0; ok && pi < pending->size(); ++pi) {
                    Pending& p = (*pending)[pi];
                    if (p.resolved || !term_vars_bound(*p.expr, b)) continue;
                    ok = eval_term(*p.expr, b) == p.expect;
                    p.resolved = true;
                    resolved_here.push_back(pi);
                }
            }

            if (ok && !join(r, i + 1, b, cb, pending)) return false;

            for (const std::string& name : bound_here) b.erase(name);
            for (std::size_t pi : resolved_here) (*pending)[pi].resolved = false;
            pending->resize(pending_before);
        }
        return true;
    }

    template <typename Callback>
    bool eval_rest(PreparedRule& r, Bindings& b, Callback&& cb) {
        std::vector<std::string> bound_here;
        bool ok = true;
        for (const BodyElem* e : r.rest) {
            if (const Comparison* c = std::get_if<Comparison>(e)) {
                ok = eval_comparison(c->op, eval_term(c->lhs, b), eval_term(c->rhs, b),
                                     c->pos);
            } else if (const NegAtom* n = std::get_if<NegAtom>(e)) {
                GroundTuple t;
                for (const Term& arg : n->atom.args) t.push_back(eval_term(arg, b));
                ok = !facts_.at(n->atom.pred).contains(t);
            } else if (const Aggregate* g = std::get_if<Aggregate>(e)) {
                ok = eval_aggregate(*g, b, bound_here);
            }
            if (!ok) break;
        }
        bool keep_going = true;
        if (ok) keep_going = cb();
        for (const std::string& name : bound_here) b.erase(name);
        return keep_going;
    }

    // The aggregate value ranges over the set of distinct projections of the
    // template's star positions; template variables not bound by the rule
    // unify tuple-locally.
    bool eval_aggregate(const Aggregate& g, Bindings& b,
                        std::vector<std::string>& bound_here) {
        std::set<GroundTuple> projections;
        for (const GroundTuple& tuple : facts_.at(g.pred).tuples()) {
            GroundTuple proj;
            Bindings local;
            bool match = true;
            for (std::size_t pos = 0; match && pos < g.args.size(); ++pos) {
                const AggArg& arg = g.args[pos];
                switch (arg.kind) {
                    case AggArgKind::star: proj.push_back(tuple[pos]); break;
                    case AggArgKind::anon: break;
                    case AggArgKind::integer:
                        match = is_int(tuple[pos]) && as_int(tuple[pos]) == arg.value;
                        break;
                    case AggArgKind::symbol:
                        match = !is_int(tuple[pos]) &&
                                std::get<std::string>(tuple[pos]) == arg.name;
                        break;
                    case AggArgKind::variable: {
                        auto it = b.find(arg.name);
                        if (it != b.end()) {
                            match = it->second == tuple[pos];
                            break;
                        }
                        auto [lit, fresh] = local.try_emplace(arg.name, tuple[pos]);
                        if (!fresh) match = lit->second == tuple[pos];
                        break;
                    }
                }
            }
            if (match) projections.insert(std::move(proj));
        }

        std::int64_t value = 0;
        switch (g.func) {
            case AggFunc::count:
                value = static_cast<std::int64_t>(projections.size());
                break;
            case AggFunc::sum:
                for (const GroundTuple& p : projections) {
                    if (!is_int(p[0]))
                        throw CompileError(ErrorCode::evaluation_error,
                                           "SUM needs integer values, got '" +
                                               std::get<std::string>(p[0]) + "'",
                                           g.pos);
                    std::int64_t v = as_int(p[0]);
                    if (__builtin_add_overflow(value, v, &value))
                        throw CompileError(ErrorCode::evaluation_error,
                                           "arithmetic overflow", g.pos);
                }
                break;
            case AggFunc::min:
            case AggFunc::max: {
                if (projections.empty()) return false;
                // Integers sort before symbols, so a symbolic extremum can
                // never satisfy the integer range guard.
                const GroundTuple& edge = g.func == AggFunc::min
                                              ? *projections.begin()
                                              : *projections.rbegin();
                if (!is_int(edge[0])) return false;
                value = as_int(edge[0]);
                break;
            }
        }

        std::int64_t lo = as_int(eval_term(g.lo, b));
        std::int64_t hi = as_int(eval_term(g.hi, b));
        if (value < lo || value > hi) return false;
        auto it = b.find(g.result_var);
        if (it != b.end()) return is_int(it->second) && as_int(it->second) == value;
        b.emplace(g.result_var, value);
        bound_here.push_back(g.result_var);
        return true;
    }
};

}  // namespace detail

// Full reference semantics: enumerate every candidate of the guess space in
// deterministic order and keep the ones whose stratified evaluation violates
// no fail rule.
inline OracleResult solve(const Analysis& a, SolveOptions opts = {}) {
    BigUint space = guess_space(a);
    if (space.exceeds(opts.guess_limit))
        throw CompileError(ErrorCode::guess_ceiling,
                           "the candidate space holds " + space.decimal() +
                               " guesses, above the limit of " +
                               std::to_string(opts.guess_limit));

    detail::Evaluator eval(a);
    std::vector<detail::GuessState> states;
    states.reserve(a.guesses.size());
    for (const GuessDecl& g : a.guesses) states.emplace_back(g);

    OracleResult result;
    for (;;) {
        std::vector<Extension> guessed;
        guessed.reserve(states.size());
        for (const detail::GuessState& s : states) guessed.push_back(s.extension());

        OracleAnswer answer;
        bool want_atoms = opts.mode != SolveMode::count;
        if (eval.evaluate(guessed, want_atoms ? &answer : nullptr)) {
            ++result.count;
            if (opts.mode != SolveMode::count)
                result.answers.push_back(std::move(answer));
            if (opts.mode == SolveMode::first) return result;
            if (opts.answer_limit && opts.mode == SolveMode::all &&
                result.answers.size() >= opts.answer_limit) {
                result.complete = false;
                return result;
            }
        }

        // The last metafact advances fastest; carry leftward on wrap.
        bool advanced = false;
        for (std::size_t i = states.size(); i-- > 0;) {
            if (states[i].advance()) {
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    return result;
}

}  // namespace npspec
