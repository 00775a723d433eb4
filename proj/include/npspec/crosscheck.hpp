#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "npspec/analyzer.hpp"
#include "npspec/answersets.hpp"
#include "npspec/asp.hpp"
#include "npspec/diag.hpp"
#include "npspec/grounder.hpp"
#include "npspec/oracle.hpp"
#include "npspec/translator.hpp"

namespace npspec {

// Compare the answer sets of a translated program, computed from the
// ground rules alone, against the reference solver. Both sides project to
// the guessed and derived predicates; classical negation atoms are
// encoding artifacts and drop out.

enum class CrosscheckStatus { pass, fail, skip, inconclusive };

inline const char* crosscheck_status_name(CrosscheckStatus s) {
    switch (s) {
        case CrosscheckStatus::pass: return "PASS";
        case CrosscheckStatus::fail: return "FAIL";
        case CrosscheckStatus::skip: return "SKIP";
        case CrosscheckStatus::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

struct CrosscheckOptions {
    SolveOptions oracle;
    GroundOptions ground;
    AnswerSetOptions solver;
};

struct CrosscheckOutcome {
    EmitOptions combo;
    CrosscheckStatus status = CrosscheckStatus::pass;
    std::string detail;
    std::size_t reference_count = 0;
    std::size_t translated_count = 0;
};

inline std::vector<EmitOptions> crosscheck_combos() {
    std::vector<EmitOptions> out;
    for (AspDialect dialect : {AspDialect::dlv, AspDialect::gringo}) {
        for (GuessEncoding guess : {GuessEncoding::disjunctive, GuessEncoding::choice}) {
            if (dialect == AspDialect::dlv && guess == GuessEncoding::choice)
                continue;
            for (PermCheck check : {PermCheck::pairwise, PermCheck::aggregate}) {
                EmitOptions o;
                o.dialect = dialect;
                o.guess = guess;
                o.perm_check = check;
                out.push_back(o);
            }
        }
    }
    return out;
}

inline std::string combo_name(const EmitOptions& o) {
    return std::string(dialect_name(o.dialect)) + "/" +
           guess_encoding_name(o.guess) + "/" + perm_check_name(o.perm_check);
}

namespace detail {

inline std::string answer_text(const OracleAnswer& a) {
    if (a.atoms.empty()) return "{}";
    std::string out = "{";
    for (std::size_t i = 0; i < a.atoms.size(); ++i) {
        if (i) out += " ";
        out += a.atoms[i].first + tuple_text(a.atoms[i].second);
    }
    return out + "}";
}

inline OracleAnswer project_model(const Analysis& a, const GroundProgram& g,
                                  const std::vector<int>& atoms) {
    OracleAnswer out;
    for (int id : atoms) {
        const GroundAtomInfo& info = g.atoms[id];
        if (info.strong_neg) continue;
        if (!a.is_guessed(info.pred) && !a.is_derived(info.pred)) continue;
        out.atoms.emplace_back(info.pred, info.args);
    }
    std::sort(out.atoms.begin(), out.atoms.end());
    return out;
}

inline bool is_ceiling(ErrorCode c) {
    return c == ErrorCode::guess_ceiling || c == ErrorCode::ground_ceiling ||
           c == ErrorCode::atoms_ceiling;
}

inline bool is_dialect_error(ErrorCode c) {
    return c == ErrorCode::dialect_choice_unsupported ||
           c == ErrorCode::dialect_negative_integer ||
           c == ErrorCode::dialect_unsupported_operator;
}

}  // namespace detail

// Crosscheck one already-translated program. Useful for mutated programs;
// the plain entry point below translates first.
inline CrosscheckOutcome crosscheck_translated(const Analysis& a,
                                               const AspProgram& asp,
                                               CrosscheckOptions opts = {}) {
    CrosscheckOutcome out;
    out.combo = asp.opts;

    // Cheap refusals first: the space estimate and the ground-side atom
    // and pattern ceilings all trigger before any enumeration starts.
    if (guess_space(a).exceeds(opts.oracle.guess_limit)) {
        out.status = CrosscheckStatus::inconclusive;
        out.detail = "the candidate space holds " + guess_space(a).decimal() +
                     " guesses, above the limit of " +
                     std::to_string(opts.oracle.guess_limit);
        return out;
    }

    std::set<OracleAnswer> translated;
    try {
        GroundProgram g = ground(asp, opts.ground);
        for (const std::vector<int>& model : answer_sets(g, opts.solver))
            translated.insert(detail::project_model(a, g, model));
    } catch (const CompileError& e) {
        if (detail::is_ceiling(e.code())) {
            out.status = CrosscheckStatus::inconclusive;
            out.detail = e.what();
            return out;
        }
        throw;
    }
    out.translated_count = translated.size();

    std::set<OracleAnswer> reference;
    try {
        OracleResult r = solve(a, opts.oracle);
        if (!r.complete) {
            out.status = CrosscheckStatus::inconclusive;
            out.detail = "the reference enumeration stopped at its answer limit";
            return out;
        }
        reference.insert(r.answers.begin(), r.answers.end());
    } catch (const CompileError& e) {
        if (detail::is_ceiling(e.code())) {
            out.status = CrosscheckStatus::inconclusive;
            out.detail = e.what();
            return out;
        }
        throw;
    }
    out.reference_count = reference.size();

    for (const OracleAnswer& r : reference) {
        if (!translated.count(r)) {
            out.status = CrosscheckStatus::fail;
            out.detail = "the translated program misses the reference model " +
                         detail::answer_text(r);
            return out;
        }
    }
    for (const OracleAnswer& t : translated) {
        if (!reference.count(t)) {
            out.status = CrosscheckStatus::fail;
            out.detail = "the translated program accepts the extra model " +
                         detail::answer_text(t);
            return out;
        }
    }
    out.status = CrosscheckStatus::pass;
    return out;
}

inline CrosscheckOutcome crosscheck_one(const Analysis& a, EmitOptions combo,
                                        CrosscheckOptions opts = {}) {
    try {
        AspProgram asp = translate(a, combo);
        return crosscheck_translated(a, asp, opts);
    } catch (const CompileError& e) {
        if (detail::is_dialect_error(e.code())) {
            CrosscheckOutcome out;
            out.combo = combo;
            out.status = CrosscheckStatus::skip;
            out.detail = e.what();
            return out;
        }
        throw;
    }
}

inline std::vector<CrosscheckOutcome> crosscheck(const Analysis& a,
                                                 CrosscheckOptions opts = {}) {
    std::vector<CrosscheckOutcome> out;
    for (const EmitOptions& combo : crosscheck_combos())
        out.push_back(crosscheck_one(a, combo, opts));
    return out;
}

// ---- mutation hooks ----

inline std::size_t count_rules(const AspProgram& p, AspRule::Role role) {
    std::size_t n = 0;
    for (const AspRule& r : p.rules)
        if (r.role == role) ++n;
    return n;
}

// Remove the index-th rule with the given role; the result deliberately
// breaks the translation so a checker can prove it would notice.
inline AspProgram drop_rule(AspProgram p, AspRule::Role role, std::size_t index) {
    std::size_t seen = 0;
    for (auto it = p.rules.begin(); it != p.rules.end(); ++it) {
        if (it->role != role) continue;
        if (seen++ == index) {
            p.rules.erase(it);
            return p;
        }
    }
    throw CompileError(ErrorCode::internal_error,
                       "no rule with the requested role and index");
}

}  // namespace npspec
