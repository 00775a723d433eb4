#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "npspec/diag.hpp"
#include "npspec/grounder.hpp"
#include "npspec/relation.hpp"

namespace npspec {

struct AnswerSetOptions {
    std::uint64_t pattern_limit = 10'000'000;
    int atoms_limit = 64;
};

// Answer sets as sorted atom-id vectors, in deterministic enumeration
// order after deduplication.
inline std::vector<std::vector<int>> answer_sets(const GroundProgram& g,
                                                 AnswerSetOptions opts = {});

namespace detail {

class AnswerSetFinder {
  public:
    AnswerSetFinder(const GroundProgram& g, AnswerSetOptions opts)
        : g_(g), opts_(opts) {}

    std::vector<std::vector<int>> run() {
        classify();
        check_limits();
        std::vector<int> pattern(guess_rules_.size(), 0);
        enumerate(0, pattern);
        std::vector<std::vector<int>> out(found_.begin(), found_.end());
        std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
            return order_.at(a) < order_.at(b);
        });
        return out;
    }

  private:
    const GroundProgram& g_;
    AnswerSetOptions opts_;

    // One entry per independent decision: either pick one head of a
    // disjunction (or of an exactly-one choice), or flip a single
    // unbounded choice element in or out.
    struct Decision {
        enum Kind { one_of, in_out } kind = one_of;
        std::vector<int> options;  // one_of: atom per option
        int atom = -1;             // in_out: the element
    };
    std::vector<Decision> guess_rules_;
    std::set<std::vector<int>> found_;
    std::map<std::vector<int>, std::size_t> order_;

    bool is_fact(int id) const { return g_.fact[id]; }

    void require_fact_body(const GroundRule& r) {
        for (int p : r.pos)
            if (!is_fact(p))
                throw CompileError(ErrorCode::internal_error,
                                   "choice and disjunction bodies must be "
                                   "database facts in generated programs");
        if (!r.naf.empty() || !r.aggs.empty())
            throw CompileError(ErrorCode::internal_error,
                               "choice and disjunction bodies must be "
                               "database facts in generated programs");
    }

    void classify() {
        for (const GroundRule& r : g_.rules) {
            if (r.kind == GroundRule::disjunctive) {
                require_fact_body(r);
                Decision d;
                d.kind = Decision::one_of;
                d.options = r.heads;
                guess_rules_.push_back(std::move(d));
            } else if (r.kind == GroundRule::choice) {
                require_fact_body(r);
                if (r.lo == 1 && r.hi == 1) {
                    Decision d;
                    d.kind = Decision::one_of;
                    d.options = r.heads;
                    guess_rules_.push_back(std::move(d));
                } else {
                    for (int h : r.heads) {
                        Decision d;
                        d.kind = Decision::in_out;
                        d.atom = h;
                        guess_rules_.push_back(std::move(d));
                    }
                }
            }
        }
    }

    void check_limits() {
        std::set<int> guessable;
        for (const Decision& d : guess_rules_) {
            if (d.kind == Decision::one_of)
                guessable.insert(d.options.begin(), d.options.end());
            else
                guessable.insert(d.atom);
        }
        if (guessable.size() > static_cast<std::size_t>(opts_.atoms_limit))
            throw CompileError(ErrorCode::atoms_ceiling,
                               "the ground program guesses over " +
                                   std::to_string(guessable.size()) +
                                   " atoms, above the limit of " +
                                   std::to_string(opts_.atoms_limit));
        std::uint64_t product = 1;
        for (const Decision& d : guess_rules_) {
            std::uint64_t k =
                d.kind == Decision::one_of ? d.options.size() : 2;
            if (k == 0) {
                product = 0;
                break;
            }
            if (product > opts_.pattern_limit / k + 1)
                throw CompileError(ErrorCode::guess_ceiling,
                                   "the ground candidate space is above the "
                                   "limit of " +
                                       std::to_string(opts_.pattern_limit));
            product *= k;
        }
        if (product > opts_.pattern_limit)
            throw CompileError(ErrorCode::guess_ceiling,
                               "the ground candidate space is above the limit of " +
                                   std::to_string(opts_.pattern_limit));
    }

    void enumerate(std::size_t i, std::vector<int>& pattern) {
        if (i == guess_rules_.size()) {
            evaluate(pattern);
            return;
        }
        const Decision& d = guess_rules_[i];
        std::size_t options = d.kind == Decision::one_of ? d.options.size() : 2;
        for (std::size_t c = 0; c < options; ++c) {
            pattern[i] = static_cast<int>(c);
            enumerate(i + 1, pattern);
        }
    }

    std::vector<bool> chosen_atoms(const std::vector<int>& pattern) const {
        std::vector<bool> truth(g_.atoms.size(), false);
        for (std::size_t i = 0; i < g_.atoms.size(); ++i)
            if (g_.fact[i]) truth[i] = true;
        for (std::size_t i = 0; i < guess_rules_.size(); ++i) {
            const Decision& d = guess_rules_[i];
            if (d.kind == Decision::one_of)
                truth[d.options[pattern[i]]] = true;
            else if (pattern[i] == 1)
                truth[d.atom] = true;
        }
        return truth;
    }

    // ---- candidate evaluation ----

    bool agg_true(const GroundAgg& a, const std::vector<bool>& truth) const {
        std::set<GroundTuple> projections;
        for (std::size_t id = 0; id < g_.atoms.size(); ++id) {
            if (!truth[id]) continue;
            const GroundAtomInfo& info = g_.atoms[id];
            if (info.strong_neg || info.pred != a.pred) continue;
            if (info.args.size() != a.args.size()) continue;
            std::map<int, Value> locals;
            bool match = true;
            for (std::size_t i = 0; match && i < a.args.size(); ++i) {
                const GroundAggArg& arg = a.args[i];
                if (arg.kind == GroundAggArg::fixed) {
                    match = arg.value == info.args[i];
                } else {
                    auto [it, fresh] = locals.try_emplace(arg.slot, info.args[i]);
                    if (!fresh) match = it->second == info.args[i];
                }
            }
            if (!match) continue;
            GroundTuple proj;
            for (std::size_t i = 0; i < a.args.size(); ++i)
                if (a.args[i].projected) proj.push_back(info.args[i]);
            projections.insert(std::move(proj));
        }

        // Values follow the first projected position, with extrema read off
        // the lexicographically extreme projection tuple; integers sort
        // before symbols, so a symbolic extremum never passes.
        std::int64_t value = 0;
        switch (a.func) {
            case AggFunc::count:
                value = static_cast<std::int64_t>(projections.size());
                break;
            case AggFunc::sum:
                for (const GroundTuple& p : projections) {
                    if (!is_int(p[0])) return false;
                    if (__builtin_add_overflow(value, as_int(p[0]), &value))
                        return false;
                }
                break;
            case AggFunc::min:
            case AggFunc::max: {
                if (projections.empty()) return false;
                const GroundTuple& edge = a.func == AggFunc::min
                                              ? *projections.begin()
                                              : *projections.rbegin();
                if (!is_int(edge[0])) return false;
                value = as_int(edge[0]);
                break;
            }
        }
        if (a.at_least_two) return value >= 2;
        return value == a.target;
    }

    bool body_true(const GroundRule& r, const std::vector<bool>& truth) const {
        for (int p : r.pos)
            if (!truth[p]) return false;
        for (int n : r.naf)
            if (truth[n]) return false;
        for (const GroundAgg& a : r.aggs)
            if (!agg_true(a, truth)) return false;
        return true;
    }

    void evaluate(const std::vector<int>& pattern) {
        std::vector<bool> truth = chosen_atoms(pattern);

        // Stratified closure of the definite rules.
        for (int level = 0; level <= g_.max_level; ++level) {
            bool changed = true;
            while (changed) {
                changed = false;
                for (const GroundRule& r : g_.rules) {
                    if (r.kind != GroundRule::definite || r.level != level)
                        continue;
                    if (truth[r.heads[0]]) continue;
                    if (body_true(r, truth)) {
                        truth[r.heads[0]] = true;
                        changed = true;
                    }
                }
            }
        }

        if (!satisfies_all(truth)) return;
        if (!consistent(truth)) return;
        if (!minimal(truth)) return;

        std::vector<int> atoms;
        for (std::size_t id = 0; id < truth.size(); ++id)
            if (truth[id]) atoms.push_back(static_cast<int>(id));
        auto [it, fresh] = found_.insert(std::move(atoms));
        if (fresh) order_.emplace(*it, order_.size());
    }

    bool satisfies_all(const std::vector<bool>& truth) const {
        for (const GroundRule& r : g_.rules) {
            if (!body_true(r, truth)) continue;
            switch (r.kind) {
                case GroundRule::constraint: return false;
                case GroundRule::definite:
                case GroundRule::disjunctive: {
                    bool any = false;
                    for (int h : r.heads)
                        if (truth[h]) any = true;
                    if (!any) return false;
                    break;
                }
                case GroundRule::choice: {
                    std::int64_t count = 0;
                    for (int h : r.heads)
                        if (truth[h]) ++count;
                    if (r.lo >= 0 && count < r.lo) return false;
                    if (r.hi >= 0 && count > r.hi) return false;
                    break;
                }
            }
        }
        return true;
    }

    bool consistent(const std::vector<bool>& truth) const {
        std::set<std::string> positive;
        for (std::size_t id = 0; id < truth.size(); ++id)
            if (truth[id] && !g_.atoms[id].strong_neg)
                positive.insert(g_.atoms[id].text);
        for (std::size_t id = 0; id < truth.size(); ++id) {
            if (!truth[id] || !g_.atoms[id].strong_neg) continue;
            if (positive.count(g_.atoms[id].text.substr(1))) return false;
        }
        return true;
    }

    // Subset-minimality of the reduct. Rules reduce against the candidate:
    // negative literals and aggregates freeze at their candidate truth,
    // heads restrict to candidate atoms, and chosen choice atoms become
    // supported facts. Constraints never join the reduct.
    struct ReductRule {
        std::vector<int> heads;  // restricted to true atoms
        std::vector<int> pos;
    };

    bool minimal(const std::vector<bool>& truth) const {
        std::vector<ReductRule> reduct;
        bool ambiguous = false;
        for (const GroundRule& r : g_.rules) {
            if (r.kind == GroundRule::constraint) continue;
            bool frozen_true = true;
            for (int n : r.naf)
                if (truth[n]) frozen_true = false;
            for (const GroundAgg& a : r.aggs)
                if (frozen_true && !agg_true(a, truth)) frozen_true = false;
            if (!frozen_true) continue;
            bool relevant = true;
            for (int p : r.pos)
                if (!truth[p]) relevant = false;
            if (!relevant) continue;

            if (r.kind == GroundRule::choice) {
                for (int h : r.heads)
                    if (truth[h]) reduct.push_back({{h}, r.pos});
                continue;
            }
            ReductRule rr;
            rr.pos = r.pos;
            for (int h : r.heads)
                if (truth[h]) rr.heads.push_back(h);
            if (rr.heads.size() > 1) ambiguous = true;
            reduct.push_back(std::move(rr));
        }

        if (!ambiguous) {
            // Definite reduct: the least model is unique, so the candidate
            // is minimal exactly when it equals that least model.
            std::vector<bool> least(g_.atoms.size(), false);
            for (std::size_t id = 0; id < g_.atoms.size(); ++id)
                if (g_.fact[id]) least[id] = true;
            bool changed = true;
            while (changed) {
                changed = false;
                for (const ReductRule& rr : reduct) {
                    if (least[rr.heads[0]]) continue;
                    bool fire = true;
                    for (int p : rr.pos)
                        if (!least[p]) fire = false;
                    if (fire) {
                        least[rr.heads[0]] = true;
                        changed = true;
                    }
                }
            }
            return least == truth;
        }

        // Ambiguous disjunctions: search proper sub-models directly.
        std::vector<int> removable;
        for (std::size_t id = 0; id < truth.size(); ++id)
            if (truth[id] && !g_.fact[id]) removable.push_back(static_cast<int>(id));
        if (removable.size() > static_cast<std::size_t>(opts_.atoms_limit))
            throw CompileError(ErrorCode::atoms_ceiling,
                               "minimality checking needs " +
                                   std::to_string(removable.size()) +
                                   " free atoms, above the limit of " +
                                   std::to_string(opts_.atoms_limit));
        std::uint64_t subsets = 1;
        for (std::size_t i = 0; i < removable.size(); ++i) {
            if (subsets > opts_.pattern_limit / 2)
                throw CompileError(ErrorCode::atoms_ceiling,
                                   "minimality checking exceeds the search limit");
            subsets *= 2;
        }
        for (std::uint64_t mask = 0; mask + 1 < subsets; ++mask) {
            std::vector<bool> sub(g_.atoms.size(), false);
            for (std::size_t id = 0; id < g_.atoms.size(); ++id)
                if (g_.fact[id]) sub[id] = true;
            for (std::size_t i = 0; i < removable.size(); ++i)
                if (mask & (std::uint64_t(1) << i)) sub[removable[i]] = true;
            bool models = true;
            for (const ReductRule& rr : reduct) {
                bool fire = true;
                for (int p : rr.pos)
                    if (!sub[p]) fire = false;
                if (!fire) continue;
                bool any = false;
                for (int h : rr.heads)
                    if (sub[h]) any = true;
                if (!any) {
                    models = false;
                    break;
                }
            }
            if (models) return false;  // a proper sub-model exists
        }
        return true;
    }
};

}  // namespace detail

inline std::vector<std::vector<int>> answer_sets(const GroundProgram& g,
                                                 AnswerSetOptions opts) {
    return detail::AnswerSetFinder(g, opts).run();
}

}  // namespace npspec
