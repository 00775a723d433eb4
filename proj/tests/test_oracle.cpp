#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <vector>

#include "npspec/analyzer.hpp"
#include "npspec/oracle.hpp"
#include "npspec/parser.hpp"

using namespace npspec;

namespace {

const char* kCycleSource =
    "DATABASE\n"
    "    n = 6;\n"
    "    edge = {(1,2),(3,1),(2,3),(6,2),(5,6),(4,5),(3,5),(1,4),(4,1)};\n"
    "SPECIFICATION\n"
    "    Permutation({1..n},path).\n"
    "    fail <-- path(X,P), path(Y,P+1), NOT edge(X,Y).\n"
    "    fail <-- path(X,n), path(Y,1), NOT edge(X,Y).\n";

Analysis analyzed(const std::string& src) { return analyze(parse_program(src)); }

OracleResult solve_all(const std::string& src) {
    return solve(analyzed(src), SolveOptions{});
}

std::uint64_t solve_count(const std::string& src) {
    SolveOptions opts;
    opts.mode = SolveMode::count;
    return solve(analyzed(src), opts).count;
}

bool has_atom(const OracleAnswer& a, const std::string& pred, GroundTuple t) {
    return std::find(a.atoms.begin(), a.atoms.end(),
                     std::make_pair(pred, t)) != a.atoms.end();
}

}  // namespace

TEST_CASE("the candidate space multiplies per metafact", "[oracle]") {
    SECTION("subsets double per domain tuple") {
        std::string src =
            "DATABASE\n    e = {(1,2),(2,3),(3,4),(4,5),(5,6),(6,7),(7,8),(8,9),"
            "(9,1)};\nSPECIFICATION\n    Subset(e,s).\n";
        REQUIRE(guess_space(analyzed(src)).low() == 512);
    }
    SECTION("permutations take the factorial") {
        std::string src =
            "DATABASE\n    v = {1..9};\nSPECIFICATION\n    Permutation(v,p).\n";
        REQUIRE(guess_space(analyzed(src)).low() == 362880);
    }
    SECTION("partitions and integer functions are value powers") {
        std::string part =
            "DATABASE\n    v = {1..4};\nSPECIFICATION\n    Partition(v,q,3).\n";
        REQUIRE(guess_space(analyzed(part)).low() == 81);
        std::string intf =
            "DATABASE\n    v = {1..5};\nSPECIFICATION\n    IntFunc(v,f,-1..1).\n";
        REQUIRE(guess_space(analyzed(intf)).low() == 243);
    }
    SECTION("independent metafacts multiply") {
        std::string src =
            "DATABASE\n    v = {1..3};\n    w = {1..2};\nSPECIFICATION\n"
            "    Subset(v,s).\n    Permutation(w,p).\n";
        REQUIRE(guess_space(analyzed(src)).low() == 16);
    }
    SECTION("large spaces keep exact decimal counts") {
        std::string src =
            "DATABASE\n    v = {1..100};\nSPECIFICATION\n    Subset(v,s).\n";
        REQUIRE(guess_space(analyzed(src)).decimal() ==
                "1267650600228229401496703205376");
    }
    SECTION("an empty space refusal names the exact count") {
        std::string src =
            "DATABASE\n    v = {1..100};\nSPECIFICATION\n    Subset(v,s).\n";
        try {
            solve(analyzed(src), SolveOptions{});
            FAIL("expected a refusal");
        } catch (const CompileError& e) {
            REQUIRE(e.code() == ErrorCode::guess_ceiling);
            REQUIRE(std::string(e.what()).find("1267650600228229401496703205376") !=
                    std::string::npos);
        }
    }
}

TEST_CASE("the cycle program has exactly the known tours", "[oracle]") {
    OracleResult r = solve_all(kCycleSource);

    // Independent brute force: value assignments are permutations of 1..6,
    // adjacency read off the fixed edge list.
    std::set<std::pair<int, int>> edges = {{1, 2}, {3, 1}, {2, 3}, {6, 2}, {5, 6},
                                           {4, 5}, {3, 5}, {1, 4}, {4, 1}};
    std::array<int, 6> value = {1, 2, 3, 4, 5, 6};
    std::set<std::vector<int>> expected;
    do {
        // value[v-1] is the position of vertex v; invert to walk the tour.
        std::array<int, 7> at = {};
        for (int v = 1; v <= 6; ++v) at[value[v - 1]] = v;
        bool ok = true;
        for (int p = 1; ok && p <= 6; ++p)
            ok = edges.count({at[p], at[p % 6 + 1]}) > 0;
        if (ok) expected.insert(std::vector<int>(value.begin(), value.end()));
    } while (std::next_permutation(value.begin(), value.end()));

    REQUIRE(expected.size() == 6);
    REQUIRE(r.count == 6);

    std::set<std::vector<int>> got;
    for (const OracleAnswer& a : r.answers) {
        std::vector<int> assignment(6);
        for (const auto& [pred, tuple] : a.atoms) {
            REQUIRE(pred == "path");
            assignment[as_int(tuple[0]) - 1] = static_cast<int>(as_int(tuple[1]));
        }
        got.insert(assignment);
    }
    REQUIRE(got == expected);
}

TEST_CASE("subset selection matches an independent enumeration", "[oracle]") {
    std::string src =
        "DATABASE\n    b = 10;\n    num = {(2),(3),(5),(7),(8)};\nSPECIFICATION\n"
        "    Subset(num,pick).\n"
        "    fail <-- NOT total(b).\n"
        "    total(T) <-- SUM(pick(*),T:0..30).\n";
    OracleResult r = solve_all(src);

    std::array<int, 5> items = {2, 3, 5, 7, 8};
    std::set<std::set<int>> expected;
    for (int mask = 0; mask < 32; ++mask) {
        int sum = 0;
        std::set<int> chosen;
        for (int i = 0; i < 5; ++i)
            if ((mask >> i) & 1) {
                sum += items[i];
                chosen.insert(items[i]);
            }
        if (sum == 10) expected.insert(chosen);
    }
    REQUIRE(expected.size() == 3);
    REQUIRE(r.count == 3);

    std::set<std::set<int>> got;
    for (const OracleAnswer& a : r.answers) {
        std::set<int> chosen;
        for (const auto& [pred, tuple] : a.atoms)
            if (pred == "pick") chosen.insert(static_cast<int>(as_int(tuple[0])));
        got.insert(chosen);
    }
    REQUIRE(got == expected);
}

TEST_CASE("five nonattacking queens as a permutation", "[oracle]") {
    std::string src =
        "DATABASE\n    n = 5;\nSPECIFICATION\n"
        "    Permutation({1..n},row).\n"
        "    fail <-- row(C1,R1), row(C2,R2), C1 < C2, R2 - R1 == C2 - C1.\n"
        "    fail <-- row(C1,R1), row(C2,R2), C1 < C2, R1 - R2 == C2 - C1.\n";
    std::uint64_t got = solve_count(src);

    std::array<int, 5> row = {1, 2, 3, 4, 5};
    std::uint64_t expected = 0;
    do {
        bool ok = true;
        for (int i = 0; ok && i < 5; ++i)
            for (int j = i + 1; ok && j < 5; ++j)
                ok = std::abs(row[i] - row[j]) != j - i;
        if (ok) ++expected;
    } while (std::next_permutation(row.begin(), row.end()));

    REQUIRE(expected == 10);
    REQUIRE(got == expected);
}

TEST_CASE("candidates enumerate in a fixed order", "[oracle]") {
    SECTION("subsets count up through a bitmask") {
        std::string src =
            "DATABASE\n    v = {(4),(7)};\nSPECIFICATION\n    Subset(v,s).\n";
        OracleResult r = solve_all(src);
        REQUIRE(r.count == 4);
        REQUIRE(r.answers[0].atoms.empty());
        REQUIRE(r.answers[1].atoms ==
                decltype(r.answers[1].atoms){{"s", {Value{std::int64_t{4}}}}});
        REQUIRE(r.answers[2].atoms ==
                decltype(r.answers[2].atoms){{"s", {Value{std::int64_t{7}}}}});
        REQUIRE(r.answers[3].atoms.size() == 2);
    }
    SECTION("permutations advance lexicographically over value tuples") {
        std::string src =
            "DATABASE\n    v = {(a),(b),(c)};\nSPECIFICATION\n    Permutation(v,p).\n";
        OracleResult r = solve_all(src);
        REQUIRE(r.count == 6);
        REQUIRE(has_atom(r.answers[0], "p", {Value{"a"}, Value{std::int64_t{1}}}));
        REQUIRE(has_atom(r.answers[0], "p", {Value{"b"}, Value{std::int64_t{2}}}));
        REQUIRE(has_atom(r.answers[0], "p", {Value{"c"}, Value{std::int64_t{3}}}));
        REQUIRE(has_atom(r.answers[1], "p", {Value{"a"}, Value{std::int64_t{1}}}));
        REQUIRE(has_atom(r.answers[1], "p", {Value{"b"}, Value{std::int64_t{3}}}));
        REQUIRE(has_atom(r.answers[1], "p", {Value{"c"}, Value{std::int64_t{2}}}));
    }
    SECTION("the first declared metafact is the outermost loop") {
        std::string src =
            "DATABASE\n    v = {(1)};\n    w = {(2)};\nSPECIFICATION\n"
            "    Subset(v,s).\n    Subset(w,t).\n";
        OracleResult r = solve_all(src);
        REQUIRE(r.count == 4);
        REQUIRE(r.answers[0].atoms.empty());
        REQUIRE(r.answers[1].atoms ==
                decltype(r.answers[1].atoms){{"t", {Value{std::int64_t{2}}}}});
        REQUIRE(r.answers[2].atoms ==
                decltype(r.answers[2].atoms){{"s", {Value{std::int64_t{1}}}}});
        REQUIRE(r.answers[3].atoms.size() == 2);
    }
    SECTION("first mode returns the earliest answer twice over") {
        OracleResult a = solve(analyzed(kCycleSource),
                               SolveOptions{SolveMode::first, 10'000'000, 0});
        OracleResult b = solve(analyzed(kCycleSource),
                               SolveOptions{SolveMode::first, 10'000'000, 0});
        REQUIRE(a.count == 1);
        REQUIRE(a.answers == b.answers);
    }
    SECTION("an answer limit cuts enumeration short") {
        std::string src =
            "DATABASE\n    v = {1..4};\nSPECIFICATION\n    Subset(v,s).\n";
        OracleResult r = solve(analyzed(src), SolveOptions{SolveMode::all, 1000, 5});
        REQUIRE(r.answers.size() == 5);
        REQUIRE_FALSE(r.complete);
    }
}

TEST_CASE("derived predicates evaluate through strata", "[oracle]") {
    SECTION("recursive closure inside one stratum") {
        std::string src =
            "DATABASE\n    edge = {(1,2),(2,3),(3,4)};\n    v = {1..4};\n"
            "SPECIFICATION\n"
            "    Subset(v,s).\n"
            "    reach(X,Y) <-- edge(X,Y).\n"
            "    reach(X,Z) <-- reach(X,Y), edge(Y,Z).\n"
            "    fail <-- NOT reach(1,4).\n";
        OracleResult r = solve_all(src);
        REQUIRE(r.count == 16);
        REQUIRE(has_atom(r.answers[0], "reach",
                         {Value{std::int64_t{1}}, Value{std::int64_t{4}}}));
    }
    SECTION("negation reads the finished lower stratum") {
        std::string src =
            "DATABASE\n    v = {1..3};\n    edge = {(1,2)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    covered(X) <-- edge(X,Y).\n"
            "    covered(Y) <-- edge(X,Y).\n"
            "    lonely(X) <-- v(X), NOT covered(X).\n"
            "    fail <-- s(X), lonely(X).\n";
        OracleResult r = solve_all(src);
        // Subsets may not contain the uncovered vertex 3.
        REQUIRE(r.count == 4);
        for (const OracleAnswer& a : r.answers) {
            REQUIRE(has_atom(a, "lonely", {Value{std::int64_t{3}}}));
            REQUIRE_FALSE(has_atom(a, "s", {Value{std::int64_t{3}}}));
        }
    }
}

TEST_CASE("aggregate values use distinct projections", "[oracle]") {
    SECTION("count collapses duplicate projections") {
        std::string src =
            "DATABASE\n    r = {(1,1),(1,2),(2,2)};\n    v = {(9)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    fail <-- NOT cnt(2).\n"
            "    cnt(Z) <-- COUNT(r(*,_),Z:0..9).\n";
        REQUIRE(solve_count(src) == 2);
    }
    SECTION("sum adds each distinct value once") {
        std::string src =
            "DATABASE\n    w = {(a,3),(b,3),(c,5)};\n    v = {(9)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    fail <-- NOT total(8).\n"
            "    total(Z) <-- SUM(w(_,*),Z:0..20).\n";
        REQUIRE(solve_count(src) == 2);
    }
    SECTION("count of an empty match is zero") {
        std::string src =
            "DATABASE\n    r = {(1,1)};\n    v = {(9)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    fail <-- NOT cnt(0).\n"
            "    cnt(Z) <-- COUNT(r(7,*),Z:0..9).\n";
        REQUIRE(solve_count(src) == 2);
    }
    SECTION("min and max of an empty match fail the literal") {
        std::string src =
            "DATABASE\n    r = {(1,1)};\n    v = {(9)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    low(Z) <-- MIN(r(7,*),Z:0..9).\n";
        OracleResult r = solve_all(src);
        REQUIRE(r.count == 2);
        for (const OracleAnswer& a : r.answers)
            for (const auto& [pred, tuple] : a.atoms) REQUIRE(pred != "low");
    }
    SECTION("min and max pick the set extremes") {
        std::string src =
            "DATABASE\n    r = {(1,4),(1,9),(2,2)};\n    v = {(9)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    fail <-- NOT low(4).\n"
            "    fail <-- NOT high(9).\n"
            "    low(Z) <-- MIN(r(1,*),Z:0..20).\n"
            "    high(Z) <-- MAX(r(1,*),Z:0..20).\n";
        REQUIRE(solve_count(src) == 2);
    }
    SECTION("template variables not bound by the rule unify per tuple") {
        std::string src =
            "DATABASE\n    r = {(1,1,5),(1,2,6),(2,2,7)};\n    v = {(9)};\n"
            "SPECIFICATION\n"
            "    Subset(v,s).\n"
            "    fail <-- NOT cnt(2).\n"
            "    cnt(Z) <-- COUNT(r(W,W,*),Z:0..9).\n";
        REQUIRE(solve_count(src) == 2);
    }
    SECTION("a result variable bound earlier must agree") {
        std::string src =
            "DATABASE\n    r = {(1,1),(1,2)};\n    q = {(2),(5)};\nSPECIFICATION\n"
            "    Subset(q,s).\n"
            "    hit(V) <-- q(V), COUNT(r(_,*),V:0..9).\n";
        OracleResult r = solve_all(src);
        for (const OracleAnswer& a : r.answers) {
            REQUIRE(has_atom(a, "hit", {Value{std::int64_t{2}}}));
            REQUIRE_FALSE(has_atom(a, "hit", {Value{std::int64_t{5}}}));
        }
    }
    SECTION("the range guard filters the computed value") {
        std::string src =
            "DATABASE\n    r = {(1,1),(1,2),(2,2)};\n    v = {(9)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    cnt(Z) <-- COUNT(r(*,_),Z:3..9).\n";
        OracleResult r = solve_all(src);
        for (const OracleAnswer& a : r.answers)
            for (const auto& [pred, tuple] : a.atoms) REQUIRE(pred != "cnt");
    }
}

TEST_CASE("arithmetic evaluates with checked semantics", "[oracle]") {
    SECTION("exponentiation is right associative") {
        std::string src =
            "DATABASE\n    v = {(9)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    fail <-- v(X), 2^3^2 != 512.\n";
        REQUIRE(solve_count(src) == 2);
    }
    SECTION("division truncates") {
        std::string src =
            "DATABASE\n    v = {(9)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    fail <-- v(X), 7/2 != 3.\n";
        REQUIRE(solve_count(src) == 2);
    }
    SECTION("division by zero is an evaluation error") {
        std::string src =
            "DATABASE\n    v = {(0)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    fail <-- v(X), 7/X == 3.\n";
        try {
            solve_count(src);
            FAIL("expected an evaluation error");
        } catch (const CompileError& e) {
            REQUIRE(e.code() == ErrorCode::evaluation_error);
        }
    }
    SECTION("absolute values fold") {
        std::string src =
            "DATABASE\n    v = {(2),(8)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    fail <-- s(X), s(Y), X != Y, abs(X-Y) != 6.\n";
        REQUIRE(solve_count(src) == 4);
    }
    SECTION("arithmetic over symbols is an evaluation error") {
        std::string src =
            "DATABASE\n    v = {(a)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    fail <-- v(X), X + 1 == 2.\n";
        try {
            solve_count(src);
            FAIL("expected an evaluation error");
        } catch (const CompileError& e) {
            REQUIRE(e.code() == ErrorCode::evaluation_error);
        }
    }
    SECTION("ordered comparisons need integers") {
        std::string src =
            "DATABASE\n    v = {(a)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    fail <-- v(X), X < 3.\n";
        try {
            solve_count(src);
            FAIL("expected an evaluation error");
        } catch (const CompileError& e) {
            REQUIRE(e.code() == ErrorCode::evaluation_error);
        }
    }
    SECTION("equality comparisons accept symbols") {
        std::string src =
            "DATABASE\n    v = {(a),(b)};\nSPECIFICATION\n"
            "    Subset(v,s).\n"
            "    fail <-- s(X), X == b.\n";
        // Subsets containing b are rejected: {} and {a} remain.
        REQUIRE(solve_count(src) == 2);
    }
    SECTION("deferred arithmetic arguments resolve out of order") {
        std::string src =
            "DATABASE\n    n = 3;\n    edge = {(1,2),(2,3),(3,1)};\nSPECIFICATION\n"
            "    Permutation({1..n},path).\n"
            "    fail <-- path(Y,P+1), path(X,P), NOT edge(X,Y).\n"
            "    fail <-- path(X,n), path(Y,1), NOT edge(X,Y).\n";
        // The 3-cycle has exactly 3 rotations.
        REQUIRE(solve_count(src) == 3);
    }
}

TEST_CASE("binder pools keep reading variables grounded", "[oracle]") {
    SECTION("a negated guess value reads over its range") {
        std::string src =
            "DATABASE\n    r = {1..3};\nSPECIFICATION\n"
            "    Permutation({1..3},path).\n"
            "    fail <-- r(X), NOT path(X,P).\n";
        // P ranges over all three positions and every vertex misses two of
        // them, so the body always finds a witness.
        REQUIRE(solve_count(src) == 0);
    }
    SECTION("an untyped head variable ranges over the constant pool") {
        std::string src =
            "DATABASE\n    r = {1..3};\nSPECIFICATION\n"
            "    Subset(r,s).\n"
            "    marked(X) <-- s(Y), X == 9.\n";
        OracleResult r = solve_all(src);
        REQUIRE(r.count == 8);
        // With a nonempty guess, X == 9 picks 9 out of the pool {1,2,3,9}.
        REQUIRE(r.answers[0].atoms.empty());
        REQUIRE(has_atom(r.answers[1], "marked", {Value{std::int64_t{9}}}));
    }
}

TEST_CASE("intfunc guesses carry their own value range", "[oracle]") {
    std::string src =
        "DATABASE\n    v = {1..2};\nSPECIFICATION\n"
        "    IntFunc(v,f,-1..1).\n"
        "    fail <-- f(1,A), f(2,B), A + B != 0.\n";
    OracleResult r = solve_all(src);
    // Pairs summing to zero: (-1,1),(0,0),(1,-1).
    REQUIRE(r.count == 3);
    REQUIRE(has_atom(r.answers[0], "f",
                     {Value{std::int64_t{1}}, Value{std::int64_t{-1}}}));
    REQUIRE(has_atom(r.answers[0], "f",
                     {Value{std::int64_t{2}}, Value{std::int64_t{1}}}));
}

TEST_CASE("a partition assigns every element one class", "[oracle]") {
    std::string src =
        "DATABASE\n    v = {1..3};\nSPECIFICATION\n"
        "    Partition(v,grp,2).\n"
        "    fail <-- grp(X,C), grp(Y,C), X != Y.\n";
    // At most one element per class, three elements, two classes: impossible.
    REQUIRE(solve_count(src) == 0);

    std::string loose =
        "DATABASE\n    v = {1..2};\nSPECIFICATION\n"
        "    Partition(v,grp,2).\n"
        "    fail <-- grp(X,C), grp(Y,C), X != Y.\n";
    // Exactly the two injective assignments of classes 0 and 1.
    REQUIRE(solve_count(loose) == 2);
}
