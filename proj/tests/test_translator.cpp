#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "npspec/analyzer.hpp"
#include "npspec/emitter.hpp"
#include "npspec/parser.hpp"
#include "npspec/translator.hpp"

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

std::string translate_text(const std::string& src, EmitOptions opts) {
    Analysis a = analyze(parse_program(src));
    return emit(translate(a, opts));
}

std::string golden(const std::string& name) {
    std::ifstream in(std::string(NPSPEC_GOLDEN_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

EmitOptions options(AspDialect d, GuessEncoding g, PermCheck p = PermCheck::pairwise) {
    EmitOptions o;
    o.dialect = d;
    o.guess = g;
    o.perm_check = p;
    return o;
}

std::string pair_domain(const std::string& metafact) {
    return "DATABASE\n"
           "    d = {(1,a),(2,b),(3,c)};\n"
           "SPECIFICATION\n"
           "    " +
           metafact + "\n";
}

ErrorCode translate_error(const std::string& src, EmitOptions opts) {
    Analysis a = analyze(parse_program(src));
    try {
        translate(a, opts);
    } catch (const CompileError& e) {
        return e.code();
    }
    FAIL("expected translation to be rejected");
    return ErrorCode::internal_error;
}

}  // namespace

TEST_CASE("the cycle program matches its golden output", "[translator]") {
    SECTION("gringo") {
        auto opts = options(AspDialect::gringo, GuessEncoding::disjunctive);
        REQUIRE(translate_text(kCycleSource, opts) == golden("hamiltonian_gringo.lp"));
    }
    SECTION("dlv") {
        auto opts = options(AspDialect::dlv, GuessEncoding::disjunctive);
        REQUIRE(translate_text(kCycleSource, opts) == golden("hamiltonian_dlv.lp"));
    }
}

TEST_CASE("each metafact translates to its guess schema", "[translator]") {
    SECTION("subset, disjunctive, dlv") {
        REQUIRE(translate_text(pair_domain("Subset(d,s)."),
                               options(AspDialect::dlv, GuessEncoding::disjunctive)) ==
                golden("subset_disjunctive_dlv.lp"));
    }
    SECTION("subset, choice, gringo") {
        REQUIRE(translate_text(pair_domain("Subset(d,s)."),
                               options(AspDialect::gringo, GuessEncoding::choice)) ==
                golden("subset_choice_gringo.lp"));
    }
    SECTION("permutation, disjunctive with pairwise checks, dlv") {
        REQUIRE(translate_text(pair_domain("Permutation(d,p)."),
                               options(AspDialect::dlv, GuessEncoding::disjunctive)) ==
                golden("permutation_disjunctive_pairwise_dlv.lp"));
    }
    SECTION("permutation, choice with aggregate check, gringo") {
        REQUIRE(translate_text(pair_domain("Permutation(d,p)."),
                               options(AspDialect::gringo, GuessEncoding::choice,
                                       PermCheck::aggregate)) ==
                golden("permutation_choice_aggregate_gringo.lp"));
    }
    SECTION("partition, disjunctive, dlv") {
        REQUIRE(translate_text(pair_domain("Partition(d,q,3)."),
                               options(AspDialect::dlv, GuessEncoding::disjunctive)) ==
                golden("partition_disjunctive_dlv.lp"));
    }
    SECTION("intfunc, choice, gringo") {
        REQUIRE(translate_text(pair_domain("IntFunc(d,f,1..4)."),
                               options(AspDialect::gringo, GuessEncoding::choice)) ==
                golden("intfunc_choice_gringo.lp"));
    }
}

TEST_CASE("remaining encoding combinations produce the expected forms", "[translator]") {
    SECTION("subset disjunctive under gringo uses the bar separator") {
        std::string text = translate_text(
            pair_domain("Subset(d,s)."),
            options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find("s(X1,X2) | -s(X1,X2) :- d(X1,X2).") != std::string::npos);
    }
    SECTION("permutation disjunctive with the aggregate check under dlv") {
        std::string text = translate_text(
            pair_domain("Permutation(d,p)."),
            options(AspDialect::dlv, GuessEncoding::disjunctive, PermCheck::aggregate));
        REQUIRE(text.find(":- #count{X1,X2 : p(X1,X2,A)} > 1, p(_,_,A).") !=
                std::string::npos);
        REQUIRE(text.find("X1 != Y1") == std::string::npos);
    }
    SECTION("permutation choice with pairwise checks under gringo") {
        std::string text = translate_text(
            pair_domain("Permutation(d,p)."),
            options(AspDialect::gringo, GuessEncoding::choice, PermCheck::pairwise));
        REQUIRE(text.find("1 {p(X1,X2,1..3)} 1 :- d(X1,X2).") != std::string::npos);
        REQUIRE(text.find(":- p(X1,X2,A), p(Y1,Y2,A), X1 != Y1.") != std::string::npos);
        REQUIRE(text.find(":- p(X1,X2,A), p(Y1,Y2,A), X2 != Y2.") != std::string::npos);
    }
    SECTION("partition and intfunc get no uniqueness checks") {
        for (auto perm : {PermCheck::pairwise, PermCheck::aggregate}) {
            std::string text = translate_text(
                pair_domain("Partition(d,q,3)."),
                options(AspDialect::dlv, GuessEncoding::disjunctive, perm));
            REQUIRE(text.find("!=") == std::string::npos);
            REQUIRE(text.find("#count") == std::string::npos);
        }
    }
    SECTION("an intfunc range equals a shifted partition encoding") {
        std::string part = translate_text(
            pair_domain("Partition(d,g,3)."),
            options(AspDialect::gringo, GuessEncoding::choice));
        std::string intf = translate_text(
            pair_domain("IntFunc(d,g,0..2)."),
            options(AspDialect::gringo, GuessEncoding::choice));
        REQUIRE(part == intf);
    }
    SECTION("a unary domain uses plain X") {
        std::string text = translate_text(
            "DATABASE\n    v = {1..4};\nSPECIFICATION\n    Subset(v,in).\n",
            options(AspDialect::gringo, GuessEncoding::choice));
        REQUIRE(text.find("{in(X) : v(X)}.") != std::string::npos);
    }
}

TEST_CASE("dialect restrictions are enforced", "[translator]") {
    SECTION("choice encodings cannot target dlv") {
        REQUIRE(translate_error(pair_domain("Subset(d,s)."),
                                options(AspDialect::dlv, GuessEncoding::choice)) ==
                ErrorCode::dialect_choice_unsupported);
    }
    SECTION("negative database values are rejected for dlv") {
        std::string src =
            "DATABASE\n    t = {(-1),(2)};\nSPECIFICATION\n    Subset(t,s).\n";
        REQUIRE(translate_error(src, options(AspDialect::dlv,
                                             GuessEncoding::disjunctive)) ==
                ErrorCode::dialect_negative_integer);
        REQUIRE_NOTHROW(translate_text(
            src, options(AspDialect::gringo, GuessEncoding::disjunctive)));
    }
    SECTION("negative value ranges are rejected for dlv") {
        std::string src =
            "DATABASE\n    t = {1..3};\nSPECIFICATION\n    IntFunc(t,f,-1..1).\n";
        REQUIRE(translate_error(src, options(AspDialect::dlv,
                                             GuessEncoding::disjunctive)) ==
                ErrorCode::dialect_negative_integer);
        std::string text = translate_text(
            src, options(AspDialect::gringo, GuessEncoding::choice));
        REQUIRE(text.find("1 {f(X,-1..1)} 1 :- t(X).") != std::string::npos);
    }
    SECTION("negative rule literals are rejected for dlv") {
        std::string src =
            "DATABASE\n    t = {1..3};\nSPECIFICATION\n    Subset(t,s).\n"
            "    fail <-- s(X), X < -1.\n";
        REQUIRE(translate_error(src, options(AspDialect::dlv,
                                             GuessEncoding::disjunctive)) ==
                ErrorCode::dialect_negative_integer);
    }
    SECTION("abs is rejected for dlv and renamed for gringo") {
        std::string src =
            "DATABASE\n    t = {1..3};\nSPECIFICATION\n    Subset(t,s).\n"
            "    fail <-- s(X), s(Y), abs(X-Y) > 1.\n";
        REQUIRE(translate_error(src, options(AspDialect::dlv,
                                             GuessEncoding::disjunctive)) ==
                ErrorCode::dialect_unsupported_operator);
        std::string text = translate_text(
            src, options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find("#abs(X-Y) > 1") != std::string::npos);
    }
    SECTION("exponentiation is rejected for dlv and renamed for gringo") {
        std::string src =
            "DATABASE\n    t = {1..3};\nSPECIFICATION\n    Subset(t,s).\n"
            "    fail <-- s(X), X^2 > 4.\n";
        REQUIRE(translate_error(src, options(AspDialect::dlv,
                                             GuessEncoding::disjunctive)) ==
                ErrorCode::dialect_unsupported_operator);
        std::string text = translate_text(
            src, options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find("#pow(X,2) > 4") != std::string::npos);
    }
}

TEST_CASE("dlv output flattens arithmetic to one operation per builtin",
          "[translator]") {
    SECTION("nested comparison operands") {
        std::string src =
            "DATABASE\n    n = 6;\n    t = {1..6};\nSPECIFICATION\n"
            "    Subset(t,s).\n"
            "    fail <-- s(X), X*3+2 > n-1.\n";
        std::string text =
            translate_text(src, options(AspDialect::dlv, GuessEncoding::disjunctive));
        REQUIRE(text.find(":- s(X), V2 > V3, V1 = X*3, V2 = V1+2, V3 = 6-1.") !=
                std::string::npos);
    }
    SECTION("an equality against a variable keeps the assignment form") {
        std::string src =
            "DATABASE\n    t = {1..6};\nSPECIFICATION\n"
            "    Subset(t,s).\n"
            "    fail <-- s(X), s(Y), Y == X+1.\n";
        std::string text =
            translate_text(src, options(AspDialect::dlv, GuessEncoding::disjunctive));
        REQUIRE(text.find(":- s(X), s(Y), Y = X+1.") != std::string::npos);
    }
    SECTION("head arguments are flattened into the body") {
        std::string src =
            "DATABASE\n    t = {1..6};\nSPECIFICATION\n"
            "    Subset(t,s).\n"
            "    next(X,X+1) <-- s(X).\n";
        std::string text =
            translate_text(src, options(AspDialect::dlv, GuessEncoding::disjunctive));
        REQUIRE(text.find("next(X,V1) :- s(X), V1 = X+1.") != std::string::npos);
    }
    SECTION("gringo keeps nested arithmetic in place") {
        std::string src =
            "DATABASE\n    n = 6;\n    t = {1..6};\nSPECIFICATION\n"
            "    Subset(t,s).\n"
            "    fail <-- s(X), X*3+2 > n-1.\n";
        std::string text = translate_text(
            src, options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find(":- s(X), X*3+2 > n-1.") != std::string::npos);
    }
    SECTION("fresh variables skip names used by the rule") {
        std::string src =
            "DATABASE\n    t = {1..6};\nSPECIFICATION\n"
            "    Subset(t,s).\n"
            "    fail <-- s(V1), s(Y), Y == V1+1.\n";
        std::string text =
            translate_text(src, options(AspDialect::dlv, GuessEncoding::disjunctive));
        REQUIRE(text.find(":- s(V1), s(Y), Y = V1+1.") != std::string::npos);
    }
}

TEST_CASE("aggregates translate per dialect", "[translator]") {
    std::string src =
        "DATABASE\n    n = 4;\n    r = {(1,1),(1,2),(2,2)};\nSPECIFICATION\n"
        "    Subset(r,s).\n"
        "    fail <-- COUNT(s(*,_),Z:0..n), Z == 2.\n";
    SECTION("dlv uses projection sets with a guard predicate") {
        std::string text =
            translate_text(src, options(AspDialect::dlv, GuessEncoding::disjunctive));
        REQUIRE(text.find(":- #count{V1 : s(V1,_)} = Z, agg_dom_1(Z), Z = 2.") !=
                std::string::npos);
        REQUIRE(text.find("agg_dom_1(0..4).") != std::string::npos);
    }
    SECTION("gringo uses count over atoms with both guards") {
        std::string text = translate_text(
            src, options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find(":- Z #count{s(V1,_)} Z, agg_dom_1(Z), Z = 2.") !=
                std::string::npos);
        REQUIRE(text.find("agg_dom_1(0..n).") != std::string::npos);
    }
    SECTION("gringo renders the value aggregates in weighted form") {
        std::string sum_src =
            "DATABASE\n    r = {(1,3),(2,5)};\nSPECIFICATION\n"
            "    Subset(r,s).\n"
            "    fail <-- SUM(s(_,*),Z:0..8), Z > 6.\n";
        std::string text = translate_text(
            sum_src, options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find("Z #sum[s(_,V1) = V1] Z, agg_dom_1(Z)") != std::string::npos);
    }
    SECTION("each aggregate occurrence gets its own guard pool") {
        std::string two =
            "DATABASE\n    r = {(1,1),(2,2)};\nSPECIFICATION\n"
            "    Subset(r,s).\n"
            "    fail <-- COUNT(s(*,_),Z:0..2), COUNT(s(_,*),W:0..2), Z < W.\n";
        std::string text =
            translate_text(two, options(AspDialect::dlv, GuessEncoding::disjunctive));
        REQUIRE(text.find("agg_dom_1(0..2).") != std::string::npos);
        REQUIRE(text.find("agg_dom_2(0..2).") != std::string::npos);
        REQUIRE(text.find("agg_dom_1(Z)") != std::string::npos);
        REQUIRE(text.find("agg_dom_2(W)") != std::string::npos);
    }
}

TEST_CASE("unbound source variables get binder atoms", "[translator]") {
    SECTION("a value read through a negated guess atom binds over its range") {
        std::string src =
            "DATABASE\n    r = {1..3};\nSPECIFICATION\n"
            "    Permutation({1..3},path).\n"
            "    fail <-- r(X), NOT path(X,P).\n";
        std::string text = translate_text(
            src, options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find("d2(1..3).") != std::string::npos);
        REQUIRE(text.find(":- r(X), not path(X,P), d2(P).") != std::string::npos);
    }
    SECTION("a domain position binds through the metafact domain") {
        std::string src =
            "DATABASE\n    e = {(1,2),(2,3)};\n    r = {1..2};\nSPECIFICATION\n"
            "    Subset(e,s).\n"
            "    fail <-- r(X), NOT s(X,Y).\n";
        std::string text = translate_text(
            src, options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find(":- r(X), not s(X,Y), e(_,Y).") != std::string::npos);
    }
    SECTION("an untyped variable binds over the constant pool") {
        std::string src =
            "DATABASE\n    r = {1..3};\nSPECIFICATION\n"
            "    Subset(r,s).\n"
            "    marked(X) <-- s(Y), X == 9.\n";
        std::string text = translate_text(
            src, options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find("npspec_univ(1). npspec_univ(2). npspec_univ(3). "
                          "npspec_univ(9).") != std::string::npos);
        REQUIRE(text.find("marked(X) :- s(Y), X = 9, npspec_univ(X).") !=
                std::string::npos);
    }
}

TEST_CASE("fresh domain names avoid user predicates", "[translator]") {
    std::string src =
        "DATABASE\n    d = {1..3};\nSPECIFICATION\n"
        "    Permutation({1..3},p).\n";
    std::string text =
        translate_text(src, options(AspDialect::gringo, GuessEncoding::disjunctive));
    REQUIRE(text.find("d2(1..3).") != std::string::npos);
    REQUIRE(text.find("p(X,1) | p(X,2) | p(X,3) :- d2(X).") != std::string::npos);
}

TEST_CASE("database shapes carry through", "[translator]") {
    SECTION("range relations stay ranges, symbolic under gringo") {
        std::string src =
            "DATABASE\n    n = 6;\n    num = {2..n};\nSPECIFICATION\n"
            "    Subset(num,s).\n";
        std::string text = translate_text(
            src, options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find("num(2..n).") != std::string::npos);
        text = translate_text(src, options(AspDialect::dlv, GuessEncoding::disjunctive));
        REQUIRE(text.find("num(2..6).") != std::string::npos);
    }
    SECTION("duplicate tuples are emitted once") {
        std::string src =
            "DATABASE\n    t = {(1),(1),(2)};\nSPECIFICATION\n    Subset(t,s).\n";
        std::string text = translate_text(
            src, options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find("t(1). t(2).") != std::string::npos);
    }
    SECTION("propositional flags keep their dummy argument") {
        std::string src =
            "DATABASE\n    t = {1..3};\nSPECIFICATION\n    Subset(t,s).\n"
            "    found(1) <-- s(X).\n    fail <-- NOT found(1).\n";
        std::string text = translate_text(
            src, options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find("found(1) :- s(X).") != std::string::npos);
        REQUIRE(text.find(":- not found(1).") != std::string::npos);
    }
    SECTION("complex domains materialize into fresh facts") {
        std::string src =
            "DATABASE\n    a = {1..3};\n    b = {2..4};\nSPECIFICATION\n"
            "    Subset(a * b,s).\n";
        std::string text = translate_text(
            src, options(AspDialect::gringo, GuessEncoding::disjunctive));
        REQUIRE(text.find("d(2). d(3).") != std::string::npos);
        REQUIRE(text.find("s(X) | -s(X) :- d(X).") != std::string::npos);
    }
}

TEST_CASE("emitted programs pass the output safety check", "[translator]") {
    std::vector<std::string> sources = {
        kCycleSource,
        pair_domain("Permutation(d,p)."),
        "DATABASE\n    r = {1..3};\nSPECIFICATION\n    Subset(r,s).\n"
        "    marked(X) <-- s(Y), X == 9.\n",
        "DATABASE\n    r = {1..3};\nSPECIFICATION\n    Permutation({1..3},path).\n"
        "    fail <-- r(X), NOT path(X,P).\n",
    };
    for (const std::string& src : sources) {
        Analysis a = analyze(parse_program(src));
        for (auto dialect : {AspDialect::gringo, AspDialect::dlv}) {
            AspProgram p = translate(a, options(dialect, GuessEncoding::disjunctive));
            REQUIRE(asp_check_safety(p).empty());
        }
    }
}

TEST_CASE("the output safety check flags unbound variables", "[translator]") {
    AspProgram p;
    AspRule r;
    AspAtom head;
    head.pred = "q";
    head.args.push_back(AspTerm::make_variable("X"));
    r.head = std::vector<AspAtom>{head};
    AspAtom body;
    body.pred = "r";
    body.args.push_back(AspTerm::make_variable("Y"));
    r.body.push_back(AspLit{true, body});
    p.rules.push_back(r);

    auto obligations = asp_check_safety(p);
    REQUIRE(obligations.size() == 2);
    REQUIRE(obligations[0].var == "X");
    REQUIRE(obligations[1].var == "Y");

    SECTION("an assignment chain discharges once grounded") {
        AspRule fixed = p.rules[0];
        AspAtom base;
        base.pred = "b";
        base.args.push_back(AspTerm::make_variable("Z"));
        fixed.body.push_back(AspLit{false, base});
        AspCmp step;
        step.lhs = AspTerm::make_variable("Y");
        step.op = CmpOp::eq;
        step.rhs = AspTerm::make_arith(ArithOp::add, AspTerm::make_variable("Z"),
                                       AspTerm::make_int(1));
        fixed.body.push_back(step);
        AspCmp top;
        top.lhs = AspTerm::make_variable("X");
        top.op = CmpOp::eq;
        top.rhs = AspTerm::make_variable("Y");
        fixed.body.push_back(top);
        AspProgram q;
        q.rules.push_back(fixed);
        REQUIRE(asp_check_safety(q).empty());
    }
}

TEST_CASE("translation is deterministic", "[translator]") {
    Analysis a = analyze(parse_program(kCycleSource));
    for (auto dialect : {AspDialect::gringo, AspDialect::dlv}) {
        auto opts = options(dialect, GuessEncoding::disjunctive);
        REQUIRE(emit(translate(a, opts)) == emit(translate(a, opts)));
    }
}
