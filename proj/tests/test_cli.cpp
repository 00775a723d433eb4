#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
    int code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(NPSPEC_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string corpus(const std::string& stem) {
    return std::string(NPSPEC_CORPUS_DIR) + "/" + stem + ".npspec";
}

std::string temp_program(const std::string& name, const std::string& text) {
    std::string path = std::string("/tmp/npspec_cli_") + name + ".npspec";
    std::ofstream out(path);
    out << text;
    return path;
}

}  // namespace

TEST_CASE("the command line translates programs") {
    SECTION("gringo output carries the directives of that dialect") {
        RunResult r = run_cli("translate " + corpus("hamiltonian") + " --dialect gringo");
        REQUIRE(r.code == 0);
        REQUIRE(r.output.find("#const n=6.") != std::string::npos);
        REQUIRE(r.output.find(":- path(X,P), path(Y,P+1), not edge(X,Y).") !=
                std::string::npos);
    }
    SECTION("dlv output carries the directives of that dialect") {
        RunResult r = run_cli("translate " + corpus("hamiltonian") + " --dialect dlv");
        REQUIRE(r.code == 0);
        REQUIRE(r.output.find("#maxint") != std::string::npos);
        REQUIRE(r.output.find(" v ") != std::string::npos);
    }
    SECTION("the same invocation produces identical bytes") {
        std::string args = "translate " + corpus("queens") + " --guess choice";
        REQUIRE(run_cli(args).output == run_cli(args).output);
    }
    SECTION("the choice encoding is selectable") {
        RunResult r = run_cli("translate " + corpus("subset_sum") + " --guess choice");
        REQUIRE(r.code == 0);
        REQUIRE(r.output.find('{') != std::string::npos);
    }
}

TEST_CASE("the command line reports answers") {
    SECTION("count mode prints the bare count") {
        RunResult r = run_cli("solve " + corpus("queens") + " --mode count");
        REQUIRE(r.code == 0);
        REQUIRE(r.output == "10\n");
    }
    SECTION("all mode lists every answer as sorted facts") {
        RunResult r = run_cli("solve " + corpus("subset_sum"));
        REQUIRE(r.code == 0);
        REQUIRE(r.output.find("% answer 1\n") != std::string::npos);
        REQUIRE(r.output.find("% answer 3\n") != std::string::npos);
        REQUIRE(r.output.find("pick(2).\npick(3).\npick(5).\ntotal(10).\n") !=
                std::string::npos);
    }
    SECTION("an unsatisfiable program reports no answers") {
        std::string path = temp_program("unsat",
                                        "DATABASE\n"
                                        "    x = {1..2};\n"
                                        "SPECIFICATION\n"
                                        "    Subset(x,pick).\n"
                                        "    fail <-- pick(X).\n"
                                        "    fail <-- NOT pick(1).\n");
        RunResult r = run_cli("solve " + path);
        REQUIRE(r.code == 0);
        REQUIRE(r.output == "% no answers\n");
    }
    SECTION("a reached answer limit is marked") {
        RunResult r = run_cli("solve " + corpus("queens") + " --limit 2");
        REQUIRE(r.code == 0);
        REQUIRE(r.output.find("% answer 2\n") != std::string::npos);
        REQUIRE(r.output.find("% answer 3\n") == std::string::npos);
        REQUIRE(r.output.find("% stopped at the answer limit\n") != std::string::npos);
    }
}

TEST_CASE("the command line maps failures to exit classes") {
    SECTION("a missing file is an input error") {
        RunResult r = run_cli("translate /tmp/npspec_cli_no_such_file.npspec");
        REQUIRE(r.code == 1);
        REQUIRE(r.output.find("io-error") != std::string::npos);
    }
    SECTION("a malformed program is an input error") {
        std::string path = temp_program("syntax",
                                        "DATABASE\n"
                                        "    x = {1..3};\n"
                                        "SPECIFICATION\n"
                                        "    Subset(x,pick)\n");
        RunResult r = run_cli("translate " + path);
        REQUIRE(r.code == 1);
        REQUIRE(r.output.find("syntax-error") != std::string::npos);
    }
    SECTION("a name that resolves to nothing is a semantic error") {
        std::string path = temp_program("semantic",
                                        "DATABASE\n"
                                        "    x = {1..3};\n"
                                        "SPECIFICATION\n"
                                        "    Subset(y,pick).\n");
        RunResult r = run_cli("translate " + path);
        REQUIRE(r.code == 2);
        REQUIRE(r.output.find("undefined-predicate") != std::string::npos);
    }
    SECTION("an oversized candidate space is a ceiling refusal") {
        RunResult r = run_cli("solve " + corpus("round_robin"));
        REQUIRE(r.code == 4);
        REQUIRE(r.output.find("guess-ceiling") != std::string::npos);
        REQUIRE(r.output.find("16777216") != std::string::npos);
    }
    SECTION("a dialect restriction is a semantic error") {
        RunResult r = run_cli("translate " + corpus("signed_sequence") + " --dialect dlv");
        REQUIRE(r.code == 2);
        REQUIRE(r.output.find("dialect-negative-integer") != std::string::npos);
    }
    SECTION("structured diagnostics are one machine-readable line") {
        std::string path = temp_program("semantic",
                                        "DATABASE\n"
                                        "    x = {1..3};\n"
                                        "SPECIFICATION\n"
                                        "    Subset(y,pick).\n");
        RunResult r = run_cli("translate " + path + " --diagnostics structured");
        REQUIRE(r.code == 2);
        REQUIRE(r.output.find("\"code\":\"undefined-predicate\"") != std::string::npos);
        REQUIRE(r.output.find("\"line\":4") != std::string::npos);
        REQUIRE(r.output.find("\"severity\":\"error\"") != std::string::npos);
    }
    SECTION("an unknown flag is a usage error") {
        RunResult r = run_cli("translate " + corpus("queens") + " --no-such-flag");
        REQUIRE(r.code == 1);
    }
}

TEST_CASE("the command line compares translations against the search") {
    SECTION("an agreeing program passes every combination") {
        RunResult r = run_cli("check " + corpus("coloring"));
        REQUIRE(r.code == 0);
        for (const char* combo :
             {"dlv/disjunctive/constraints", "dlv/disjunctive/aggregate",
              "gringo/disjunctive/constraints", "gringo/disjunctive/aggregate",
              "gringo/choice/constraints", "gringo/choice/aggregate"})
            REQUIRE(r.output.find(std::string(combo) + ": PASS (66 answers)") !=
                    std::string::npos);
    }
    SECTION("a dialect restriction turns into a skip, not a failure") {
        RunResult r = run_cli("check " + corpus("signed_sequence"));
        REQUIRE(r.code == 0);
        REQUIRE(r.output.find("dlv/disjunctive/constraints: SKIP") != std::string::npos);
        REQUIRE(r.output.find("gringo/choice/aggregate: PASS (16 answers)") !=
                std::string::npos);
    }
    SECTION("an oversized space is inconclusive, not a failure") {
        RunResult r = run_cli("check " + corpus("round_robin"));
        REQUIRE(r.code == 0);
        REQUIRE(r.output.find("INCONCLUSIVE") != std::string::npos);
        REQUIRE(r.output.find("FAIL") == std::string::npos);
    }
}

TEST_CASE("the command line inspects programs") {
    RunResult r = run_cli("inspect " + corpus("hoops_pairing"));
    REQUIRE(r.code == 0);
    REQUIRE(r.output.find("== program ==\n") != std::string::npos);
    REQUIRE(r.output.find("ring: IntFunc over 6 tuples, values 1..3") !=
            std::string::npos);
    REQUIRE(r.output.find("== candidate space ==\n729\n") != std::string::npos);
    SECTION("derived predicates show their strata") {
        RunResult t = run_cli("inspect " + corpus("three_sat"));
        REQUIRE(t.code == 0);
        REQUIRE(t.output.find("0: sat") != std::string::npos);
    }
}
