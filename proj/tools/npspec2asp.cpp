#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "npspec/analyzer.hpp"
#include "npspec/crosscheck.hpp"
#include "npspec/diag.hpp"
#include "npspec/emitter.hpp"
#include "npspec/oracle.hpp"
#include "npspec/parser.hpp"
#include "npspec/printer.hpp"
#include "npspec/translator.hpp"

namespace {

using namespace npspec;

// Exit codes: 0 success, 1 lexical or syntactic rejection, 2 semantic
// rejection, 3 verification failure, 4 resource ceiling.
int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::io_error:
        case ErrorCode::illegal_character:
        case ErrorCode::unterminated_comment:
        case ErrorCode::integer_overflow:
        case ErrorCode::syntax_error:
        case ErrorCode::duplicate_definition: return 1;
        case ErrorCode::guess_ceiling:
        case ErrorCode::ground_ceiling:
        case ErrorCode::atoms_ceiling: return 4;
        default: return 2;
    }
}

void report(const CompileError& e, const std::string& diagnostics) {
    if (diagnostics == "structured") {
        nlohmann::json j{{"severity", "error"},
                         {"code", error_code_name(e.code())},
                         {"message", e.diagnostic().message},
                         {"line", e.pos().line},
                         {"column", e.pos().column}};
        std::cerr << j.dump() << "\n";
    } else {
        std::cerr << e.what() << "\n";
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CompileError(ErrorCode::io_error, "cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void deliver(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw CompileError(ErrorCode::io_error, "cannot write " + out_path);
    out << text;
}

Analysis load(const std::string& path) { return analyze(parse_program(slurp(path))); }

EmitOptions emit_options(const std::string& dialect, const std::string& guess,
                         const std::string& perm_check, int maxint_mult) {
    EmitOptions o;
    o.dialect = dialect == "dlv" ? AspDialect::dlv : AspDialect::gringo;
    o.guess = guess == "choice" ? GuessEncoding::choice : GuessEncoding::disjunctive;
    o.perm_check = perm_check == "aggregate" ? PermCheck::aggregate : PermCheck::pairwise;
    o.maxint_multiplier = maxint_mult;
    return o;
}

int run_translate(const std::string& input, const EmitOptions& opts,
                  const std::string& out_path) {
    Analysis a = load(input);
    deliver(emit(translate(a, opts)), out_path);
    return 0;
}

std::string answer_text(const OracleResult& result, SolveMode mode) {
    std::string out;
    if (mode == SolveMode::count) {
        out = std::to_string(result.count) + "\n";
        return out;
    }
    if (result.answers.empty()) {
        out = "% no answers\n";
        return out;
    }
    for (std::size_t i = 0; i < result.answers.size(); ++i) {
        out += "% answer " + std::to_string(i + 1) + "\n";
        for (const auto& [pred, tuple] : result.answers[i].atoms)
            out += pred + tuple_text(tuple) + ".\n";
    }
    if (!result.complete) out += "% stopped at the answer limit\n";
    return out;
}

int run_solve(const std::string& input, const SolveOptions& opts,
              const std::string& out_path) {
    Analysis a = load(input);
    OracleResult result = solve(a, opts);
    deliver(answer_text(result, opts.mode), out_path);
    return 0;
}

int run_check(const std::string& input, const CrosscheckOptions& opts,
              const std::string& out_path) {
    Analysis a = load(input);
    std::string out;
    bool failed = false;
    for (const CrosscheckOutcome& r : crosscheck(a, opts)) {
        out += combo_name(r.combo) + ": ";
        switch (r.status) {
            case CrosscheckStatus::pass:
                out += "PASS (" + std::to_string(r.reference_count) + " answers)";
                break;
            case CrosscheckStatus::fail:
                failed = true;
                out += "FAIL (" + r.detail + ")";
                break;
            case CrosscheckStatus::skip: out += "SKIP (" + r.detail + ")"; break;
            case CrosscheckStatus::inconclusive:
                out += "INCONCLUSIVE (" + r.detail + ")";
                break;
        }
        out += "\n";
    }
    deliver(out, out_path);
    return failed ? 3 : 0;
}

int run_inspect(const std::string& input, const std::string& out_path) {
    Analysis a = load(input);
    std::string out = "== program ==\n" + print_program(a.original);

    out += "== guesses ==\n";
    if (a.guesses.empty()) out += "none\n";
    for (const GuessDecl& g : a.guesses) {
        out += g.target + ": " + metafact_kind_text(g.kind) + " over " +
               std::to_string(g.domain.tuples().size()) + " tuples";
        if (g.has_values())
            out += ", values " + std::to_string(g.lo) + ".." + std::to_string(g.hi);
        out += "\n";
    }

    out += "== derived strata ==\n";
    if (a.strat.strata.empty()) out += "none\n";
    for (std::size_t i = 0; i < a.strat.strata.size(); ++i) {
        out += std::to_string(i) + ":";
        for (const std::string& pred : a.strat.strata[i]) out += " " + pred;
        out += "\n";
    }

    out += "== candidate space ==\n" + guess_space(a).decimal() + "\n";

    out += "== safety repairs ==\n";
    if (a.obligations.empty()) out += "none\n";
    for (const SafetyObligation& ob : a.obligations)
        out += "rule " + std::to_string(ob.rule_index + 1) + ": " + ob.var +
               " required a binder (" + obligation_reason_text(ob.reason) + ")\n";

    deliver(out, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Compile guess-and-check programs to answer set programming dialects"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string diagnostics = "human";
    app.add_option("--diagnostics", diagnostics, "Diagnostic format")
        ->check(CLI::IsMember({"human", "structured"}))
        ->capture_default_str();

    std::string input;
    std::string out_path;
    std::string dialect = "gringo";
    std::string guess = "disjunctive";
    std::string perm_check = "constraints";
    int maxint_mult = 1;
    std::string mode = "all";
    std::uint64_t answer_limit = 0;
    std::uint64_t guess_limit = 10'000'000;
    std::uint64_t work_limit = 10'000'000;
    int atoms_limit = 64;

    CLI::App* translate_cmd =
        app.add_subcommand("translate", "Emit the target-language program");
    translate_cmd->add_option("input", input, "Source file")->required();
    translate_cmd->add_option("--dialect", dialect, "Target dialect")
        ->check(CLI::IsMember({"dlv", "gringo"}))
        ->capture_default_str();
    translate_cmd->add_option("--guess", guess, "Guess encoding")
        ->check(CLI::IsMember({"disjunctive", "choice"}))
        ->capture_default_str();
    translate_cmd
        ->add_option("--perm-check", perm_check, "Permutation injectivity encoding")
        ->check(CLI::IsMember({"constraints", "aggregate"}))
        ->capture_default_str();
    translate_cmd
        ->add_option("--maxint-mult", maxint_mult,
                     "Integer headroom multiplier for the dlv #maxint directive")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    translate_cmd->add_option("-o,--output", out_path, "Output file (default stdout)");

    CLI::App* solve_cmd =
        app.add_subcommand("solve", "Enumerate answers by exhaustive search");
    solve_cmd->add_option("input", input, "Source file")->required();
    solve_cmd->add_option("--mode", mode, "What to report")
        ->check(CLI::IsMember({"first", "all", "count"}))
        ->capture_default_str();
    solve_cmd->add_option("--limit", answer_limit,
                          "Stop after this many answers (0 = unlimited)");
    solve_cmd->add_option("--guess-limit", guess_limit, "Candidate-space ceiling")
        ->capture_default_str();
    solve_cmd->add_option("-o,--output", out_path, "Output file (default stdout)");

    CLI::App* check_cmd = app.add_subcommand(
        "check", "Compare every translation against the exhaustive search");
    check_cmd->add_option("input", input, "Source file")->required();
    check_cmd->add_option("--guess-limit", guess_limit, "Candidate-space ceiling")
        ->capture_default_str();
    check_cmd->add_option("--work-limit", work_limit, "Grounding ceiling")
        ->capture_default_str();
    check_cmd
        ->add_option("--atoms-limit", atoms_limit,
                     "Ground-atom ceiling for model enumeration")
        ->capture_default_str();
    check_cmd->add_option("-o,--output", out_path, "Output file (default stdout)");

    CLI::App* inspect_cmd =
        app.add_subcommand("inspect", "Show the parsed program and its analysis");
    inspect_cmd->add_option("input", input, "Source file")->required();
    inspect_cmd->add_option("-o,--output", out_path, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (translate_cmd->parsed())
            return run_translate(
                input, emit_options(dialect, guess, perm_check, maxint_mult), out_path);
        if (solve_cmd->parsed()) {
            SolveOptions opts;
            opts.mode = mode == "first"   ? SolveMode::first
                        : mode == "count" ? SolveMode::count
                                          : SolveMode::all;
            opts.answer_limit = answer_limit;
            opts.guess_limit = guess_limit;
            return run_solve(input, opts, out_path);
        }
        if (check_cmd->parsed()) {
            CrosscheckOptions opts;
            opts.oracle.guess_limit = guess_limit;
            opts.ground.work_limit = work_limit;
            opts.solver.atoms_limit = atoms_limit;
            return run_check(input, opts, out_path);
        }
        return run_inspect(input, out_path);
    } catch (const CompileError& e) {
        report(e, diagnostics);
        return exit_code_for(e.code());
    }
}
