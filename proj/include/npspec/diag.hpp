#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace npspec {

// 1-based source position; {0,0} means "no position".
struct SourcePos {
    int line = 0;
    int column = 0;

    bool known() const { return line > 0; }
    bool operator==(const SourcePos&) const = default;
};

enum class ErrorCode {
    // lexical / syntactic (CLI exit 1)
    io_error,
    illegal_character,
    unterminated_comment,
    integer_overflow,
    syntax_error,
    duplicate_definition,
    // semantic (CLI exit 2)
    undefined_constant,
    undefined_predicate,
    arity_mismatch,
    bad_metafact,
    not_stratified,
    unsafe_rule,
    invalid_rule,
    domain_error,
    evaluation_error,
    dialect_choice_unsupported,
    dialect_negative_integer,
    dialect_unsupported_operator,
    // resource refusals (CLI exit 4)
    guess_ceiling,
    ground_ceiling,
    atoms_ceiling,
    internal_error,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::io_error: return "io-error";
        case ErrorCode::illegal_character: return "illegal-character";
        case ErrorCode::unterminated_comment: return "unterminated-comment";
        case ErrorCode::integer_overflow: return "integer-overflow";
        case ErrorCode::syntax_error: return "syntax-error";
        case ErrorCode::duplicate_definition: return "duplicate-definition";
        case ErrorCode::undefined_constant: return "undefined-constant";
        case ErrorCode::undefined_predicate: return "undefined-predicate";
        case ErrorCode::arity_mismatch: return "arity-mismatch";
        case ErrorCode::bad_metafact: return "bad-metafact";
        case ErrorCode::not_stratified: return "not-stratified";
        case ErrorCode::unsafe_rule: return "unsafe-rule";
        case ErrorCode::invalid_rule: return "invalid-rule";
        case ErrorCode::domain_error: return "domain-error";
        case ErrorCode::evaluation_error: return "evaluation-error";
        case ErrorCode::dialect_choice_unsupported: return "dialect-choice-unsupported";
        case ErrorCode::dialect_negative_integer: return "dialect-negative-integer";
        case ErrorCode::dialect_unsupported_operator: return "dialect-unsupported-operator";
        case ErrorCode::guess_ceiling: return "guess-ceiling";
        case ErrorCode::ground_ceiling: return "ground-ceiling";
        case ErrorCode::atoms_ceiling: return "atoms-ceiling";
        case ErrorCode::internal_error: return "internal-error";
    }
    return "unknown";
}

// Classifies an error code into the CLI exit-status taxonomy:
// 1 input/syntax, 2 semantic, 4 ceiling refusal.
inline int error_exit_status(ErrorCode c) {
    switch (c) {
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

struct Diagnostic {
    ErrorCode code = ErrorCode::internal_error;
    std::string message;
    SourcePos pos;
};

class CompileError : public std::runtime_error {
  public:
    CompileError(ErrorCode code, std::string message, SourcePos pos = {})
        : std::runtime_error(format(code, message, pos)),
          diag_{code, std::move(message), pos} {}

    ErrorCode code() const { return diag_.code; }
    const SourcePos& pos() const { return diag_.pos; }
    const Diagnostic& diagnostic() const { return diag_; }

  private:
    static std::string format(ErrorCode code, const std::string& msg, SourcePos pos) {
        std::string out = "error[";
        out += error_code_name(code);
        out += "]";
        if (pos.known()) {
            out += " at ";
            out += std::to_string(pos.line);
            out += ":";
            out += std::to_string(pos.column);
        }
        out += ": ";
        out += msg;
        return out;
    }

    Diagnostic diag_;
};

}  // namespace npspec
