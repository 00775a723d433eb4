#pragma once

#include <cstdint>
#include <string>

#include "npspec/diag.hpp"

namespace npspec {

enum class TokenKind {
    identifier,  // lowercase-initial symbol or uppercase-initial variable
    integer,
    kw_database,
    kw_specification,
    kw_subset,
    kw_permutation,
    kw_partition,
    kw_intfunc,
    kw_count,
    kw_sum,
    kw_min,
    kw_max,
    kw_not,
    kw_fail,
    kw_abs,
    arrow,       // <--
    lparen,
    rparen,
    lbrace,
    rbrace,
    comma,
    semicolon,
    dot,
    dotdot,
    assign,      // =
    eq,          // ==
    ne,          // !=
    lt,
    le,
    gt,
    ge,
    plus,
    minus,
    star,
    slash,
    caret,
    cross,       // ><
    underscore,
    colon,
    end_of_input,
};

inline const char* token_kind_name(TokenKind k) {
    switch (k) {
        case TokenKind::identifier: return "identifier";
        case TokenKind::integer: return "integer";
        case TokenKind::kw_database: return "'DATABASE'";
        case TokenKind::kw_specification: return "'SPECIFICATION'";
        case TokenKind::kw_subset: return "'Subset'";
        case TokenKind::kw_permutation: return "'Permutation'";
        case TokenKind::kw_partition: return "'Partition'";
        case TokenKind::kw_intfunc: return "'IntFunc'";
        case TokenKind::kw_count: return "'COUNT'";
        case TokenKind::kw_sum: return "'SUM'";
        case TokenKind::kw_min: return "'MIN'";
        case TokenKind::kw_max: return "'MAX'";
        case TokenKind::kw_not: return "'NOT'";
        case TokenKind::kw_fail: return "'fail'";
        case TokenKind::kw_abs: return "'abs'";
        case TokenKind::arrow: return "'<--'";
        case TokenKind::lparen: return "'('";
        case TokenKind::rparen: return "')'";
        case TokenKind::lbrace: return "'{'";
        case TokenKind::rbrace: return "'}'";
        case TokenKind::comma: return "','";
        case TokenKind::semicolon: return "';'";
        case TokenKind::dot: return "'.'";
        case TokenKind::dotdot: return "'..'";
        case TokenKind::assign: return "'='";
        case TokenKind::eq: return "'=='";
        case TokenKind::ne: return "'!='";
        case TokenKind::lt: return "'<'";
        case TokenKind::le: return "'<='";
        case TokenKind::gt: return "'>'";
        case TokenKind::ge: return "'>='";
        case TokenKind::plus: return "'+'";
        case TokenKind::minus: return "'-'";
        case TokenKind::star: return "'*'";
        case TokenKind::slash: return "'/'";
        case TokenKind::caret: return "'^'";
        case TokenKind::cross: return "'><'";
        case TokenKind::underscore: return "'_'";
        case TokenKind::colon: return "':'";
        case TokenKind::end_of_input: return "end of input";
    }
    return "?";
}

struct Token {
    TokenKind kind = TokenKind::end_of_input;
    std::string text;          // identifier spelling
    std::int64_t value = 0;    // integer payload
    SourcePos pos;

    bool is(TokenKind k) const { return kind == k; }
};

}  // namespace npspec
