#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "npspec/token.hpp"

namespace npspec {

namespace detail {

inline const std::unordered_map<std::string_view, TokenKind>& keyword_table() {
    static const std::unordered_map<std::string_view, TokenKind> table = {
        {"DATABASE", TokenKind::kw_database},
        {"SPECIFICATION", TokenKind::kw_specification},
        {"Subset", TokenKind::kw_subset},
        {"Permutation", TokenKind::kw_permutation},
        {"Partition", TokenKind::kw_partition},
        {"IntFunc", TokenKind::kw_intfunc},
        {"COUNT", TokenKind::kw_count},
        {"SUM", TokenKind::kw_sum},
        {"MIN", TokenKind::kw_min},
        {"MAX", TokenKind::kw_max},
        {"NOT", TokenKind::kw_not},
        {"not", TokenKind::kw_not},
        {"fail", TokenKind::kw_fail},
        {"abs", TokenKind::kw_abs},
    };
    return table;
}

}  // namespace detail

class Lexer {
  public:
    explicit Lexer(std::string_view source) : src_(source) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            Token t = next();
            bool done = t.is(TokenKind::end_of_input);
            out.push_back(std::move(t));
            if (done) break;
        }
        return out;
    }

  private:
    std::string_view src_;
    std::size_t at_ = 0;
    int line_ = 1;
    int col_ = 1;

    bool eof() const { return at_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const {
        return at_ + ahead < src_.size() ? src_[at_ + ahead] : '\0';
    }

    char advance() {
        char c = src_[at_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_trivia() {
        for (;;) {
            if (eof()) return;
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!eof() && peek() != '\n') advance();
            } else if (c == '/' && peek(1) == '*') {
                SourcePos open{line_, col_};
                advance();
                advance();
                bool closed = false;
                while (!eof()) {
                    if (peek() == '*' && peek(1) == '/') {
                        advance();
                        advance();
                        closed = true;
                        break;
                    }
                    advance();
                }
                if (!closed)
                    throw CompileError(ErrorCode::unterminated_comment,
                                       "block comment is never closed", open);
            } else {
                return;
            }
        }
    }

    Token make(TokenKind k, SourcePos pos) const {
        Token t;
        t.kind = k;
        t.pos = pos;
        return t;
    }

    Token next() {
        skip_trivia();
        SourcePos pos{line_, col_};
        if (eof()) return make(TokenKind::end_of_input, pos);

        char c = peek();
        if (std::isalpha(static_cast<unsigned char>(c))) return lex_word(pos);
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(pos);

        advance();
        switch (c) {
            case '(': return make(TokenKind::lparen, pos);
            case ')': return make(TokenKind::rparen, pos);
            case '{': return make(TokenKind::lbrace, pos);
            case '}': return make(TokenKind::rbrace, pos);
            case ',': return make(TokenKind::comma, pos);
            case ';': return make(TokenKind::semicolon, pos);
            case ':': return make(TokenKind::colon, pos);
            case '+': return make(TokenKind::plus, pos);
            case '-': return make(TokenKind::minus, pos);
            case '*': return make(TokenKind::star, pos);
            case '/': return make(TokenKind::slash, pos);
            case '^': return make(TokenKind::caret, pos);
            case '.':
                if (peek() == '.') {
                    advance();
                    return make(TokenKind::dotdot, pos);
                }
                return make(TokenKind::dot, pos);
            case '=':
                if (peek() == '=') {
                    advance();
                    return make(TokenKind::eq, pos);
                }
                return make(TokenKind::assign, pos);
            case '!':
                if (peek() == '=') {
                    advance();
                    return make(TokenKind::ne, pos);
                }
                throw CompileError(ErrorCode::illegal_character,
                                   "expected '=' after '!'", pos);
            case '<':
                if (peek() == '-' && peek(1) == '-') {
                    advance();
                    advance();
                    return make(TokenKind::arrow, pos);
                }
                if (peek() == '=') {
                    advance();
                    return make(TokenKind::le, pos);
                }
                return make(TokenKind::lt, pos);
            case '>':
                if (peek() == '<') {
                    advance();
                    return make(TokenKind::cross, pos);
                }
                if (peek() == '=') {
                    advance();
                    return make(TokenKind::ge, pos);
                }
                return make(TokenKind::gt, pos);
            case '_':
                if (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
                    throw CompileError(ErrorCode::illegal_character,
                                       "'_' must stand alone; names start with a letter",
                                       pos);
                return make(TokenKind::underscore, pos);
            default:
                throw CompileError(ErrorCode::illegal_character,
                                   std::string("unexpected character '") + c + "'", pos);
        }
    }

    Token lex_word(SourcePos pos) {
        std::size_t start = at_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            advance();
        std::string_view word = src_.substr(start, at_ - start);
        const auto& kws = detail::keyword_table();
        if (auto it = kws.find(word); it != kws.end()) return make(it->second, pos);
        Token t = make(TokenKind::identifier, pos);
        t.text = std::string(word);
        return t;
    }

    Token lex_number(SourcePos pos) {
        std::int64_t v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            int digit = peek() - '0';
            if (v > (INT64_MAX - digit) / 10)
                throw CompileError(ErrorCode::integer_overflow,
                                   "integer literal does not fit in 64 bits", pos);
            v = v * 10 + digit;
            advance();
        }
        Token t = make(TokenKind::integer, pos);
        t.value = v;
        return t;
    }
};

inline std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace npspec
