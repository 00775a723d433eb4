#include <catch2/catch_amalgamated.hpp>

#include "npspec/lexer.hpp"

using namespace npspec;

namespace {

std::vector<TokenKind> kinds(std::string_view src) {
    std::vector<TokenKind> out;
    for (const Token& t : tokenize(src)) out.push_back(t.kind);
    return out;
}

}  // namespace

TEST_CASE("relation definitions tokenize into punctuation and literals", "[lexer]") {
    auto toks = tokenize("edge = {(1,2)};");
    std::vector<TokenKind> expected = {
        TokenKind::identifier, TokenKind::assign,  TokenKind::lbrace,
        TokenKind::lparen,     TokenKind::integer, TokenKind::comma,
        TokenKind::integer,    TokenKind::rparen,  TokenKind::rbrace,
        TokenKind::semicolon,  TokenKind::end_of_input,
    };
    REQUIRE(toks.size() == expected.size());
    for (std::size_t i = 0; i < toks.size(); ++i) REQUIRE(toks[i].kind == expected[i]);
    REQUIRE(toks[0].text == "edge");
    REQUIRE(toks[4].value == 1);
    REQUIRE(toks[6].value == 2);
}

TEST_CASE("compound operators prefer the longest match", "[lexer]") {
    SECTION("rule arrow vs comparisons") {
        REQUIRE(kinds("<--") ==
                std::vector<TokenKind>{TokenKind::arrow, TokenKind::end_of_input});
        REQUIRE(kinds("<=") ==
                std::vector<TokenKind>{TokenKind::le, TokenKind::end_of_input});
        REQUIRE(kinds("<-") == std::vector<TokenKind>{TokenKind::lt, TokenKind::minus,
                                                      TokenKind::end_of_input});
    }
    SECTION("range dots vs statement dot") {
        REQUIRE(kinds("1..2") ==
                std::vector<TokenKind>{TokenKind::integer, TokenKind::dotdot,
                                       TokenKind::integer, TokenKind::end_of_input});
        REQUIRE(kinds(".") ==
                std::vector<TokenKind>{TokenKind::dot, TokenKind::end_of_input});
    }
    SECTION("product and comparisons built from angle brackets") {
        REQUIRE(kinds("><") ==
                std::vector<TokenKind>{TokenKind::cross, TokenKind::end_of_input});
        REQUIRE(kinds(">=") ==
                std::vector<TokenKind>{TokenKind::ge, TokenKind::end_of_input});
        REQUIRE(kinds("> <") == std::vector<TokenKind>{TokenKind::gt, TokenKind::lt,
                                                       TokenKind::end_of_input});
    }
    SECTION("equality vs definition") {
        REQUIRE(kinds("==") ==
                std::vector<TokenKind>{TokenKind::eq, TokenKind::end_of_input});
        REQUIRE(kinds("=") ==
                std::vector<TokenKind>{TokenKind::assign, TokenKind::end_of_input});
    }
}

TEST_CASE("keywords are recognized and case matters", "[lexer]") {
    auto toks = tokenize("DATABASE SPECIFICATION Subset Permutation Partition IntFunc "
                         "COUNT SUM MIN MAX NOT not fail abs");
    std::vector<TokenKind> expected = {
        TokenKind::kw_database, TokenKind::kw_specification, TokenKind::kw_subset,
        TokenKind::kw_permutation, TokenKind::kw_partition, TokenKind::kw_intfunc,
        TokenKind::kw_count, TokenKind::kw_sum, TokenKind::kw_min, TokenKind::kw_max,
        TokenKind::kw_not, TokenKind::kw_not, TokenKind::kw_fail, TokenKind::kw_abs,
        TokenKind::end_of_input,
    };
    REQUIRE(kinds("DATABASE SPECIFICATION Subset Permutation Partition IntFunc "
                  "COUNT SUM MIN MAX NOT not fail abs") == expected);
    REQUIRE(toks[0].kind == TokenKind::kw_database);

    // Different capitalization is just an identifier.
    auto other = tokenize("database Database subset Count");
    for (std::size_t i = 0; i + 1 < other.size(); ++i)
        REQUIRE(other[i].kind == TokenKind::identifier);
}

TEST_CASE("comments vanish and never produce tokens", "[lexer]") {
    REQUIRE(kinds("a // trailing comment\nb") ==
            std::vector<TokenKind>{TokenKind::identifier, TokenKind::identifier,
                                   TokenKind::end_of_input});
    REQUIRE(kinds("a /* inline */ b") ==
            std::vector<TokenKind>{TokenKind::identifier, TokenKind::identifier,
                                   TokenKind::end_of_input});
    REQUIRE(kinds("/* spans\nlines */ x") ==
            std::vector<TokenKind>{TokenKind::identifier, TokenKind::end_of_input});
}

TEST_CASE("positions are 1-based and survive newlines", "[lexer]") {
    auto toks = tokenize("ab cd\n  ef");
    REQUIRE(toks[0].pos.line == 1);
    REQUIRE(toks[0].pos.column == 1);
    REQUIRE(toks[1].pos.line == 1);
    REQUIRE(toks[1].pos.column == 4);
    REQUIRE(toks[2].pos.line == 2);
    REQUIRE(toks[2].pos.column == 3);
}

TEST_CASE("lexical errors carry a code and a position", "[lexer]") {
    SECTION("unterminated block comment") {
        try {
            tokenize("x /* never closed");
            FAIL("expected an error");
        } catch (const CompileError& e) {
            REQUIRE(e.code() == ErrorCode::unterminated_comment);
            REQUIRE(e.pos().line == 1);
            REQUIRE(e.pos().column == 3);
        }
    }
    SECTION("illegal character") {
        try {
            tokenize("p(X) ? q(X)");
            FAIL("expected an error");
        } catch (const CompileError& e) {
            REQUIRE(e.code() == ErrorCode::illegal_character);
        }
    }
    SECTION("underscore glued to a name") {
        REQUIRE_THROWS_AS(tokenize("_x"), CompileError);
    }
    SECTION("integer overflow") {
        try {
            tokenize("99999999999999999999");
            FAIL("expected an error");
        } catch (const CompileError& e) {
            REQUIRE(e.code() == ErrorCode::integer_overflow);
        }
    }
}

TEST_CASE("underscore stands alone as the anonymous marker", "[lexer]") {
    REQUIRE(kinds("p(_,X)") ==
            std::vector<TokenKind>{TokenKind::identifier, TokenKind::lparen,
                                   TokenKind::underscore, TokenKind::comma,
                                   TokenKind::identifier, TokenKind::rparen,
                                   TokenKind::end_of_input});
}
