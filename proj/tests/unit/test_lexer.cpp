#include <catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "hysim/errors.hpp"
#include "hysim/lexer.hpp"

using namespace hysim;

namespace {

std::vector<TokenKind> kinds(std::string_view src) {
  std::vector<TokenKind> out;
  for (const Token& t : tokenize(src)) out.push_back(t.kind);
  return out;
}

}  // namespace

TEST_CASE("smallest assignment", "[lexer]") {
  auto toks = tokenize("x := 0;");
  REQUIRE(toks.size() == 5);
  CHECK(toks[0].kind == TokenKind::Ident);
  CHECK(toks[0].text == "x");
  CHECK(toks[1].kind == TokenKind::Assign);
  CHECK(toks[2].kind == TokenKind::Number);
  CHECK(toks[2].number == 0.0);
  CHECK(toks[3].kind == TokenKind::Semi);
  CHECK(toks[4].kind == TokenKind::End);
}

TEST_CASE("range literal keeps the sign on the lower bound", "[lexer]") {
  auto toks = tokenize("a := [-3..3];");
  std::vector<TokenKind> expected{TokenKind::Ident,  TokenKind::Assign, TokenKind::LBracket,
                                  TokenKind::Number, TokenKind::Range,  TokenKind::Number,
                                  TokenKind::RBracket, TokenKind::Semi, TokenKind::End};
  CHECK(kinds("a := [-3..3];") == expected);
  CHECK(toks[3].number == -3.0);
  CHECK(toks[5].number == 3.0);
}

TEST_CASE("derivative equation", "[lexer]") {
  std::vector<TokenKind> expected{TokenKind::Ident, TokenKind::Prime, TokenKind::Eq,
                                  TokenKind::Ident, TokenKind::End};
  CHECK(kinds("v' = af") == expected);
}

TEST_CASE("binary minus after an operand", "[lexer]") {
  std::vector<TokenKind> expected{TokenKind::Ident, TokenKind::Minus, TokenKind::Number,
                                  TokenKind::End};
  CHECK(kinds("x-3") == expected);
  CHECK(kinds("x - 3") == expected);
  // after ')' too
  CHECK(kinds("(x)-3")[3] == TokenKind::Minus);
  // but not after an operator
  auto toks = tokenize("x*-3");
  CHECK(toks[2].kind == TokenKind::Number);
  CHECK(toks[2].number == -3.0);
}

TEST_CASE("keyword spellings of connectives", "[lexer]") {
  CHECK(kinds("a and b")[1] == TokenKind::AndAnd);
  CHECK(kinds("a && b")[1] == TokenKind::AndAnd);
  CHECK(kinds("a or b")[1] == TokenKind::OrOr);
  CHECK(kinds("not a")[0] == TokenKind::Bang);
  CHECK(kinds("a \xE2\x89\xA4 b")[1] == TokenKind::LessEq);  // ≤
  CHECK(kinds("a \xE2\x89\xA5 b")[1] == TokenKind::GreaterEq);
  CHECK(kinds("a \xE2\x89\xA0 b")[1] == TokenKind::NotEq);
}

TEST_CASE("numbers", "[lexer]") {
  auto toks = tokenize("0.5 1e3 2.5e-1 7");
  CHECK(toks[0].number == 0.5);
  CHECK(toks[1].number == 1000.0);
  CHECK(toks[2].number == 0.25);
  CHECK(toks[3].number == 7.0);
  // `1..3` is a range, not `1.` followed by `.3`
  CHECK(kinds("1..3")[1] == TokenKind::Range);
}

TEST_CASE("positions are 1-based line and column", "[lexer]") {
  auto toks = tokenize("x := 1;\n  y := 2;");
  CHECK(toks[0].pos == SourcePos{1, 1});
  CHECK(toks[2].pos == SourcePos{1, 6});
  CHECK(toks[4].pos == SourcePos{2, 3});
}

TEST_CASE("comments are skipped", "[lexer]") {
  std::vector<TokenKind> expected{TokenKind::Ident, TokenKind::Assign, TokenKind::Number,
                                  TokenKind::Semi, TokenKind::End};
  CHECK(kinds("// header\nx := 1; // trailing\n") == expected);
}

TEST_CASE("unknown character stops the stream", "[lexer]") {
  auto toks = tokenize("x := 1 $ 2;");
  REQUIRE(toks.back().kind == TokenKind::Error);
  CHECK(toks.back().text == "$");
  CHECK(toks.back().pos == SourcePos{1, 8});
  CHECK(toks.size() == 4);

  try {
    throw_if_lex_error(toks);
    FAIL("no LexError");
  } catch (const LexError& e) {
    CHECK(e.pos() == SourcePos{1, 8});
    CHECK(std::string(e.what()).find("$") != std::string::npos);
  }
}

TEST_CASE("lexing never throws and always terminates the stream", "[lexer][property]") {
  std::mt19937 rng(7);
  const std::string alphabet = "xy01.:=';-+*/()[]{}<>!&|,@ \n\t#$e";
  for (int i = 0; i < 2000; ++i) {
    std::string src;
    const int len = static_cast<int>(rng() % 30);
    for (int k = 0; k < len; ++k) src += alphabet[rng() % alphabet.size()];
    std::vector<Token> toks;
    REQUIRE_NOTHROW(toks = tokenize(src));
    REQUIRE(!toks.empty());
    const TokenKind last = toks.back().kind;
    REQUIRE((last == TokenKind::End || last == TokenKind::Error));
    for (std::size_t k = 0; k + 1 < toks.size(); ++k) {
      REQUIRE(toks[k].kind != TokenKind::End);
      REQUIRE(toks[k].kind != TokenKind::Error);
    }
  }
}
