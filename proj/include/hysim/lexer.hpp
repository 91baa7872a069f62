#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hysim/errors.hpp"

namespace hysim {

enum class TokenKind {
  Ident,
  Number,
  Assign,    // :=
  Prime,     // '
  Eq,        // =
  EqEq,      // ==
  NotEq,     // !=
  Less,
  LessEq,
  Greater,
  GreaterEq,
  Plus,
  Minus,
  Star,
  Slash,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Range,     // ..
  AndAnd,    // && or `and`
  OrOr,      // || or `or`
  Bang,      // ! or `not`
  At,        // @ (histogram queries)
  Colon,     // : (histogram queries)
  KwIf,
  KwThen,
  KwElse,
  KwWhile,
  KwDo,
  KwTrue,
  KwFalse,
  KwFor,
  KwUntil,
  End,
  Error,
};

std::string_view token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // raw lexeme
  double number = 0.0;
  SourcePos pos;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Splits source into tokens. The returned stream always ends with exactly
/// one End or Error token; an Error token carries the offending text and
/// stops the stream.
///
/// A '-' immediately followed by a digit is lexed as part of a negative
/// number literal unless the previous token ends an operand, so
/// `[-3..3]` yields NUM -3 while `x-3` yields IDENT MINUS NUM.
std::vector<Token> tokenize(std::string_view source);

/// Throws LexError when the stream ends in an Error token.
void throw_if_lex_error(const std::vector<Token>& tokens);

}  // namespace hysim
