#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hysim/ast.hpp"
#include "hysim/lexer.hpp"

namespace hysim {

/// Parses a complete `.lince` program.
///
/// Grammar (statements end with `;`, blocks are brace-delimited):
///
///   program  := stmt*
///   stmt     := ident ':=' expr ';'
///             | ident ':=' '[' num (',' num)* ']' ';'
///             | ident ':=' '[' int '..' int ']' ';'
///             | ident "'" '=' expr (',' ident "'" '=' expr)* ('for' expr | 'until' expr) ';'
///             | 'if' expr 'then' stmt ['else' stmt]
///             | 'while' expr 'do' stmt
///             | '{' stmt* '}'
///             | ';'
///
/// Throws LexError, ParseError, TypeError, StructureError or RangeError.
Program parse(std::string_view source);

/// Parses a single expression starting at `tokens[index]`, advancing `index`
/// past it. Used by the histogram query parser.
ExprPtr parse_expression(const std::vector<Token>& tokens, std::size_t& index);

/// Parses `source` as one boolean expression spanning the whole text.
ExprPtr parse_condition(std::string_view source);

inline constexpr std::size_t kMaxRangeLength = 1'000'000;

/// Integral and small enough (|v| <= 2^53) that v + 1 is exact.
bool exact_integer(double v);

/// Unit-step list `[lo, lo+1, ..., hi]`. Both bounds must be exact integers,
/// lo <= hi and the list at most kMaxRangeLength long, otherwise RangeError.
std::vector<double> expand_range(double lo, double hi, SourcePos pos = {});

/// Canonical source text; parse(pretty_print(p)) is structurally equal to p.
std::string pretty_print(const Program& program);
std::string pretty_print(const Stmt& stmt, int indent = 0);
std::string pretty_print(const Expr& expr);

/// Shortest decimal text that reads back to exactly `value`.
std::string format_number(double value);

/// S-expression dump used by `hysim parse`.
std::string dump_ast(const Program& program);

}  // namespace hysim
