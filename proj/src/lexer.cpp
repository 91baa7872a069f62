#include "hysim/lexer.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

namespace hysim {

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "IDENT";
    case TokenKind::Number: return "NUM";
    case TokenKind::Assign: return "ASSIGN";
    case TokenKind::Prime: return "PRIME";
    case TokenKind::Eq: return "EQ";
    case TokenKind::EqEq: return "EQEQ";
    case TokenKind::NotEq: return "NEQ";
    case TokenKind::Less: return "LT";
    case TokenKind::LessEq: return "LE";
    case TokenKind::Greater: return "GT";
    case TokenKind::GreaterEq: return "GE";
    case TokenKind::Plus: return "PLUS";
    case TokenKind::Minus: return "MINUS";
    case TokenKind::Star: return "STAR";
    case TokenKind::Slash: return "SLASH";
    case TokenKind::LParen: return "LPAREN";
    case TokenKind::RParen: return "RPAREN";
    case TokenKind::LBracket: return "LBRACK";
    case TokenKind::RBracket: return "RBRACK";
    case TokenKind::LBrace: return "LBRACE";
    case TokenKind::RBrace: return "RBRACE";
    case TokenKind::Comma: return "COMMA";
    case TokenKind::Semi: return "SEMI";
    case TokenKind::Range: return "RANGE";
    case TokenKind::AndAnd: return "AND";
    case TokenKind::OrOr: return "OR";
    case TokenKind::Bang: return "NOT";
    case TokenKind::At: return "AT";
    case TokenKind::Colon: return "COLON";
    case TokenKind::KwIf: return "IF";
    case TokenKind::KwThen: return "THEN";
    case TokenKind::KwElse: return "ELSE";
    case TokenKind::KwWhile: return "WHILE";
    case TokenKind::KwDo: return "DO";
    case TokenKind::KwTrue: return "TRUE";
    case TokenKind::KwFalse: return "FALSE";
    case TokenKind::KwFor: return "FOR";
    case TokenKind::KwUntil: return "UNTIL";
    case TokenKind::End: return "END";
    case TokenKind::Error: return "ERROR";
  }
  return "?";
}

namespace {

const std::unordered_map<std::string_view, TokenKind>& keywords() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"if", TokenKind::KwIf},       {"then", TokenKind::KwThen},
      {"else", TokenKind::KwElse},   {"while", TokenKind::KwWhile},
      {"do", TokenKind::KwDo},       {"true", TokenKind::KwTrue},
      {"false", TokenKind::KwFalse}, {"for", TokenKind::KwFor},
      {"until", TokenKind::KwUntil}, {"and", TokenKind::AndAnd},
      {"or", TokenKind::OrOr},       {"not", TokenKind::Bang},
  };
  return table;
}

bool ends_operand(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident:
    case TokenKind::Number:
    case TokenKind::RParen:
    case TokenKind::RBracket:
    case TokenKind::KwTrue:
    case TokenKind::KwFalse:
      return true;
    default:
      return false;
  }
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      const SourcePos start{line_, col_};
      if (at_end()) {
        out.push_back({TokenKind::End, "", 0.0, start});
        return out;
      }
      const TokenKind prev = out.empty() ? TokenKind::End : out.back().kind;
      Token tok = next(start, prev);
      const bool stop = tok.kind == TokenKind::Error;
      out.push_back(std::move(tok));
      if (stop) return out;
    }
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && !at_end(); ++k) {
      const char c = src_[i_++];
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
        // Columns count code points, not UTF-8 continuation bytes.
        ++col_;
      }
    }
  }

  void skip_trivia() {
    for (;;) {
      if (at_end()) return;
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token make(TokenKind kind, std::size_t len, SourcePos pos) {
    Token t{kind, std::string(src_.substr(i_, len)), 0.0, pos};
    advance(len);
    return t;
  }

  Token number(SourcePos pos) {
    std::size_t j = i_;
    if (src_[j] == '-') ++j;
    while (j < src_.size() && is_digit(src_[j])) ++j;
    // A '.' is part of the number only when a digit follows; "3..3" is a range.
    if (j + 1 < src_.size() && src_[j] == '.' && is_digit(src_[j + 1])) {
      ++j;
      while (j < src_.size() && is_digit(src_[j])) ++j;
    }
    if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
      if (k < src_.size() && is_digit(src_[k])) {
        while (k < src_.size() && is_digit(src_[k])) ++k;
        j = k;
      }
    }
    const std::string_view text = src_.substr(i_, j - i_);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      return make(TokenKind::Error, j - i_, pos);
    }
    Token t = make(TokenKind::Number, j - i_, pos);
    t.number = value;
    return t;
  }

  Token next(SourcePos pos, TokenKind prev) {
    const char c = peek();
    if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return number(pos);
    if (c == '-' && (is_digit(peek(1)) || (peek(1) == '.' && is_digit(peek(2)))) &&
        !ends_operand(prev)) {
      return number(pos);
    }
    if (is_ident_start(c)) {
      std::size_t j = i_;
      while (j < src_.size() && is_ident_char(src_[j])) ++j;
      const std::string_view word = src_.substr(i_, j - i_);
      const auto kw = keywords().find(word);
      return make(kw == keywords().end() ? TokenKind::Ident : kw->second, j - i_, pos);
    }
    const char d = peek(1);
    switch (c) {
      case ':':
        return d == '=' ? make(TokenKind::Assign, 2, pos) : make(TokenKind::Colon, 1, pos);
      case '=':
        return d == '=' ? make(TokenKind::EqEq, 2, pos) : make(TokenKind::Eq, 1, pos);
      case '!':
        return d == '=' ? make(TokenKind::NotEq, 2, pos) : make(TokenKind::Bang, 1, pos);
      case '<':
        return d == '=' ? make(TokenKind::LessEq, 2, pos) : make(TokenKind::Less, 1, pos);
      case '>':
        return d == '=' ? make(TokenKind::GreaterEq, 2, pos) : make(TokenKind::Greater, 1, pos);
      case '&':
        return d == '&' ? make(TokenKind::AndAnd, 2, pos) : make(TokenKind::Error, 1, pos);
      case '|':
        return d == '|' ? make(TokenKind::OrOr, 2, pos) : make(TokenKind::Error, 1, pos);
      case '.':
        return d == '.' ? make(TokenKind::Range, 2, pos) : make(TokenKind::Error, 1, pos);
      case '\'': return make(TokenKind::Prime, 1, pos);
      case '+': return make(TokenKind::Plus, 1, pos);
      case '-': return make(TokenKind::Minus, 1, pos);
      case '*': return make(TokenKind::Star, 1, pos);
      case '/': return make(TokenKind::Slash, 1, pos);
      case '(': return make(TokenKind::LParen, 1, pos);
      case ')': return make(TokenKind::RParen, 1, pos);
      case '[': return make(TokenKind::LBracket, 1, pos);
      case ']': return make(TokenKind::RBracket, 1, pos);
      case '{': return make(TokenKind::LBrace, 1, pos);
      case '}': return make(TokenKind::RBrace, 1, pos);
      case ',': return make(TokenKind::Comma, 1, pos);
      case ';': return make(TokenKind::Semi, 1, pos);
      case '@': return make(TokenKind::At, 1, pos);
      default: break;
    }
    // Unicode spellings of the comparison and arithmetic operators.
    static constexpr struct {
      std::string_view utf8;
      TokenKind kind;
    } kUnicode[] = {
        {"≤", TokenKind::LessEq}, {"≥", TokenKind::GreaterEq},
        {"≠", TokenKind::NotEq},  {"−", TokenKind::Minus},
        {"×", TokenKind::Star},   {"÷", TokenKind::Slash},
        {"∧", TokenKind::AndAnd}, {"∨", TokenKind::OrOr},
        {"¬", TokenKind::Bang},
    };
    for (const auto& u : kUnicode) {
      if (src_.substr(i_, u.utf8.size()) == u.utf8) return make(u.kind, u.utf8.size(), pos);
    }
    // Report the whole UTF-8 sequence of an unknown character.
    std::size_t len = 1;
    while (i_ + len < src_.size() &&
           (static_cast<unsigned char>(src_[i_ + len]) & 0xC0) == 0x80) {
      ++len;
    }
    return make(TokenKind::Error, len, pos);
  }

  std::string_view src_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

void throw_if_lex_error(const std::vector<Token>& tokens) {
  if (!tokens.empty() && tokens.back().kind == TokenKind::Error) {
    throw LexError(tokens.back().pos, tokens.back().text);
  }
}

}  // namespace hysim
