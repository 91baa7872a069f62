#include "hysim/parser.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace hysim {

namespace {

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::size_t index) : toks_(tokens), i_(index) {}

  std::size_t index() const { return i_; }

  std::vector<StmtPtr> program() {
    std::vector<StmtPtr> out;
    while (!check(TokenKind::End)) {
      if (accept(TokenKind::Semi)) continue;
      out.push_back(statement());
    }
    return out;
  }

  ExprPtr expression() { return or_expr(); }

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t j = std::min(i_ + ahead, toks_.size() - 1);
    return toks_[j];
  }

 private:
  bool check(TokenKind kind) const { return peek().kind == kind; }

  bool accept(TokenKind kind) {
    if (!check(kind)) return false;
    ++i_;
    return true;
  }

  const Token& expect(TokenKind kind, std::string_view what) {
    if (!check(kind)) fail(std::string(what));
    return toks_[i_++];
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    if (t.kind == TokenKind::Error) throw LexError(t.pos, t.text);
    const std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.pos, "expected " + expected + ", found " + found);
  }

  // Statements ------------------------------------------------------------

  StmtPtr statement() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::LBrace: return block();
      case TokenKind::KwIf: return if_stmt();
      case TokenKind::KwWhile: return while_stmt();
      case TokenKind::Ident:
        if (peek(1).kind == TokenKind::Assign) return assignment();
        if (peek(1).kind == TokenKind::Prime) return ode_block();
        ++i_;
        fail("':=' or \"'\" after identifier '" + t.text + "'");
      case TokenKind::Semi:
        ++i_;
        return make_seq({}, t.pos);
      default:
        fail("statement");
    }
  }

  StmtPtr block() {
    const SourcePos pos = expect(TokenKind::LBrace, "'{'").pos;
    std::vector<StmtPtr> body;
    while (!check(TokenKind::RBrace)) {
      if (check(TokenKind::End)) fail("'}'");
      if (accept(TokenKind::Semi)) continue;
      body.push_back(statement());
    }
    ++i_;
    return make_seq(std::move(body), pos);
  }

  StmtPtr if_stmt() {
    const SourcePos pos = expect(TokenKind::KwIf, "'if'").pos;
    ExprPtr guard = condition("if guard");
    expect(TokenKind::KwThen, "'then'");
    StmtPtr then_branch = statement();
    // Allow `if c then { ... }; else ...`.
    if (check(TokenKind::Semi) && peek(1).kind == TokenKind::KwElse) ++i_;
    StmtPtr else_branch = accept(TokenKind::KwElse) ? statement() : make_seq({}, pos);
    return make_stmt(Stmt::If{std::move(guard), std::move(then_branch), std::move(else_branch)},
                     pos);
  }

  StmtPtr while_stmt() {
    const SourcePos pos = expect(TokenKind::KwWhile, "'while'").pos;
    ExprPtr guard = condition("while guard");
    expect(TokenKind::KwDo, "'do'");
    StmtPtr body = statement();
    return make_stmt(Stmt::While{std::move(guard), std::move(body)}, pos);
  }

  StmtPtr assignment() {
    const Token& name = toks_[i_];
    i_ += 2;  // ident ':='
    if (check(TokenKind::LBracket)) {
      std::vector<double> values = variant_literal();
      expect(TokenKind::Semi, "';'");
      return make_stmt(Stmt::AssignVariants{name.text, std::move(values)}, name.pos);
    }
    ExprPtr rhs = real("right-hand side of ':='");
    expect(TokenKind::Semi, "';'");
    return make_stmt(Stmt::Assign{name.text, std::move(rhs)}, name.pos);
  }

  double literal_number() {
    const bool negate = accept(TokenKind::Minus);
    const double v = expect(TokenKind::Number, "number literal").number;
    return negate ? -v : v;
  }

  std::vector<double> variant_literal() {
    const SourcePos pos = expect(TokenKind::LBracket, "'['").pos;
    std::vector<double> values;
    const SourcePos first_pos = peek().pos;
    values.push_back(literal_number());
    if (accept(TokenKind::Range)) {
      const double hi = literal_number();
      expect(TokenKind::RBracket, "']'");
      return expand_range(values.front(), hi, first_pos);
    }
    while (accept(TokenKind::Comma)) values.push_back(literal_number());
    expect(TokenKind::RBracket, "']'");
    (void)pos;
    return values;
  }

  StmtPtr ode_block() {
    const SourcePos pos = peek().pos;
    Stmt::Ode ode;
    std::set<std::string> seen;
    do {
      const Token& name = expect(TokenKind::Ident, "state variable");
      expect(TokenKind::Prime, "\"'\"");
      expect(TokenKind::Eq, "'='");
      if (!seen.insert(name.text).second) {
        throw StructureError(name.pos, "variable '" + name.text +
                                           "' has more than one equation in this block");
      }
      ExprPtr rhs = real("derivative of '" + name.text + "'");
      ode.equations.push_back({name.text, std::move(rhs), name.pos});
    } while (accept(TokenKind::Comma));
    if (accept(TokenKind::KwFor)) {
      ode.bound = Stmt::Ode::For{real("'for' duration")};
    } else if (accept(TokenKind::KwUntil)) {
      ode.bound = Stmt::Ode::Until{condition("'until' condition")};
    } else {
      fail("',', 'for' or 'until'");
    }
    expect(TokenKind::Semi, "';'");
    return make_stmt(std::move(ode), pos);
  }

  // Typed expression entry points -------------------------------------------

  ExprPtr condition(const std::string& what) {
    ExprPtr e = expression();
    if (e->type() != ValueType::Bool) throw TypeError(e->pos, what + " must be a boolean expression");
    return e;
  }

  ExprPtr real(const std::string& what) {
    ExprPtr e = expression();
    if (e->type() != ValueType::Real) throw TypeError(e->pos, what + " must be a real expression");
    return e;
  }

  // Expressions -------------------------------------------------------------

  static void require(const ExprPtr& e, ValueType want, const SourcePos& op_pos,
                      std::string_view op) {
    if (e->type() == want) return;
    throw TypeError(op_pos, std::string("operator '") + std::string(op) + "' expects " +
                                (want == ValueType::Real ? "real" : "boolean") + " operands");
  }

  ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, const SourcePos& pos) {
    const ValueType operand =
        (op == BinaryOp::And || op == BinaryOp::Or) ? ValueType::Bool : ValueType::Real;
    require(lhs, operand, pos, op_symbol(op));
    require(rhs, operand, pos, op_symbol(op));
    return make_binary(op, std::move(lhs), std::move(rhs), pos);
  }

  ExprPtr or_expr() {
    ExprPtr lhs = and_expr();
    while (check(TokenKind::OrOr)) {
      const SourcePos pos = toks_[i_++].pos;
      lhs = binary(BinaryOp::Or, std::move(lhs), and_expr(), pos);
    }
    return lhs;
  }

  ExprPtr and_expr() {
    ExprPtr lhs = comparison();
    while (check(TokenKind::AndAnd)) {
      const SourcePos pos = toks_[i_++].pos;
      lhs = binary(BinaryOp::And, std::move(lhs), comparison(), pos);
    }
    return lhs;
  }

  static bool comparison_op(TokenKind kind, BinaryOp& op) {
    switch (kind) {
      case TokenKind::EqEq: op = BinaryOp::Eq; return true;
      case TokenKind::NotEq: op = BinaryOp::Ne; return true;
      case TokenKind::Less: op = BinaryOp::Lt; return true;
      case TokenKind::LessEq: op = BinaryOp::Le; return true;
      case TokenKind::Greater: op = BinaryOp::Gt; return true;
      case TokenKind::GreaterEq: op = BinaryOp::Ge; return true;
      default: return false;
    }
  }

  ExprPtr comparison() {
    ExprPtr lhs = additive();
    BinaryOp op{};
    while (comparison_op(peek().kind, op)) {
      const SourcePos pos = toks_[i_++].pos;
      lhs = binary(op, std::move(lhs), additive(), pos);
    }
    return lhs;
  }

  ExprPtr additive() {
    ExprPtr lhs = multiplicative();
    while (check(TokenKind::Plus) || check(TokenKind::Minus)) {
      const Token& t = toks_[i_++];
      const BinaryOp op = t.kind == TokenKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
      lhs = binary(op, std::move(lhs), multiplicative(), t.pos);
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    ExprPtr lhs = unary();
    while (check(TokenKind::Star) || check(TokenKind::Slash)) {
      const Token& t = toks_[i_++];
      const BinaryOp op = t.kind == TokenKind::Star ? BinaryOp::Mul : BinaryOp::Div;
      lhs = binary(op, std::move(lhs), unary(), t.pos);
    }
    return lhs;
  }

  ExprPtr unary() {
    if (check(TokenKind::Minus)) {
      const SourcePos pos = toks_[i_++].pos;
      ExprPtr operand = unary();
      require(operand, ValueType::Real, pos, "-");
      return make_unary(UnaryOp::Neg, std::move(operand), pos);
    }
    if (check(TokenKind::Bang)) {
      const SourcePos pos = toks_[i_++].pos;
      ExprPtr operand = unary();
      require(operand, ValueType::Bool, pos, "!");
      return make_unary(UnaryOp::Not, std::move(operand), pos);
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number:
        ++i_;
        return make_number(t.number, t.pos);
      case TokenKind::KwTrue:
        ++i_;
        return make_bool(true, t.pos);
      case TokenKind::KwFalse:
        ++i_;
        return make_bool(false, t.pos);
      case TokenKind::Ident:
        ++i_;
        if (check(TokenKind::LParen)) {
          if (t.text != "sqrt") {
            throw ParseError(t.pos, "unknown function '" + t.text + "' (only sqrt is built in)");
          }
          ++i_;
          ExprPtr arg = expression();
          expect(TokenKind::RParen, "')'");
          require(arg, ValueType::Real, t.pos, "sqrt");
          return make_unary(UnaryOp::Sqrt, std::move(arg), t.pos);
        }
        return make_var(t.text, t.pos);
      case TokenKind::LParen: {
        ++i_;
        ExprPtr inner = expression();
        expect(TokenKind::RParen, "')'");
        return inner;
      }
      default:
        fail("expression");
    }
  }

  const std::vector<Token>& toks_;
  std::size_t i_;
};

bool contains_time_flow(const Stmt& s) {
  if (std::holds_alternative<Stmt::While>(s.node) || std::holds_alternative<Stmt::Ode>(s.node)) {
    return true;
  }
  if (const auto* seq = std::get_if<Stmt::Seq>(&s.node)) {
    for (const auto& c : seq->body) {
      if (contains_time_flow(*c)) return true;
    }
  }
  if (const auto* branch = std::get_if<Stmt::If>(&s.node)) {
    return contains_time_flow(*branch->then_branch) || contains_time_flow(*branch->else_branch);
  }
  return false;
}

void reject_nested_variants(const Stmt& s) {
  if (std::holds_alternative<Stmt::AssignVariants>(s.node)) {
    throw StructureError(s.pos, "variant arrays are only allowed at the top level of a program");
  }
  if (const auto* seq = std::get_if<Stmt::Seq>(&s.node)) {
    for (const auto& c : seq->body) reject_nested_variants(*c);
  } else if (const auto* branch = std::get_if<Stmt::If>(&s.node)) {
    reject_nested_variants(*branch->then_branch);
    reject_nested_variants(*branch->else_branch);
  } else if (const auto* loop = std::get_if<Stmt::While>(&s.node)) {
    reject_nested_variants(*loop->body);
  }
}

void check_structure(const std::vector<StmtPtr>& top) {
  bool time_flowed = false;
  for (const auto& s : top) {
    if (std::holds_alternative<Stmt::AssignVariants>(s->node)) {
      if (time_flowed) {
        throw StructureError(s->pos,
                             "variant arrays must be declared before any 'while' or ODE block");
      }
      continue;
    }
    reject_nested_variants(*s);
    time_flowed = time_flowed || contains_time_flow(*s);
  }
}

}  // namespace

Program parse(std::string_view source) {
  const std::vector<Token> tokens = tokenize(source);
  throw_if_lex_error(tokens);
  Parser parser(tokens, 0);
  std::vector<StmtPtr> top = parser.program();
  check_structure(top);
  return Program{make_seq(std::move(top), {1, 1}), std::string(source)};
}

ExprPtr parse_expression(const std::vector<Token>& tokens, std::size_t& index) {
  Parser parser(tokens, index);
  ExprPtr e = parser.expression();
  index = parser.index();
  return e;
}

ExprPtr parse_condition(std::string_view source) {
  const std::vector<Token> tokens = tokenize(source);
  throw_if_lex_error(tokens);
  std::size_t i = 0;
  ExprPtr e = parse_expression(tokens, i);
  if (tokens[i].kind != TokenKind::End) {
    throw ParseError(tokens[i].pos, "unexpected '" + tokens[i].text + "' after expression");
  }
  if (e->type() != ValueType::Bool) throw TypeError(e->pos, "expected a boolean expression");
  return e;
}

bool exact_integer(double v) {
  return std::isfinite(v) && std::trunc(v) == v && std::fabs(v) <= 9007199254740992.0;
}

std::vector<double> expand_range(double lo, double hi, SourcePos pos) {
  if (!exact_integer(lo) || !exact_integer(hi)) {
    throw RangeError(pos, "range bounds must be integers of magnitude at most 2^53");
  }
  if (lo > hi) {
    throw RangeError(pos, "empty range [" + format_number(lo) + ".." + format_number(hi) + "]");
  }
  if (hi - lo >= static_cast<double>(kMaxRangeLength)) {
    throw RangeError(pos, "range [" + format_number(lo) + ".." + format_number(hi) +
                              "] has more than " + std::to_string(kMaxRangeLength) + " values");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(hi - lo) + 1);
  for (double v = lo; v <= hi; v += 1.0) values.push_back(v);
  return values;
}

// Printing ------------------------------------------------------------------

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Expr::Binary>(&e.node)) {
    switch (b->op) {
      case BinaryOp::Or: return 1;
      case BinaryOp::And: return 2;
      case BinaryOp::Add:
      case BinaryOp::Sub: return 4;
      case BinaryOp::Mul:
      case BinaryOp::Div: return 5;
      default: return 3;  // comparisons
    }
  }
  if (const auto* u = std::get_if<Expr::Unary>(&e.node)) {
    return u->op == UnaryOp::Sqrt ? 7 : 6;
  }
  return 7;
}

void print_expr(const Expr& e, std::string& out);

void print_child(const Expr& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print_expr(child, out);
    out += ')';
  } else {
    print_expr(child, out);
  }
}

void print_expr(const Expr& e, std::string& out) {
  if (const auto* n = std::get_if<Expr::Number>(&e.node)) {
    out += format_number(n->value);
  } else if (const auto* b = std::get_if<Expr::Bool>(&e.node)) {
    out += b->value ? "true" : "false";
  } else if (const auto* v = std::get_if<Expr::Var>(&e.node)) {
    out += v->name;
  } else if (const auto* u = std::get_if<Expr::Unary>(&e.node)) {
    if (u->op == UnaryOp::Sqrt) {
      out += "sqrt(";
      print_expr(*u->operand, out);
      out += ')';
      return;
    }
    out += op_symbol(u->op);
    // `-(3)` keeps negation of a literal distinct from the literal -3.
    const bool literal = std::holds_alternative<Expr::Number>(u->operand->node);
    print_child(*u->operand, literal ? 8 : 6, out);
  } else {
    const auto& bin = std::get<Expr::Binary>(e.node);
    const int prec = precedence(e);
    print_child(*bin.lhs, prec, out);
    out += ' ';
    out += op_symbol(bin.op);
    out += ' ';
    print_child(*bin.rhs, prec + 1, out);
  }
}

bool consecutive_integers(const std::vector<double>& values) {
  if (values.size() < 2) return false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!exact_integer(values[i])) return false;
    if (i > 0 && values[i] != values[i - 1] + 1.0) return false;
  }
  return true;
}

void print_stmt(const Stmt& s, int indent, std::string& out);

void print_body(const std::vector<StmtPtr>& body, int indent, std::string& out) {
  for (const auto& c : body) {
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    print_stmt(*c, indent, out);
    out += '\n';
  }
}

void print_stmt(const Stmt& s, int indent, std::string& out) {
  if (const auto* a = std::get_if<Stmt::Assign>(&s.node)) {
    out += a->var + " := ";
    print_expr(*a->rhs, out);
    out += ';';
  } else if (const auto* av = std::get_if<Stmt::AssignVariants>(&s.node)) {
    out += av->var + " := [";
    if (consecutive_integers(av->values)) {
      out += format_number(av->values.front()) + ".." + format_number(av->values.back());
    } else {
      for (std::size_t i = 0; i < av->values.size(); ++i) {
        if (i > 0) out += ", ";
        out += format_number(av->values[i]);
      }
    }
    out += "];";
  } else if (const auto* seq = std::get_if<Stmt::Seq>(&s.node)) {
    if (seq->body.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    print_body(seq->body, indent + 1, out);
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    out += '}';
  } else if (const auto* i = std::get_if<Stmt::If>(&s.node)) {
    out += "if ";
    print_expr(*i->guard, out);
    out += " then ";
    print_stmt(*i->then_branch, indent, out);
    // Always emit the else branch so a nested if never captures it.
    out += " else ";
    print_stmt(*i->else_branch, indent, out);
  } else if (const auto* w = std::get_if<Stmt::While>(&s.node)) {
    out += "while ";
    print_expr(*w->guard, out);
    out += " do ";
    print_stmt(*w->body, indent, out);
  } else {
    const auto& ode = std::get<Stmt::Ode>(s.node);
    for (std::size_t k = 0; k < ode.equations.size(); ++k) {
      if (k > 0) out += ", ";
      out += ode.equations[k].var + "' = ";
      print_expr(*ode.equations[k].derivative, out);
    }
    if (const auto* f = std::get_if<Stmt::Ode::For>(&ode.bound)) {
      out += " for ";
      print_expr(*f->duration, out);
    } else {
      out += " until ";
      print_expr(*std::get<Stmt::Ode::Until>(ode.bound).condition, out);
    }
    out += ';';
  }
}

void dump_expr(const Expr& e, std::string& out) {
  if (const auto* n = std::get_if<Expr::Number>(&e.node)) {
    out += "(num " + format_number(n->value) + ")";
  } else if (const auto* b = std::get_if<Expr::Bool>(&e.node)) {
    out += b->value ? "(bool true)" : "(bool false)";
  } else if (const auto* v = std::get_if<Expr::Var>(&e.node)) {
    out += "(var " + v->name + ")";
  } else if (const auto* u = std::get_if<Expr::Unary>(&e.node)) {
    out += "(";
    out += u->op == UnaryOp::Neg ? "neg" : u->op == UnaryOp::Not ? "not" : "sqrt";
    out += ' ';
    dump_expr(*u->operand, out);
    out += ')';
  } else {
    const auto& bin = std::get<Expr::Binary>(e.node);
    out += "(";
    out += op_symbol(bin.op);
    out += ' ';
    dump_expr(*bin.lhs, out);
    out += ' ';
    dump_expr(*bin.rhs, out);
    out += ')';
  }
}

void dump_stmt(const Stmt& s, int indent, std::string& out) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  if (const auto* a = std::get_if<Stmt::Assign>(&s.node)) {
    out += "(assign " + a->var + " ";
    dump_expr(*a->rhs, out);
    out += ")";
  } else if (const auto* av = std::get_if<Stmt::AssignVariants>(&s.node)) {
    out += "(variants " + av->var + " [";
    for (std::size_t i = 0; i < av->values.size(); ++i) {
      if (i > 0) out += ' ';
      out += format_number(av->values[i]);
    }
    out += "])";
  } else if (const auto* seq = std::get_if<Stmt::Seq>(&s.node)) {
    out += "(seq";
    for (const auto& c : seq->body) {
      out += '\n';
      dump_stmt(*c, indent + 1, out);
    }
    out += ")";
  } else if (const auto* i = std::get_if<Stmt::If>(&s.node)) {
    out += "(if ";
    dump_expr(*i->guard, out);
    out += '\n';
    dump_stmt(*i->then_branch, indent + 1, out);
    out += '\n';
    dump_stmt(*i->else_branch, indent + 1, out);
    out += ")";
  } else if (const auto* w = std::get_if<Stmt::While>(&s.node)) {
    out += "(while ";
    dump_expr(*w->guard, out);
    out += '\n';
    dump_stmt(*w->body, indent + 1, out);
    out += ")";
  } else {
    const auto& ode = std::get<Stmt::Ode>(s.node);
    out += "(ode";
    for (const auto& eq : ode.equations) {
      out += " (" + eq.var + "' ";
      dump_expr(*eq.derivative, out);
      out += ")";
    }
    if (const auto* f = std::get_if<Stmt::Ode::For>(&ode.bound)) {
      out += " (for ";
      dump_expr(*f->duration, out);
    } else {
      out += " (until ";
      dump_expr(*std::get<Stmt::Ode::Until>(ode.bound).condition, out);
    }
    out += "))";
  }
}

}  // namespace

std::string pretty_print(const Expr& expr) {
  std::string out;
  print_expr(expr, out);
  return out;
}

std::string pretty_print(const Stmt& stmt, int indent) {
  std::string out;
  print_stmt(stmt, indent, out);
  return out;
}

std::string pretty_print(const Program& program) {
  std::string out;
  print_body(program.statements(), 0, out);
  return out;
}

std::string dump_ast(const Program& program) {
  std::string out = "(program";
  for (const auto& s : program.statements()) {
    out += '\n';
    dump_stmt(*s, 1, out);
  }
  out += ")\n";
  return out;
}

}  // namespace hysim
