#pragma once

// Textual format for constraint definitions and quantified expressions.
//
//   document       := (constraint_def | expr_def)*
//   constraint_def := "constraint" NAME "arity" INT ":=" ("table" BITS | "formula" formula) ";"
//   expr_def       := "expr" NAME ":=" prefix ":" matrix ";"
//   prefix         := block ((";")? block)*        block := ("E" | "A") NAME ((",")? NAME)*
//   matrix         := (application ("," application)*)?
//   application    := NAME "(" arg ("," arg)* ")"          arg := NAME | "0" | "1"
//
// Formulas use v1..vk for the arguments, the constants 0 and 1, and the
// operators ! & ^ | -> <-> (binding tightest to loosest; -> is right
// associative). BITS lists the 2^k table entries with row 0 first and the
// first argument as the most significant bit. `#` and `//` start comments.
// "E" and "A" are reserved and cannot name variables.

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qcsp/expression.hpp"
#include "qcsp/presets.hpp"

namespace qcsp {

struct SourcePosition {
  int line = 1;
  int column = 1;
};

class ParseError : public Error {
 public:
  ParseError(SourcePosition pos, const std::string& message)
      : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message), pos_(pos) {}
  SourcePosition position() const noexcept { return pos_; }
  int line() const noexcept { return pos_.line; }
  int column() const noexcept { return pos_.column; }

 private:
  SourcePosition pos_;
};

struct NamedExpression {
  std::string name;
  QuantifiedExpression expression;
};

class SourceDocument {
 public:
  std::vector<ConstraintRef> constraints;
  std::vector<NamedExpression> expressions;
  std::map<std::string, SourcePosition, std::less<>> positions;

  /// Document definitions shadow presets.
  ConstraintRef find_constraint(std::string_view name) const {
    for (const auto& c : constraints) {
      if (c->name() == name) return c;
    }
    return presets::get(name);
  }

  const QuantifiedExpression* find_expression(std::string_view name) const {
    for (const auto& e : expressions) {
      if (e.name == name) return &e.expression;
    }
    return nullptr;
  }
};

namespace detail {

enum class Tok { Ident, Number, LParen, RParen, Comma, Semi, Colon, Define, Not, And, Or, Xor, Implies, Iff, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePosition pos;
};

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End:
      return "end of input";
    case Tok::Ident:
      return "'" + t.text + "'";
    case Tok::Number:
      return "number '" + t.text + "'";
    default:
      return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t;
      t.pos = pos_;
      if (at_end()) {
        out.push_back(t);
        return out;
      }
      const char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) t.text += advance();
        t.kind = Tok::Ident;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
        t.kind = Tok::Number;
      } else {
        t.text = std::string(1, advance());
        switch (c) {
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case ',': t.kind = Tok::Comma; break;
          case ';': t.kind = Tok::Semi; break;
          case '!': t.kind = Tok::Not; break;
          case '&': t.kind = Tok::And; break;
          case '|': t.kind = Tok::Or; break;
          case '^': t.kind = Tok::Xor; break;
          case ':':
            if (!at_end() && peek() == '=') {
              t.text += advance();
              t.kind = Tok::Define;
            } else {
              t.kind = Tok::Colon;
            }
            break;
          case '-':
            if (!at_end() && peek() == '>') {
              t.text += advance();
              t.kind = Tok::Implies;
              break;
            }
            throw ParseError(t.pos, "expected '->'");
          case '<':
            if (text_.substr(index_, 2) == "->") {
              t.text += advance();
              t.text += advance();
              t.kind = Tok::Iff;
              break;
            }
            throw ParseError(t.pos, "expected '<->'");
          default: {
            std::ostringstream msg;
            if (std::isprint(static_cast<unsigned char>(c))) {
              msg << "unexpected character '" << c << "'";
            } else {
              msg << "unexpected byte 0x" << std::hex << static_cast<int>(static_cast<unsigned char>(c));
            }
            throw ParseError(t.pos, msg.str());
          }
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  bool at_end() const { return index_ >= text_.size(); }
  char peek() const { return text_[index_]; }
  char advance() {
    const char c = text_[index_++];
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    return c;
  }
  void skip_space_and_comments() {
    while (!at_end()) {
      const char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#' || text_.substr(index_, 2) == "//") {
        while (!at_end() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t index_ = 0;
  SourcePosition pos_;
};

// Formula AST evaluated once per table row.
struct FormulaNode {
  enum Kind { Var, Const, Not, And, Or, Xor, Implies, Iff } kind = Const;
  int index = 0;  // Var: 0-based argument; Const: value
  std::unique_ptr<FormulaNode> lhs, rhs;

  bool eval(std::uint32_t row, int arity) const {
    switch (kind) {
      case Var: return row_bit(row, arity, index);
      case Const: return index != 0;
      case Not: return !lhs->eval(row, arity);
      case And: return lhs->eval(row, arity) && rhs->eval(row, arity);
      case Or: return lhs->eval(row, arity) || rhs->eval(row, arity);
      case Xor: return lhs->eval(row, arity) != rhs->eval(row, arity);
      case Implies: return !lhs->eval(row, arity) || rhs->eval(row, arity);
      case Iff: return lhs->eval(row, arity) == rhs->eval(row, arity);
    }
    return false;
  }
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, SourceDocument& doc) : toks_(std::move(tokens)), doc_(doc) {}

  void document() {
    while (cur().kind != Tok::End) {
      const Token& t = cur();
      if (t.kind == Tok::Ident && t.text == "constraint") {
        constraint_def();
      } else if (t.kind == Tok::Ident && t.text == "expr") {
        expr_def();
      } else {
        throw ParseError(t.pos, "expected 'constraint' or 'expr', found " + describe(t));
      }
    }
  }

  /// Parses `prefix : matrix ;` and requires end of input afterwards.
  QuantifiedExpression lone_expression() {
    auto e = expression_body();
    if (cur().kind != Tok::End) throw ParseError(cur().pos, "unexpected " + describe(cur()) + " after expression");
    return e;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (cur().kind != k) return false;
    take();
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (cur().kind != k) throw ParseError(cur().pos, std::string("expected ") + what + ", found " + describe(cur()));
    return take();
  }
  void expect_keyword(const char* kw) {
    if (cur().kind != Tok::Ident || cur().text != kw) {
      throw ParseError(cur().pos, std::string("expected '") + kw + "', found " + describe(cur()));
    }
    take();
  }
  static bool is_quantifier(const Token& t) { return t.kind == Tok::Ident && (t.text == "E" || t.text == "A"); }

  void check_new_name(const Token& name) {
    if (doc_.positions.count(name.text)) {
      const auto p = doc_.positions.find(name.text)->second;
      throw ParseError(name.pos, "'" + name.text + "' is already defined at " + std::to_string(p.line) + ":" +
                                     std::to_string(p.column));
    }
  }

  void constraint_def() {
    take();  // constraint
    const Token name = expect(Tok::Ident, "constraint name");
    if (is_quantifier(name)) throw ParseError(name.pos, "'" + name.text + "' is reserved");
    check_new_name(name);
    expect_keyword("arity");
    const Token num = expect(Tok::Number, "arity");
    if (num.text.size() > 3 || std::stoi(num.text) < 1 || std::stoi(num.text) > kMaxArity) {
      throw ParseError(num.pos, "arity must be between 1 and " + std::to_string(kMaxArity));
    }
    const int arity = std::stoi(num.text);
    expect(Tok::Define, "':='");
    ConstraintRef c;
    if (cur().kind == Tok::Ident && cur().text == "table") {
      take();
      const Token bits = expect(Tok::Number, "table bits");
      const std::size_t want = std::size_t{1} << arity;
      if (bits.text.size() != want) {
        throw ParseError(bits.pos, "table for arity " + std::to_string(arity) + " needs " + std::to_string(want) +
                                       " entries, found " + std::to_string(bits.text.size()));
      }
      if (bits.text.find_first_not_of("01") != std::string::npos) {
        throw ParseError(bits.pos, "table may only contain 0 and 1");
      }
      c = make_constraint(name.text, arity, bits.text);
    } else if (cur().kind == Tok::Ident && cur().text == "formula") {
      take();
      auto f = formula(arity, 0);
      std::string bits(std::size_t{1} << arity, '0');
      for (std::uint32_t r = 0; r < bits.size(); ++r) {
        if (f->eval(r, arity)) bits[r] = '1';
      }
      c = make_constraint(name.text, arity, bits);
    } else {
      throw ParseError(cur().pos, "expected 'table' or 'formula', found " + describe(cur()));
    }
    expect(Tok::Semi, "';'");
    doc_.constraints.push_back(c);
    doc_.positions[name.text] = name.pos;
  }

  void expr_def() {
    take();  // expr
    const Token name = expect(Tok::Ident, "expression name");
    check_new_name(name);
    expect(Tok::Define, "':='");
    auto e = expression_body();
    doc_.expressions.push_back({name.text, std::move(e)});
    doc_.positions[name.text] = name.pos;
  }

  QuantifiedExpression expression_body() {
    std::vector<QuantifierBlock> prefix;
    std::map<std::string, SourcePosition> bound;
    while (is_quantifier(cur())) {
      const Token q = take();
      QuantifierBlock block;
      block.quantifier = q.text == "E" ? Quantifier::Exists : Quantifier::Forall;
      if (!prefix.empty() && prefix.back().quantifier == block.quantifier) {
        throw ParseError(q.pos, "adjacent quantifier blocks must alternate; merge the variables into one block");
      }
      while (cur().kind == Tok::Ident && !is_quantifier(cur())) {
        const Token v = take();
        if (bound.count(v.text)) throw ParseError(v.pos, "duplicate variable '" + v.text + "' in prefix");
        bound[v.text] = v.pos;
        block.vars.push_back(v.text);
        accept(Tok::Comma);
      }
      if (block.vars.empty()) throw ParseError(cur().pos, "quantifier block needs at least one variable");
      prefix.push_back(std::move(block));
      accept(Tok::Semi);
    }
    expect(Tok::Colon, "':' before the matrix");
    std::vector<ConstraintApplication> matrix;
    if (cur().kind != Tok::Semi) {
      do {
        matrix.push_back(application(bound));
      } while (accept(Tok::Comma));
    }
    expect(Tok::Semi, "';'");
    return QuantifiedExpression(std::move(prefix), std::move(matrix));
  }

  ConstraintApplication application(const std::map<std::string, SourcePosition>& bound) {
    const Token name = expect(Tok::Ident, "constraint name");
    ConstraintRef c = doc_.find_constraint(name.text);
    if (!c) throw ParseError(name.pos, "unknown constraint '" + name.text + "'");
    expect(Tok::LParen, "'('");
    std::vector<Argument> args;
    do {
      const Token a = take();
      if (a.kind == Tok::Number && (a.text == "0" || a.text == "1")) {
        args.push_back(Argument::constant(a.text == "1"));
      } else if (a.kind == Tok::Ident && !is_quantifier(a)) {
        if (!bound.count(a.text)) throw ParseError(a.pos, "free variable '" + a.text + "'");
        args.push_back(Argument::variable(a.text));
      } else {
        throw ParseError(a.pos, "expected a variable, 0 or 1, found " + describe(a));
      }
    } while (accept(Tok::Comma));
    expect(Tok::RParen, "')'");
    if (static_cast<int>(args.size()) != c->arity()) {
      throw ParseError(name.pos, "'" + name.text + "' has arity " + std::to_string(c->arity()) + " but got " +
                                     std::to_string(args.size()) + " arguments");
    }
    return ConstraintApplication(c, std::move(args));
  }

  // Precedence climbing; level 0 is loosest.
  std::unique_ptr<FormulaNode> formula(int arity, int level) {
    if (++depth_ > 256) throw ParseError(cur().pos, "formula nested too deeply");
    std::unique_ptr<FormulaNode> out;
    switch (level) {
      case 0:
        out = binary_chain(arity, 0, Tok::Iff, FormulaNode::Iff);
        break;
      case 1: {
        out = formula(arity, 2);
        if (accept(Tok::Implies)) {
          auto n = std::make_unique<FormulaNode>();
          n->kind = FormulaNode::Implies;
          n->lhs = std::move(out);
          n->rhs = formula(arity, 1);
          out = std::move(n);
        }
        break;
      }
      case 2:
        out = binary_chain(arity, 2, Tok::Or, FormulaNode::Or);
        break;
      case 3:
        out = binary_chain(arity, 3, Tok::Xor, FormulaNode::Xor);
        break;
      case 4:
        out = binary_chain(arity, 4, Tok::And, FormulaNode::And);
        break;
      default:
        out = unary(arity);
        break;
    }
    --depth_;
    return out;
  }

  std::unique_ptr<FormulaNode> binary_chain(int arity, int level, Tok op, FormulaNode::Kind kind) {
    auto lhs = formula(arity, level + 1);
    while (accept(op)) {
      auto n = std::make_unique<FormulaNode>();
      n->kind = kind;
      n->lhs = std::move(lhs);
      n->rhs = formula(arity, level + 1);
      lhs = std::move(n);
    }
    return lhs;
  }

  std::unique_ptr<FormulaNode> unary(int arity) {
    const Token t = take();
    auto n = std::make_unique<FormulaNode>();
    if (t.kind == Tok::Not) {
      n->kind = FormulaNode::Not;
      n->lhs = formula(arity, 5);
      return n;
    }
    if (t.kind == Tok::LParen) {
      auto inner = formula(arity, 0);
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Number && (t.text == "0" || t.text == "1")) {
      n->kind = FormulaNode::Const;
      n->index = t.text == "1";
      return n;
    }
    if (t.kind == Tok::Ident && t.text.size() >= 2 && t.text[0] == 'v' &&
        t.text.find_first_not_of("0123456789", 1) == std::string::npos && t.text.size() <= 4) {
      const int i = std::stoi(t.text.substr(1));
      if (i < 1 || i > arity) {
        throw ParseError(t.pos, "'" + t.text + "' is out of range for arity " + std::to_string(arity));
      }
      n->kind = FormulaNode::Var;
      n->index = i - 1;
      return n;
    }
    throw ParseError(t.pos, "expected v1..v" + std::to_string(arity) + ", 0, 1, '!' or '(' in formula, found " +
                                describe(t));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  SourceDocument& doc_;
};

}  // namespace detail

inline SourceDocument parse_document(std::string_view text) {
  SourceDocument doc;
  detail::Parser p(detail::Lexer(text).run(), doc);
  p.document();
  return doc;
}

/// Parses a lone `prefix : matrix ;`, resolving constraint names against
/// `context` (and the presets).
inline QuantifiedExpression parse_expression(std::string_view text, const SourceDocument& context = {}) {
  SourceDocument doc = context;
  detail::Parser p(detail::Lexer(text).run(), doc);
  return p.lone_expression();
}

namespace detail {

inline std::string render_argument(const Argument& a) {
  return a.is_constant() ? (a.constant_value() ? "1" : "0") : a.name();
}

}  // namespace detail

inline std::string render_application(const ConstraintApplication& app) {
  std::string out = app.constraint()->name() + "(";
  for (std::size_t i = 0; i < app.args().size(); ++i) {
    if (i) out += ", ";
    out += detail::render_argument(app.args()[i]);
  }
  return out + ")";
}

inline std::string render_expression(const QuantifiedExpression& expr) {
  std::string out;
  for (std::size_t b = 0; b < expr.prefix().size(); ++b) {
    const auto& block = expr.prefix()[b];
    if (b) out += " ; ";
    out += block.quantifier == Quantifier::Exists ? "E " : "A ";
    for (std::size_t i = 0; i < block.vars.size(); ++i) {
      if (i) out += ", ";
      out += block.vars[i];
    }
  }
  out += expr.prefix().empty() ? ":" : " :";
  for (std::size_t i = 0; i < expr.matrix().size(); ++i) {
    out += i ? ", " : " ";
    out += render_application(expr.matrix()[i]);
  }
  return out + ";";
}

inline std::string render_constraint(const Constraint& c) {
  return "constraint " + c.name() + " arity " + std::to_string(c.arity()) + " := table " + c.bits() + ";";
}

/// Renders named expressions as a self-contained document: every constraint
/// that is not a built-in preset is emitted as a table definition first.
inline std::string render_document(const std::vector<NamedExpression>& exprs,
                                   const std::vector<ConstraintRef>& extra_constraints = {}) {
  std::vector<ConstraintRef> defs;
  auto note = [&](const ConstraintRef& c) {
    if (presets::is_preset(*c)) return;
    for (const auto& d : defs) {
      if (same_constraint(d, c)) return;
    }
    defs.push_back(c);
  };
  for (const auto& c : extra_constraints) note(c);
  for (const auto& e : exprs) {
    for (const auto& c : e.expression.constraints()) note(c);
  }
  std::string out;
  for (const auto& c : defs) out += render_constraint(*c) + "\n";
  for (const auto& e : exprs) out += "expr " + e.name + " := " + render_expression(e.expression) + "\n";
  return out;
}

}  // namespace qcsp
