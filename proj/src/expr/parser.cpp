#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <system_error>

#include "relmech/expr/expression.hpp"

namespace relmech::expr {
namespace {

std::string position_prefix(std::size_t line, std::size_t column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
}

enum class Tok { number, name, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind = Tok::end;
  std::string_view text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    if (pos_ >= src_.size()) return tok;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(tok);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance();
      tok.kind = Tok::name;
      tok.text = src_.substr(start, pos_ - start);
      return tok;
    }
    tok.text = src_.substr(pos_, 1);
    switch (c) {
      case '+': tok.kind = Tok::plus; break;
      case '-': tok.kind = Tok::minus; break;
      case '*': tok.kind = Tok::star; break;
      case '/': tok.kind = Tok::slash; break;
      case '^': tok.kind = Tok::caret; break;
      case '(': tok.kind = Tok::lparen; break;
      case ')': tok.kind = Tok::rparen; break;
      default:
        throw ParseError(ParseError::Kind::syntax, line_, column_,
                         std::string("unexpected character '") + c + "'");
    }
    advance();
    return tok;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  bool digit_at(std::size_t i) const {
    return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
  }

  Token lex_number(Token tok) {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (digit_at(end)) ++end;
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      while (digit_at(end)) ++end;
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
      if (digit_at(e)) {
        end = e;
        while (digit_at(end)) ++end;
      }
    }
    const std::string_view text = src_.substr(start, end - start);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text == ".")
      throw ParseError(ParseError::Kind::syntax, line_, column_,
                       "malformed number '" + std::string(text) + "'");
    while (pos_ < end) advance();
    tok.kind = Tok::number;
    tok.text = text;
    tok.number = value;
    return tok;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_unary(NodeKind kind, NodePtr operand) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->constant = operand->constant;
  n->lhs = std::move(operand);
  return n;
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->constant = lhs->constant && rhs->constant;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

std::optional<NodeKind> function_kind(std::string_view name) {
  if (name == "sin") return NodeKind::sin;
  if (name == "cos") return NodeKind::cos;
  if (name == "exp") return NodeKind::exp;
  if (name == "log") return NodeKind::log;
  if (name == "sqrt") return NodeKind::sqrt;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view src, std::size_t m, const ConstantTable& constants)
      : lexer_(src), m_(m), constants_(constants) {
    tok_ = lexer_.next();
  }

  NodePtr parse() {
    if (tok_.kind == Tok::end) fail(ParseError::Kind::syntax, tok_, "empty expression");
    NodePtr root = expression();
    if (tok_.kind != Tok::end)
      fail(ParseError::Kind::syntax, tok_, "unexpected '" + std::string(tok_.text) + "'");
    return root;
  }

 private:
  [[noreturn]] static void fail(ParseError::Kind kind, const Token& at, const std::string& msg) {
    throw ParseError(kind, at.line, at.column, msg);
  }

  void shift() { tok_ = lexer_.next(); }

  NodePtr expression() {
    NodePtr lhs = term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      const NodeKind kind = tok_.kind == Tok::plus ? NodeKind::add : NodeKind::subtract;
      shift();
      lhs = make_binary(kind, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      const NodeKind kind = tok_.kind == Tok::star ? NodeKind::multiply : NodeKind::divide;
      shift();
      lhs = make_binary(kind, lhs, unary());
    }
    return lhs;
  }

  NodePtr unary() {
    if (tok_.kind == Tok::minus) {
      shift();
      return make_unary(NodeKind::negate, unary());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (tok_.kind == Tok::caret) {
      shift();
      return make_binary(NodeKind::power, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    const Token tok = tok_;
    switch (tok.kind) {
      case Tok::number: {
        shift();
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::number;
        n->value = tok.number;
        return n;
      }
      case Tok::lparen: {
        shift();
        NodePtr inner = expression();
        expect_rparen(tok);
        return inner;
      }
      case Tok::name:
        shift();
        return name(tok);
      case Tok::end:
        fail(ParseError::Kind::syntax, tok, "unexpected end of expression");
      default:
        fail(ParseError::Kind::syntax, tok, "unexpected '" + std::string(tok.text) + "'");
    }
  }

  void expect_rparen(const Token& open) {
    if (tok_.kind != Tok::rparen) {
      if (tok_.kind == Tok::end)
        fail(ParseError::Kind::syntax, open, "unbalanced '('");
      fail(ParseError::Kind::syntax, tok_, "expected ')' but found '" + std::string(tok_.text) + "'");
    }
    shift();
  }

  NodePtr name(const Token& tok) {
    const std::string_view id = tok.text;
    if (const auto fn = function_kind(id)) {
      if (tok_.kind != Tok::lparen)
        fail(ParseError::Kind::syntax, tok_, "expected '(' after '" + std::string(id) + "'");
      const Token open = tok_;
      shift();
      NodePtr arg = expression();
      expect_rparen(open);
      return make_unary(*fn, std::move(arg));
    }
    if (id == "t") return variable(Variable{VarKind::time, 0});
    if (const auto var = indexed_variable(tok)) return variable(*var);
    if (const auto it = constants_.find(id); it != constants_.end()) {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::constant;
      n->name = it->first;
      n->value = it->second;
      return n;
    }
    if (id == "pi") {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::constant;
      n->name = "pi";
      n->value = std::numbers::pi;
      return n;
    }
    fail(ParseError::Kind::unknown_identifier, tok, "unknown identifier '" + std::string(id) + "'");
  }

  // q<k> or v<k> with a decimal index.
  std::optional<Variable> indexed_variable(const Token& tok) const {
    const std::string_view id = tok.text;
    if (id.size() < 2 || (id[0] != 'q' && id[0] != 'v')) return std::nullopt;
    for (std::size_t i = 1; i < id.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(id[i]))) return std::nullopt;
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), k);
    if (ec != std::errc() || k == 0 || k > m_)
      fail(ParseError::Kind::index_out_of_range, tok,
           "variable index out of range: '" + std::string(id) + "' with dimension " +
               std::to_string(m_));
    return Variable{id[0] == 'q' ? VarKind::position : VarKind::velocity, k - 1};
  }

  static NodePtr variable(Variable var) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::variable;
    n->var = var;
    n->constant = false;
    return n;
  }

  Lexer lexer_;
  Token tok_;
  std::size_t m_;
  const ConstantTable& constants_;
};

}  // namespace

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(position_prefix(line, column) + message),
      kind_(kind),
      line_(line),
      column_(column),
      detail_(message) {}

Expression parse_expression(std::string_view source, std::size_t m, const ConstantTable& constants) {
  if (m == 0) throw std::invalid_argument("parse_expression: dimension must be positive");
  Parser parser(source, m, constants);
  return Expression(parser.parse(), m);
}

}  // namespace relmech::expr
