#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "relmech/expr/expression.hpp"

namespace relmech::expr {
namespace {

// Binding strength used to decide parenthesization.
int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::add:
    case NodeKind::subtract:
      return 1;
    case NodeKind::multiply:
    case NodeKind::divide:
      return 2;
    case NodeKind::negate:
      return 3;
    case NodeKind::power:
      return 4;
    default:
      return 5;
  }
}

const char* function_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::sin: return "sin";
    case NodeKind::cos: return "cos";
    case NodeKind::exp: return "exp";
    case NodeKind::log: return "log";
    case NodeKind::sqrt: return "sqrt";
    default: return nullptr;
  }
}

const char* operator_text(NodeKind kind) {
  switch (kind) {
    case NodeKind::add: return " + ";
    case NodeKind::subtract: return " - ";
    case NodeKind::multiply: return "*";
    case NodeKind::divide: return "/";
    case NodeKind::power: return "^";
    default: return nullptr;
  }
}

void print(const Node& n, std::string& out);

void print_wrapped(const Node& n, bool parens, std::string& out) {
  if (parens) out += '(';
  print(n, out);
  if (parens) out += ')';
}

void print(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::number:
      if (std::signbit(n.value)) {
        // Only programmatic trees can hold negative literals; the parser
        // produces negate(number) instead.
        out += '(' + format_number(n.value) + ')';
      } else {
        out += format_number(n.value);
      }
      return;
    case NodeKind::constant:
      out += n.name;
      return;
    case NodeKind::variable:
      out += to_string(n.var);
      return;
    case NodeKind::negate:
      out += '-';
      print_wrapped(*n.lhs, precedence(*n.lhs) < 3, out);
      return;
    case NodeKind::power:
      print_wrapped(*n.lhs, precedence(*n.lhs) <= 4, out);
      out += '^';
      print_wrapped(*n.rhs, precedence(*n.rhs) < 3, out);
      return;
    case NodeKind::add:
    case NodeKind::subtract:
    case NodeKind::multiply:
    case NodeKind::divide: {
      const int p = precedence(n);
      print_wrapped(*n.lhs, precedence(*n.lhs) < p, out);
      out += operator_text(n.kind);
      print_wrapped(*n.rhs, precedence(*n.rhs) <= p, out);
      return;
    }
    default:
      out += function_name(n.kind);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      return;
  }
}

bool same_tree(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::number:
      return a.value == b.value && std::signbit(a.value) == std::signbit(b.value);
    case NodeKind::constant:
      return a.name == b.name && a.value == b.value;
    case NodeKind::variable:
      return a.var == b.var;
    default:
      break;
  }
  if (!same_tree(*a.lhs, *b.lhs)) return false;
  if (a.rhs || b.rhs) return a.rhs && b.rhs && same_tree(*a.rhs, *b.rhs);
  return true;
}

bool depends(const Node& n, VarKind kind) {
  if (n.constant) return false;
  if (n.kind == NodeKind::variable) return n.var.kind == kind;
  return (n.lhs && depends(*n.lhs, kind)) || (n.rhs && depends(*n.rhs, kind));
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("format_number: non-finite value");
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw std::runtime_error("format_number: to_chars failed");
  return std::string(buf.data(), ptr);
}

std::string to_string(const Variable& var) {
  switch (var.kind) {
    case VarKind::time: return "t";
    case VarKind::position: return "q" + std::to_string(var.index + 1);
    case VarKind::velocity: return "v" + std::to_string(var.index + 1);
  }
  return "?";
}

std::string to_string(const Node& node) {
  std::string out;
  print(node, out);
  return out;
}

std::string Expression::to_string() const { return expr::to_string(*root_); }

bool Expression::depends_on(VarKind kind) const { return depends(*root_, kind); }

bool operator==(const Expression& a, const Expression& b) {
  return a.dimension_ == b.dimension_ && same_tree(*a.root_, *b.root_);
}

}  // namespace relmech::expr
