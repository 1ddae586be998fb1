#pragma once

// The scenario expression language.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | func '(' expr ')' | '(' expr ')'
//
// Names are the time t, positions q1..qm, velocities v1..vm, the built-in pi
// and entries of the caller's constant table. func is one of sin, cos, exp,
// log, sqrt. '^' binds tighter than unary minus and is right-associative, so
// -x^2 is -(x^2) and a^b^c is a^(b^c).

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace relmech::expr {

enum class VarKind { time, position, velocity };

/// A variable reference. `index` is zero-based for positions and velocities
/// and unused for time.
struct Variable {
  VarKind kind = VarKind::time;
  std::size_t index = 0;

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Printable name of a variable, e.g. "q2".
std::string to_string(const Variable& var);

enum class NodeKind {
  number,
  constant,
  variable,
  negate,
  add,
  subtract,
  multiply,
  divide,
  power,
  sin,
  cos,
  exp,
  log,
  sqrt,
};

struct Node {
  NodeKind kind = NodeKind::number;
  double value = 0.0;        // literal, or the bound value of a constant
  std::string name;          // constant name
  Variable var;              // variable reference
  std::shared_ptr<const Node> lhs;  // sole operand of unary nodes
  std::shared_ptr<const Node> rhs;
  bool constant = true;      // true when no variable occurs below
};

using ConstantTable = std::map<std::string, double, std::less<>>;

/// An immutable expression tree over t, q1..qm, v1..vm.
class Expression {
 public:
  Expression(std::shared_ptr<const Node> root, std::size_t dimension)
      : root_(std::move(root)), dimension_(dimension) {}

  const Node& root() const { return *root_; }
  std::size_t dimension() const { return dimension_; }

  /// Canonical text with minimal parentheses; parses back to the same tree.
  std::string to_string() const;

  bool depends_on(VarKind kind) const;
  bool is_constant() const { return root_->constant; }

  /// Structural identity of the trees (dimension included).
  friend bool operator==(const Expression& a, const Expression& b);

 private:
  std::shared_ptr<const Node> root_;
  std::size_t dimension_;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { syntax, unknown_identifier, index_out_of_range };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// The message without the position prefix.
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

/// Parses `source` over dimension `m` (m >= 1). Names found in `constants`
/// become constant nodes that remember their name.
Expression parse_expression(std::string_view source, std::size_t m,
                            const ConstantTable& constants = {});

/// Printable text of a subtree.
std::string to_string(const Node& node);

/// Shortest decimal text that reads back to exactly `x`.
std::string format_number(double x);

}  // namespace relmech::expr
