#pragma once

// Test-only random expressions. Each generated tree prints to the scenario
// expression syntax (fully parenthesized) and evaluates itself in long double,
// independently of the library's evaluator, so it can serve as a
// finite-difference oracle for the AD paths.

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "relmech/expr/expression.hpp"

namespace relmech::testing {

class RandomExpression {
 public:
  enum class Op { var, num, add, sub, mul, div, pow_int, pow_real, pow_var, sin, cos, exp, log, sqrt };

  /// `names[k]` is the source name of variable k.
  static std::shared_ptr<const RandomExpression> generate(std::mt19937_64& rng,
                                                          const std::vector<std::string>& names,
                                                          int depth) {
    auto node = std::make_shared<RandomExpression>();
    std::uniform_int_distribution<int> leaf_pick(0, 3);
    if (depth <= 0 || (depth < 3 && leaf_pick(rng) == 0)) {
      if (leaf_pick(rng) == 0) {
        node->op_ = Op::num;
        node->value_ = std::round(std::uniform_real_distribution<double>(-2.0, 2.0)(rng) * 8.0) / 8.0;
      } else {
        node->op_ = Op::var;
        node->var_ = std::uniform_int_distribution<std::size_t>(0, names.size() - 1)(rng);
        node->name_ = names[node->var_];
      }
      return node;
    }
    const int pick = std::uniform_int_distribution<int>(0, 11)(rng);
    node->op_ = static_cast<Op>(pick + 2);
    node->a_ = generate(rng, names, depth - 1);
    switch (node->op_) {
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
      case Op::pow_var:
        node->b_ = generate(rng, names, depth - 1);
        break;
      case Op::pow_int:
        node->value_ = std::uniform_int_distribution<int>(2, 3)(rng);
        break;
      case Op::pow_real:
        node->value_ = std::uniform_real_distribution<double>(0.5, 2.5)(rng);
        node->value_ = std::round(node->value_ * 4.0) / 4.0;
        break;
      default:
        break;
    }
    return node;
  }

  /// Source text. Partial operations are wrapped so every point is valid:
  /// division by (2 + sin b), log and sqrt of (1 + a^2), real and variable
  /// powers of (1.5 + cos a), exp of sin a.
  std::string source() const {
    switch (op_) {
      case Op::var: return name_;
      case Op::num: return "(" + expr::format_number(value_) + ")";
      case Op::add: return "(" + a_->source() + " + " + b_->source() + ")";
      case Op::sub: return "(" + a_->source() + " - " + b_->source() + ")";
      case Op::mul: return "(" + a_->source() + "*" + b_->source() + ")";
      case Op::div: return "(" + a_->source() + "/(2 + sin(" + b_->source() + ")))";
      case Op::pow_int: return "(" + a_->source() + ")^" + expr::format_number(value_);
      case Op::pow_real:
        return "(1.5 + cos(" + a_->source() + "))^" + expr::format_number(value_);
      case Op::pow_var:
        return "(1.5 + cos(" + a_->source() + "))^sin(" + b_->source() + ")";
      case Op::sin: return "sin(" + a_->source() + ")";
      case Op::cos: return "cos(" + a_->source() + ")";
      case Op::exp: return "exp(sin(" + a_->source() + "))";
      case Op::log: return "log(1 + (" + a_->source() + ")^2)";
      case Op::sqrt: return "sqrt(1 + (" + a_->source() + ")^2)";
    }
    return "";
  }

  long double eval(const std::vector<long double>& x) const {
    switch (op_) {
      case Op::var: return x[var_];
      case Op::num: return value_;
      case Op::add: return a_->eval(x) + b_->eval(x);
      case Op::sub: return a_->eval(x) - b_->eval(x);
      case Op::mul: return a_->eval(x) * b_->eval(x);
      case Op::div: return a_->eval(x) / (2.0L + std::sin(b_->eval(x)));
      case Op::pow_int: return std::pow(a_->eval(x), static_cast<long double>(value_));
      case Op::pow_real:
        return std::pow(1.5L + std::cos(a_->eval(x)), static_cast<long double>(value_));
      case Op::pow_var: return std::pow(1.5L + std::cos(a_->eval(x)), std::sin(b_->eval(x)));
      case Op::sin: return std::sin(a_->eval(x));
      case Op::cos: return std::cos(a_->eval(x));
      case Op::exp: return std::exp(std::sin(a_->eval(x)));
      case Op::log: {
        const long double u = a_->eval(x);
        return std::log(1.0L + u * u);
      }
      case Op::sqrt: {
        const long double u = a_->eval(x);
        return std::sqrt(1.0L + u * u);
      }
    }
    return 0.0L;
  }

 private:
  Op op_ = Op::num;
  double value_ = 0.0;
  std::size_t var_ = 0;
  std::string name_;
  std::shared_ptr<const RandomExpression> a_;
  std::shared_ptr<const RandomExpression> b_;
};

/// Central-difference gradient and Hessian of `f` at `x` with step h,
/// evaluated in long double.
template <class F>
void central_differences(F&& f, const std::vector<long double>& x, long double h,
                         std::vector<double>& grad, std::vector<std::vector<double>>& hess) {
  const std::size_t n = x.size();
  grad.assign(n, 0.0);
  hess.assign(n, std::vector<double>(n, 0.0));
  auto shifted = [&](std::size_t i, long double di, std::size_t j, long double dj) {
    auto y = x;
    y[i] += di;
    y[j] += dj;
    return f(y);
  };
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] = static_cast<double>((shifted(i, h, i, 0) - shifted(i, -h, i, 0)) / (2 * h));
    for (std::size_t j = 0; j < n; ++j)
      hess[i][j] = static_cast<double>((shifted(i, h, j, h) - shifted(i, h, j, -h) -
                                        shifted(i, -h, j, h) + shifted(i, -h, j, -h)) /
                                       (4 * h * h));
  }
}

}  // namespace relmech::testing
