#pragma once

// Test-side oracles built only on plain double evaluation of expressions and
// central differences, so they share no derivative code with the library.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "relmech/bundle/jet_point.hpp"
#include "relmech/expr/evaluate.hpp"
#include "relmech/expr/expression.hpp"
#include "support/random_expression.hpp"

namespace relmech::testing {

inline std::vector<expr::Expression> parse_all(const std::vector<std::string>& src, std::size_t m,
                                               const expr::ConstantTable& c = {}) {
  std::vector<expr::Expression> out;
  for (const auto& s : src) out.push_back(expr::parse_expression(s, m, c));
  return out;
}

inline std::vector<std::string> jet_names(std::size_t m) {
  std::vector<std::string> names{"t"};
  for (std::size_t i = 1; i <= m; ++i) names.push_back("q" + std::to_string(i));
  for (std::size_t i = 1; i <= m; ++i) names.push_back("v" + std::to_string(i));
  return names;
}

/// m random smooth expressions over t, q, v.
inline std::vector<std::string> random_sources(std::mt19937_64& rng, std::size_t m, int depth,
                                               bool positions_only = false) {
  auto names = jet_names(m);
  if (positions_only) names.resize(m + 1);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back(RandomExpression::generate(rng, names, depth)->source());
  return out;
}

/// A random equation quadratic in v: b0 + b1 v + b2 v v with random smooth
/// coefficient functions of (t, q).
inline std::vector<std::string> random_quadratic_sources(std::mt19937_64& rng, std::size_t m) {
  auto coef = [&] {
    const auto names = jet_names(m);
    const std::vector<std::string> tq(names.begin(), names.begin() + static_cast<long>(m + 1));
    return "(" + RandomExpression::generate(rng, tq, 2)->source() + ")";
  };
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m; ++i) {
    std::string s = coef();
    for (std::size_t j = 1; j <= m; ++j) {
      s += " + " + coef() + "*v" + std::to_string(j);
      for (std::size_t k = j; k <= m; ++k)
        s += " + " + coef() + "*v" + std::to_string(j) + "*v" + std::to_string(k);
    }
    out.push_back(s);
  }
  return out;
}

/// Variables in the order t, q1..qm, v1..vm packed into one vector.
inline std::vector<double> pack(const JetPoint1& p) {
  std::vector<double> x{p.t};
  x.insert(x.end(), p.q.begin(), p.q.end());
  x.insert(x.end(), p.v.begin(), p.v.end());
  return x;
}

inline JetPoint1 unpack(const std::vector<double>& x, std::size_t m) {
  JetPoint1 p;
  p.t = x[0];
  p.q.assign(x.begin() + 1, x.begin() + 1 + static_cast<long>(m));
  p.v.assign(x.begin() + 1 + static_cast<long>(m), x.end());
  return p;
}

/// Central difference of f at p in packed variable `var` (0 = t, 1..m = q, m+1.. = v).
inline double fd(const std::function<double(const JetPoint1&)>& f, const JetPoint1& p,
                 std::size_t var, double h = 1e-5) {
  auto x = pack(p);
  const std::size_t m = p.q.size();
  x[var] += h;
  const double up = f(unpack(x, m));
  x[var] -= 2 * h;
  const double down = f(unpack(x, m));
  return (up - down) / (2 * h);
}

inline std::function<double(const JetPoint1&)> as_function(const expr::Expression& e) {
  return [e](const JetPoint1& p) { return expr::evaluate(e, p); };
}

inline JetPoint1 random_point(std::mt19937_64& rng, std::size_t m, double r = 1.5) {
  std::uniform_real_distribution<double> u(-r, r);
  JetPoint1 p;
  p.t = u(rng);
  for (std::size_t i = 0; i < m; ++i) p.q.push_back(u(rng));
  for (std::size_t i = 0; i < m; ++i) p.v.push_back(u(rng));
  return p;
}

inline bool close(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

}  // namespace relmech::testing
