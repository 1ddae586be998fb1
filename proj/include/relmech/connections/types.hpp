#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relmech/connections/jet_function.hpp"
#include "relmech/expr/expression.hpp"

namespace relmech {

/// An explicit second-order equation q^i_tt = xi^i(t, q, v).
class DynamicEquation {
 public:
  explicit DynamicEquation(JetFunction xi);

  /// Requires one expression per dimension.
  static DynamicEquation from_expressions(std::vector<expr::Expression> xi);

  /// xi = 0 in dimension m.
  static DynamicEquation zero(std::size_t m);

  std::size_t dimension() const { return xi_.dimension(); }
  const JetFunction& function() const { return xi_; }

  /// The defining expressions when the equation was parsed, else empty.
  const std::optional<std::vector<expr::Expression>>& expressions() const { return source_; }

  std::vector<double> operator()(const JetPoint1& p) const { return xi_(p); }
  std::vector<HyperDual> operator()(const JetArgs& p) const { return xi_(p); }

 private:
  JetFunction xi_;
  std::optional<std::vector<expr::Expression>> source_;
};

/// A reference frame: a velocity field Gamma^i(t, q), i.e. a connection on
/// the configuration bundle over time.
class ReferenceFrame {
 public:
  /// `gamma` must ignore the velocity slot; it is always called with v empty.
  explicit ReferenceFrame(JetFunction gamma);

  /// Rejects velocity-dependent expressions.
  static ReferenceFrame from_expressions(std::vector<expr::Expression> gamma);

  static ReferenceFrame zero(std::size_t m);

  std::size_t dimension() const { return gamma_.dimension(); }

  /// The field as a JetFunction of (t, q).
  const JetFunction& function() const { return gamma_; }

  std::vector<double> operator()(double t, std::span<const double> q) const;
  std::vector<HyperDual> operator()(const HyperDual& t, std::span<const HyperDual> q) const;

  /// Partial derivatives of every component at (t, q).
  std::vector<HyperDual> dt(const HyperDual& t, std::span<const HyperDual> q) const;
  std::vector<HyperDual> dq(const HyperDual& t, std::span<const HyperDual> q, std::size_t j) const;

 private:
  JetFunction gamma_;
};

/// Slot of the component gamma^i_lambda in a connection's output vector.
inline std::size_t connection_slot(std::size_t i, std::size_t lambda, std::size_t m) {
  return lambda * m + i;
}

/// Pointwise values gamma^i_lambda, lambda = 0 (time) .. m.
struct ConnectionComponents {
  std::size_t m = 0;
  std::vector<double> data;

  double operator()(std::size_t i, std::size_t lambda) const {
    return data[connection_slot(i, lambda, m)];
  }
};

/// A dynamic connection: (m+1)*m components gamma^i_lambda(t, q, v) laid out
/// by connection_slot.
class DynamicConnection {
 public:
  explicit DynamicConnection(JetFunction components);

  /// `components[lambda][i]` is the expression for gamma^i_lambda.
  static DynamicConnection from_expressions(
      const std::vector<std::vector<expr::Expression>>& components);

  std::size_t dimension() const { return gamma_.dimension(); }
  const JetFunction& function() const { return gamma_; }

  ConnectionComponents operator()(const JetPoint1& p) const;
  std::vector<HyperDual> operator()(const JetArgs& p) const { return gamma_(p); }

 private:
  JetFunction gamma_;
};

/// A second-order connection d_t + chi^i d_i + xi^i d^t_i on the first jet
/// manifold. It is holonomic when chi^i = v^i.
struct SecondOrderConnection {
  JetFunction chi;
  JetFunction xi;
  bool holonomic = false;
};

/// T^k_i at a point.
struct TorsionTensor {
  std::size_t m = 0;
  std::vector<double> data;  // row-major, k then i

  double operator()(std::size_t k, std::size_t i) const { return data[k * m + i]; }
  double max_abs() const;
};

/// R^i_{lambda mu} at a point. Only lambda < mu is stored; the other half is
/// read as the negation and the diagonal as zero, so antisymmetry is exact.
class CurvatureTensor {
 public:
  explicit CurvatureTensor(std::size_t m);

  std::size_t dimension() const { return m_; }
  double operator()(std::size_t i, std::size_t lambda, std::size_t mu) const;
  /// Requires lambda < mu.
  void set(std::size_t i, std::size_t lambda, std::size_t mu, double value);
  double max_abs() const;

 private:
  std::size_t pair_index(std::size_t lambda, std::size_t mu) const;

  std::size_t m_;
  std::vector<double> upper_;
};

/// xi^i = b0^i + b1^i_j v^j + b2^i_jk v^j v^k read off at v = 0.
struct QuadraticFit {
  std::vector<double> b0;
  std::vector<std::vector<double>> b1;               // [i][j]
  std::vector<std::vector<std::vector<double>>> b2;  // [i][j][k], symmetric in j, k
  bool is_quadratic = false;
  double max_remainder = 0.0;

  double evaluate(std::size_t i, std::span<const double> v) const;
};

}  // namespace relmech
