#pragma once

// Vector-valued functions on the first jet manifold and their exact partial
// derivatives.
//
// Every evaluator in the library (equations, frames, connections, and
// everything derived from them) is a JetFunction over hyper-dual arguments.
// A derivative seeds one fresh infinitesimal, the next index above those the
// arguments already carry, so derived evaluators can differentiate each other
// to any depth without interference.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "relmech/bundle/jet_args.hpp"
#include "relmech/bundle/jet_point.hpp"
#include "relmech/expr/expression.hpp"

namespace relmech {

class JetFunction {
 public:
  using Body = std::function<std::vector<HyperDual>(const JetArgs&)>;

  JetFunction() = default;
  JetFunction(std::size_t dimension, std::size_t outputs, Body body);

  /// One output per expression.
  static JetFunction from_expressions(std::vector<expr::Expression> exprs, std::size_t m);

  std::size_t dimension() const { return dimension_; }
  std::size_t outputs() const { return outputs_; }

  /// `p.v` may be empty for functions that ignore velocities (frames).
  std::vector<HyperDual> operator()(const JetArgs& p) const;
  std::vector<double> operator()(const JetPoint1& p) const;

 private:
  std::size_t dimension_ = 0;
  std::size_t outputs_ = 0;
  std::shared_ptr<const Body> body_;
};

/// A tangent direction (dt, dq, dv) at a jet point. Empty dq or dv means zero.
struct Direction {
  HyperDual t;
  std::vector<HyperDual> q;
  std::vector<HyperDual> v;
};

/// Exact derivative of f at p along d.
std::vector<HyperDual> directional(const JetFunction& f, const JetArgs& p, const Direction& d);

std::vector<HyperDual> partial_t(const JetFunction& f, const JetArgs& p);
std::vector<HyperDual> partial_q(const JetFunction& f, const JetArgs& p, std::size_t j);
std::vector<HyperDual> partial_v(const JetFunction& f, const JetArgs& p, std::size_t j);

/// d_t = dt + v^j dq_j (the velocity slot is held fixed).
std::vector<HyperDual> total_derivative(const JetFunction& f, const JetArgs& p);

/// dt + field^j dq_j, the derivative along the flow of a frame.
std::vector<HyperDual> derivative_along(const JetFunction& f, const JetArgs& p,
                                        std::span<const HyperDual> field);

/// d^2 f / dv_j dv_k.
std::vector<HyperDual> second_partial_v(const JetFunction& f, const JetArgs& p, std::size_t j,
                                        std::size_t k);

}  // namespace relmech
