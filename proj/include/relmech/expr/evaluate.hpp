#pragma once

#include <span>
#include <string>
#include <vector>

#include "relmech/ad/hyperdual.hpp"
#include "relmech/ad/scalar.hpp"
#include "relmech/ad/taylor2.hpp"
#include "relmech/bundle/jet_point.hpp"
#include "relmech/expr/expression.hpp"

namespace relmech::expr {

/// A domain failure located at a sub-expression.
class EvalError : public ad::DomainError {
 public:
  EvalError(const std::string& reason, std::string subexpression)
      : ad::DomainError(reason + " in '" + subexpression + "'"),
        reason_(reason),
        subexpression_(std::move(subexpression)) {}

  const std::string& reason() const { return reason_; }
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string reason_;
  std::string subexpression_;
};

/// Values bound to t, q and v for one evaluation.
template <class S>
struct Bindings {
  S t;
  std::span<const S> q;
  std::span<const S> v;
};

/// Evaluates `e` over the scalar type S. Instantiated for double,
/// Taylor2<double>, HyperDual and Taylor2<HyperDual>.
template <class S>
S evaluate(const Expression& e, const Bindings<S>& b);

double evaluate(const Expression& e, const JetPoint1& p);

/// Evaluates `e` at `p` with value, gradient and Hessian taken with respect to
/// `seeds`, in the given order. Unseeded variables are held fixed.
ad::Taylor2Scalar eval_ad(const Expression& e, const JetPoint1& p, std::span<const Variable> seeds);

}  // namespace relmech::expr
