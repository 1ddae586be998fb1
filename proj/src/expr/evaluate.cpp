#include "relmech/expr/evaluate.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace relmech::expr {
namespace {

using ad::HyperDual;
using ad::Taylor2;

// Checked primitives for plain doubles; the derivative-carrying types check
// their own domains.
struct DoubleOps {
  static double divide(double a, double b) {
    if (b == 0.0) throw ad::DomainError("division by zero");
    return a / b;
  }
  static double log(double x) {
    if (!(x > 0.0)) throw ad::DomainError("log of non-positive argument");
    return std::log(x);
  }
  static double sqrt(double x) {
    if (x < 0.0) throw ad::DomainError("sqrt of negative argument");
    return std::sqrt(x);
  }
  static double pow(double x, double c) {
    ad::check_pow_domain(x, c, false);
    return std::pow(x, c);
  }
};

template <class S>
class Evaluator {
 public:
  explicit Evaluator(const Bindings<S>& b) : b_(b) {}

  S operator()(const Node& n) const {
    switch (n.kind) {
      case NodeKind::number:
      case NodeKind::constant:
        return S(n.value);
      case NodeKind::variable:
        return variable(n.var);
      case NodeKind::negate:
        return -(*this)(*n.lhs);
      case NodeKind::add:
        return (*this)(*n.lhs) + (*this)(*n.rhs);
      case NodeKind::subtract:
        return (*this)(*n.lhs) - (*this)(*n.rhs);
      case NodeKind::multiply:
        return (*this)(*n.lhs) * (*this)(*n.rhs);
      case NodeKind::divide: {
        const S num = (*this)(*n.lhs);
        const S den = (*this)(*n.rhs);
        return guarded(n, [&] { return divide(num, den); });
      }
      case NodeKind::power: {
        const S base = (*this)(*n.lhs);
        if (n.rhs->constant) {
          const double c = Evaluator<double>(Bindings<double>{})(*n.rhs);
          return guarded(n, [&] { return power_const(base, c); });
        }
        const S expo = (*this)(*n.rhs);
        return guarded(n, [&] { return power(base, expo); });
      }
      default:
        break;
    }
    const S x = (*this)(*n.lhs);
    return guarded(n, [&] { return function(n.kind, x); });
  }

 private:
  S variable(const Variable& var) const {
    switch (var.kind) {
      case VarKind::time:
        return b_.t;
      case VarKind::position:
        if (var.index >= b_.q.size()) throw std::out_of_range("evaluate: q index beyond bindings");
        return b_.q[var.index];
      case VarKind::velocity:
        if (var.index >= b_.v.size()) throw std::out_of_range("evaluate: v index beyond bindings");
        return b_.v[var.index];
    }
    throw std::logic_error("evaluate: bad variable kind");
  }

  template <class F>
  static S guarded(const Node& n, F&& op) {
    try {
      return op();
    } catch (const EvalError&) {
      throw;
    } catch (const ad::DomainError& e) {
      throw EvalError(e.what(), to_string(n));
    }
  }

  static S divide(const S& a, const S& b) {
    if constexpr (std::is_same_v<S, double>) {
      return DoubleOps::divide(a, b);
    } else {
      return a / b;
    }
  }

  static S power_const(const S& base, double c) {
    if constexpr (std::is_same_v<S, double>) {
      return DoubleOps::pow(base, c);
    } else {
      return pow(base, c);
    }
  }

  static S power(const S& base, const S& expo) {
    if constexpr (std::is_same_v<S, double>) {
      return DoubleOps::pow(base, expo);
    } else {
      return pow(base, expo);
    }
  }

  static S function(NodeKind kind, const S& x) {
    if constexpr (std::is_same_v<S, double>) {
      switch (kind) {
        case NodeKind::sin: return std::sin(x);
        case NodeKind::cos: return std::cos(x);
        case NodeKind::exp: return std::exp(x);
        case NodeKind::log: return DoubleOps::log(x);
        case NodeKind::sqrt: return DoubleOps::sqrt(x);
        default: break;
      }
    } else {
      switch (kind) {
        case NodeKind::sin: return sin(x);
        case NodeKind::cos: return cos(x);
        case NodeKind::exp: return exp(x);
        case NodeKind::log: return log(x);
        case NodeKind::sqrt: return sqrt(x);
        default: break;
      }
    }
    throw std::logic_error("evaluate: unknown node kind");
  }

  const Bindings<S>& b_;
};

}  // namespace

template <class S>
S evaluate(const Expression& e, const Bindings<S>& b) {
  return Evaluator<S>(b)(e.root());
}

template double evaluate<double>(const Expression&, const Bindings<double>&);
template Taylor2<double> evaluate<Taylor2<double>>(const Expression&, const Bindings<Taylor2<double>>&);
template HyperDual evaluate<HyperDual>(const Expression&, const Bindings<HyperDual>&);
template Taylor2<HyperDual> evaluate<Taylor2<HyperDual>>(const Expression&,
                                                       const Bindings<Taylor2<HyperDual>>&);

double evaluate(const Expression& e, const JetPoint1& p) {
  validate(p, e.dimension());
  return evaluate<double>(e, Bindings<double>{p.t, p.q, p.v});
}

ad::Taylor2Scalar eval_ad(const Expression& e, const JetPoint1& p, std::span<const Variable> seeds) {
  validate(p, e.dimension());
  const std::size_t n = seeds.size();
  using T2 = ad::Taylor2Scalar;
  T2 t(p.t, n);
  std::vector<T2> q, v;
  q.reserve(p.q.size());
  v.reserve(p.v.size());
  for (double x : p.q) q.emplace_back(x, n);
  for (double x : p.v) v.emplace_back(x, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Variable& s = seeds[k];
    for (std::size_t j = 0; j < k; ++j)
      if (seeds[j] == s) throw std::invalid_argument("eval_ad: duplicate seed " + to_string(s));
    switch (s.kind) {
      case VarKind::time:
        t = T2::variable(p.t, k, n);
        break;
      case VarKind::position:
        if (s.index >= q.size()) throw std::out_of_range("eval_ad: seed " + to_string(s));
        q[s.index] = T2::variable(p.q[s.index], k, n);
        break;
      case VarKind::velocity:
        if (s.index >= v.size()) throw std::out_of_range("eval_ad: seed " + to_string(s));
        v[s.index] = T2::variable(p.v[s.index], k, n);
        break;
    }
  }
  return evaluate<T2>(e, Bindings<T2>{t, q, v}).promoted(n);
}

}  // namespace relmech::expr
