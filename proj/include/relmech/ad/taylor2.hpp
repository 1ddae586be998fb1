#pragma once

// Second-order truncated Taylor arithmetic.
//
// A Taylor2<T> carries f, grad f and the Hessian of f with respect to a
// per-call set of n seed variables. The Hessian is stored as its upper
// triangle, so symmetry holds exactly. The coefficient type T is double for
// plain use and HyperDual when second derivatives are needed inside a derived
// evaluator that is itself being differentiated.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "relmech/ad/hyperdual.hpp"
#include "relmech/ad/scalar.hpp"

namespace relmech::ad {

template <class T = double>
class Taylor2 {
 public:
  /// A constant. Size 0 broadcasts against any seed count.
  Taylor2(double value = 0.0) : value_(value) {}  // NOLINT
  Taylor2(T value, std::size_t n)
      : value_(std::move(value)), grad_(n, T(0.0)), hess_(n * (n + 1) / 2, T(0.0)) {}

  /// The seed variable `index` of `n`, evaluated at `value`.
  static Taylor2 variable(T value, std::size_t index, std::size_t n) {
    if (index >= n) throw std::out_of_range("Taylor2::variable: seed index");
    Taylor2 x(std::move(value), n);
    x.grad_[index] = T(1.0);
    return x;
  }

  std::size_t size() const { return grad_.size(); }
  const T& value() const { return value_; }
  const T& grad(std::size_t i) const { return grad_.at(i); }
  const T& hess(std::size_t i, std::size_t j) const {
    return hess_.at(i <= j ? index(i, j) : index(j, i));
  }
  const std::vector<T>& grad() const { return grad_; }

  /// True when any derivative coefficient is nonzero.
  bool perturbed() const {
    for (const auto& g : grad_)
      if (primal(g) != 0.0 || is_perturbed(g)) return true;
    for (const auto& h : hess_)
      if (primal(h) != 0.0 || is_perturbed(h)) return true;
    return false;
  }

  /// Widens a broadcast constant to n seeds; no-op when already sized.
  Taylor2 promoted(std::size_t n) const {
    if (size() == n) return *this;
    if (size() != 0) throw std::invalid_argument("Taylor2: seed count mismatch");
    return Taylor2(value_, n);
  }

  Taylor2 operator-() const {
    Taylor2 r(*this);
    r.value_ = -r.value_;
    for (auto& g : r.grad_) g = -g;
    for (auto& h : r.hess_) h = -h;
    return r;
  }

  friend Taylor2 operator+(const Taylor2& a, const Taylor2& b) {
    const std::size_t n = common_size(a, b);
    Taylor2 r = a.promoted(n);
    r.value_ += b.value_;
    for (std::size_t i = 0; i < b.grad_.size(); ++i) r.grad_[i] += b.grad_[i];
    for (std::size_t i = 0; i < b.hess_.size(); ++i) r.hess_[i] += b.hess_[i];
    return r;
  }

  friend Taylor2 operator-(const Taylor2& a, const Taylor2& b) { return a + (-b); }

  friend Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
    if (b.size() == 0) return a.scaled(b.value_);
    if (a.size() == 0) return b.scaled(a.value_);
    const std::size_t n = common_size(a, b);
    Taylor2 r(a.value_ * b.value_, n);
    for (std::size_t i = 0; i < n; ++i)
      r.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const std::size_t k = index(i, j, n);
        r.hess_[k] = a.value_ * b.hess_[k] + b.value_ * a.hess_[k] +
                     a.grad_[i] * b.grad_[j] + b.grad_[i] * a.grad_[j];
      }
    return r;
  }

  friend Taylor2 operator/(const Taylor2& a, const Taylor2& b) {
    if (b.size() == 0) {
      if (primal(b.value_) == 0.0) throw DomainError("division by zero");
      Taylor2 r(a);
      r.value_ = r.value_ / b.value_;
      for (auto& g : r.grad_) g = g / b.value_;
      for (auto& h : r.hess_) h = h / b.value_;
      return r;
    }
    Taylor2 r = a * recip(b);
    r.value_ = a.value_ / b.value_;  // same rounding as plain division
    return r;
  }

  Taylor2& operator+=(const Taylor2& b) { return *this = *this + b; }
  Taylor2& operator-=(const Taylor2& b) { return *this = *this - b; }
  Taylor2& operator*=(const Taylor2& b) { return *this = *this * b; }
  Taylor2& operator/=(const Taylor2& b) { return *this = *this / b; }

  /// Chain rule for a scalar function with value f0, first derivative f1 and
  /// second derivative f2 at value().
  Taylor2 apply(const T& f0, const T& f1, const T& f2) const {
    const std::size_t n = size();
    Taylor2 r(f0, n);
    for (std::size_t i = 0; i < n; ++i) r.grad_[i] = f1 * grad_[i];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const std::size_t k = index(i, j, n);
        r.hess_[k] = f2 * (grad_[i] * grad_[j]) + f1 * hess_[k];
      }
    return r;
  }

  friend Taylor2 recip(const Taylor2& x) {
    if (primal(x.value_) == 0.0) throw DomainError("division by zero");
    const T inv = T(1.0) / x.value_;
    return x.apply(inv, -(inv * inv), T(2.0) * inv * inv * inv);
  }
  friend Taylor2 exp(const Taylor2& x) {
    using std::exp;
    const T e = exp(x.value_);
    return x.apply(e, e, e);
  }
  friend Taylor2 log(const Taylor2& x) {
    using std::log;
    if (!(primal(x.value_) > 0.0)) throw DomainError("log of non-positive argument");
    const T inv = T(1.0) / x.value_;
    return x.apply(log(x.value_), inv, -(inv * inv));
  }
  friend Taylor2 sin(const Taylor2& x) {
    using std::cos;
    using std::sin;
    const T s = sin(x.value_);
    return x.apply(s, cos(x.value_), -s);
  }
  friend Taylor2 cos(const Taylor2& x) {
    using std::cos;
    using std::sin;
    const T c = cos(x.value_);
    return x.apply(c, -sin(x.value_), -c);
  }
  friend Taylor2 sqrt(const Taylor2& x) {
    using std::sqrt;
    const double x0 = primal(x.value_);
    if (x0 < 0.0) throw DomainError("sqrt of negative argument");
    if (x0 == 0.0 && x.perturbed_any()) throw DomainError("sqrt: derivative at zero");
    const T s = sqrt(x.value_);
    if (x0 == 0.0) return x.apply(s, T(0.0), T(0.0));
    const T d1 = T(0.5) / s;
    return x.apply(s, d1, -(d1 / (T(2.0) * x.value_)));
  }
  friend Taylor2 pow(const Taylor2& x, double c) {
    using std::pow;
    check_pow_domain(primal(x.value_), c, x.perturbed_any());
    if (!x.perturbed_any()) return Taylor2(pow(x.value_, c), x.size());
    const auto term = [&](int k) -> T {
      const double ff = falling_factorial(c, k);
      return ff == 0.0 ? T(0.0) : T(ff) * pow(x.value_, c - k);
    };
    return x.apply(term(0), term(1), term(2));
  }
  friend Taylor2 pow(const Taylor2& x, const Taylor2& y) {
    if (!y.perturbed_any()) return pow(x, primal(y.value_));
    if (!(primal(x.value_) > 0.0))
      throw DomainError("pow: non-positive base with variable exponent");
    using std::pow;
    Taylor2 r = exp(y * log(x));
    r.value_ = pow(x.value_, y.value_);
    return r;
  }

 private:
  static std::size_t index(std::size_t i, std::size_t j, std::size_t n) {
    return i * n - i * (i - 1) / 2 + (j - i);
  }
  std::size_t index(std::size_t i, std::size_t j) const { return index(i, j, size()); }

  static std::size_t common_size(const Taylor2& a, const Taylor2& b) {
    if (a.size() == b.size() || b.size() == 0) return a.size();
    if (a.size() == 0) return b.size();
    throw std::invalid_argument("Taylor2: seed count mismatch");
  }

  static bool is_perturbed(double) { return false; }
  static bool is_perturbed(const HyperDual& x) { return x.perturbed(); }

  // Derivative content of the value itself (HyperDual coefficients) or of
  // the Taylor seeds.
  bool perturbed_any() const { return is_perturbed(value_) || perturbed(); }

  Taylor2 scaled(const T& s) const {
    Taylor2 r(*this);
    r.value_ = r.value_ * s;
    for (auto& g : r.grad_) g = g * s;
    for (auto& h : r.hess_) h = h * s;
    return r;
  }

  T value_;
  std::vector<T> grad_;
  std::vector<T> hess_;  // upper triangle, row-major
};

using Taylor2Scalar = Taylor2<double>;

template <class T>
double primal(const Taylor2<T>& x) {
  return primal(x.value());
}

/// Evaluates `f` on seeded variables at `x` and returns value, gradient and
/// Hessian. `f` receives a std::vector<Taylor2Scalar> of length x.size().
template <class F>
Taylor2Scalar taylor2_eval(F&& f, std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<Taylor2Scalar> vars;
  vars.reserve(n);
  for (std::size_t i = 0; i < n; ++i) vars.push_back(Taylor2Scalar::variable(x[i], i, n));
  return Taylor2Scalar(std::forward<F>(f)(vars)).promoted(n);
}

}  // namespace relmech::ad
