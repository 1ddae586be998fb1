#include "relmech/ad/hyperdual.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace relmech::ad {

HyperDual::HyperDual(const HyperDual& other) : order_(other.order_) {
  std::copy_n(other.c_.begin(), other.size(), c_.begin());
}

HyperDual& HyperDual::operator=(const HyperDual& other) {
  if (this != &other) {
    order_ = other.order_;
    std::copy_n(other.c_.begin(), other.size(), c_.begin());
  }
  return *this;
}

HyperDual HyperDual::infinitesimal(int index) {
  if (index < 0 || index >= kMaxOrder)
    throw std::length_error("HyperDual: infinitesimal index exceeds kMaxOrder");
  HyperDual e;
  e.set_order(index + 1);
  e.c_[std::size_t{1} << index] = 1.0;
  return e;
}

void HyperDual::set_order(int order) {
  const std::size_t old = size();
  order_ = static_cast<std::uint8_t>(order);
  std::fill(c_.begin() + static_cast<std::ptrdiff_t>(old),
            c_.begin() + static_cast<std::ptrdiff_t>(size()), 0.0);
}

bool HyperDual::perturbed() const {
  for (std::size_t k = 1; k < size(); ++k)
    if (c_[k] != 0.0) return true;
  return false;
}

HyperDual HyperDual::derivative(int index) const {
  HyperDual r(0.0);
  if (index >= order_) return r;
  r.order_ = static_cast<std::uint8_t>(order_ - 1);
  const std::size_t bit = std::size_t{1} << index;
  const std::size_t low = bit - 1;
  for (std::size_t s = 0; s < r.size(); ++s) {
    const std::size_t full = (s & low) | ((s & ~low) << 1) | bit;
    r.c_[s] = c_[full];
  }
  return r;
}

HyperDual HyperDual::without(int index) const {
  if (index >= order_) return *this;
  HyperDual r(0.0);
  r.order_ = static_cast<std::uint8_t>(order_ - 1);
  const std::size_t bit = std::size_t{1} << index;
  const std::size_t low = bit - 1;
  for (std::size_t s = 0; s < r.size(); ++s) {
    const std::size_t full = (s & low) | ((s & ~low) << 1);
    r.c_[s] = c_[full];
  }
  return r;
}

HyperDual& HyperDual::operator+=(const HyperDual& rhs) {
  if (rhs.order_ > order_) set_order(rhs.order_);
  for (std::size_t k = 0; k < rhs.size(); ++k) c_[k] += rhs.c_[k];
  return *this;
}

HyperDual& HyperDual::operator-=(const HyperDual& rhs) {
  if (rhs.order_ > order_) set_order(rhs.order_);
  for (std::size_t k = 0; k < rhs.size(); ++k) c_[k] -= rhs.c_[k];
  return *this;
}

HyperDual& HyperDual::operator*=(const HyperDual& rhs) {
  return *this = *this * rhs;
}

HyperDual& HyperDual::operator/=(const HyperDual& rhs) {
  return *this = *this / rhs;
}

HyperDual HyperDual::operator-() const {
  HyperDual r(*this);
  for (std::size_t k = 0; k < size(); ++k) r.c_[k] = -c_[k];
  return r;
}

HyperDual operator*(const HyperDual& a, const HyperDual& b) {
  if (b.order_ == 0) {
    HyperDual r(a);
    for (std::size_t k = 0; k < r.size(); ++k) r.c_[k] *= b.c_[0];
    return r;
  }
  if (a.order_ == 0) return b * a;
  HyperDual r;
  r.set_order(std::max(a.order_, b.order_));
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  // Subset convolution: r[S] = sum over A subset of S of a[A] b[S \ A].
  for (std::size_t s = 0; s < r.size(); ++s) {
    double acc = 0.0;
    for (std::size_t sub = s;; sub = (sub - 1) & s) {
      const std::size_t rest = s ^ sub;
      if (sub < na && rest < nb) acc += a.c_[sub] * b.c_[rest];
      if (sub == 0) break;
    }
    r.c_[s] = acc;
  }
  return r;
}

HyperDual operator/(const HyperDual& a, const HyperDual& b) {
  if (b.order_ == 0) {
    if (b.c_[0] == 0.0) throw DomainError("division by zero");
    HyperDual r(a);
    for (std::size_t k = 0; k < r.size(); ++k) r.c_[k] /= b.c_[0];
    return r;
  }
  HyperDual r = a * recip(b);
  r.c_[0] = a.c_[0] / b.c_[0];
  return r;
}

HyperDual HyperDual::apply(const HyperDual& x, const double* derivs) {
  HyperDual result(derivs[0]);
  if (x.order_ == 0) return result;
  HyperDual h(x);
  h.c_[0] = 0.0;
  HyperDual power(h);
  double factorial = 1.0;
  for (int k = 1; k <= x.order_; ++k) {
    factorial *= k;
    if (derivs[k] != 0.0) result += power * (derivs[k] / factorial);
    if (k < x.order_) power = power * h;
  }
  return result;
}

HyperDual recip(const HyperDual& x) {
  const double x0 = x.value();
  if (x0 == 0.0) throw DomainError("division by zero");
  std::array<double, HyperDual::kMaxOrder + 1> d{};
  double f = 1.0 / x0;
  for (int k = 0; k <= x.order(); ++k) {
    d[static_cast<std::size_t>(k)] = f;
    f *= -(k + 1) / x0;
  }
  return HyperDual::apply(x, d.data());
}

HyperDual exp(const HyperDual& x) {
  std::array<double, HyperDual::kMaxOrder + 1> d{};
  d.fill(std::exp(x.value()));
  return HyperDual::apply(x, d.data());
}

HyperDual log(const HyperDual& x) {
  const double x0 = x.value();
  if (!(x0 > 0.0)) throw DomainError("log of non-positive argument");
  std::array<double, HyperDual::kMaxOrder + 1> d{};
  d[0] = std::log(x0);
  // d^k/dx^k log x = (-1)^(k-1) (k-1)! / x^k
  double f = 1.0 / x0;
  for (int k = 1; k <= x.order(); ++k) {
    d[static_cast<std::size_t>(k)] = f;
    f *= -k / x0;
  }
  return HyperDual::apply(x, d.data());
}

HyperDual sin(const HyperDual& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const std::array<double, 4> cycle{s, c, -s, -c};
  std::array<double, HyperDual::kMaxOrder + 1> d{};
  for (int k = 0; k <= x.order(); ++k)
    d[static_cast<std::size_t>(k)] = cycle[static_cast<std::size_t>(k % 4)];
  return HyperDual::apply(x, d.data());
}

HyperDual cos(const HyperDual& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  const std::array<double, 4> cycle{c, -s, -c, s};
  std::array<double, HyperDual::kMaxOrder + 1> d{};
  for (int k = 0; k <= x.order(); ++k)
    d[static_cast<std::size_t>(k)] = cycle[static_cast<std::size_t>(k % 4)];
  return HyperDual::apply(x, d.data());
}

HyperDual sqrt(const HyperDual& x) {
  const double x0 = x.value();
  if (x0 < 0.0) throw DomainError("sqrt of negative argument");
  if (x0 == 0.0 && x.perturbed())
    throw DomainError("sqrt: derivative at zero");
  return pow(x, 0.5);
}

HyperDual pow(const HyperDual& x, double c) {
  const double x0 = x.value();
  check_pow_domain(x0, c, x.perturbed());
  std::array<double, HyperDual::kMaxOrder + 1> d{};
  for (int k = 0; k <= x.order(); ++k) {
    const double ff = falling_factorial(c, k);
    d[static_cast<std::size_t>(k)] = ff == 0.0 ? 0.0 : ff * std::pow(x0, c - k);
  }
  return HyperDual::apply(x, d.data());
}

HyperDual pow(const HyperDual& x, const HyperDual& y) {
  if (!y.perturbed()) return pow(x, y.value());
  if (!(x.value() > 0.0))
    throw DomainError("pow: non-positive base with variable exponent");
  HyperDual r = exp(y * log(x));
  r.c_[0] = std::pow(x.value(), y.value());
  return r;
}

std::ostream& operator<<(std::ostream& os, const HyperDual& x) {
  os << "HyperDual{";
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k) os << ", ";
    os << x.coefficient(k);
  }
  return os << '}';
}

}  // namespace relmech::ad
