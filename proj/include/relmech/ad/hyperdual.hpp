#pragma once

// Runtime-order hyper-dual numbers.
//
// A HyperDual of order n is a multilinear polynomial in n nilpotent
// infinitesimals e_0 .. e_{n-1} with e_i^2 = 0 and e_i e_j = e_j e_i. Its 2^n
// coefficients are indexed by bit masks over the infinitesimals. Seeding a
// fresh infinitesimal into an argument and reading back its coefficient
// yields an exact directional derivative; nesting the procedure yields
// derivatives of any order, which is how derived evaluators (connections
// built from equations built from charts) differentiate each other.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>

#include "relmech/ad/scalar.hpp"

namespace relmech::ad {

class HyperDual {
 public:
  static constexpr int kMaxOrder = 6;
  static constexpr std::size_t kCapacity = std::size_t{1} << kMaxOrder;

  HyperDual(double value = 0.0) : order_(0) { c_[0] = value; }  // NOLINT

  HyperDual(const HyperDual& other);
  HyperDual& operator=(const HyperDual& other);

  /// The infinitesimal e_index itself (value 0, unit coefficient).
  static HyperDual infinitesimal(int index);

  int order() const { return order_; }
  std::size_t size() const { return std::size_t{1} << order_; }
  double value() const { return c_[0]; }

  /// Coefficient of the monomial selected by `mask`; zero beyond the order.
  double coefficient(std::size_t mask) const {
    return mask < size() ? c_[mask] : 0.0;
  }

  /// True when any non-constant coefficient is nonzero.
  bool perturbed() const;

  /// The part multiplying e_index, with e_index removed.
  HyperDual derivative(int index) const;

  /// The part free of e_index (e_index set to zero).
  HyperDual without(int index) const;

  HyperDual& operator+=(const HyperDual& rhs);
  HyperDual& operator-=(const HyperDual& rhs);
  HyperDual& operator*=(const HyperDual& rhs);
  HyperDual& operator/=(const HyperDual& rhs);

  HyperDual operator-() const;

  friend HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
  friend HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }
  friend HyperDual operator*(const HyperDual& a, const HyperDual& b);
  friend HyperDual operator/(const HyperDual& a, const HyperDual& b);

  friend HyperDual recip(const HyperDual& x);
  friend HyperDual exp(const HyperDual& x);
  friend HyperDual log(const HyperDual& x);
  friend HyperDual sin(const HyperDual& x);
  friend HyperDual cos(const HyperDual& x);
  friend HyperDual sqrt(const HyperDual& x);
  friend HyperDual pow(const HyperDual& x, double c);
  friend HyperDual pow(const HyperDual& x, const HyperDual& y);

 private:
  void set_order(int order);

  // f(x0 + h) = sum_k f^(k)(x0) / k! h^k, exact because h^(order+1) = 0.
  // `derivs[k]` holds f^(k)(x0) for k = 0..order.
  static HyperDual apply(const HyperDual& x, const double* derivs);

  std::uint8_t order_;
  std::array<double, kCapacity> c_;  // only [0, size()) is meaningful
};

inline double primal(const HyperDual& x) { return x.value(); }

std::ostream& operator<<(std::ostream& os, const HyperDual& x);

}  // namespace relmech::ad
