#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace relmech::ad {

/// Raised when an elementary function is evaluated outside its domain, or
/// when a derivative that the scalar type must carry does not exist there
/// (e.g. sqrt at 0 with a nonzero perturbation).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline double primal(double x) { return x; }

/// Domain rules for x^c shared by every scalar type. `perturbed` is true when
/// x carries a nonzero derivative part.
inline void check_pow_domain(double x0, double c, bool perturbed) {
  const bool integral = std::floor(c) == c;
  if (x0 == 0.0) {
    if (c < 0.0) throw DomainError("pow: zero raised to a negative power");
    if (!integral && perturbed)
      throw DomainError("pow: derivative of a fractional power at zero");
    return;
  }
  if (x0 < 0.0 && !integral)
    throw DomainError("pow: negative base with non-integer exponent");
}

/// Falling factorial c (c-1) ... (c-k+1).
inline double falling_factorial(double c, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= c - i;
  return r;
}

}  // namespace relmech::ad
