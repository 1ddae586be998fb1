#pragma once

#include <cstddef>
#include <vector>

namespace relmech {

/// A point (t, q^i, q^i_t) of the first jet manifold. The velocity slot `v`
/// holds the jet coordinates q^i_t.
struct JetPoint1 {
  double t = 0.0;
  std::vector<double> q;
  std::vector<double> v;

  std::size_t dimension() const { return q.size(); }
};

/// A point (t, q^i, q^i_t, q^i_tt) of the second jet manifold.
struct JetPoint2 {
  double t = 0.0;
  std::vector<double> q;
  std::vector<double> v;
  std::vector<double> a;

  std::size_t dimension() const { return q.size(); }
  JetPoint1 first() const { return {t, q, v}; }
};

/// Throws std::invalid_argument unless every entry is finite and the slot
/// sizes agree with `m`.
void validate(const JetPoint1& p, std::size_t m);
void validate(const JetPoint2& p, std::size_t m);

}  // namespace relmech
