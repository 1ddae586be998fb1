#pragma once

#include <algorithm>
#include <vector>

#include "relmech/ad/hyperdual.hpp"
#include "relmech/bundle/jet_point.hpp"

namespace relmech {

using ad::HyperDual;

/// A first-jet point whose coordinates carry hyper-dual perturbations. This is
/// the argument type of every evaluator; a JetPoint1 is the order-0 case.
struct JetArgs {
  HyperDual t;
  std::vector<HyperDual> q;
  std::vector<HyperDual> v;

  JetArgs() = default;
  JetArgs(HyperDual t_, std::vector<HyperDual> q_, std::vector<HyperDual> v_)
      : t(std::move(t_)), q(std::move(q_)), v(std::move(v_)) {}
  explicit JetArgs(const JetPoint1& p) : t(p.t), q(p.q.begin(), p.q.end()), v(p.v.begin(), p.v.end()) {}

  std::size_t dimension() const { return q.size(); }

  /// One past the highest infinitesimal in use; the next fresh index.
  int order() const {
    int k = t.order();
    for (const auto& x : q) k = std::max(k, x.order());
    for (const auto& x : v) k = std::max(k, x.order());
    return k;
  }

  JetPoint1 values() const {
    JetPoint1 p;
    p.t = t.value();
    for (const auto& x : q) p.q.push_back(x.value());
    for (const auto& x : v) p.v.push_back(x.value());
    return p;
  }
};

inline std::vector<double> values(const std::vector<HyperDual>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(x.value());
  return out;
}

inline int max_order(const std::vector<HyperDual>& xs) {
  int k = 0;
  for (const auto& x : xs) k = std::max(k, x.order());
  return k;
}

}  // namespace relmech
