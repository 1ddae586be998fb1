#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "relmech/ad/taylor2.hpp"
#include "relmech/bundle/jet_args.hpp"
#include "relmech/bundle/jet_point.hpp"
#include "relmech/bundle/sample_box.hpp"
#include "relmech/expr/expression.hpp"

namespace relmech {

class ChartError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Value, first and second derivatives of every component q'^i(t, q) of a
/// map, with Taylor seeds ordered (t, q1, ..., qm).
template <class S>
struct ChartJet {
  std::vector<ad::Taylor2<S>> components;

  std::size_t dimension() const { return components.size(); }
  const S& value(std::size_t i) const { return components[i].value(); }
  const S& dt(std::size_t i) const { return components[i].grad(0); }
  const S& dq(std::size_t i, std::size_t j) const { return components[i].grad(j + 1); }
  const S& dtt(std::size_t i) const { return components[i].hess(0, 0); }
  const S& dtq(std::size_t i, std::size_t j) const { return components[i].hess(0, j + 1); }
  const S& dqq(std::size_t i, std::size_t j, std::size_t k) const {
    return components[i].hess(j + 1, k + 1);
  }
};

/// A bundle coordinate change t' = t + c, q'^i = q'^i(t, q) together with its
/// user-supplied inverse q^i = q^i(t', q'). The inverse is written in the same
/// variable names t, q1..qm, which then denote the primed coordinates.
///
/// Construction certifies on a sample box that the maps invert each other
/// (within 1e-10) and that the spatial Jacobian is invertible (|det| > 1e-12).
class CoordinateChange {
 public:
  static CoordinateChange create(std::vector<expr::Expression> forward,
                                 std::vector<expr::Expression> inverse, double time_offset = 0.0,
                                 const SampleBox& box = SampleBox::chart_default());

  static CoordinateChange identity(std::size_t m);

  std::size_t dimension() const { return forward_.size(); }
  double time_offset() const { return time_offset_; }
  const std::vector<expr::Expression>& forward() const { return forward_; }
  const std::vector<expr::Expression>& inverse() const { return inverse_; }

  /// True when both maps are affine in the fibre coordinates on the
  /// certification box (time dependence is unrestricted).
  bool is_affine() const { return affine_; }

  /// The change read backwards: forward and inverse swapped, offset negated.
  CoordinateChange inverted() const;

  /// q'(t, q).
  std::vector<double> map(double t, std::span<const double> q) const;

  /// Taylor-2 jet of the forward map at (t, q).
  template <class S>
  ChartJet<S> jet(const S& t, std::span<const S> q) const;

 private:
  CoordinateChange(std::vector<expr::Expression> forward, std::vector<expr::Expression> inverse,
                   double time_offset, bool affine)
      : forward_(std::move(forward)),
        inverse_(std::move(inverse)),
        time_offset_(time_offset),
        affine_(affine) {}

  std::vector<expr::Expression> forward_;
  std::vector<expr::Expression> inverse_;
  double time_offset_ = 0.0;
  bool affine_ = false;
};

/// First jet prolongation: (t + c, q'(t, q), d_t q').
JetPoint1 prolong_jet1(const CoordinateChange& chart, const JetPoint1& p);

/// Second jet prolongation; the acceleration slot transforms as
/// a'^i = (a^j d_j + v^j v^k d_j d_k + 2 v^j d_j d_t + d_t^2) q'^i.
JetPoint2 prolong_jet2(const CoordinateChange& chart, const JetPoint2& p);

/// prolong_jet1 on perturbed arguments, for use inside evaluators.
JetArgs prolong_jet1(const CoordinateChange& chart, const JetArgs& p);

}  // namespace relmech
