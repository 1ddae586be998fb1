#include "relmech/bundle/coordinate_change.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "relmech/expr/evaluate.hpp"

namespace relmech {
namespace {

using expr::Bindings;
using expr::Expression;

constexpr double kInverseTolerance = 1e-10;
constexpr double kJacobianTolerance = 1e-12;
constexpr double kAffineTolerance = 1e-12;

template <class S>
ChartJet<S> map_jet(const std::vector<Expression>& maps, const S& t, std::span<const S> q) {
  using T2 = ad::Taylor2<S>;
  const std::size_t m = q.size();
  const std::size_t n = m + 1;
  const T2 tt = T2::variable(t, 0, n);
  std::vector<T2> qq;
  qq.reserve(m);
  for (std::size_t j = 0; j < m; ++j) qq.push_back(T2::variable(q[j], j + 1, n));
  ChartJet<S> jet;
  jet.components.reserve(maps.size());
  for (const auto& e : maps)
    jet.components.push_back(expr::evaluate<T2>(e, Bindings<T2>{tt, qq, {}}).promoted(n));
  return jet;
}

void check_maps(const std::vector<Expression>& maps, std::size_t m, const char* which) {
  if (maps.size() != m)
    throw ChartError(std::string("coordinate change: ") + which + " map has " +
                     std::to_string(maps.size()) + " components, expected " + std::to_string(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (maps[i].dimension() != m)
      throw ChartError(std::string("coordinate change: ") + which + " component " +
                       std::to_string(i + 1) + " has the wrong dimension");
    if (maps[i].depends_on(expr::VarKind::velocity))
      throw ChartError(std::string("coordinate change: ") + which + " component " +
                       std::to_string(i + 1) + " depends on a velocity");
  }
}

double max_spatial_hessian(const ChartJet<double>& jet) {
  double worst = 0.0;
  const std::size_t m = jet.dimension();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = j; k < m; ++k) worst = std::max(worst, std::abs(jet.dqq(i, j, k)));
  return worst;
}

}  // namespace

CoordinateChange CoordinateChange::create(std::vector<Expression> forward,
                                          std::vector<Expression> inverse, double time_offset,
                                          const SampleBox& box) {
  if (forward.empty()) throw ChartError("coordinate change: empty map");
  if (!std::isfinite(time_offset)) throw ChartError("coordinate change: non-finite time offset");
  const std::size_t m = forward.size();
  check_maps(forward, m, "forward");
  check_maps(inverse, m, "inverse");

  bool affine = true;
  for (const auto& p : box.points(m)) {
    try {
      const auto fwd = map_jet<double>(forward, p.t, p.q);
      std::vector<double> mapped(m);
      Eigen::MatrixXd jac(m, m);
      for (std::size_t i = 0; i < m; ++i) {
        mapped[i] = fwd.value(i);
        for (std::size_t j = 0; j < m; ++j) jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = fwd.dq(i, j);
      }
      const double det = jac.determinant();
      if (!(std::abs(det) > kJacobianTolerance))
        throw ChartError("coordinate change: singular Jacobian (det " + std::to_string(det) +
                         ") at t=" + std::to_string(p.t));
      const auto back = map_jet<double>(inverse, p.t + time_offset, std::span<const double>(mapped));
      for (std::size_t i = 0; i < m; ++i) {
        const double err = std::abs(back.value(i) - p.q[i]);
        if (!(err <= kInverseTolerance * std::max(1.0, std::abs(p.q[i]))))
          throw ChartError("coordinate change: inverse does not undo forward map (component " +
                           std::to_string(i + 1) + ", error " + std::to_string(err) + ")");
      }
      affine = affine && max_spatial_hessian(fwd) <= kAffineTolerance &&
               max_spatial_hessian(back) <= kAffineTolerance;
    } catch (const ad::DomainError& e) {
      throw ChartError(std::string("coordinate change: evaluation failed on the sample box: ") +
                       e.what());
    }
  }
  return CoordinateChange(std::move(forward), std::move(inverse), time_offset, affine);
}

CoordinateChange CoordinateChange::identity(std::size_t m) {
  std::vector<Expression> maps;
  for (std::size_t i = 0; i < m; ++i)
    maps.push_back(expr::parse_expression("q" + std::to_string(i + 1), m));
  return CoordinateChange(maps, maps, 0.0, true);
}

CoordinateChange CoordinateChange::inverted() const {
  return CoordinateChange(inverse_, forward_, -time_offset_, affine_);
}

std::vector<double> CoordinateChange::map(double t, std::span<const double> q) const {
  if (q.size() != dimension()) throw std::invalid_argument("CoordinateChange::map: dimension");
  std::vector<double> out;
  out.reserve(dimension());
  for (const auto& e : forward_) out.push_back(expr::evaluate<double>(e, Bindings<double>{t, q, {}}));
  return out;
}

template <class S>
ChartJet<S> CoordinateChange::jet(const S& t, std::span<const S> q) const {
  if (q.size() != dimension()) throw std::invalid_argument("CoordinateChange::jet: dimension");
  return map_jet<S>(forward_, t, q);
}

template ChartJet<double> CoordinateChange::jet<double>(const double&, std::span<const double>) const;
template ChartJet<HyperDual> CoordinateChange::jet<HyperDual>(const HyperDual&,
                                                             std::span<const HyperDual>) const;

JetPoint1 prolong_jet1(const CoordinateChange& chart, const JetPoint1& p) {
  const std::size_t m = chart.dimension();
  validate(p, m);
  const auto jet = chart.jet<double>(p.t, p.q);
  JetPoint1 out;
  out.t = p.t + chart.time_offset();
  out.q.resize(m);
  out.v.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.q[i] = jet.value(i);
    double vi = jet.dt(i);
    for (std::size_t j = 0; j < m; ++j) vi += p.v[j] * jet.dq(i, j);
    out.v[i] = vi;
  }
  return out;
}

JetPoint2 prolong_jet2(const CoordinateChange& chart, const JetPoint2& p) {
  const std::size_t m = chart.dimension();
  validate(p, m);
  const auto jet = chart.jet<double>(p.t, p.q);
  JetPoint2 out;
  out.t = p.t + chart.time_offset();
  out.q.resize(m);
  out.v.resize(m);
  out.a.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.q[i] = jet.value(i);
    double vi = jet.dt(i);
    double ai = jet.dtt(i);
    for (std::size_t j = 0; j < m; ++j) {
      vi += p.v[j] * jet.dq(i, j);
      ai += p.a[j] * jet.dq(i, j) + 2.0 * p.v[j] * jet.dtq(i, j);
      for (std::size_t k = 0; k < m; ++k) ai += p.v[j] * p.v[k] * jet.dqq(i, j, k);
    }
    out.v[i] = vi;
    out.a[i] = ai;
  }
  return out;
}

JetArgs prolong_jet1(const CoordinateChange& chart, const JetArgs& p) {
  const std::size_t m = chart.dimension();
  if (p.dimension() != m || p.v.size() != m)
    throw std::invalid_argument("prolong_jet1: dimension mismatch");
  const auto jet = chart.jet<HyperDual>(p.t, p.q);
  JetArgs out;
  out.t = p.t + HyperDual(chart.time_offset());
  out.q.reserve(m);
  out.v.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.q.push_back(jet.value(i));
    HyperDual vi = jet.dt(i);
    for (std::size_t j = 0; j < m; ++j) vi += p.v[j] * jet.dq(i, j);
    out.v.push_back(vi);
  }
  return out;
}

}  // namespace relmech
