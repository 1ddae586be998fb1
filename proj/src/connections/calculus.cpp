#include "relmech/connections/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relmech/bundle/sample_box.hpp"

namespace relmech {
namespace {

constexpr double kHolonomicTolerance = 1e-12;
constexpr double kQuadraticTolerance = 1e-9;
constexpr std::size_t kQuadraticProbes = 16;

const HyperDual& slot(const std::vector<HyperDual>& g, std::size_t i, std::size_t lambda,
                      std::size_t m) {
  return g[connection_slot(i, lambda, m)];
}

// chi^i == v^i on the default box.
bool detect_holonomic(const JetFunction& chi) {
  for (const auto& p : SampleBox{}.points(chi.dimension())) {
    const auto c = chi(p);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!(std::abs(c[i] - p.v[i]) <= kHolonomicTolerance)) return false;
  }
  return true;
}

// dv_j gamma for every j, each a full component vector.
std::vector<std::vector<HyperDual>> velocity_partials(const JetFunction& f, const JetArgs& p) {
  std::vector<std::vector<HyperDual>> out;
  out.reserve(p.dimension());
  for (std::size_t j = 0; j < p.dimension(); ++j) out.push_back(partial_v(f, p, j));
  return out;
}

}  // namespace

std::vector<double> relative_velocity(const ReferenceFrame& frame, const JetPoint1& p) {
  validate(p, frame.dimension());
  const auto g = frame(p.t, p.q);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = p.v[i] - g[i];
  return out;
}

SecondOrderConnection frame_jet_prolongation(const ReferenceFrame& frame) {
  const std::size_t m = frame.dimension();
  JetFunction chi(m, m, [frame](const JetArgs& p) { return frame(p.t, p.q); });
  JetFunction xi(m, m, [frame](const JetArgs& p) {
    return total_derivative(frame.function(), JetArgs(p.t, p.q, p.v));
  });
  const bool holonomic = detect_holonomic(chi);
  return {std::move(chi), std::move(xi), holonomic};
}

DynamicEquation xi_from_gamma(const DynamicConnection& gamma) {
  const std::size_t m = gamma.dimension();
  return DynamicEquation(JetFunction(m, m, [gamma, m](const JetArgs& p) {
    const auto g = gamma(p);
    std::vector<HyperDual> xi(m);
    for (std::size_t i = 0; i < m; ++i) {
      HyperDual x = slot(g, i, 0, m);
      for (std::size_t j = 0; j < m; ++j) x += p.v[j] * slot(g, i, j + 1, m);
      xi[i] = x;
    }
    return xi;
  }));
}

std::vector<HyperDual> gamma_from_xi_at(const DynamicEquation& xi, const JetArgs& p) {
  const std::size_t m = xi.dimension();
  const auto value = xi(p);
  const auto dv = velocity_partials(xi.function(), p);
  std::vector<HyperDual> g((m + 1) * m);
  for (std::size_t i = 0; i < m; ++i) {
    HyperDual g0 = value[i];
    for (std::size_t j = 0; j < m; ++j) {
      const HyperDual gj = 0.5 * dv[j][i];
      g[connection_slot(i, j + 1, m)] = gj;
      g0 -= p.v[j] * gj;
    }
    g[connection_slot(i, 0, m)] = g0;
  }
  return g;
}

DynamicConnection gamma_from_xi(const DynamicEquation& xi) {
  const std::size_t m = xi.dimension();
  return DynamicConnection(
      JetFunction(m, (m + 1) * m, [xi](const JetArgs& p) { return gamma_from_xi_at(xi, p); }));
}

TorsionTensor torsion(const DynamicConnection& gamma, const JetPoint1& p) {
  const std::size_t m = gamma.dimension();
  validate(p, m);
  const JetArgs args(p);
  const auto g = gamma(args);
  const auto dv = velocity_partials(gamma.function(), args);
  TorsionTensor t{m, std::vector<double>(m * m)};
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i) {
      double x = slot(g, k, i + 1, m).value() - slot(dv[i], k, 0, m).value();
      for (std::size_t j = 0; j < m; ++j) x -= p.v[j] * slot(dv[i], k, j + 1, m).value();
      t.data[k * m + i] = x;
    }
  return t;
}

CurvatureTensor curvature(const DynamicConnection& gamma, const JetPoint1& p) {
  const std::size_t m = gamma.dimension();
  validate(p, m);
  const JetArgs args(p);
  const auto g = gamma(args);
  // Base derivatives d_lambda, lambda = 0 (time) .. m.
  std::vector<std::vector<HyperDual>> base;
  base.push_back(partial_t(gamma.function(), args));
  for (std::size_t j = 0; j < m; ++j) base.push_back(partial_q(gamma.function(), args, j));
  const auto dv = velocity_partials(gamma.function(), args);

  CurvatureTensor r(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l <= m; ++l)
      for (std::size_t u = l + 1; u <= m; ++u) {
        double x = slot(base[l], i, u, m).value() - slot(base[u], i, l, m).value();
        for (std::size_t j = 0; j < m; ++j)
          x += slot(g, j, l, m).value() * slot(dv[j], i, u, m).value() -
               slot(g, j, u, m).value() * slot(dv[j], i, l, m).value();
        r.set(i, l, u, x);
      }
  return r;
}

std::vector<double> vertical_covariant_differential(const DynamicConnection& gamma,
                                                    const JetPoint2& p) {
  const std::size_t m = gamma.dimension();
  validate(p, m);
  const auto g = gamma(p.first());
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    double x = p.a[i] - g(i, 0);
    for (std::size_t j = 0; j < m; ++j) x -= p.v[j] * g(i, j + 1);
    out[i] = x;
  }
  return out;
}

QuadraticFit quadratic_coefficients(const DynamicEquation& xi, double t, std::span<const double> q) {
  const std::size_t m = xi.dimension();
  if (q.size() != m) throw std::invalid_argument("quadratic_coefficients: dimension mismatch");
  const JetPoint1 origin{t, {q.begin(), q.end()}, std::vector<double>(m, 0.0)};
  validate(origin, m);
  const JetArgs args(origin);

  QuadraticFit fit;
  fit.b0 = xi(origin);
  fit.b1.assign(m, std::vector<double>(m));
  fit.b2.assign(m, std::vector<std::vector<double>>(m, std::vector<double>(m)));
  for (std::size_t j = 0; j < m; ++j) {
    const auto d = values(partial_v(xi.function(), args, j));
    for (std::size_t i = 0; i < m; ++i) fit.b1[i][j] = d[i];
    for (std::size_t k = j; k < m; ++k) {
      const auto dd = values(second_partial_v(xi.function(), args, j, k));
      for (std::size_t i = 0; i < m; ++i) fit.b2[i][j][k] = fit.b2[i][k][j] = 0.5 * dd[i];
    }
  }

  const auto primes = first_primes(m);
  JetPoint1 probe = origin;
  for (std::size_t n = 1; n <= kQuadraticProbes; ++n) {
    for (std::size_t j = 0; j < m; ++j) probe.v[j] = -2.0 + 4.0 * radical_inverse(n, primes[j]);
    const auto x = xi(probe);
    for (std::size_t i = 0; i < m; ++i)
      fit.max_remainder = std::max(fit.max_remainder, std::abs(x[i] - fit.evaluate(i, probe.v)));
  }
  fit.is_quadratic = fit.max_remainder <= kQuadraticTolerance;
  return fit;
}

}  // namespace relmech
