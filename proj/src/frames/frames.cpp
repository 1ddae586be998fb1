#include "relmech/frames/frames.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "relmech/expr/expression.hpp"

namespace relmech {
namespace {

constexpr double kAdaptedTolerance = 1e-8;
constexpr double kSimplifiedFormTolerance = 1e-10;

// Everything about a frame that the connection formulas need at one point.
struct FrameJet {
  std::vector<HyperDual> value;                // Gamma^i
  std::vector<HyperDual> total;                // d_t Gamma^i with the point's velocity
  std::vector<std::vector<HyperDual>> dq;      // dq[k][i] = dk Gamma^i
};

FrameJet frame_jet(const ReferenceFrame& frame, const JetArgs& p, bool with_dq) {
  FrameJet j;
  const JetArgs base(p.t, p.q, {});
  j.value = frame.function()(base);
  j.total = derivative_along(frame.function(), base, p.v);
  if (with_dq)
    for (std::size_t k = 0; k < p.dimension(); ++k) j.dq.push_back(partial_q(frame.function(), base, k));
  return j;
}

const HyperDual& comp(const std::vector<HyperDual>& g, std::size_t i, std::size_t lambda,
                      std::size_t m) {
  return g[connection_slot(i, lambda, m)];
}

void require_same_dimension(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// Frame connection components at p, laid out by connection_slot.
std::vector<HyperDual> frame_connection_at(const DynamicConnection& gamma, const ReferenceFrame& frame,
                                           const JetArgs& p) {
  const std::size_t m = p.dimension();
  const FrameJet G = frame_jet(frame, p, true);
  const auto g = gamma(p);
  const auto gG = gamma(JetArgs(p.t, p.q, G.value));
  std::vector<HyperDual> out((m + 1) * m);
  for (std::size_t i = 0; i < m; ++i) {
    HyperDual g0 = G.total[i];
    for (std::size_t k = 0; k < m; ++k) {
      const HyperDual nabla = G.dq[k][i] - comp(gG, i, k + 1, m);
      g0 -= comp(g, i, k + 1, m) * G.value[k] + G.value[k] * nabla;
      out[connection_slot(i, k + 1, m)] = comp(g, i, k + 1, m) + nabla;
    }
    out[connection_slot(i, 0, m)] = g0;
  }
  return out;
}

std::vector<HyperDual> xi_frame_at(const DynamicConnection& gamma, const ReferenceFrame& frame,
                                   const JetArgs& p) {
  const std::size_t m = p.dimension();
  const FrameJet G = frame_jet(frame, p, true);
  const auto g = gamma(p);
  const auto gG = gamma(JetArgs(p.t, p.q, G.value));
  std::vector<HyperDual> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    HyperDual x = G.total[i];
    for (std::size_t k = 0; k < m; ++k)
      x += (G.dq[k][i] + comp(g, i, k + 1, m) - comp(gG, i, k + 1, m)) * (p.v[k] - G.value[k]);
    out[i] = x;
  }
  return out;
}

std::string coefficient(double x) { return "(" + expr::format_number(x) + ")"; }

}  // namespace

DynamicEquation transform_dynamic_equation(const DynamicEquation& xi, const CoordinateChange& chart) {
  const std::size_t m = xi.dimension();
  require_same_dimension(m, chart.dimension(), "transform_dynamic_equation");
  const CoordinateChange back = chart.inverted();
  return DynamicEquation(JetFunction(m, m, [xi, chart, back, m](const JetArgs& primed) {
    const JetArgs p = prolong_jet1(back, primed);
    const auto x = xi(p);
    const auto jet = chart.jet<HyperDual>(p.t, p.q);
    std::vector<HyperDual> out(m);
    for (std::size_t i = 0; i < m; ++i) {
      HyperDual r = jet.dtt(i);
      for (std::size_t j = 0; j < m; ++j) {
        r += x[j] * jet.dq(i, j) + 2.0 * p.v[j] * jet.dtq(i, j);
        for (std::size_t k = 0; k < m; ++k) r += p.v[j] * p.v[k] * jet.dqq(i, j, k);
      }
      out[i] = r;
    }
    return out;
  }));
}

ReferenceFrame transform_frame(const ReferenceFrame& frame, const CoordinateChange& chart) {
  const std::size_t m = frame.dimension();
  require_same_dimension(m, chart.dimension(), "transform_frame");
  const CoordinateChange back = chart.inverted();
  return ReferenceFrame(JetFunction(m, m, [frame, chart, back, m](const JetArgs& primed) {
    const auto pulled = back.jet<HyperDual>(primed.t, primed.q);
    const HyperDual t = primed.t + HyperDual(back.time_offset());
    std::vector<HyperDual> q;
    for (std::size_t i = 0; i < m; ++i) q.push_back(pulled.value(i));
    const auto G = frame(t, q);
    const auto jet = chart.jet<HyperDual>(t, q);
    std::vector<HyperDual> out(m);
    for (std::size_t i = 0; i < m; ++i) {
      HyperDual r = jet.dt(i);
      for (std::size_t j = 0; j < m; ++j) r += G[j] * jet.dq(i, j);
      out[i] = r;
    }
    return out;
  }));
}

ReferenceFrame observer_frame(const CoordinateChange& chart) {
  const std::size_t m = chart.dimension();
  const CoordinateChange back = chart.inverted();
  return ReferenceFrame(JetFunction(m, m, [chart, back, m](const JetArgs& p) {
    const auto fwd = chart.jet<HyperDual>(p.t, p.q);
    std::vector<HyperDual> qbar;
    for (std::size_t i = 0; i < m; ++i) qbar.push_back(fwd.value(i));
    const auto inv = back.jet<HyperDual>(p.t + HyperDual(chart.time_offset()), qbar);
    std::vector<HyperDual> out;
    for (std::size_t i = 0; i < m; ++i) out.push_back(inv.dt(i));
    return out;
  }));
}

double adapted_frame_residual(const ReferenceFrame& frame, const CoordinateChange& chart,
                              const SampleBox& box) {
  const std::size_t m = frame.dimension();
  require_same_dimension(m, chart.dimension(), "adapted_frame_residual");
  double worst = 0.0;
  for (const auto& p : box.points(m)) {
    const auto G = frame(p.t, p.q);
    const auto jet = chart.jet<double>(p.t, p.q);
    for (std::size_t a = 0; a < m; ++a) {
      double r = jet.dt(a);
      for (std::size_t i = 0; i < m; ++i) r += jet.dq(a, i) * G[i];
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

std::vector<double> geodesic_residual(const DynamicEquation& xi, const ReferenceFrame& frame,
                                      double t, std::span<const double> q) {
  const std::size_t m = xi.dimension();
  require_same_dimension(m, frame.dimension(), "geodesic_residual");
  if (q.size() != m) throw std::invalid_argument("geodesic_residual: dimension mismatch");
  const JetArgs base(HyperDual(t), {q.begin(), q.end()}, {});
  const auto G = frame.function()(base);
  const auto flow = derivative_along(frame.function(), base, G);
  const auto x = xi(JetArgs(base.t, base.q, G));
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = flow[i].value() - x[i].value();
  return out;
}

DynamicConnection tilde_gamma(const DynamicConnection& gamma, const ReferenceFrame& frame) {
  const std::size_t m = gamma.dimension();
  require_same_dimension(m, frame.dimension(), "tilde_gamma");
  return DynamicConnection(JetFunction(m, (m + 1) * m, [gamma, frame, m](const JetArgs& p) {
    const FrameJet G = frame_jet(frame, p, false);
    auto out = gamma(p);
    for (std::size_t i = 0; i < m; ++i) {
      HyperDual g0 = G.total[i];
      for (std::size_t k = 0; k < m; ++k) g0 -= comp(out, i, k + 1, m) * G.value[k];
      out[connection_slot(i, 0, m)] = g0;
    }
    return out;
  }));
}

DynamicConnection frame_connection(const DynamicConnection& gamma, const ReferenceFrame& frame) {
  const std::size_t m = gamma.dimension();
  require_same_dimension(m, frame.dimension(), "frame_connection");
  return DynamicConnection(JetFunction(m, (m + 1) * m, [gamma, frame](const JetArgs& p) {
    return frame_connection_at(gamma, frame, p);
  }));
}

FrameConnectionComponents frame_connection_components(const DynamicConnection& gamma,
                                                      const ReferenceFrame& frame,
                                                      const JetPoint1& p) {
  const std::size_t m = gamma.dimension();
  require_same_dimension(m, frame.dimension(), "frame_connection_components");
  validate(p, m);
  const auto g = values(frame_connection_at(gamma, frame, JetArgs(p)));
  FrameConnectionComponents c;
  c.g0.resize(m);
  c.gk.assign(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    c.g0[i] = g[connection_slot(i, 0, m)];
    for (std::size_t k = 0; k < m; ++k) c.gk[i][k] = g[connection_slot(i, k + 1, m)];
  }
  return c;
}

DynamicEquation xi_frame(const DynamicConnection& gamma, const ReferenceFrame& frame) {
  const std::size_t m = gamma.dimension();
  require_same_dimension(m, frame.dimension(), "xi_frame");
  return DynamicEquation(JetFunction(
      m, m, [gamma, frame](const JetArgs& p) { return xi_frame_at(gamma, frame, p); }));
}

std::vector<double> relative_acceleration(const DynamicEquation& xi, const ReferenceFrame& frame,
                                          const JetPoint1& p) {
  const std::size_t m = xi.dimension();
  require_same_dimension(m, frame.dimension(), "relative_acceleration");
  validate(p, m);
  const JetArgs args(p);
  const auto x = xi(args);
  const auto xf = xi_frame_at(gamma_from_xi(xi), frame, args);
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = x[i].value() - xf[i].value();
  return out;
}

std::vector<double> covariant_residual(const DynamicEquation& xi, const ReferenceFrame& frame,
                                       const JetPoint2& p) {
  const std::size_t m = xi.dimension();
  require_same_dimension(m, frame.dimension(), "covariant_residual");
  validate(p, m);
  const auto gF = frame_connection_components(gamma_from_xi(xi), frame, p.first());
  const auto aF = relative_acceleration(xi, frame, p.first());
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    double d = p.a[i] - gF.g0[i];
    for (std::size_t j = 0; j < m; ++j) d -= p.v[j] * gF.gk[i][j];
    out[i] = d - aF[i];
  }
  return out;
}

CoriolisReport coriolis_decomposition(const DynamicEquation& xi, const ReferenceFrame& frame,
                                      const JetPoint1& p) {
  const std::size_t m = xi.dimension();
  require_same_dimension(m, frame.dimension(), "coriolis_decomposition");
  validate(p, m);
  const auto fit = quadratic_coefficients(xi, p.t, p.q);
  if (!fit.is_quadratic)
    throw NotQuadraticError("coriolis_decomposition: equation is not quadratic in velocity "
                            "(remainder " + std::to_string(fit.max_remainder) + ")");

  CoriolisReport r;
  r.a_direct = relative_acceleration(xi, frame, p);
  r.rel_v = relative_velocity(frame, p);

  const JetArgs base(HyperDual(p.t), {p.q.begin(), p.q.end()}, {});
  const auto G = frame.function()(base);
  const auto gG = values(gamma_from_xi_at(xi, JetArgs(base.t, base.q, G)));
  std::vector<std::vector<double>> d;  // d[lambda][k]
  d.push_back(values(partial_t(frame.function(), base)));
  for (std::size_t j = 0; j < m; ++j) d.push_back(values(partial_q(frame.function(), base, j)));

  r.nabla.assign(m, std::vector<double>(m + 1));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t l = 0; l <= m; ++l) r.nabla[k][l] = d[l][k] - gG[connection_slot(k, l, m)];

  r.frame_term.assign(m, 0.0);
  r.velocity_term.assign(m, 0.0);
  r.a_decomposed.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double frame_part = r.nabla[i][0];  // Gamma^0 = 1
    double velocity_part = 0.0;          // rel_v^0 = 0
    for (std::size_t j = 0; j < m; ++j) {
      frame_part += G[j].value() * r.nabla[i][j + 1];
      velocity_part += r.rel_v[j] * r.nabla[i][j + 1];
    }
    r.frame_term[i] = -frame_part;
    r.velocity_term[i] = -2.0 * velocity_part;
    r.a_decomposed[i] = r.frame_term[i] + r.velocity_term[i];
  }
  return r;
}

DynamicEquation free_motion_equation(const ReferenceFrame& frame, const CoordinateChange& chart,
                                     const SampleBox& box) {
  const std::size_t m = frame.dimension();
  require_same_dimension(m, chart.dimension(), "free_motion_equation");
  const CoordinateChange to_adapted = chart.inverted();
  const double residual = adapted_frame_residual(frame, to_adapted, box);
  if (!(residual <= kAdaptedTolerance))
    throw InconsistentFrameError(
        "free_motion_equation: the chart's source coordinates are not adapted to the frame "
        "(residual " + std::to_string(residual) + ")");

  DynamicEquation general(JetFunction(m, m, [frame, chart, to_adapted, m](const JetArgs& p) {
    const FrameJet G = frame_jet(frame, p, true);
    const auto bar = to_adapted.jet<HyperDual>(p.t, p.q);
    std::vector<HyperDual> qbar;
    for (std::size_t a = 0; a < m; ++a) qbar.push_back(bar.value(a));
    const auto back = chart.jet<HyperDual>(p.t + HyperDual(to_adapted.time_offset()), qbar);
    std::vector<HyperDual> w(m);
    for (std::size_t j = 0; j < m; ++j) w[j] = p.v[j] - G.value[j];
    // Curvature of the adapted chart along w: (d^2 qbar^a / dq dq)(w, w).
    std::vector<HyperDual> bend(m);
    for (std::size_t a = 0; a < m; ++a) {
      HyperDual s = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) s += bar.dqq(a, j, k) * w[j] * w[k];
      bend[a] = s;
    }
    std::vector<HyperDual> out(m);
    for (std::size_t i = 0; i < m; ++i) {
      HyperDual x = G.total[i];
      for (std::size_t j = 0; j < m; ++j) x += G.dq[j][i] * w[j];
      for (std::size_t a = 0; a < m; ++a) x -= back.dq(i, a) * bend[a];
      out[i] = x;
    }
    return out;
  }));
  if (!chart.is_affine()) return general;

  DynamicEquation simplified(JetFunction(m, m, [frame, m](const JetArgs& p) {
    const JetArgs base(p.t, p.q, {});
    const auto G = frame.function()(base);
    auto out = partial_t(frame.function(), base);
    for (std::size_t j = 0; j < m; ++j) {
      const auto dj = partial_q(frame.function(), base, j);
      for (std::size_t i = 0; i < m; ++i) out[i] += (2.0 * p.v[j] - G[j]) * dj[i];
    }
    return out;
  }));
  for (const auto& p : box.points(m)) {
    const auto a = general(p);
    const auto b = simplified(p);
    for (std::size_t i = 0; i < m; ++i)
      if (!(std::abs(a[i] - b[i]) <= kSimplifiedFormTolerance * std::max(1.0, std::abs(a[i]))))
        throw std::logic_error("free_motion_equation: simplified affine form disagrees with the "
                               "general form");
  }
  return simplified;
}

std::string to_string(FreeMotionVerdict verdict) {
  switch (verdict) {
    case FreeMotionVerdict::fails_necessary_criterion: return "fails necessary criterion";
    case FreeMotionVerdict::passes_inconclusive: return "passes necessary criterion (inconclusive)";
  }
  return "unknown";
}

FreeMotionReport free_motion_curvature_test(const DynamicEquation& xi, const SampleBox& box,
                                            double tolerance) {
  const auto gamma = gamma_from_xi(xi);
  FreeMotionReport r;
  for (const auto& p : box.points(xi.dimension()))
    r.max_curvature = std::max(r.max_curvature, curvature(gamma, p).max_abs());
  r.verdict = r.max_curvature > tolerance ? FreeMotionVerdict::fails_necessary_criterion
                                          : FreeMotionVerdict::passes_inconclusive;
  return r;
}

GalileiTransform compose(const GalileiTransform& first, const GalileiTransform& second) {
  const std::size_t m = first.dimension();
  if (second.dimension() != m) throw std::invalid_argument("compose: dimension mismatch");
  GalileiTransform r{std::vector<std::vector<double>>(m, std::vector<double>(m, 0.0)),
                     second.u, second.a};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t l = 0; l < m; ++l) r.k[i][j] += second.k[i][l] * first.k[l][j];
      r.u[i] += second.k[i][j] * first.u[j];
      r.a[i] += second.k[i][j] * first.a[j];
    }
  return r;
}

CoordinateChange galilei_chart(const GalileiTransform& g) {
  const std::size_t m = g.dimension();
  if (m == 0 || g.a.size() != m || g.k.size() != m)
    throw ChartError("galilei_chart: inconsistent sizes");
  Eigen::MatrixXd k(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (g.k[i].size() != m) throw ChartError("galilei_chart: k is not square");
    for (std::size_t j = 0; j < m; ++j)
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g.k[i][j];
  }
  const double det = k.determinant();
  if (!(std::abs(det) > 1e-12)) throw ChartError("galilei_chart: singular k");
  const Eigen::MatrixXd kinv = k.inverse();

  std::vector<expr::Expression> forward, inverse;
  for (std::size_t i = 0; i < m; ++i) {
    std::string f, b;
    for (std::size_t j = 0; j < m; ++j) {
      const std::string q = "q" + std::to_string(j + 1);
      f += (j ? " + " : "") + coefficient(g.k[i][j]) + "*" + q;
      b += (j ? " + " : "") +
           coefficient(kinv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) + "*(" +
           q + " + " + coefficient(g.u[j]) + "*t + " + coefficient(g.a[j]) + ")";
    }
    f += " - " + coefficient(g.u[i]) + "*t - " + coefficient(g.a[i]);
    forward.push_back(expr::parse_expression(f, m));
    inverse.push_back(expr::parse_expression(b, m));
  }
  return CoordinateChange::create(std::move(forward), std::move(inverse));
}

CoordinateChange galilei_chart(const std::vector<std::vector<double>>& k,
                               const std::vector<double>& u, const std::vector<double>& a) {
  return galilei_chart(GalileiTransform{k, u, a});
}

}  // namespace relmech
