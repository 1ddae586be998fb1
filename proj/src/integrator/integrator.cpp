#include "relmech/integrator/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relmech {
namespace {

bool finite(const std::vector<double>& xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

std::vector<double> axpy(const std::vector<double>& x, double h, const std::vector<double>& d) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + h * d[i];
  return r;
}

}  // namespace

Trajectory integrate(const DynamicEquation& xi, const JetPoint1& p0, double t_end, double step,
                     std::string tag) {
  const std::size_t m = xi.dimension();
  validate(p0, m);
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("integrate: step must be positive");
  if (!(t_end > p0.t) || !std::isfinite(t_end)) throw std::invalid_argument("integrate: t_end must exceed t0");

  const double span = t_end - p0.t;
  const auto n = static_cast<std::size_t>(std::ceil(span / step - 1e-9));
  const double h = span / static_cast<double>(n);

  Trajectory tr;
  tr.step = h;
  tr.tag = std::move(tag);
  tr.samples.reserve(n + 1);

  std::vector<double> q = p0.q, v = p0.v;
  auto accel = [&](double t, const std::vector<double>& qq, const std::vector<double>& vv) {
    return xi(JetPoint1{t, qq, vv});
  };
  auto record = [&](double t, std::vector<double> a) {
    tr.samples.push_back(JetPoint2{t, q, v, std::move(a)});
  };

  try {
    record(p0.t, accel(p0.t, q, v));
    for (std::size_t k = 0; k < n; ++k) {
      const double t = p0.t + static_cast<double>(k) * h;
      const auto& k1v = tr.samples.back().a;
      const auto& k1q = v;
      const auto q2 = axpy(q, 0.5 * h, k1q), v2 = axpy(v, 0.5 * h, k1v);
      const auto k2v = accel(t + 0.5 * h, q2, v2);
      const auto q3 = axpy(q, 0.5 * h, v2), v3 = axpy(v, 0.5 * h, k2v);
      const auto k3v = accel(t + 0.5 * h, q3, v3);
      const auto q4 = axpy(q, h, v3), v4 = axpy(v, h, k3v);
      const auto k4v = accel(t + h, q4, v4);
      std::vector<double> qn(m), vn(m);
      for (std::size_t i = 0; i < m; ++i) {
        qn[i] = q[i] + h / 6.0 * (k1q[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
        vn[i] = v[i] + h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
      }
      if (!finite(qn) || !finite(vn)) {
        tr.diverged = true;
        break;
      }
      q = std::move(qn);
      v = std::move(vn);
      const double tn = k + 1 == n ? t_end : p0.t + static_cast<double>(k + 1) * h;
      auto a = accel(tn, q, v);
      if (!finite(a)) {
        tr.diverged = true;
        break;
      }
      record(tn, std::move(a));
    }
  } catch (const std::invalid_argument&) {
    // validate() rejects non-finite points inside the equation's arguments.
    tr.diverged = true;
  }
  return tr;
}

double trajectory_residual(const DynamicEquation& xi, const Trajectory& tr) {
  const auto& s = tr.samples;
  if (s.size() < 3) throw std::invalid_argument("trajectory_residual: need at least 3 samples");
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    const double hl = s[k].t - s[k - 1].t;
    const double hr = s[k + 1].t - s[k].t;
    const auto x = xi(s[k].first());
    for (std::size_t i = 0; i < x.size(); ++i) {
      // Non-uniform three-point second difference; equals the usual stencil for hl == hr.
      const double fd = 2.0 * (hl * s[k + 1].q[i] - (hl + hr) * s[k].q[i] + hr * s[k - 1].q[i]) /
                        (hl * hr * (hl + hr));
      worst = std::max(worst, std::abs(fd - x[i]));
    }
  }
  return worst;
}

Trajectory pushforward_trajectory(const CoordinateChange& chart, const Trajectory& tr) {
  Trajectory out;
  out.step = tr.step;
  out.tag = tr.tag;
  out.diverged = tr.diverged;
  out.samples.reserve(tr.samples.size());
  for (const auto& p : tr.samples) out.samples.push_back(prolong_jet2(chart, p));
  return out;
}

}  // namespace relmech
