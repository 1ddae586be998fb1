#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "relmech/frames/frames.hpp"
#include "relmech/integrator/integrator.hpp"
#include "support/charts.hpp"
#include "support/oracles.hpp"

using namespace relmech;
using relmech::testing::parse_all;

namespace {

DynamicEquation equation(const std::vector<std::string>& src, std::size_t m,
                         const expr::ConstantTable& c = {}) {
  return DynamicEquation::from_expressions(parse_all(src, m, c));
}

}  // namespace

TEST_CASE("integrate: examples") {
  const auto free = integrate(DynamicEquation::zero(1), JetPoint1{0, {0}, {1}}, 1.0, 1e-3);
  CHECK(free.samples.back().t == 1.0);
  CHECK(std::abs(free.samples.back().q[0] - 1.0) <= 1e-12);
  CHECK(free.samples.size() == 1001);
  CHECK_FALSE(free.diverged);

  const auto osc = integrate(equation({"-q1"}, 1), JetPoint1{0, {1}, {0}}, 2 * std::numbers::pi, 1e-3);
  CHECK(std::abs(osc.samples.back().q[0] - 1.0) <= 1e-9);
  for (const auto& s : osc.samples) CHECK(s.a[0] == -s.q[0]);

  const auto blow = integrate(equation({"v1^2"}, 1), JetPoint1{0, {0}, {1}}, 0.5, 1e-3);
  CHECK(std::abs(blow.samples.back().v[0] - 2.0) <= 1e-8);
}

TEST_CASE("integrate: grid and validation") {
  const auto tr = integrate(DynamicEquation::zero(1), JetPoint1{0.25, {0}, {1}}, 1.0, 0.1);
  CHECK(tr.samples.back().t == 1.0);
  for (std::size_t k = 1; k < tr.samples.size(); ++k) {
    CHECK(tr.samples[k].t > tr.samples[k - 1].t);
    CHECK(std::abs(tr.samples[k].t - tr.samples[k - 1].t - tr.step) <= 1e-14);
  }
  CHECK(tr.step <= 0.1);
  CHECK_THROWS(integrate(DynamicEquation::zero(1), JetPoint1{0, {0}, {1}}, 1.0, 0.0));
  CHECK_THROWS(integrate(DynamicEquation::zero(1), JetPoint1{0, {0}, {1}}, 0.0, 0.1));

  // v = 1/(1 - t) blows up at t = 1.
  const auto bad = integrate(equation({"v1^2"}, 1), JetPoint1{0, {0}, {1}}, 2.0, 1e-2);
  CHECK(bad.diverged);
  CHECK(bad.samples.back().t < 2.0);
  for (const auto& s : bad.samples) CHECK(std::isfinite(s.v[0]));
}

TEST_CASE("trajectory_residual") {
  const auto xi = equation({"-q1 - 0.1*v1*q1^2"}, 1);
  const auto coarse = integrate(xi, JetPoint1{0, {1}, {0.5}}, 3.0, 1e-2);
  const auto fine = integrate(xi, JetPoint1{0, {1}, {0.5}}, 3.0, 1e-3);
  const double rc = trajectory_residual(xi, coarse), rf = trajectory_residual(xi, fine);
  const double c_coarse = rc / (1e-4), c_fine = rf / (1e-6);
  MESSAGE("residual constant C: " << c_coarse << " (step 1e-2), " << c_fine << " (step 1e-3)");
  CHECK(c_fine <= 1.0);
  CHECK(std::abs(c_coarse / c_fine - 1.0) <= 0.1);

  Trajectory still;
  still.step = 0.1;
  for (int k = 0; k < 5; ++k) still.samples.push_back(JetPoint2{0.1 * k, {2}, {0}, {0}});
  CHECK(trajectory_residual(DynamicEquation::zero(1), still) == 0.0);

  auto corrupted = fine;
  corrupted.samples[corrupted.samples.size() / 2].q[0] += 1e-3;
  CHECK(trajectory_residual(xi, corrupted) > 10 * rf);

  Trajectory short_tr;
  short_tr.samples.resize(2, JetPoint2{0, {0}, {0}, {0}});
  CHECK_THROWS(trajectory_residual(DynamicEquation::zero(1), short_tr));
}

TEST_CASE("trajectory_residual: halving the step quarters the defect") {
  const auto xi = equation({"-sin(q1)", "-q2 + 0.2*cos(t)"}, 2);
  const JetPoint1 p0{0, {1, -0.5}, {0.3, 0.7}};
  const double r1 = trajectory_residual(xi, integrate(xi, p0, 2.0, 2e-2));
  const double r2 = trajectory_residual(xi, integrate(xi, p0, 2.0, 1e-2));
  MESSAGE("ratio " << r1 / r2);
  CHECK(r1 / r2 >= 3.5);
  CHECK(r1 / r2 <= 4.5);
}

TEST_CASE("geodesic frames yield solutions along their integral curves") {
  // Gamma = -q tan t for the oscillator. Follow q' = Gamma with a test-side RK4
  // and check the resulting path solves the equation.
  const auto xi = equation({"-q1"}, 1);
  const double h = 1e-3;
  Trajectory tr;
  tr.step = h;
  double q = 0.8;
  auto G = [](double t, double x) { return -x * std::tan(t); };
  for (int k = 0; k <= 1000; ++k) {
    const double t = k * h;
    tr.samples.push_back(JetPoint2{t, {q}, {G(t, q)}, {-q}});
    const double k1 = G(t, q), k2 = G(t + h / 2, q + h / 2 * k1), k3 = G(t + h / 2, q + h / 2 * k2),
                 k4 = G(t + h, q + h * k3);
    q += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  CHECK(trajectory_residual(xi, tr) <= 1e-5);
}

TEST_CASE("pushforward_trajectory") {
  const auto xi = equation({"-q1", "-4*q2"}, 2);
  const auto tr = integrate(xi, JetPoint1{0, {1, 0}, {0, 1}}, 1.0, 1e-2, "osc");
  const auto same = pushforward_trajectory(CoordinateChange::identity(2), tr);
  REQUIRE(same.samples.size() == tr.samples.size());
  for (std::size_t k = 0; k < tr.samples.size(); ++k) {
    CHECK(same.samples[k].q == tr.samples[k].q);
    CHECK(same.samples[k].v == tr.samples[k].v);
    CHECK(same.samples[k].a == tr.samples[k].a);
  }

  const double u = 0.7;
  const auto line = integrate(DynamicEquation::zero(1), JetPoint1{0, {0.5}, {2}}, 2.0, 1e-2);
  const auto boosted = pushforward_trajectory(relmech::testing::boost_chart(u), line);
  for (std::size_t k = 0; k < line.samples.size(); ++k) {
    const auto& s = line.samples[k];
    CHECK(boosted.samples[k].q[0] == doctest::Approx(s.q[0] - u * s.t).epsilon(1e-15));
    CHECK(boosted.samples[k].v[0] == doctest::Approx(s.v[0] - u).epsilon(1e-15));
  }

  // Straight line pushed into a rotating chart vs integrating the transformed equation there.
  const auto R = relmech::testing::rotating_chart(0.8);
  const auto free = integrate(DynamicEquation::zero(2), JetPoint1{0, {1, 0.2}, {-0.3, 0.5}}, 2.0, 1e-3);
  const auto pushed = pushforward_trajectory(R, free);
  const auto direct = integrate(transform_dynamic_equation(DynamicEquation::zero(2), R),
                                pushed.samples.front().first(), 2.0, 1e-3);
  REQUIRE(direct.samples.size() == pushed.samples.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < direct.samples.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) {
      worst = std::max(worst, std::abs(direct.samples[k].q[i] - pushed.samples[k].q[i]));
      worst = std::max(worst, std::abs(direct.samples[k].v[i] - pushed.samples[k].v[i]));
    }
  CHECK(worst <= 1e-8);
}
