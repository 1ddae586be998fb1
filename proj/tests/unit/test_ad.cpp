#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "relmech/ad/hyperdual.hpp"
#include "relmech/ad/taylor2.hpp"
#include "relmech/expr/evaluate.hpp"
#include "support/random_expression.hpp"

using relmech::ad::DomainError;
using relmech::ad::HyperDual;
using relmech::ad::Taylor2;
using relmech::ad::Taylor2Scalar;
using relmech::ad::taylor2_eval;

namespace {

bool rel_close(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

}  // namespace

TEST_CASE("taylor2: square") {
  const std::vector<double> x{3.0};
  const auto r = taylor2_eval([](const auto& v) { return v[0] * v[0]; }, x);
  CHECK(r.value() == 9.0);
  CHECK(r.grad(0) == 6.0);
  CHECK(r.hess(0, 0) == 2.0);
}

TEST_CASE("taylor2: bilinear form") {
  const std::vector<double> x{2.0, 5.0};
  const auto r = taylor2_eval([](const auto& v) { return v[0] * v[1]; }, x);
  CHECK(r.value() == 10.0);
  CHECK(r.grad(0) == 5.0);
  CHECK(r.grad(1) == 2.0);
  CHECK(r.hess(0, 0) == 0.0);
  CHECK(r.hess(0, 1) == 1.0);
  CHECK(r.hess(1, 0) == 1.0);
  CHECK(r.hess(1, 1) == 0.0);
}

TEST_CASE("taylor2: sin against central differences") {
  const double x0 = 0.7;
  const double h = 1e-5;
  const std::vector<double> x{x0};
  const auto r = taylor2_eval([](const auto& v) { return sin(v[0]); }, x);
  const double fd1 = (std::sin(x0 + h) - std::sin(x0 - h)) / (2 * h);
  const long double hl = h;
  const long double fd2 = (std::sin(x0 + hl) - 2 * std::sin(static_cast<long double>(x0)) +
                           std::sin(x0 - hl)) /
                          (hl * hl);
  CHECK(rel_close(r.grad(0), fd1, 1e-6));
  CHECK(rel_close(r.hess(0, 0), static_cast<double>(fd2), 1e-6));
}

TEST_CASE("taylor2: constants carry zero derivatives") {
  const std::vector<double> x{0.3, -1.2, 4.0};
  const auto r = taylor2_eval(
      [](const auto&) { return exp(Taylor2Scalar(1.5)) * Taylor2Scalar(2.0) + Taylor2Scalar(1.0); },
      x);
  REQUIRE(r.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.grad(i) == 0.0);
    for (std::size_t j = 0; j < 3; ++j) CHECK(r.hess(i, j) == 0.0);
  }
}

TEST_CASE("taylor2: quotient, roots and powers") {
  const std::vector<double> x{2.0, 3.0};
  const auto r = taylor2_eval([](const auto& v) { return v[0] / v[1]; }, x);
  CHECK(r.value() == doctest::Approx(2.0 / 3.0));
  CHECK(r.grad(0) == doctest::Approx(1.0 / 3.0));
  CHECK(r.grad(1) == doctest::Approx(-2.0 / 9.0));
  CHECK(r.hess(0, 1) == doctest::Approx(-1.0 / 9.0));
  CHECK(r.hess(1, 1) == doctest::Approx(4.0 / 27.0));

  const auto s = taylor2_eval([](const auto& v) { return sqrt(v[0]); }, std::vector<double>{4.0});
  CHECK(s.grad(0) == doctest::Approx(0.25));
  CHECK(s.hess(0, 0) == doctest::Approx(-1.0 / 32.0));

  const auto p = taylor2_eval([](const auto& v) { return pow(v[0], v[1]); }, x);
  CHECK(p.value() == doctest::Approx(8.0));
  CHECK(p.grad(0) == doctest::Approx(12.0));
  CHECK(p.grad(1) == doctest::Approx(8.0 * std::log(2.0)));
  CHECK(p.hess(0, 1) == doctest::Approx(4.0 + 12.0 * std::log(2.0)));

  const auto cube = taylor2_eval([](const auto& v) { return pow(v[0], 3.0); },
                                 std::vector<double>{-2.0});
  CHECK(cube.value() == -8.0);
  CHECK(cube.grad(0) == 12.0);
  CHECK(cube.hess(0, 0) == -12.0);
}

TEST_CASE("taylor2: domain errors") {
  const std::vector<double> neg{-1.0};
  const std::vector<double> zero{0.0};
  CHECK_THROWS_AS(taylor2_eval([](const auto& v) { return log(v[0]); }, neg), DomainError);
  CHECK_THROWS_AS(taylor2_eval([](const auto& v) { return sqrt(v[0]); }, neg), DomainError);
  CHECK_THROWS_AS(taylor2_eval([](const auto& v) { return sqrt(v[0]); }, zero), DomainError);
  CHECK_THROWS_AS(taylor2_eval([](const auto& v) { return Taylor2Scalar(1.0) / v[0]; }, zero),
                  DomainError);
  CHECK_THROWS_AS(taylor2_eval([](const auto& v) { return pow(v[0], 0.5); }, neg), DomainError);
}

TEST_CASE("taylor2: hessian storage is symmetric") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> x{u(rng), u(rng), u(rng)};
    const auto r = taylor2_eval(
        [](const auto& v) { return sin(v[0] * v[1]) * exp(v[2]) + v[1] * v[1] * v[2]; }, x);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(r.hess(i, j) == r.hess(j, i));
  }
}

TEST_CASE("hyperdual: nested infinitesimals give higher derivatives") {
  const double x0 = 0.4;
  const HyperDual x = HyperDual(x0) + HyperDual::infinitesimal(0) + HyperDual::infinitesimal(1) +
                      HyperDual::infinitesimal(2);
  const HyperDual s = sin(x);
  CHECK(s.value() == doctest::Approx(std::sin(x0)));
  CHECK(s.coefficient(0b001) == doctest::Approx(std::cos(x0)));
  CHECK(s.coefficient(0b011) == doctest::Approx(-std::sin(x0)));
  CHECK(s.coefficient(0b111) == doctest::Approx(-std::cos(x0)));

  // d^3/dx dy dy of x^2 y^3 = 12 x y
  const HyperDual xx = HyperDual(1.5) + HyperDual::infinitesimal(0);
  const HyperDual yy = HyperDual(-0.5) + HyperDual::infinitesimal(1) + HyperDual::infinitesimal(2);
  const HyperDual f = pow(xx, 2.0) * pow(yy, 3.0);
  CHECK(f.coefficient(0b111) == doctest::Approx(12.0 * 1.5 * -0.5));
}

TEST_CASE("hyperdual: derivative and without strip one infinitesimal") {
  const HyperDual e0 = HyperDual::infinitesimal(0);
  const HyperDual e1 = HyperDual::infinitesimal(1);
  const HyperDual x = HyperDual(2.0) + e0 * 3.0 + e1 * 5.0 + e0 * e1 * 7.0;
  const HyperDual d1 = x.derivative(1);
  CHECK(d1.order() == 1);
  CHECK(d1.value() == 5.0);
  CHECK(d1.coefficient(1) == 7.0);
  const HyperDual w1 = x.without(1);
  CHECK(w1.value() == 2.0);
  CHECK(w1.coefficient(1) == 3.0);
  const HyperDual d0 = x.derivative(0);
  CHECK(d0.value() == 3.0);
  CHECK(d0.coefficient(1) == 7.0);
  CHECK(x.derivative(4).value() == 0.0);
}

TEST_CASE("hyperdual: elementary functions match series") {
  const double x0 = 0.9;
  const HyperDual x = HyperDual(x0) + HyperDual::infinitesimal(0) + HyperDual::infinitesimal(1);
  CHECK(exp(x).coefficient(3) == doctest::Approx(std::exp(x0)));
  CHECK(log(x).coefficient(3) == doctest::Approx(-1.0 / (x0 * x0)));
  CHECK(cos(x).coefficient(3) == doctest::Approx(-std::cos(x0)));
  CHECK(sqrt(x).coefficient(3) == doctest::Approx(-0.25 * std::pow(x0, -1.5)));
  CHECK(recip(x).coefficient(3) == doctest::Approx(2.0 / (x0 * x0 * x0)));
  CHECK((HyperDual(1.0) / x).coefficient(1) == doctest::Approx(-1.0 / (x0 * x0)));
  CHECK_THROWS_AS(log(HyperDual(-1.0)), DomainError);
  CHECK_THROWS_AS(HyperDual(1.0) / HyperDual(0.0), DomainError);
}

TEST_CASE("taylor2 over hyperdual differentiates the hessian") {
  // f(x) = x^4: the Hessian 12 x^2 differentiated along e0 gives 24 x.
  const double x0 = 1.3;
  const HyperDual xd = HyperDual(x0) + HyperDual::infinitesimal(0);
  const auto x = Taylor2<HyperDual>::variable(xd, 0, 1);
  const auto f = x * x * x * x;
  CHECK(f.hess(0, 0).value() == doctest::Approx(12.0 * x0 * x0));
  CHECK(f.hess(0, 0).coefficient(1) == doctest::Approx(24.0 * x0));
}

TEST_CASE("taylor2 agrees with central differences on random expressions") {
  using relmech::testing::RandomExpression;
  std::mt19937_64 rng(20240611);
  const std::vector<std::string> names{"t", "q1", "q2", "v1", "v2"};
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto tree = RandomExpression::generate(rng, names, 4);
    const auto e = relmech::expr::parse_expression(tree->source(), 2);
    const relmech::JetPoint1 p{coord(rng), {coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
    const std::vector<relmech::expr::Variable> seeds{
        {relmech::expr::VarKind::time, 0},     {relmech::expr::VarKind::position, 0},
        {relmech::expr::VarKind::position, 1}, {relmech::expr::VarKind::velocity, 0},
        {relmech::expr::VarKind::velocity, 1}};
    const auto r = relmech::expr::eval_ad(e, p, seeds);
    const std::vector<long double> x{p.t, p.q[0], p.q[1], p.v[0], p.v[1]};
    std::vector<double> grad;
    std::vector<std::vector<double>> hess;
    relmech::testing::central_differences([&](const auto& y) { return tree->eval(y); }, x, 1e-5L,
                                          grad, hess);
    CHECK(rel_close(r.value(), static_cast<double>(tree->eval(x)), 1e-12));
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK_MESSAGE(rel_close(r.grad(i), grad[i], 1e-6), tree->source());
      for (std::size_t j = 0; j < 5; ++j)
        CHECK_MESSAGE(rel_close(r.hess(i, j), hess[i][j], 1e-6), tree->source());
    }
    ++checked;
  }
  CHECK(checked == 1000);
}
