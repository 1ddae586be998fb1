#include "relmech/connections/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace relmech {

DynamicEquation::DynamicEquation(JetFunction xi) : xi_(std::move(xi)) {
  if (xi_.outputs() != xi_.dimension())
    throw std::invalid_argument("DynamicEquation: need one component per dimension");
}

DynamicEquation DynamicEquation::from_expressions(std::vector<expr::Expression> xi) {
  if (xi.empty()) throw std::invalid_argument("DynamicEquation: no components");
  const std::size_t m = xi.front().dimension();
  if (xi.size() != m)
    throw std::invalid_argument("DynamicEquation: " + std::to_string(xi.size()) +
                                " components for dimension " + std::to_string(m));
  DynamicEquation eq(JetFunction::from_expressions(xi, m));
  eq.source_ = std::move(xi);
  return eq;
}

DynamicEquation DynamicEquation::zero(std::size_t m) {
  std::vector<expr::Expression> xi;
  for (std::size_t i = 0; i < m; ++i) xi.push_back(expr::parse_expression("0", m));
  return from_expressions(std::move(xi));
}

ReferenceFrame::ReferenceFrame(JetFunction gamma) : gamma_(std::move(gamma)) {
  if (gamma_.outputs() != gamma_.dimension())
    throw std::invalid_argument("ReferenceFrame: need one component per dimension");
}

ReferenceFrame ReferenceFrame::from_expressions(std::vector<expr::Expression> gamma) {
  if (gamma.empty()) throw std::invalid_argument("ReferenceFrame: no components");
  const std::size_t m = gamma.front().dimension();
  if (gamma.size() != m)
    throw std::invalid_argument("ReferenceFrame: " + std::to_string(gamma.size()) +
                                " components for dimension " + std::to_string(m));
  for (std::size_t i = 0; i < m; ++i)
    if (gamma[i].depends_on(expr::VarKind::velocity))
      throw std::invalid_argument("ReferenceFrame: component " + std::to_string(i + 1) +
                                  " depends on a velocity");
  return ReferenceFrame(JetFunction::from_expressions(std::move(gamma), m));
}

ReferenceFrame ReferenceFrame::zero(std::size_t m) {
  std::vector<expr::Expression> g;
  for (std::size_t i = 0; i < m; ++i) g.push_back(expr::parse_expression("0", m));
  return from_expressions(std::move(g));
}

std::vector<double> ReferenceFrame::operator()(double t, std::span<const double> q) const {
  const std::vector<HyperDual> qq(q.begin(), q.end());
  return values((*this)(HyperDual(t), qq));
}

std::vector<HyperDual> ReferenceFrame::operator()(const HyperDual& t,
                                                  std::span<const HyperDual> q) const {
  return gamma_(JetArgs(t, {q.begin(), q.end()}, {}));
}

std::vector<HyperDual> ReferenceFrame::dt(const HyperDual& t, std::span<const HyperDual> q) const {
  return partial_t(gamma_, JetArgs(t, {q.begin(), q.end()}, {}));
}

std::vector<HyperDual> ReferenceFrame::dq(const HyperDual& t, std::span<const HyperDual> q,
                                          std::size_t j) const {
  return partial_q(gamma_, JetArgs(t, {q.begin(), q.end()}, {}), j);
}

DynamicConnection::DynamicConnection(JetFunction components) : gamma_(std::move(components)) {
  const std::size_t m = gamma_.dimension();
  if (gamma_.outputs() != (m + 1) * m)
    throw std::invalid_argument("DynamicConnection: need (m+1)*m components");
}

DynamicConnection DynamicConnection::from_expressions(
    const std::vector<std::vector<expr::Expression>>& components) {
  if (components.empty() || components.front().empty())
    throw std::invalid_argument("DynamicConnection: no components");
  const std::size_t m = components.front().front().dimension();
  if (components.size() != m + 1)
    throw std::invalid_argument("DynamicConnection: need m+1 component rows");
  std::vector<expr::Expression> flat;
  for (const auto& row : components) {
    if (row.size() != m) throw std::invalid_argument("DynamicConnection: ragged component rows");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return DynamicConnection(JetFunction::from_expressions(std::move(flat), m));
}

ConnectionComponents DynamicConnection::operator()(const JetPoint1& p) const {
  return {dimension(), gamma_(p)};
}

double TorsionTensor::max_abs() const {
  double r = 0.0;
  for (double x : data) r = std::max(r, std::abs(x));
  return r;
}

CurvatureTensor::CurvatureTensor(std::size_t m) : m_(m), upper_(m * (m + 1) * m / 2, 0.0) {}

std::size_t CurvatureTensor::pair_index(std::size_t lambda, std::size_t mu) const {
  // lambda < mu over n = m + 1 indices, row-major strict upper triangle.
  const std::size_t n = m_ + 1;
  return lambda * n - lambda * (lambda + 1) / 2 + (mu - lambda - 1);
}

double CurvatureTensor::operator()(std::size_t i, std::size_t lambda, std::size_t mu) const {
  if (i >= m_ || lambda > m_ || mu > m_) throw std::out_of_range("CurvatureTensor: index");
  if (lambda == mu) return 0.0;
  const std::size_t pairs = m_ * (m_ + 1) / 2;
  if (lambda < mu) return upper_[i * pairs + pair_index(lambda, mu)];
  return -upper_[i * pairs + pair_index(mu, lambda)];
}

void CurvatureTensor::set(std::size_t i, std::size_t lambda, std::size_t mu, double value) {
  if (i >= m_ || !(lambda < mu) || mu > m_) throw std::out_of_range("CurvatureTensor::set");
  upper_[i * (m_ * (m_ + 1) / 2) + pair_index(lambda, mu)] = value;
}

double CurvatureTensor::max_abs() const {
  double r = 0.0;
  for (double x : upper_) r = std::max(r, std::abs(x));
  return r;
}

double QuadraticFit::evaluate(std::size_t i, std::span<const double> v) const {
  double r = b0.at(i);
  for (std::size_t j = 0; j < v.size(); ++j) {
    r += b1[i][j] * v[j];
    for (std::size_t k = 0; k < v.size(); ++k) r += b2[i][j][k] * v[j] * v[k];
  }
  return r;
}

}  // namespace relmech
