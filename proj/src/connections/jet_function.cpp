#include "relmech/connections/jet_function.hpp"

#include <stdexcept>
#include <string>

#include "relmech/expr/evaluate.hpp"

namespace relmech {

JetFunction::JetFunction(std::size_t dimension, std::size_t outputs, Body body)
    : dimension_(dimension), outputs_(outputs), body_(std::make_shared<const Body>(std::move(body))) {
  if (dimension_ == 0) throw std::invalid_argument("JetFunction: dimension must be positive");
}

JetFunction JetFunction::from_expressions(std::vector<expr::Expression> exprs, std::size_t m) {
  for (const auto& e : exprs)
    if (e.dimension() != m)
      throw std::invalid_argument("JetFunction: expression dimension " +
                                  std::to_string(e.dimension()) + " differs from " +
                                  std::to_string(m));
  const std::size_t n = exprs.size();
  return JetFunction(m, n, [exprs = std::move(exprs)](const JetArgs& p) {
    std::vector<HyperDual> out;
    out.reserve(exprs.size());
    const expr::Bindings<HyperDual> b{p.t, p.q, p.v};
    for (const auto& e : exprs) out.push_back(expr::evaluate<HyperDual>(e, b));
    return out;
  });
}

std::vector<HyperDual> JetFunction::operator()(const JetArgs& p) const {
  if (!body_) throw std::logic_error("JetFunction: empty");
  if (p.q.size() != dimension_ || (!p.v.empty() && p.v.size() != dimension_))
    throw std::invalid_argument("JetFunction: argument dimension mismatch");
  auto out = (*body_)(p);
  if (out.size() != outputs_) throw std::logic_error("JetFunction: body returned wrong arity");
  return out;
}

std::vector<double> JetFunction::operator()(const JetPoint1& p) const {
  validate(p, dimension_);
  return values((*this)(JetArgs(p)));
}

std::vector<HyperDual> directional(const JetFunction& f, const JetArgs& p, const Direction& d) {
  const int k = p.order();
  if (k >= HyperDual::kMaxOrder)
    throw std::length_error("derivative nesting exceeds the hyper-dual capacity");
  const HyperDual e = HyperDual::infinitesimal(k);
  JetArgs s = p;
  s.t += d.t * e;
  for (std::size_t j = 0; j < d.q.size(); ++j) s.q.at(j) += d.q[j] * e;
  for (std::size_t j = 0; j < d.v.size(); ++j) s.v.at(j) += d.v[j] * e;
  auto r = f(s);
  for (auto& x : r) x = x.derivative(k);
  return r;
}

namespace {

Direction unit(std::size_t m, int slot, std::size_t j) {
  Direction d;
  if (slot == 0) {
    d.t = 1.0;
  } else if (slot == 1) {
    d.q.assign(m, HyperDual(0.0));
    d.q.at(j) = 1.0;
  } else {
    d.v.assign(m, HyperDual(0.0));
    d.v.at(j) = 1.0;
  }
  return d;
}

}  // namespace

std::vector<HyperDual> partial_t(const JetFunction& f, const JetArgs& p) {
  return directional(f, p, unit(p.dimension(), 0, 0));
}

std::vector<HyperDual> partial_q(const JetFunction& f, const JetArgs& p, std::size_t j) {
  return directional(f, p, unit(p.dimension(), 1, j));
}

std::vector<HyperDual> partial_v(const JetFunction& f, const JetArgs& p, std::size_t j) {
  if (p.v.size() != p.dimension()) throw std::invalid_argument("partial_v: no velocity slot");
  return directional(f, p, unit(p.dimension(), 2, j));
}

std::vector<HyperDual> total_derivative(const JetFunction& f, const JetArgs& p) {
  if (p.v.size() != p.dimension()) throw std::invalid_argument("total_derivative: no velocity slot");
  return derivative_along(f, p, p.v);
}

std::vector<HyperDual> derivative_along(const JetFunction& f, const JetArgs& p,
                                        std::span<const HyperDual> field) {
  Direction d;
  d.t = 1.0;
  d.q.assign(field.begin(), field.end());
  return directional(f, p, d);
}

std::vector<HyperDual> second_partial_v(const JetFunction& f, const JetArgs& p, std::size_t j,
                                        std::size_t k) {
  const JetFunction inner(f.dimension(), f.outputs(),
                          [f, j](const JetArgs& a) { return partial_v(f, a, j); });
  return partial_v(inner, p, k);
}

}  // namespace relmech
