#include "relmech/bundle/jet_point.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace relmech {
namespace {

void check_slot(const std::vector<double>& slot, std::size_t m, const char* name) {
  if (slot.size() != m)
    throw std::invalid_argument(std::string("jet point: slot ") + name + " has size " +
                                std::to_string(slot.size()) + ", expected " + std::to_string(m));
  for (double x : slot)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string("jet point: non-finite ") + name);
}

}  // namespace

void validate(const JetPoint1& p, std::size_t m) {
  if (!std::isfinite(p.t)) throw std::invalid_argument("jet point: non-finite t");
  check_slot(p.q, m, "q");
  check_slot(p.v, m, "v");
}

void validate(const JetPoint2& p, std::size_t m) {
  validate(p.first(), m);
  check_slot(p.a, m, "a");
}

}  // namespace relmech
