#include "relmech/bundle/sample_box.hpp"

#include <stdexcept>

namespace relmech {

double radical_inverse(std::uint64_t index, unsigned base) {
  const double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

std::vector<unsigned> first_primes(std::size_t n) {
  std::vector<unsigned> primes;
  for (unsigned k = 2; primes.size() < n; ++k) {
    bool prime = true;
    for (unsigned p : primes) {
      if (p * p > k) break;
      if (k % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(k);
  }
  return primes;
}

std::vector<JetPoint1> SampleBox::points(std::size_t m) const {
  if (t.hi < t.lo || q.hi < q.lo || v.hi < v.lo)
    throw std::invalid_argument("sample box: interval with hi < lo");
  const auto primes = first_primes(1 + 2 * m);
  const auto scale = [](const Interval& iv, double u) { return iv.lo + (iv.hi - iv.lo) * u; };
  std::vector<JetPoint1> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t index = seed + k + 1;
    JetPoint1 p;
    p.t = scale(t, radical_inverse(index, primes[0]));
    p.q.resize(m);
    p.v.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      p.q[i] = scale(q, radical_inverse(index, primes[1 + i]));
      p.v[i] = scale(v, radical_inverse(index, primes[1 + m + i]));
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace relmech
