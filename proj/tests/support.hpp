#pragma once

// Small helpers shared by the unit tests.

#include <initializer_list>
#include <optional>
#include <random>

#include "kv/fan.hpp"

namespace kvtest {

inline kv::IntVec iv(std::initializer_list<long> xs) {
  kv::IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline kv::RatVec rv(std::initializer_list<long> xs) {
  kv::RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline kv::Rat q(long p, long d = 1) {
  kv::Rat r(p, d);
  r.canonicalize();
  return r;
}

/// Random primitive lattice vector in |f| that is not already a ray.
template <class Rng>
std::optional<kv::IntVec> random_support_point(const kv::Fan& f, Rng& rng, long bound) {
  std::uniform_int_distribution<long> d(-bound, bound);
  for (int attempt = 0; attempt < 200; ++attempt) {
    kv::IntVec v(f.rank);
    for (auto& x : v) x = d(rng);
    if (kv::is_zero(v) || kv::gcd_of(v) != 1) continue;
    if (f.ray_index(v) != kv::Fan::npos) continue;
    if (kv::in_support(f, v)) return v;
  }
  return std::nullopt;
}

}  // namespace kvtest
