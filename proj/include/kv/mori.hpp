#pragma once

#include <vector>

#include "kv/divisors.hpp"

namespace kv {

/// Codimension-one cone tau = sigma ∩ sigma2 of a simplicial fan.
struct Wall {
  Cone tau;
  std::size_t sigma = 0, sigma2 = 0;  ///< indices into Fan::cones
  std::size_t off = 0, off2 = 0;      ///< the ray of sigma (resp. sigma2) not on tau
};

/// Interior walls, sorted by their ray sets.
std::vector<Wall> walls(const Fan& x);

/// Coefficients b (one per ray) with sum b_rho u_rho = 0, supported on
/// sigma ∪ sigma2, b_off = mult(tau)/mult(sigma), b_off2 = mult(tau)/mult(sigma2).
/// With this scale D.C = sum a_rho b_rho.
RatVec wall_relation(const Fan& x, const Wall& w);

/// Pairing functional: D.C = sum a_rho c_rho.
struct CurveClass {
  RatVec c;
  Rat pair(const Divisor& d) const { return dot(c, d); }
};

CurveClass curve_class(const Fan& x, const Wall& w);

/// D.C_w from Cartier data, b_off2 * <m_sigma - m_sigma2, u_off2>. Checked
/// against the swapped formula and the curve class.
Rat intersect(const Fan& x, const Divisor& d, const Wall& w);
Rat intersect(const Fan& x, const Divisor& d, const Wall& w, const CartierData& cd);

struct ExtremalRay {
  CurveClass cls;                   ///< class of the first listed wall
  std::vector<std::size_t> walls;   ///< indices into walls(x), ascending
};

/// Extremal rays of the cone spanned by all wall classes, ordered by their
/// smallest wall index.
std::vector<ExtremalRay> extremal_rays(const Fan& x);

/// Lattice index of the cone's rays in their saturated span.
Int multiplicity(const Fan& x, const Cone& c);

}  // namespace kv
