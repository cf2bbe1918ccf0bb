#pragma once

#include <string>
#include <variant>
#include <vector>

#include "kv/fan.hpp"

namespace kv {

/// Torus-invariant Q-divisor: one coefficient per ray of a fan.
using Divisor = RatVec;

Divisor canonical(const Fan& x);
/// div(m) = sum <m, u_rho> D_rho.
Divisor principal(const Fan& x, const RatVec& m);
Divisor principal(const Fan& x, const IntVec& m);
/// Prime divisor of the ray u.
Divisor prime(const Fan& x, const IntVec& u);
bool is_integral(const Divisor& d);
Divisor operator+(const Divisor& a, const Divisor& b);
Divisor operator-(const Divisor& a, const Divisor& b);
Divisor operator*(const Rat& s, const Divisor& a);

struct CartierData {
  std::vector<RatVec> m;  ///< one covector per maximal cone, same order as Fan::cones
};

struct NotQCartier {
  std::size_t cone;
};

std::variant<CartierData, NotQCartier> cartier_data(const Fan& x, const Divisor& d);
/// Throws Error naming the offending cone.
CartierData require_cartier(const Fan& x, const Divisor& d);
bool is_q_cartier(const Fan& x, const Divisor& d);

struct Positivity {
  bool nef = false;
  bool ample = false;
  bool big = false;
};

Positivity positivity(const Fan& x, const Divisor& d);
bool is_nef(const Fan& x, const Divisor& d);

struct SemiampleWitness {
  Int multiple;                      ///< l with l*D Cartier
  std::vector<IntVec> generators;    ///< l*m_sigma per maximal cone
  bool certificate = false;          ///< every generator lies in P_{lD}
};

struct NotNef {
  std::size_t cone;
  std::size_t ray;
};

std::variant<SemiampleWitness, NotNef> semiample_witness(const Fan& x, const Divisor& d);

struct KltResult {
  bool ok = false;
  std::string reason;
};

KltResult klt_check(const Fan& x, const Divisor& b);

/// a with K_Y + B' = pullback(K_X + B) + a E for the blowup at v.
Rat discrepancy(const Fan& x, const Divisor& b, const IntVec& v);

Divisor pullback(const ToricMap& f, const Divisor& d);
Divisor pushforward(const ToricMap& f, const Divisor& d);

enum class Rounding { Up, Down };
Divisor round(const Divisor& d, Rounding dir);

/// {m : <m, u_rho> >= -a_rho for all rho}.
IneqSystem section_polytope(const Fan& x, const Divisor& d);

struct H0 {
  enum class Kind { Zero, Count, Infinite };
  Kind kind = Kind::Zero;
  Int count;  ///< valid for Zero (0) and Count
};

H0 h0_dim(const Fan& x, const Divisor& d);

}  // namespace kv
