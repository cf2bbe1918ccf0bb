#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kv/divisors.hpp"

namespace kv {

/// Q (p == 0) or the prime field F_p.
struct Field {
  std::uint32_t p = 0;
  std::string name() const;  ///< "Q", "F2", ...
  bool operator==(const Field&) const = default;
};
/// Accepts "q", "Q", "f2", "F3", ...; throws on anything else.
Field parse_field(const std::string& s);

/// Full subcomplex of incidence_complex(x) on the given rays.
SimplicialComplex neg_complex(const Fan& x, const Cone& neg);

/// Entry d+1 is dim H~_d for d = -1 .. dim K (so the vector has dim K + 2
/// entries, one entry {1} for the empty complex).
std::vector<std::size_t> reduced_homology(const SimplicialComplex& k, Field f);

/// Field-independent data: chain ranks and Smith invariants of each
/// boundary map. Ranks over F_p count invariants prime to p.
struct ChainData {
  std::vector<std::size_t> chain_dims;          ///< index d+1, d = -1 ..
  std::vector<std::vector<Int>> invariants;     ///< index d: the map C_d -> C_{d-1}, d = 0 ..
  std::vector<std::size_t> homology(Field f) const;
};
ChainData chain_data(const SimplicialComplex& k);

struct ChamberReport {
  Cone neg;              ///< rays with <m, u> < -a
  IneqSystem region;
  bool bounded = false;
  bool has_lattice_point = false;
  std::optional<Int> lattice_count;     ///< bounded regions only
  std::vector<std::size_t> homology;    ///< entry p is dim H~^{p-1}; empty until computed
};

inline constexpr std::size_t kMaxChamberRays = 20;

/// Feasible sign patterns in ascending bitmask order (bit i = ray i).
/// Homology is left empty.
std::vector<ChamberReport> chambers(const Fan& x, const Divisor& d);

struct CohomologyReport {
  Field field;
  std::vector<Int> dims;                 ///< h^0 .. h^rank
  std::vector<ChamberReport> chambers;   ///< chambers with nonzero homology
};

/// Complete simplicial fans. Parallel over sign patterns.
CohomologyReport coh_dims(const Fan& x, const Divisor& d, Field f);
/// Same result, single-threaded reference.
CohomologyReport coh_dims_serial(const Fan& x, const Divisor& d, Field f);
/// Several fields from one pass over the sign patterns.
std::vector<CohomologyReport> coh_dims(const Fan& x, const Divisor& d, const std::vector<Field>& fs);
std::vector<CohomologyReport> coh_dims_serial(const Fan& x, const Divisor& d, const std::vector<Field>& fs);

struct Vanishing {
  bool vanishes = true;
  std::optional<Cone> witness;  ///< pattern of the offending chamber
  std::size_t degree = 0;       ///< p >= 1 with H~^{p-1} != 0
};

/// Support-convex simplicial fans: H^p(X, O(D)) = 0 for all p > 0.
Vanishing vanishing_higher(const Fan& x, const Divisor& d, Field f);

/// Degree-m piece of the Cech complex on the cover by maximal cones.
std::vector<std::size_t> cech_graded(const Fan& x, const Divisor& d, const IntVec& m, Field f);

}  // namespace kv
