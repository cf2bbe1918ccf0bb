#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kv/exact.hpp"

namespace kv {

/// Sorted ray indices of a cone.
using Cone = std::vector<std::size_t>;

/// A rational polyhedral fan given by its maximal cones.
///
/// The constructor canonicalizes: rays are sorted lexicographically, each
/// cone's index set is sorted and the cone list is sorted. Two fans are
/// equal iff they are structurally identical after canonicalization.
struct Fan {
  std::size_t rank = 0;
  std::vector<IntVec> rays;
  std::vector<Cone> cones;

  Fan() = default;
  Fan(std::size_t rank, std::vector<IntVec> rays, std::vector<Cone> cones);

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t nrays() const { return rays.size(); }
  std::size_t ray_index(const IntVec& u) const;
  std::vector<IntVec> cone_rays(const Cone& c) const;
  /// Dimension of the linear span of a cone.
  std::size_t cone_dim(const Cone& c) const;
  bool operator==(const Fan& o) const = default;
};

struct Defect {
  std::string kind;  ///< e.g. "intersection not a face"
  std::optional<std::size_t> cone_a, cone_b, ray;
  std::string to_string() const;
};

/// Empty list means the fan is valid.
std::vector<Defect> validate(const Fan& f);
/// Throws Error with the first defect.
void require_valid(const Fan& f);

struct FanProperties {
  bool simplicial = false;
  bool smooth = false;
  bool complete = false;
  bool support_convex = false;
  /// Smallest l with lK Cartier; nullopt if K is not Q-Cartier.
  std::optional<Int> q_gorenstein_index;
};

FanProperties properties(const Fan& f);
bool is_simplicial(const Fan& f);
bool is_complete(const Fan& f);
bool is_support_convex(const Fan& f);

/// Halfspace description of cone(rays): <ineq, x> >= 0 and <eq, x> = 0.
struct ConeHrep {
  std::vector<IntVec> ineqs;
  std::vector<IntVec> eqs;
};

/// Facets of cone(generators) as index sets into `generators`, each with an
/// inward normal lying in the span of the cone.
struct ConeFacet {
  Cone gens;
  IntVec normal;
};
std::vector<ConeFacet> cone_facets(const std::vector<IntVec>& generators);

/// m with <m, g_i> = values[i] for all generators; among solutions, the one
/// vanishing on the SNF complement of their span. nullopt if inconsistent.
std::optional<RatVec> cone_covector(const std::vector<IntVec>& generators, const RatVec& values,
                                    std::size_t rank);
ConeHrep cone_hrep(const std::vector<IntVec>& generators, std::size_t rank);

/// Facets of the fan's maximal cones that bound only one maximal cone
/// (pure fans), as ray-index sets with inward normals.
std::vector<ConeFacet> boundary_facets(const Fan& f);

struct TorusSplit {
  Fan reduced;
  std::size_t r = 0;
  /// Unimodular; the first rank(reduced) rows give coordinates on the
  /// saturated span of the support.
  IntMat change_of_basis;
  /// Original ray index -> reduced ray index.
  std::vector<std::size_t> ray_map;
};

TorusSplit torus_factor(const Fan& f);

/// Lattice homomorphism from source N (columns) to target N' (rows).
struct ToricMap {
  IntMat matrix;
  Fan source;
  Fan target;
};

struct MapCheck {
  bool well_defined = false;
  bool proper = false;
  bool birational = false;
};

MapCheck check_map(const ToricMap& m);

struct Subdivision {
  Fan fan;
  ToricMap map;  ///< identity matrix, to the input fan
};

Subdivision star_subdivide(const Fan& f, const IntVec& v);
/// Pulling triangulation at the lowest global ray index; no new rays.
Subdivision q_factorialize(const Fan& f);

struct SimplicialComplex {
  std::size_t nverts = 0;
  std::vector<Cone> facets;  ///< sorted, maximal faces only
};

SimplicialComplex incidence_complex(const Fan& f);

/// Index of a maximal cone containing v, or npos.
std::size_t locate(const Fan& f, const IntVec& v);
bool in_support(const Fan& f, const IntVec& v);

// ----------------------------------------------------------- standard fans

namespace fans {
Fan projective_space(std::size_t n);
Fan product(const Fan& a, const Fan& b);
/// P(1,1,2): rays (1,0), (0,1), (-1,-2).
Fan p112();
/// Hirzebruch surface F_a: rays (1,0), (0,1), (-1,a), (0,-1).
Fan hirzebruch(long a);
/// Complete fan over the faces of the cube [-1,1]^3 (8 rays, 6 square cones).
Fan cube();
/// rays u1=(1,0,0), u2=(0,1,0), u3=(0,0,1), u4; cones {u1,u2,u3}, {u1,u2,u4}.
Fan flip_side_a(const IntVec& u4);
/// Same rays; cones {u1,u3,u4}, {u2,u3,u4}.
Fan flip_side_b(const IntVec& u4);
}  // namespace fans

}  // namespace kv
