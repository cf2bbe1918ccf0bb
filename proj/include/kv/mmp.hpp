#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kv/mori.hpp"

namespace kv {

struct Contraction {
  enum class Kind { Divisorial, Flipping, Fibration };
  Kind kind = Kind::Flipping;
  Fan target;
  ToricMap map;                         ///< source -> target
  std::optional<std::size_t> removed;   ///< Divisorial: ray index in the source
  std::vector<Cone> merged;             ///< ray sets (source indices) of the merged cones
};

/// Contraction of an extremal ray of a simplicial fan.
Contraction contract(const Fan& x, const ExtremalRay& r);

struct Flip {
  Fan plus;       ///< X+, same rays as X
  Fan z;          ///< the contracted fan
  ToricMap to_z;  ///< X+ -> Z
};

/// The D-flip of a flipping extremal ray (requires D.R < 0).
Flip flip(const Fan& x, const ExtremalRay& r, const Divisor& d);

struct FlipDiagram {
  Fan theta;
  IntVec e_ray;
  std::size_t e_index = 0;  ///< index of e_ray in theta
  ToricMap psi;             ///< theta -> X
  ToricMap psi_plus;        ///< theta -> X+
  /// kappa(F) = gamma.F, where psi^*F - psi'^*F' = -kappa(F) E.
  CurveClass gamma;
  /// gamma = lambda * (class of the flipped wall), lambda > 0.
  Rat lambda;
};

FlipDiagram flip_diagram(const Fan& x, const Fan& xplus, const ExtremalRay& r);
/// Coefficient difference (psi'^*F')_E - (psi^*F)_E, computed from the fans.
Rat kappa(const FlipDiagram& g, const Divisor& f);

struct StepCertificate {
  enum class Kind { Divisorial, Flip };
  enum class Case { None, Low, High };
  Kind kind = Kind::Divisorial;
  Case flip_case = Case::None;
  IntVec exceptional;
  Rat a, b, c;
  Int m_shift;
  Divisor d_y;  ///< flips only: the divisor on the common resolution
  bool ok = true;
  std::string failure;
};

/// Certificate for a flip step (X_n, D_n, B_n) with its diagram.
StepCertificate step_certificate(const FlipDiagram& g, const Fan& x, const Divisor& d, const Divisor& b);

struct MMPStep {
  std::size_t wall = 0;  ///< index into walls(X_n) of the representative wall
  Cone wall_rays;        ///< its rays (indices into X_n)
  StepCertificate cert;
  std::optional<FlipDiagram> diagram;
};

struct MMPRun {
  enum class End { Nef, MoriFibreSpace };
  std::vector<Fan> models;
  std::vector<Divisor> divisors;
  std::vector<Divisor> boundaries;
  std::vector<MMPStep> steps;
  End end = End::Nef;
  std::optional<Contraction> fibration;
  std::optional<ExtremalRay> fibre_ray;
};

inline constexpr std::size_t kStepCap = 10000;

MMPRun run_mmp(const Fan& x, const Divisor& d, const Divisor& b);

}  // namespace kv
