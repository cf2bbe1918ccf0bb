#pragma once

// Exact integer/rational linear algebra and polyhedral primitives.
//
// Everything here is pure: inputs are taken by const reference and results
// are returned by value, so any function may be called concurrently from
// independent threads.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kv {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the fixed-width fast paths; callers retry with mpz.
class Overflow : public std::exception {
 public:
  const char* what() const noexcept override { return "int64 overflow"; }
};

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw Error("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  /// Matrix whose columns are the given vectors.
  static Matrix from_cols(const std::vector<std::vector<T>>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw Error("ragged matrix columns");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw Error("matrix product dimension mismatch");
    Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }
  std::vector<T> operator*(const std::vector<T>& v) const {
    if (cols_ != v.size()) throw Error("matrix-vector dimension mismatch");
    std::vector<T> r(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }
  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMat = Matrix<Int>;
using RatMat = Matrix<Rat>;

// ---------------------------------------------------------------- vectors

Int gcd_of(const IntVec& v);
bool is_zero(const IntVec& v);
bool is_zero(const RatVec& v);
/// v / gcd(v). Throws "not a direction" on the zero vector.
IntVec primitive(const IntVec& v);
/// Smallest positive integer multiple of a rational vector, made primitive.
IntVec primitive(const RatVec& v);
RatVec to_rat(const IntVec& v);
Rat dot(const RatVec& a, const RatVec& b);
Rat dot(const RatVec& a, const IntVec& b);
Int dot(const IntVec& a, const IntVec& b);
Int lcm_of_denominators(const RatVec& v);
std::string to_string(const Rat& q);
std::string to_string(const IntVec& v);
std::string to_string(const RatVec& v);
bool lex_less(const IntVec& a, const IntVec& b);

// ---------------------------------------------------------- Smith form

struct SmithForm {
  IntMat S;  ///< diagonal, d_i | d_{i+1}, d_i >= 0
  IntMat U;  ///< unimodular, rows x rows
  IntMat V;  ///< unimodular, cols x cols
  std::size_t rank = 0;
  /// Nonzero diagonal entries in order.
  std::vector<Int> invariants() const;
};

/// U * A * V == S.
SmithForm smith_normal_form(const IntMat& A);

/// Nonzero invariant factors only; uses an int64 fast path when possible.
std::vector<Int> smith_invariants(const IntMat& A);

/// Invariant factors of a small integer matrix given row-major as int64.
/// Falls back to mpz internally on overflow.
std::vector<Int> smith_invariants(std::size_t rows, std::size_t cols,
                                  const std::vector<std::int64_t>& entries);

Int determinant(const IntMat& A);

// ------------------------------------------------------ rational solving

std::size_t rank_of(const RatMat& A);
std::size_t rank_of(const IntMat& A);
/// Basis of {x : A x = 0}; each vector scaled so its first nonzero entry is 1.
std::vector<RatVec> kernel(const RatMat& A);
std::vector<IntVec> integer_kernel(const IntMat& A);

struct LinearSolution {
  enum class Kind { Unique, Affine, Inconsistent };
  Kind kind = Kind::Inconsistent;
  RatVec particular;            ///< free variables set to zero
  std::vector<RatVec> kernel;   ///< empty for Unique
  bool consistent() const { return kind != Kind::Inconsistent; }
};

LinearSolution solve_rational(const RatMat& A, const RatVec& b);

// ----------------------------------------------------- inequality systems

struct Inequality {
  RatVec covector;
  Rat constant;
  bool strict = false;  ///< <covector, x> > constant, else >=
};

struct IneqSystem {
  std::size_t dim = 0;
  std::vector<Inequality> rows;

  IneqSystem() = default;
  explicit IneqSystem(std::size_t d) : dim(d) {}
  IneqSystem& geq(RatVec c, Rat k);
  IneqSystem& gt(RatVec c, Rat k);
  IneqSystem& leq(RatVec c, Rat k);
  IneqSystem& lt(RatVec c, Rat k);
  IneqSystem& eq(RatVec c, Rat k);
  void check() const;
};

/// Exact witness or nullopt (infeasible). Strict rows are honored exactly.
std::optional<RatVec> feasible(const IneqSystem& sys);
/// Fourier-Motzkin route (exact; meant for small dimension).
std::optional<RatVec> feasible_fm(const IneqSystem& sys);
/// Two-phase simplex route (exact; used for larger dimension).
std::optional<RatVec> feasible_simplex(const IneqSystem& sys);

/// True iff the closure of the (nonempty) solution set is bounded.
/// Throws "empty region" if infeasible.
bool is_bounded(const IneqSystem& sys);

/// Integer points of a bounded system in lexicographic order.
/// Throws on an unbounded system.
std::vector<IntVec> lattice_points(const IneqSystem& sys);
/// Count of integer points of a bounded system.
std::size_t count_lattice_points(const IneqSystem& sys);
/// Some integer point of an arbitrary (possibly unbounded) system.
std::optional<IntVec> find_lattice_point(const IneqSystem& sys);

// -------------------------------------------------------------- cones

/// Indices of the extremal generators (first representative of each
/// direction), in input order. Throws "not strongly convex".
std::vector<std::size_t> extreme_rays(const std::vector<IntVec>& generators);
std::vector<std::size_t> extreme_rays(const std::vector<RatVec>& generators);

/// v in cone(generators)?
bool cone_contains(const std::vector<RatVec>& generators, const RatVec& v);
bool cone_contains(const std::vector<IntVec>& generators, const IntVec& v);

/// Does cone(generators) contain a line?
bool contains_line(const std::vector<RatVec>& generators);

// ------------------------------------------------------------ simplex

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  RatVec z;
  Rat value;
};

/// maximize c.z subject to A z = b, z >= 0.
LpResult simplex_standard(const RatMat& A, const RatVec& b, const RatVec& c);

}  // namespace kv
