#include <algorithm>
#include <utility>

#include "checked_int.hpp"
#include "kv/exact.hpp"

namespace kv {
namespace {

using detail::abs_of;
using detail::I64;

// In-place Smith reduction. When U/V are non-null they accumulate the row and
// column operations so that U * A_in * V == A_out.
template <class T>
void smith_in_place(Matrix<T>& A, Matrix<T>* U, Matrix<T>* V) {
  const std::size_t m = A.rows(), n = A.cols();
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < n; ++c) std::swap(A(i, c), A(j, c));
    if (U)
      for (std::size_t c = 0; c < m; ++c) std::swap((*U)(i, c), (*U)(j, c));
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < m; ++r) std::swap(A(r, i), A(r, j));
    if (V)
      for (std::size_t r = 0; r < n; ++r) std::swap((*V)(r, i), (*V)(r, j));
  };
  // row_i += q * row_j
  auto add_row = [&](std::size_t i, std::size_t j, const T& q) {
    for (std::size_t c = 0; c < n; ++c)
      if (A(j, c) != 0) A(i, c) += q * A(j, c);
    if (U)
      for (std::size_t c = 0; c < m; ++c)
        if ((*U)(j, c) != 0) (*U)(i, c) += q * (*U)(j, c);
  };
  auto add_col = [&](std::size_t i, std::size_t j, const T& q) {
    for (std::size_t r = 0; r < m; ++r)
      if (A(r, j) != 0) A(r, i) += q * A(r, j);
    if (V)
      for (std::size_t r = 0; r < n; ++r)
        if ((*V)(r, j) != 0) (*V)(r, i) += q * (*V)(r, j);
  };

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    // smallest nonzero pivot in the trailing block
    bool found = false;
    std::size_t pi = t, pj = t;
    T best = 0;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (A(i, j) != 0 && (!found || abs_of(A(i, j)) < best)) {
          found = true;
          best = abs_of(A(i, j));
          pi = i;
          pj = j;
        }
    if (!found) break;
    swap_rows(t, pi);
    swap_cols(t, pj);

    for (;;) {
      bool changed = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (A(i, t) == 0) continue;
        T q = A(i, t) / A(t, t);
        add_row(i, t, -q);
        if (A(i, t) != 0) {
          swap_rows(t, i);
          changed = true;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (A(t, j) == 0) continue;
        T q = A(t, j) / A(t, t);
        add_col(j, t, -q);
        if (A(t, j) != 0) {
          swap_cols(t, j);
          changed = true;
        }
      }
      if (changed) continue;
      bool fixed = false;
      for (std::size_t i = t + 1; i < m && !fixed; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (A(i, j) % A(t, t) != 0) {
            add_row(t, i, T(1));
            fixed = true;
            break;
          }
      if (!fixed) break;
    }
    if (A(t, t) < 0) {
      for (std::size_t c = 0; c < n; ++c) A(t, c) = -A(t, c);
      if (U)
        for (std::size_t c = 0; c < m; ++c) (*U)(t, c) = -(*U)(t, c);
    }
  }
}

template <class T>
std::vector<Int> diagonal_invariants(const Matrix<T>& S) {
  std::vector<Int> out;
  for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i)
    if (S(i, i) != 0) out.push_back(detail::to_mpz(S(i, i)));
  return out;
}

}  // namespace

std::vector<Int> SmithForm::invariants() const { return diagonal_invariants(S); }

SmithForm smith_normal_form(const IntMat& A) {
  SmithForm f;
  f.S = A;
  f.U = IntMat::identity(A.rows());
  f.V = IntMat::identity(A.cols());
  smith_in_place(f.S, &f.U, &f.V);
  f.rank = f.invariants().size();
  return f;
}

std::vector<Int> smith_invariants(const IntMat& A) {
  try {
    Matrix<I64> B(A.rows(), A.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
      for (std::size_t j = 0; j < A.cols(); ++j) B(i, j) = detail::from_mpz<I64>(A(i, j));
    smith_in_place<I64>(B, nullptr, nullptr);
    return diagonal_invariants(B);
  } catch (const Overflow&) {
    IntMat B = A;
    smith_in_place<Int>(B, nullptr, nullptr);
    return diagonal_invariants(B);
  }
}

std::vector<Int> smith_invariants(std::size_t rows, std::size_t cols,
                                  const std::vector<std::int64_t>& entries) {
  if (entries.size() != rows * cols) throw Error("smith_invariants: size mismatch");
  try {
    Matrix<I64> B(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) B(i, j) = entries[i * cols + j];
    smith_in_place<I64>(B, nullptr, nullptr);
    return diagonal_invariants(B);
  } catch (const Overflow&) {
    IntMat B(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) B(i, j) = static_cast<long>(entries[i * cols + j]);
    smith_in_place<Int>(B, nullptr, nullptr);
    return diagonal_invariants(B);
  }
}

Int determinant(const IntMat& A) {
  if (A.rows() != A.cols()) throw Error("determinant of a non-square matrix");
  const std::size_t n = A.rows();
  if (n == 0) return 1;
  // Bareiss fraction-free elimination.
  IntMat M = A;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (M(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && M(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(M(k, c), M(p, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int num = M(i, j) * M(k, k) - M(i, k) * M(k, j);
        mpz_divexact(M(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = M(k, k);
  }
  return sign * M(n - 1, n - 1);
}

}  // namespace kv
