#include <utility>

#include "kv/exact.hpp"

namespace kv {
namespace {

struct Rref {
  RatMat M;                         // reduced matrix (augmented if requested)
  std::vector<std::size_t> pivots;  // pivot column per pivot row
};

// Reduced row echelon form over the first `ncols` columns.
Rref rref(RatMat M, std::size_t ncols) {
  Rref r;
  std::size_t row = 0;
  for (std::size_t c = 0; c < ncols && row < M.rows(); ++c) {
    std::size_t p = row;
    while (p < M.rows() && M(p, c) == 0) ++p;
    if (p == M.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < M.cols(); ++j) std::swap(M(p, j), M(row, j));
    Rat inv = 1 / M(row, c);
    for (std::size_t j = 0; j < M.cols(); ++j) M(row, j) *= inv;
    for (std::size_t i = 0; i < M.rows(); ++i) {
      if (i == row || M(i, c) == 0) continue;
      Rat f = M(i, c);
      for (std::size_t j = 0; j < M.cols(); ++j)
        if (M(row, j) != 0) M(i, j) -= f * M(row, j);
    }
    r.pivots.push_back(c);
    ++row;
  }
  r.M = std::move(M);
  return r;
}

std::vector<RatVec> kernel_from_rref(const Rref& r, std::size_t ncols) {
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : r.pivots) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    RatVec v(ncols);
    v[f] = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.M(i, f);
    // normalize: first nonzero entry is 1
    for (const auto& x : v)
      if (x != 0) {
        Rat s = 1 / x;
        for (auto& y : v) y *= s;
        break;
      }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

std::size_t rank_of(const RatMat& A) { return rref(A, A.cols()).pivots.size(); }

std::size_t rank_of(const IntMat& A) {
  RatMat R(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) R(i, j) = A(i, j);
  return rank_of(R);
}

std::vector<RatVec> kernel(const RatMat& A) { return kernel_from_rref(rref(A, A.cols()), A.cols()); }

std::vector<IntVec> integer_kernel(const IntMat& A) {
  RatMat R(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) R(i, j) = A(i, j);
  std::vector<IntVec> out;
  for (const auto& v : kernel(R)) out.push_back(primitive(v));
  return out;
}

LinearSolution solve_rational(const RatMat& A, const RatVec& b) {
  if (A.rows() != b.size()) throw Error("solve_rational: dimension mismatch");
  const std::size_t n = A.cols();
  RatMat Aug(A.rows(), n + 1);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) Aug(i, j) = A(i, j);
    Aug(i, n) = b[i];
  }
  Rref r = rref(std::move(Aug), n);
  LinearSolution sol;
  for (std::size_t i = r.pivots.size(); i < r.M.rows(); ++i)
    if (r.M(i, n) != 0) return sol;  // 0 = nonzero
  sol.particular.assign(n, Rat(0));
  for (std::size_t i = 0; i < r.pivots.size(); ++i) sol.particular[r.pivots[i]] = r.M(i, n);
  sol.kernel = kernel_from_rref(r, n);
  sol.kind = sol.kernel.empty() ? LinearSolution::Kind::Unique : LinearSolution::Kind::Affine;
  return sol;
}

}  // namespace kv
