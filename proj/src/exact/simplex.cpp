// Dense two-phase simplex over mpq with Bland's rule (no cycling).

#include <utility>

#include "kv/exact.hpp"

namespace kv {
namespace {

class Tableau {
 public:
  // rows: constraint rows; cols: variable columns; last column is rhs.
  Tableau(std::size_t rows, std::size_t vars) : T_(rows, vars + 1), basis_(rows), vars_(vars) {}

  Rat& at(std::size_t i, std::size_t j) { return T_(i, j); }
  Rat& rhs(std::size_t i) { return T_(i, vars_); }
  std::size_t rows() const { return T_.rows(); }
  std::size_t vars() const { return vars_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    Rat inv = 1 / T_(r, c);
    for (std::size_t j = 0; j <= vars_; ++j)
      if (T_(r, j) != 0) T_(r, j) *= inv;
    for (std::size_t i = 0; i < T_.rows(); ++i) {
      if (i == r || T_(i, c) == 0) continue;
      Rat f = T_(i, c);
      for (std::size_t j = 0; j <= vars_; ++j)
        if (T_(r, j) != 0) T_(i, j) -= f * T_(r, j);
    }
    basis_[r] = c;
  }

  // Maximize cost over columns allowed[j]; returns false if unbounded.
  bool optimize(const RatVec& cost, const std::vector<bool>& allowed) {
    for (;;) {
      // reduced costs r_j = c_j - sum_i c_{B_i} T(i, j)
      std::size_t enter = vars_;
      for (std::size_t j = 0; j < vars_ && enter == vars_; ++j) {
        if (!allowed[j]) continue;
        Rat r = cost[j];
        for (std::size_t i = 0; i < T_.rows(); ++i)
          if (T_(i, j) != 0) r -= cost[basis_[i]] * T_(i, j);
        if (r > 0) enter = j;
      }
      if (enter == vars_) return true;
      std::size_t leave = T_.rows();
      Rat best;
      for (std::size_t i = 0; i < T_.rows(); ++i) {
        if (T_(i, enter) <= 0) continue;
        Rat ratio = T_(i, vars_) / T_(i, enter);
        if (leave == T_.rows() || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == T_.rows()) return false;
      pivot(leave, enter);
    }
  }

  void drop_row(std::size_t r) {
    RatMat N(T_.rows() - 1, vars_ + 1);
    std::vector<std::size_t> nb;
    for (std::size_t i = 0, k = 0; i < T_.rows(); ++i) {
      if (i == r) continue;
      for (std::size_t j = 0; j <= vars_; ++j) N(k, j) = T_(i, j);
      nb.push_back(basis_[i]);
      ++k;
    }
    T_ = std::move(N);
    basis_ = std::move(nb);
  }

 private:
  RatMat T_;
  std::vector<std::size_t> basis_;
  std::size_t vars_;
};

}  // namespace

LpResult simplex_standard(const RatMat& A, const RatVec& b, const RatVec& c) {
  const std::size_t m = A.rows(), n = A.cols();
  if (b.size() != m || c.size() != n) throw Error("simplex: dimension mismatch");
  LpResult res;

  // columns: n structural + m artificial
  Tableau tab(m, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = flip ? Rat(-A(i, j)) : A(i, j);
    tab.at(i, n + i) = 1;
    tab.rhs(i) = flip ? Rat(-b[i]) : b[i];
    tab.basis()[i] = n + i;
  }

  // phase 1: maximize -sum(artificials)
  RatVec cost1(n + m);
  for (std::size_t i = 0; i < m; ++i) cost1[n + i] = -1;
  std::vector<bool> all(n + m, true);
  tab.optimize(cost1, all);
  Rat infeas = 0;
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.basis()[i] >= n) infeas += tab.rhs(i);
  if (infeas != 0) {
    res.status = LpResult::Status::Infeasible;
    return res;
  }

  // drive artificials out of the basis; drop redundant rows
  for (std::size_t i = 0; i < tab.rows();) {
    if (tab.basis()[i] < n) {
      ++i;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j)
      if (tab.at(i, j) != 0) {
        col = j;
        break;
      }
    if (col == n) {
      tab.drop_row(i);
    } else {
      tab.pivot(i, col);
      ++i;
    }
  }

  RatVec cost2(n + m);
  for (std::size_t j = 0; j < n; ++j) cost2[j] = c[j];
  std::vector<bool> structural(n + m, false);
  for (std::size_t j = 0; j < n; ++j) structural[j] = true;
  if (!tab.optimize(cost2, structural)) {
    res.status = LpResult::Status::Unbounded;
    return res;
  }
  res.status = LpResult::Status::Optimal;
  res.z.assign(n, Rat(0));
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.basis()[i] < n) res.z[tab.basis()[i]] = tab.rhs(i);
  res.value = 0;
  for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.z[j];
  return res;
}

std::optional<RatVec> feasible_simplex(const IneqSystem& sys) {
  sys.check();
  const std::size_t n = sys.dim, m = sys.rows.size();
  bool any_strict = false;
  for (const auto& r : sys.rows) any_strict = any_strict || r.strict;

  // variables: x+ (n), x- (n), t (1), slack per row (m), slack for t <= 1 (1)
  const std::size_t nt = 2 * n, ns = 2 * n + 1, nvars = 2 * n + 1 + m + 1;
  RatMat A(m + 1, nvars);
  RatVec b(m + 1), c(nvars);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& r = sys.rows[i];
    for (std::size_t j = 0; j < n; ++j) {
      A(i, j) = r.covector[j];
      A(i, n + j) = -r.covector[j];
    }
    if (r.strict) A(i, nt) = -1;
    A(i, ns + i) = -1;
    b[i] = r.constant;
  }
  A(m, nt) = 1;
  A(m, ns + m) = 1;
  b[m] = 1;
  if (any_strict) c[nt] = 1;

  LpResult lp = simplex_standard(A, b, c);
  if (lp.status != LpResult::Status::Optimal) return std::nullopt;
  if (any_strict && lp.z[nt] <= 0) return std::nullopt;
  RatVec x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = lp.z[j] - lp.z[n + j];
  return x;
}

}  // namespace kv
