#include <map>

#include "kv/exact.hpp"

namespace kv {
namespace {

// Feasibility of { lambda >= 0 : sum lambda_j g_j = target, [sum lambda = 1] }.
bool nonneg_combination(const std::vector<RatVec>& gens, const RatVec& target, bool normalized) {
  const std::size_t d = target.size(), k = gens.size();
  if (k == 0) return !normalized && is_zero(target);
  RatMat A(d + (normalized ? 1 : 0), k);
  RatVec b(A.rows()), c(k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < d; ++i) A(i, j) = gens[j][i];
  for (std::size_t i = 0; i < d; ++i) b[i] = target[i];
  if (normalized) {
    for (std::size_t j = 0; j < k; ++j) A(d, j) = 1;
    b[d] = 1;
  }
  return simplex_standard(A, b, c).status == LpResult::Status::Optimal;
}

}  // namespace

bool contains_line(const std::vector<RatVec>& generators) {
  std::vector<RatVec> nz;
  for (const auto& g : generators)
    if (!is_zero(g)) nz.push_back(g);
  if (nz.empty()) return false;
  return nonneg_combination(nz, RatVec(nz[0].size()), true);
}

bool cone_contains(const std::vector<RatVec>& generators, const RatVec& v) {
  if (is_zero(v)) return true;
  if (generators.empty()) return false;
  const std::size_t d = v.size();
  RatMat A = RatMat::from_cols(generators, d);
  if (rank_of(A) == generators.size()) {
    auto s = solve_rational(A, v);
    if (!s.consistent()) return false;
    for (const auto& x : s.particular)
      if (x < 0) return false;
    return true;
  }
  return nonneg_combination(generators, v, false);
}

bool cone_contains(const std::vector<IntVec>& generators, const IntVec& v) {
  std::vector<RatVec> g;
  for (const auto& x : generators) g.push_back(to_rat(x));
  return cone_contains(g, to_rat(v));
}

std::vector<std::size_t> extreme_rays(const std::vector<RatVec>& generators) {
  // one representative per direction, zero vectors dropped
  std::map<IntVec, std::size_t, bool (*)(const IntVec&, const IntVec&)> seen(lex_less);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (is_zero(generators[i])) continue;
    IntVec dir = primitive(generators[i]);
    if (seen.emplace(dir, i).second) reps.push_back(i);
  }
  std::vector<RatVec> g;
  for (auto i : reps) g.push_back(generators[i]);
  if (contains_line(g)) throw Error("not strongly convex");
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < reps.size(); ++a) {
    std::vector<RatVec> others;
    for (std::size_t b = 0; b < reps.size(); ++b)
      if (b != a) others.push_back(g[b]);
    if (!cone_contains(others, g[a])) out.push_back(reps[a]);
  }
  return out;
}

std::vector<std::size_t> extreme_rays(const std::vector<IntVec>& generators) {
  std::vector<RatVec> g;
  for (const auto& x : generators) g.push_back(to_rat(x));
  return extreme_rays(g);
}

}  // namespace kv
