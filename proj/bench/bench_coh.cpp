// Chamber enumeration: OpenMP coh_dims against the serial reference.

#include <omp.h>

#include <chrono>
#include <iostream>
#include <random>

#include "kv/cohomology.hpp"

using namespace kv;

namespace {

template <class F>
double seconds(F&& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

Fan grown(Fan f, std::size_t rays, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> d(-2, 2);
  while (f.nrays() < rays) {
    IntVec v(f.rank);
    for (auto& x : v) x = d(rng);
    if (is_zero(v) || gcd_of(v) != 1 || f.ray_index(v) != Fan::npos) continue;
    f = star_subdivide(f, v).fan;
  }
  return f;
}

}  // namespace

int main() {
  const std::vector<Field> fields{Field{0}, Field{2}, Field{3}, Field{5}, Field{7}};
  std::cout << "threads " << omp_get_max_threads() << "\n";
  std::cout << "rays  serial_s  parallel_s  speedup\n";
  for (std::size_t n : {8, 10, 12, 14}) {
    const Fan x = grown(fans::projective_space(3), n, n);
    Divisor d(x.nrays());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = Rat(static_cast<long>(i % 3) - 1);
    if (coh_dims(x, d, fields)[0].dims != coh_dims_serial(x, d, fields)[0].dims) {
      std::cerr << "parallel and serial results differ\n";
      return 1;
    }
    const int reps = n < 12 ? 5 : 1;
    const double s = seconds([&] { coh_dims_serial(x, d, fields); }, reps);
    const double p = seconds([&] { coh_dims(x, d, fields); }, reps);
    std::cout << n << "  " << s << "  " << p << "  " << s / p << "\n";
  }
}
