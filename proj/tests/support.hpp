#pragma once

#include <random>

#include "ruled4/vec.hpp"

// Shared helpers for deterministic randomized tests. All RNGs are seeded
// explicitly so every run exercises identical data.

namespace testsupport {

using ruled4::Vec8;

// Random vector with small integer entries: exact in double arithmetic, so
// algebraic identities can be asserted with zero tolerance.
inline Vec8 random_int_vec(std::mt19937& rng, int dim = 8, int lo = -3,
                           int hi = 3) {
  std::uniform_int_distribution<int> d(lo, hi);
  Vec8 v = ruled4::zero_vec();
  for (int i = 0; i < dim; ++i) v[i] = static_cast<double>(d(rng));
  return v;
}

inline Vec8 random_gauss_vec(std::mt19937& rng, int dim = 8) {
  std::normal_distribution<double> d(0.0, 1.0);
  Vec8 v = ruled4::zero_vec();
  for (int i = 0; i < dim; ++i) v[i] = d(rng);
  return v;
}

// Random orthonormal 4-frame in the first `dim` coordinates (Gram–Schmidt on
// Gaussian vectors, retrying on near-degeneracy).
inline std::array<Vec8, 4> random_orthonormal_frame(std::mt19937& rng,
                                                    int dim = 8) {
  while (true) {
    std::array<Vec8, 4> f;
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i) {
      f[i] = random_gauss_vec(rng, dim);
      for (int j = 0; j < i; ++j)
        f[i] = ruled4::axpy(f[i], -ruled4::dot(f[i], f[j]), f[j]);
      const double n = ruled4::norm(f[i]);
      if (n < 1e-6)
        ok = false;
      else
        f[i] = ruled4::scale(f[i], 1.0 / n);
    }
    if (ok) return f;
  }
}

}  // namespace testsupport
