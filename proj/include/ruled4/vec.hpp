#pragma once

#include <array>
#include <cmath>
#include <cstddef>

// Small fixed-size vector helpers shared by the whole library.
//
// All ambient vectors are stored as 8 doubles. Seven-dimensional data uses
// slots [0..6] (coordinates x1..x7) and keeps slot 7 at zero; the ambient
// dimension travels alongside in the owning structure. Basis vectors are
// named e1..e8 in messages and docs (1-based), matching coordinate x_i.

namespace ruled4 {

using Vec8 = std::array<double, 8>;

inline constexpr Vec8 zero_vec() { return Vec8{0, 0, 0, 0, 0, 0, 0, 0}; }

// 1-based basis vector: basis(1) = e1, ..., basis(8) = e8.
inline Vec8 basis(int i) {
  Vec8 v = zero_vec();
  v[static_cast<std::size_t>(i - 1)] = 1.0;
  return v;
}

inline double dot(const Vec8& a, const Vec8& b) {
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec8& a) { return dot(a, a); }
inline double norm(const Vec8& a) { return std::sqrt(norm2(a)); }

inline double max_abs(const Vec8& a) {
  double m = 0.0;
  for (int i = 0; i < 8; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

inline Vec8 add(const Vec8& a, const Vec8& b) {
  Vec8 r;
  for (int i = 0; i < 8; ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec8 sub(const Vec8& a, const Vec8& b) {
  Vec8 r;
  for (int i = 0; i < 8; ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec8 scale(const Vec8& a, double c) {
  Vec8 r;
  for (int i = 0; i < 8; ++i) r[i] = c * a[i];
  return r;
}

// r = a + c*b
inline Vec8 axpy(const Vec8& a, double c, const Vec8& b) {
  Vec8 r;
  for (int i = 0; i < 8; ++i) r[i] = a[i] + c * b[i];
  return r;
}

inline Vec8 normalized(const Vec8& a) { return scale(a, 1.0 / norm(a)); }

}  // namespace ruled4
