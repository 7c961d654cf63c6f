#include "ruled4/octonion.hpp"

namespace ruled4 {

// Sign of e_i * e_j (0-based); the product index is i XOR j.
// Derived from u_i u_j = -delta_ij + sum_k phi_ijk u_k with e_{i+1} <-> x_i.
const int kMulSign[8][8] = {
    // e1   e2   e3   e4   e5   e6   e7   e8
    {+1, +1, +1, +1, +1, +1, +1, +1},  // e1 *
    {+1, -1, +1, -1, +1, -1, +1, -1},  // e2 *
    {+1, -1, -1, +1, +1, -1, -1, +1},  // e3 *
    {+1, +1, -1, -1, -1, -1, +1, +1},  // e4 *
    {+1, -1, -1, +1, -1, +1, +1, -1},  // e5 *
    {+1, +1, +1, +1, -1, -1, -1, -1},  // e6 *
    {+1, -1, +1, -1, -1, +1, -1, +1},  // e7 *
    {+1, +1, -1, -1, +1, +1, -1, -1},  // e8 *
};

Vec8 oct_mul(const Vec8& a, const Vec8& b) {
  Vec8 r = zero_vec();
  for (int i = 0; i < 8; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (int j = 0; j < 8; ++j) {
      r[i ^ j] += kMulSign[i][j] * ai * b[j];
    }
  }
  return r;
}

Vec8 triple_cross_mul(const Vec8& x, const Vec8& y, const Vec8& z) {
  // -((x * conj(y)) * z - (z * conj(y)) * x) / 2, left-associated.
  const Vec8 yc = oct_conj(y);
  const Vec8 a = oct_mul(oct_mul(x, yc), z);
  const Vec8 b = oct_mul(oct_mul(z, yc), x);
  return scale(sub(a, b), -0.5);
}

namespace {

// Right-associated nested triple -(x * (conj(y) * z) - z * (conj(y) * x)) / 2.
// Kept private: it feeds only fourfold_cross_literal. It is NOT the production
// triple cross (it differs from the Phi-contraction by an associator term).
Vec8 triple_nested(const Vec8& x, const Vec8& y, const Vec8& z) {
  const Vec8 yc = oct_conj(y);
  const Vec8 a = oct_mul(x, oct_mul(yc, z));
  const Vec8 b = oct_mul(z, oct_mul(yc, x));
  return scale(sub(a, b), -0.5);
}

// Shared outer formula of the fourfold cross; the triple cross fed in decides
// the variant.
template <typename Triple>
Vec8 fourfold_outer(Triple t, const Vec8& x, const Vec8& y, const Vec8& z,
                    const Vec8& w) {
  const Vec8 t1 = oct_mul(oct_conj(x), t(y, z, w));
  const Vec8 t2 = oct_mul(oct_conj(y), t(z, x, w));
  const Vec8 t3 = oct_mul(oct_conj(z), t(x, y, w));
  const Vec8 t4 = oct_mul(oct_conj(w), t(y, x, z));
  return scale(add(add(t1, t2), add(t3, t4)), 0.25);
}

}  // namespace

Vec8 fourfold_cross(const Vec8& x, const Vec8& y, const Vec8& z,
                    const Vec8& w) {
  return fourfold_outer([](const Vec8& a, const Vec8& b, const Vec8& c) {
    return triple_cross(a, b, c);
  }, x, y, z, w);
}

Vec8 fourfold_cross_literal(const Vec8& x, const Vec8& y, const Vec8& z,
                            const Vec8& w) {
  return fourfold_outer(triple_nested, x, y, z, w);
}

}  // namespace ruled4
