#pragma once

#include "ruled4/vec.hpp"

// Octonion algebra on R^8 and the cross products derived from it.
//
// Conventions (used consistently everywhere):
//   * e1 is the multiplicative identity; e2..e8 span the imaginary part.
//   * The imaginary units multiply according to the structure constants of
//     the 3-form  phi = dx123 + dx145 + dx167 + dx246 - dx257 - dx347 - dx356
//     on R^7 under the identification e_{i+1} <-> x_i:
//         u_i u_j = -delta_ij + sum_k phi_ijk u_k.
//     This is NOT the most common octonion table in the literature; several
//     products differ in sign from other conventions. The full 64-entry table
//     is frozen in the test suite and checked entry by entry.
//   * The basis-index pattern satisfies index(e_i * e_j) = i XOR j on 0-based
//     indices; only the sign table carries information.
//
// Cross products:
//   * triple_cross(x,y,z) is the contraction of the 4-form Phi (see
//     forms.hpp) with three vectors:  triple_cross(x,y,z)[m] = Phi(x,y,z,e_m).
//     It equals the octonion expression -((x * conj(y)) * z - (z * conj(y)) * x)/2
//     (left-associated products; triple_cross_mul below). The right-associated
//     variant -(x * (conj(y) * z) - z * (conj(y) * x))/2 differs from it by an
//     associator term on non-associative triples and is deliberately NOT the
//     production triple cross.
//   * fourfold_cross(x,y,z,w) = (conj(x) * t(y,z,w) + conj(y) * t(z,x,w)
//     + conj(z) * t(x,y,w) + conj(w) * t(y,x,z)) / 4 with t = triple_cross.
//     This is the rotation-sound product: Re fourfold_cross = -Phi(x,y,z,w)
//     identically (fully multilinear), its imaginary part vanishes exactly on
//     every plane calibrated by Phi regardless of position (verified on
//     randomly generated complex 2-planes and special-Lagrangian planes), and
//     |fourfold_cross|^2 = 1/4 + 3/4 Phi^2 on orthonormal frames.
//   * fourfold_cross_literal(x,y,z,w) is the same outer formula with the
//     right-associated nested triple inside. It is the direct transcription of
//     the defining octonion expression and reproduces the frozen basis-product
//     identities (f_58 = e3 and friends) at full scale, but it is NOT
//     rotation-equivariant: its imaginary part does not vanish on calibrated
//     planes in general position, so it must never be used as a predicate.
//     It is kept as a table-conformance oracle only. On frames whose first two
//     legs are e1, e2 the two variants satisfy Im literal = 2 * Im production.
//   * A 4-plane with orthonormal basis (x,y,z,w) is calibrated by Phi (in one
//     of its two orientations) exactly when Im fourfold_cross(x,y,z,w) = 0.

namespace ruled4 {

// Signed monomial of a k-form with strictly increasing 1-based indices.
struct Mono3 {
  int i, j, k;
  int sign;
};
struct Mono4 {
  int i, j, k, l;
  int sign;
};

// phi (3-form on R^7), coordinates x1..x7.
inline constexpr Mono3 kPhi7Monos[7] = {
    {1, 2, 3, +1}, {1, 4, 5, +1}, {1, 6, 7, +1}, {2, 4, 6, +1},
    {2, 5, 7, -1}, {3, 4, 7, -1}, {3, 5, 6, -1},
};

// *phi (4-form on R^7), the Euclidean Hodge dual of phi.
inline constexpr Mono4 kStarPhi7Monos[7] = {
    {4, 5, 6, 7, +1}, {2, 3, 6, 7, +1}, {2, 3, 4, 5, +1}, {1, 3, 5, 7, +1},
    {1, 3, 4, 6, -1}, {1, 2, 5, 6, -1}, {1, 2, 4, 7, -1},
};

// Phi (4-form on R^8) = dx1 ^ phi + *phi under x_i(R^7) -> x_{i+1}(R^8);
// equivalently omega^2/2 + Re(Omega) for z_j = x_{2j-1} + i x_{2j}.
inline constexpr Mono4 kPhi8Monos[14] = {
    {1, 2, 3, 4, +1}, {1, 2, 5, 6, +1}, {1, 2, 7, 8, +1}, {1, 3, 5, 7, +1},
    {1, 3, 6, 8, -1}, {1, 4, 5, 8, -1}, {1, 4, 6, 7, -1}, {5, 6, 7, 8, +1},
    {3, 4, 7, 8, +1}, {3, 4, 5, 6, +1}, {2, 4, 6, 8, +1}, {2, 4, 5, 7, -1},
    {2, 3, 6, 7, -1}, {2, 3, 5, 8, -1},
};

// Re(Omega) for Omega = dz1^dz2^dz3^dz4 on C^4, z_j = x_{2j-1} + i x_{2j}.
inline constexpr Mono4 kReOmegaMonos[8] = {
    {1, 3, 5, 7, +1}, {2, 4, 5, 7, -1}, {2, 3, 6, 7, -1}, {2, 3, 5, 8, -1},
    {1, 4, 6, 7, -1}, {1, 4, 5, 8, -1}, {1, 3, 6, 8, -1}, {2, 4, 6, 8, +1},
};

// Sign table for the basis products: e_i * e_j = kMulSign[i][j] * e_{i XOR j}
// (0-based i, j).
extern const int kMulSign[8][8];

Vec8 oct_mul(const Vec8& a, const Vec8& b);

inline Vec8 oct_conj(const Vec8& a) {
  Vec8 r = a;
  for (int i = 1; i < 8; ++i) r[i] = -r[i];
  return r;
}

inline Vec8 im_part(const Vec8& a) {
  Vec8 r = a;
  r[0] = 0.0;
  return r;
}

// det of the 3x3 matrix [x;y;z] restricted to 1-based columns (i,j,k).
inline double det3_at(const Vec8& x, const Vec8& y, const Vec8& z, int i,
                      int j, int k) {
  const double a = x[i - 1], b = x[j - 1], c = x[k - 1];
  const double d = y[i - 1], e = y[j - 1], f = y[k - 1];
  const double g = z[i - 1], h = z[j - 1], l = z[k - 1];
  return a * (e * l - f * h) - b * (d * l - f * g) + c * (d * h - e * g);
}

// Contraction of a 4-form given by signed monomials with three vectors:
// result[m] = form(x, y, z, e_m). Works for any ambient dimension whose
// indices the monomial list uses (7 or 8).
template <std::size_t N>
Vec8 contract3(const Mono4 (&monos)[N], const Vec8& x, const Vec8& y,
               const Vec8& z) {
  Vec8 out = zero_vec();
  for (const Mono4& m : monos) {
    const int idx[4] = {m.i, m.j, m.k, m.l};
    for (int p = 0; p < 4; ++p) {
      // Move e_{idx[p]} from slot p to the last slot: (3 - p) transpositions.
      const int pos_sign = ((3 - p) % 2 == 0) ? +1 : -1;
      int r[3];
      for (int q = 0, c = 0; q < 4; ++q)
        if (q != p) r[c++] = idx[q];
      out[idx[p] - 1] +=
          m.sign * pos_sign * det3_at(x, y, z, r[0], r[1], r[2]);
    }
  }
  return out;
}

// Evaluation of a 3-form given by signed monomials on three vectors.
template <std::size_t N>
double eval3(const Mono3 (&monos)[N], const Vec8& x, const Vec8& y,
             const Vec8& z) {
  double out = 0.0;
  for (const Mono3& m : monos) out += m.sign * det3_at(x, y, z, m.i, m.j, m.k);
  return out;
}

// Production triple cross on R^8: contraction of Phi.
inline Vec8 triple_cross(const Vec8& x, const Vec8& y, const Vec8& z) {
  return contract3(kPhi8Monos, x, y, z);
}

// Octonion-multiplication route (left-associated); equals triple_cross.
Vec8 triple_cross_mul(const Vec8& x, const Vec8& y, const Vec8& z);

// Triple cross on R^7 (coordinates x1..x7): contraction of *phi.
inline Vec8 triple_cross_r7(const Vec8& x, const Vec8& y, const Vec8& z) {
  return contract3(kStarPhi7Monos, x, y, z);
}

// Triple cross adapted to special-Lagrangian geometry on C^4:
// contraction of Re(Omega).
inline Vec8 triple_cross_sl(const Vec8& x, const Vec8& y, const Vec8& z) {
  return contract3(kReOmegaMonos, x, y, z);
}

// phi(x, y, z) on R^7.
inline double phi7_eval(const Vec8& x, const Vec8& y, const Vec8& z) {
  return eval3(kPhi7Monos, x, y, z);
}

// Fourfold cross product on R^8 (rotation-sound variant; see header comment).
Vec8 fourfold_cross(const Vec8& x, const Vec8& y, const Vec8& z,
                    const Vec8& w);

// Direct-definition fourfold cross (right-associated nested triples).
// Table-conformance oracle only — not a valid calibrated-plane predicate.
Vec8 fourfold_cross_literal(const Vec8& x, const Vec8& y, const Vec8& z,
                            const Vec8& w);

}  // namespace ruled4
