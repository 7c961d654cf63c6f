#include "ruled4/planes.hpp"

#include <cmath>

#include "ruled4/forms.hpp"
#include "ruled4/octonion.hpp"

namespace ruled4 {

double gram_det(const Frame4& f) {
  double g[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[i][j] = dot(f.v[i], f.v[j]);
  // 4x4 determinant by cofactor expansion along the first row.
  auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    return g[r0][c0] * (g[r1][c1] * g[r2][c2] - g[r1][c2] * g[r2][c1]) -
           g[r0][c1] * (g[r1][c0] * g[r2][c2] - g[r1][c2] * g[r2][c0]) +
           g[r0][c2] * (g[r1][c0] * g[r2][c1] - g[r1][c1] * g[r2][c0]);
  };
  return g[0][0] * det3(1, 2, 3, 1, 2, 3) - g[0][1] * det3(1, 2, 3, 0, 2, 3) +
         g[0][2] * det3(1, 2, 3, 0, 1, 3) - g[0][3] * det3(1, 2, 3, 0, 1, 2);
}

Frame4 orthonormalize(const Frame4& f) {
  if (gram_det(f) < 1e-10)
    throw RankDeficientError("frame is rank-deficient (Gram determinant < 1e-10)");
  Frame4 out = f;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j)
      out.v[i] = axpy(out.v[i], -dot(out.v[i], out.v[j]), out.v[j]);
    out.v[i] = scale(out.v[i], 1.0 / norm(out.v[i]));
  }
  return out;
}

CayleyCheck is_cayley_plane(const Frame4& f, double tol) {
  const Frame4 o = orthonormalize(f);
  CayleyCheck r;
  const Vec8 c = fourfold_cross(o.v[0], o.v[1], o.v[2], o.v[3]);
  r.witness = im_part(c);
  r.witness_norm = norm(r.witness);
  r.pass = max_abs(r.witness) < tol;
  r.form_value = dot(triple_cross(o.v[0], o.v[1], o.v[2]), o.v[3]);
  return r;
}

CoassCheck is_coassociative_plane(const Frame4& f, double tol) {
  const Frame4 o = orthonormalize(f);
  CoassCheck r;
  const int tri[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : tri) {
    const double v = std::fabs(phi7_eval(o.v[t[0]], o.v[t[1]], o.v[t[2]]));
    r.max_phi_triple = std::max(r.max_phi_triple, v);
  }
  r.form_value = dot(triple_cross_r7(o.v[0], o.v[1], o.v[2]), o.v[3]);
  r.pass = r.max_phi_triple < tol && r.form_value > 0.0;
  return r;
}

namespace {

// omega(a, b) for the standard Kaehler form on C^4 = R^8.
double omega_pair(const Vec8& a, const Vec8& b) {
  double s = 0.0;
  for (int j = 0; j < 4; ++j)
    s += a[2 * j] * b[2 * j + 1] - a[2 * j + 1] * b[2 * j];
  return s;
}

}  // namespace

SLCheck is_sl_plane(const Frame4& f, double theta, double tol) {
  const Frame4 o = orthonormalize(f);
  SLCheck r;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      r.max_omega_pair =
          std::max(r.max_omega_pair, std::fabs(omega_pair(o.v[i], o.v[j])));
  const std::vector<Vec8> frame(o.v.begin(), o.v.end());
  static const KForm re_vol = builtin_form("ReOmega");
  static const KForm im_vol = builtin_form("ImOmega");
  const double re = re_vol.eval(frame);
  const double im = im_vol.eval(frame);
  r.defect_value = std::sin(theta) * re - std::cos(theta) * im;
  r.calib_value = std::cos(theta) * re + std::sin(theta) * im;
  r.pass = r.max_omega_pair < tol && std::fabs(r.defect_value) < tol;
  return r;
}

}  // namespace ruled4
