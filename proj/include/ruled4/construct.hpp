// Generators for the explicit families: the three doubly periodic families
// driven by a holomorphic field, torus-phase cones, products with 1-ruled
// 3-folds, complex cones over projective curves, and the holomorphic
// vector-field construction that turns a flat-gauge cone into a family with
// nonzero offset.
#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ruled4/patch.hpp"

namespace ruled4 {

// Evaluable holomorphic scalar field w(zeta) with exact derivatives.
class HoloField {
 public:
  static HoloField zero();
  static HoloField constant(std::complex<double> c);
  static HoloField linear(std::complex<double> a, std::complex<double> b);
  // Ascending coefficients: coeffs[k] multiplies zeta^k.
  static HoloField polynomial(std::vector<std::complex<double>> coeffs);
  // Parses "zero" | "const:re,im" | "linear:a_re,a_im,b_re,b_im" |
  // "poly:c0_re,c0_im,c1_re,c1_im,...".
  static HoloField parse(const std::string& spec);

  struct Jet {
    std::complex<double> w, dw, d2w;
  };
  Jet eval(std::complex<double> zeta) const;
  bool is_zero() const;
  const std::vector<std::complex<double>>& coeffs() const { return coeffs_; }

 private:
  std::vector<std::complex<double>> coeffs_;  // ascending powers
};

// Doubly periodic family k in {1, 2, 3} with offset driven by w.  The patch
// carries analytic first and second derivative grids.  Default grids should
// be periodic with period 2*pi in both directions.
RuledPatch make_example_m(int k, const HoloField& w, const GridSpec& grid);

// Torus-phase cone: phi1 slot j = e^{i theta_j} / 2 with phases running by
// the selected ruling pattern (1: (s,-s,t,-t), 2: (s,t,-t,-s),
// 3: (s,-t,-s,t)) plus constant offsets, and the fourth phase chosen so the
// phase sum is branch * pi/2; phi2 rotates each slot by +-i according to
// whether its phase runs with s or with t; psi = 0.  Defaults reproduce the
// asymptotic cone of the corresponding doubly periodic family exactly.
struct HlConeParams {
  int ruling = 1;                              // 1, 2, or 3
  int branch = +1;                             // +1 or -1
  std::array<double, 3> offsets = {1.5707963267948966, 0.0, 0.0};  // pi/2
};
RuledPatch make_hl_cone(const HlConeParams& params, const GridSpec& grid);

// Sampled 1-ruled 3-fold {r phi(sigma) + chi(sigma)}: unit direction field
// phi and offset chi over a 2-grid.  ambient_dim = 7 places coordinates in
// slots 0..6 (directions in S^6); ambient_dim = 6 places C^3 coordinates in
// slots 0..5 (directions in S^5).
struct Ruled3Fold {
  int ambient_dim = 7;
  GridSpec grid;
  Field phi;
  Field chi;
  std::optional<Field> dphi_ds, dphi_dt, dchi_ds, dchi_dt;
  std::optional<Field> d2phi_dss, d2phi_dst, d2phi_dtt;
};

enum class ProductKind {
  associative_plane,       // built-in N = span(e1, e2, e3) in R^7
  sl_phase_minus_i_plane,  // built-in L = {(e^{i a1} x, e^{i a2} y, e^{i a3} z)}
  user_ruled_3fold,
};

// lines: constant direction field, offset sweeps the plane.
// rays: conformal sphere-parameterized direction field, zero offset.
enum class ProductStyle { lines, rays };

struct ProductParams {
  ProductKind kind = ProductKind::associative_plane;
  ProductStyle style = ProductStyle::lines;
  // Phase angles for the built-in 3-plane in C^3; the default sums to -pi/2.
  std::array<double, 3> phases = {-1.5707963267948966, 0.0, 0.0};
  const Ruled3Fold* input = nullptr;  // required for user_ruled_3fold
};

// Product R x N: lifts a 1-ruled 3-fold N to a 2-ruled patch one dimension
// up, with phi1 = e1 of the enlarged space and phi2 = (0, phi(sigma)).
// Inputs in R^7 produce ambient dimension 8; inputs in C^3 = R^6 produce
// ambient dimension 7.  Throws std::invalid_argument when an input sample
// has |phi| != 1.
RuledPatch make_product(const ProductParams& params, const GridSpec& grid);

// Conformally parameterized torus-phase cone direction field in C^3 (unit
// directions, zero offset), suitable as a user_ruled_3fold input with
// phase sum -pi/2: slot phases
//   alpha1 = u + sqrt(3) v + c1, alpha2 = u - sqrt(3) v + c2,
//   alpha3 = -pi/2 - c1 - c2 - 2u,
// each slot e^{i alpha_j} / sqrt(3).  Periods: 2*pi in u, 2*pi/sqrt(3) in v.
Ruled3Fold make_sl_torus_cone_c3(double c1, double c2, const GridSpec& grid);

// Includes 7-dimensional patch data into ambient dimension 8 as the
// hyperplane x1 = 0 (coordinates shift up one slot).
RuledPatch embed_r7_in_r8(const RuledPatch& p);

// Offset construction from a flat-gauge cone: psi = u dphi1/ds + v dphi1/dt
// - v dphi2/ds + u dphi2/dt with w = u + iv evaluated at zeta = s + it.
// Preconditions (all checked): the cone's offset field is ~zero, it passes
// the first-order evolution system with |f| below pre_tol, and the gauge
// curvature is below pre_tol.  Throws std::runtime_error when violated.
// The output keeps analytic offset derivatives when the cone carries
// analytic second derivatives.
RuledPatch holomorphic_construct(const RuledPatch& cone, const HoloField& w,
                                 double pre_tol = 1e-6);

// Whether the offset construction on this cone preserves the special
// Lagrangian property: true iff w is identically zero on the grid or some
// fixed rotation cos(theta) phi1 + sin(theta) phi2 of the frame is constant
// over the grid (variation below tol after minimizing over theta).
bool sl_holo_predicate(const RuledPatch& cone, const HoloField& w,
                       double tol = 1e-8);

// Holomorphic curve samples in projective 4-space coordinates, one sample
// per grid node (u = s + it).
struct ComplexCurve {
  std::vector<std::array<std::complex<double>, 4>> z;
};

// Built-in curves: "rnc3" (the twisted degree-3 curve [1, u, u^2, u^3]) and
// "planar" ([0, 0, u, 1], a line).  Throws on unknown names.
ComplexCurve sample_builtin_curve(const std::string& name, const GridSpec& g);

struct ComplexConeResult {
  RuledPatch patch;
  bool planar = false;  // direction samples span a complex 2-plane or less
};

// Cone over a projective curve, 2-ruled by the complex lines through its
// points: phi1 = (z1, z2, z3, 1)/r in the z4 = 1 chart with r the Euclidean
// norm, phi2 = i phi1, psi = 0.  Throws std::runtime_error when a sample has
// z4 ~ 0 (chart failure).  Planarity is flagged, not fatal.
ComplexConeResult make_complex_cone(const ComplexCurve& curve,
                                    const GridSpec& g);

}  // namespace ruled4
