// Sampled two-parameter framed surface data: the frame fields phi1, phi2
// (unit, mutually orthogonal) and the offset field psi on a rectangular
// (s, t) grid, together with derivative engines, canonicalization, residual
// reports, and pointwise geometric probes.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ruled4/exec.hpp"
#include "ruled4/vec.hpp"

namespace ruled4 {

// Row-major, s-index outer: node (i, j) lives at flat index i*Nt + j and
// carries parameter values (s0 + i*hs, t0 + j*ht).
struct GridSpec {
  int Ns = 0;
  int Nt = 0;
  double hs = 0.0;
  double ht = 0.0;
  double s0 = 0.0;
  double t0 = 0.0;
  bool periodic_s = false;
  bool periodic_t = false;

  int nodes() const { return Ns * Nt; }
  int at(int i, int j) const { return i * Nt + j; }
  double s(int i) const { return s0 + i * hs; }
  double t(int j) const { return t0 + j * ht; }
};

// One Vec8 per node.  Ambient dimension 7 stores its coordinates in slots
// 0..6 with slot 7 zero; dimension 8 uses all slots.
using Field = std::vector<Vec8>;

struct RuledPatch {
  int ambient_dim = 8;  // 7 or 8
  GridSpec grid;
  Field phi1, phi2, psi;

  // Analytic first derivatives, filled by constructors that know them.
  // When absent, derivative requests fall back to finite differences.
  std::optional<Field> dphi1_ds, dphi1_dt;
  std::optional<Field> dphi2_ds, dphi2_dt;
  std::optional<Field> dpsi_ds, dpsi_dt;

  // Analytic second derivatives of the frame fields (in-memory only; used
  // when a construction consumes this patch and needs derivatives of the
  // fields it builds from first derivatives).
  std::optional<Field> d2phi1_dss, d2phi1_dst, d2phi1_dtt;
  std::optional<Field> d2phi2_dss, d2phi2_dst, d2phi2_dtt;

  bool has_analytic_seconds() const {
    return d2phi1_dss && d2phi1_dst && d2phi1_dtt && d2phi2_dss &&
           d2phi2_dst && d2phi2_dtt;
  }

  bool has_analytic_derivatives() const {
    return dphi1_ds && dphi1_dt && dphi2_ds && dphi2_dt && dpsi_ds && dpsi_dt;
  }
};

enum class DerivMode { analytic, stencil };

// All six first-derivative fields of a patch, produced on demand.
struct PatchDerivs {
  Field dphi1_ds, dphi1_dt;
  Field dphi2_ds, dphi2_dt;
  Field dpsi_ds, dpsi_dt;
};

// Computes the derivative fields.  DerivMode::analytic requires the patch to
// carry analytic derivative grids (throws otherwise); DerivMode::stencil
// uses fourth-order finite differences (grid must have >= 5 nodes in each
// non-trivial direction).
PatchDerivs patch_derivs(const RuledPatch& p, DerivMode mode,
                         Exec exec = Exec::serial);

// An upper bound on the finite-difference truncation error of the stencil
// engine on this grid, used by checks that compare stencil output against
// exact identities: scale * max(hs, ht)^4.
double stencil_error_scale(const GridSpec& g, double scale = 10.0);

// Frame invariants: | |phi_j| - 1 | and |g(phi1, phi2)| at every node, and
// slot-7 occupancy for 7-dimensional data.  Throws std::invalid_argument
// with the offending node if any exceeds tol.
void check_invariants(const RuledPatch& p, double tol = 1e-10);

// Replaces psi by its component orthogonal to span(phi1, phi2) at each node
// (the ruling absorbs in-plane offsets).  Idempotent.
RuledPatch canonicalize(const RuledPatch& p);

// Component of v orthogonal to span(phi1, phi2) (assumes the frame is
// orthonormal).
Vec8 perp_project(const Vec8& v, const Vec8& phi1, const Vec8& phi2);

// Per-equation residual summary over the grid.
struct EquationStats {
  std::string name;
  double max_norm = 0.0;
  double mean_norm = 0.0;
  int argmax_i = 0;
  int argmax_j = 0;
};

struct ResidualReport {
  std::vector<EquationStats> equations;
  int non_immersion_count = 0;  // nodes where both frame s-derivatives
                                // project to ~zero; excluded from the stats
  double max_over_equations() const {
    double m = 0.0;
    for (const auto& e : equations) m = std::max(m, e.max_norm);
    return m;
  }
  const EquationStats* find(const std::string& name) const {
    for (const auto& e : equations)
      if (e.name == name) return &e;
    return nullptr;
  }
};

// Quadratic system: the six alternating-product conditions obtained by
// expanding the calibrated-plane requirement in the ruling parameters.
// Equation names: phi1_phi1, phi2_phi2, phi1_phi2, psi_psi, phi1_psi,
// phi2_psi.  Seven-dimensional patches are checked through the standard
// inclusion (coordinates shift up one slot).
ResidualReport residuals_quadratic(const RuledPatch& p, DerivMode mode,
                                   Exec exec = Exec::serial);

// First-order evolution system: t-derivatives of phi1, phi2, psi against
// the triple-product transport of their s-derivatives, modulo the in-frame
// components (the gauge function f and the offset multipliers g1, g2).
// Equation names: ruling_dir1, ruling_dir2, offset, gauge_consistency.
// The extracted multiplier grids are returned alongside the stats.
struct EvolutionResiduals {
  ResidualReport report;
  std::vector<double> f;   // g(d phi1/dt - T d phi1/ds, phi2) per node
  std::vector<double> g1;  // g(d psi/dt - T d psi/ds, phi1)
  std::vector<double> g2;  // g(d psi/dt - T d psi/ds, phi2)
};
EvolutionResiduals residuals_evolution(const RuledPatch& p, DerivMode mode,
                                       Exec exec = Exec::serial);

// Special Lagrangian system (ambient dimension 8 viewed as C^4): the
// symplectic orthogonality conditions, the evolution equations driven by
// the complex-volume transport, and the five supplementary symplectic
// identities.  Names: omega_ruling, omega_phi_ds, omega_psi_ds,
// ruling_dir1, ruling_dir2, offset, omega_phi_dt, omega_psi_dt,
// omega_ds_dt_diag, omega_ds_dt_cross, omega_ds_dt_psi.
ResidualReport residuals_sl(const RuledPatch& p, DerivMode mode,
                            Exec exec = Exec::serial);

// Coassociative system (ambient dimension 7): the two 3-form orthogonality
// conditions and the evolution equations driven by the 7-dimensional triple
// product.  Names: phi3_ruling_dphi, phi3_ruling_dpsi, ruling_dir1,
// ruling_dir2, offset.
ResidualReport residuals_coass(const RuledPatch& p, DerivMode mode,
                               Exec exec = Exec::serial);

// Dimension of the span of the projected s-derivatives and their images
// under the complex structure J = triple_cross(phi1, phi2, .) at node
// (i, j).  Returns 2 or 4; throws on rank 0 or an ambiguous spectrum.
int vsigma_dim(const RuledPatch& p, int i, int j, DerivMode mode,
               double rel_tol = 1e-6);

// Least-squares fit of the projected t-derivative of phi1 against the
// projected s-derivative and its J-image at node (i, j):
// dphi1/dt^perp = A * dphi1/ds^perp + B * J dphi1/ds^perp.
struct MetricFit {
  double A = 0.0;
  double B = 0.0;
  double residual = 0.0;  // norm of the unfit component
};
MetricFit metric_extract(const RuledPatch& p, int i, int j, DerivMode mode);

// Conformality diagnostics: per frame field, the worst mismatch between the
// projected s- and t-derivative norms and the worst non-orthogonality.
// Names: norm_match_phi1, norm_match_phi2, ortho_phi1, ortho_phi2.
ResidualReport conformal_check(const RuledPatch& p, DerivMode mode,
                               Exec exec = Exec::serial);

// The cone obtained by dropping the offset field (psi = 0).  Analytic psi
// derivatives are zeroed; everything else is preserved.  Idempotent.
RuledPatch asymptotic_cone(const RuledPatch& p);

// True when both projected frame s-derivatives vanish below tol at the
// node (the map into the plane bundle degenerates there).
bool non_immersion_node(const Vec8& dphi1_ds_perp, const Vec8& dphi2_ds_perp,
                        double tol = 1e-10);

}  // namespace ruled4
