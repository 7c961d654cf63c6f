// Frame-rotation gauge structure: the in-plane rotation rates (f, f') of an
// evolving frame field, the curvature of the induced connection, and the
// flattening transformation that removes both rates when the connection is
// flat.
#pragma once

#include <vector>

#include "ruled4/patch.hpp"

namespace ruled4 {

struct GaugeData {
  std::vector<double> f;         // rotation rate along t
  std::vector<double> f_prime;   // rotation rate along s
  std::vector<double> curvature; // d f'/dt - d f/ds per node
  double max_evolution_residual = 0.0;  // residual of the defining equations
};

// Extracts f = g(dphi1/dt - T dphi1/ds, phi2) and
// f' = g(dphi1/ds + T dphi1/dt, phi2), where T is the frame triple product,
// plus the curvature of the connection form dtheta - f' ds - f dt.  The
// rates are only meaningful on patches satisfying the first-order evolution
// system, so the orthogonal residual of those equations is checked first;
// throws std::runtime_error if it exceeds residual_tol.
GaugeData gauge_data(const RuledPatch& p, DerivMode mode,
                     double residual_tol = 1e-4, Exec exec = Exec::serial);

// Rotates the frame by the angle field theta:
//   phi1 -> cos(theta) phi1 + sin(theta) phi2,
//   phi2 -> -sin(theta) phi1 + cos(theta) phi2.
// psi is unchanged.  Shifts f by dtheta/dt and f' by dtheta/ds.  If the
// patch carries analytic derivative grids and theta_s/theta_t are supplied,
// the rotated grids stay analytic; otherwise they are dropped and stencil
// mode must be used downstream.
RuledPatch gauge_rotate(const RuledPatch& p, const std::vector<double>& theta,
                        const std::vector<double>* theta_s = nullptr,
                        const std::vector<double>* theta_t = nullptr);

// Flattening angle: solves dtheta/ds = -f', dtheta/dt = -f by line
// integration from the grid origin (spectral quadrature on periodic
// directions, fourth-order end-corrected quadrature otherwise), with
// theta(0,0) = 0.  Requires max |curvature| < curvature_tol; throws
// std::runtime_error otherwise (the system is not integrable).
std::vector<double> flat_gauge_theta(const GaugeData& gd, const GridSpec& g,
                                     double curvature_tol = 1e-6);

struct FlatGaugeResult {
  RuledPatch patch;
  std::vector<double> theta;
  double max_f_after = 0.0;
  double max_f_prime_after = 0.0;
};

// gauge_data + flat_gauge_theta + gauge_rotate in one step, re-measuring the
// rates after the rotation (stencil mode) to report how flat the result is.
FlatGaugeResult flat_gauge_solve(const RuledPatch& p, DerivMode mode,
                                 double curvature_tol = 1e-6,
                                 Exec exec = Exec::serial);

}  // namespace ruled4
