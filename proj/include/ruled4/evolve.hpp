// Time integration of the first-order evolution system: given frame and
// offset data on an s-line at t = 0, march both directions in t with
// classical fourth-order Runge-Kutta to build a full patch.
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ruled4/patch.hpp"

namespace ruled4 {

// Data on the initial line t = 0.  Slot layout matches RuledPatch.
struct InitialData {
  int ambient_dim = 8;
  int Ns = 0;
  double hs = 0.0;
  double s0 = 0.0;
  bool periodic_s = false;
  Field phi1_0, phi2_0, psi_0;
  // Gauge driver f(s, t); zero when absent.
  std::function<double(double, double)> f;
};

// Invariant check for the initial line (unit frames, orthogonality) at the
// given tolerance; throws std::invalid_argument on violation.
void check_initial_data(const InitialData& init, double tol = 1e-12);

struct CflError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DriftError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvolveOptions {
  bool reorthonormalize = true;  // re-project the frame after each step
  bool spectral = false;         // spectral s-derivatives (periodic_s only)
  double drift_abort = 1e-3;     // abort when pre-correction drift exceeds
  double cfl_factor = 0.5;       // require ht <= cfl_factor * hs
  Exec exec = Exec::serial;
};

struct DriftSample {
  int step = 0;       // signed step index (negative = backward march)
  double t = 0.0;
  double norm_dev = 0.0;   // max | |phi_j| - 1 | before correction
  double ortho_dev = 0.0;  // |g(phi1, phi2)| before correction
};

struct EvolveResult {
  RuledPatch patch;  // grid Ns x (2*Nt + 1), t in [-epsilon, epsilon]
  std::vector<DriftSample> drift;
  double max_drift = 0.0;
};

// Integrates d phi1/dt = T(phi1, phi2, d phi1/ds) + f phi2,
//            d phi2/dt = T(phi1, phi2, d phi2/ds) - f phi1,
//            d psi /dt = T(phi1, phi2, d psi /ds)
// from t = 0 to both t = -epsilon and t = +epsilon in Nt steps each
// (ht = epsilon / Nt), assembling a (2*Nt + 1)-column patch.  Throws
// CflError when ht > cfl_factor * hs and DriftError when the frame drifts
// beyond drift_abort before the per-step correction.
EvolveResult evolve(const InitialData& init, double epsilon, int Nt,
                    const EvolveOptions& opts = {});

// Extracts the t = 0 row of a patch as initial data (f left empty).
InitialData initial_from_patch_row(const RuledPatch& p, int j);

}  // namespace ruled4
