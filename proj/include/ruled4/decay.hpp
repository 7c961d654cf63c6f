// Asymptotic decay measurement: how fast a patch with nonzero offset
// approaches its asymptotic cone as the ruling radius grows.
#pragma once

#include <vector>

#include "ruled4/patch.hpp"

namespace ruled4 {

enum class DecayMode {
  radial,   // distance to the cone point with the same parameters (no search)
  nearest,  // multi-start minimized distance over the cone's parameters
};

struct DecaySample {
  double r = 0.0;
  double dist = 0.0;
};

struct DecayResult {
  std::vector<DecaySample> samples;
  double slope = 0.0;  // least-squares slope of log(dist) against log(r)
};

struct DecayOptions {
  DecayMode mode = DecayMode::nearest;
  int starts = 8;          // minimizer starts per probe point (>= 8)
  int probe_sigma = 6;     // parameter-space probe points per radius
  int probe_theta = 4;     // ruling-angle probe points per radius
  unsigned seed = 12345;   // probe placement is deterministic in the seed
};

// For each radius r, samples points of the patch's 4-fold at ruling radius
// r, measures their distance to the asymptotic cone (per mode), takes the
// worst sampled point, and fits a log-log slope across the radii.  The
// patch must be doubly periodic (the cone search interpolates the frame
// fields trigonometrically).
//
// What to expect of the numbers: the radial mode measures |psi| exactly, so
// it is bounded and flat whenever the offset is bounded.  The nearest mode
// lets the cone absorb the part of the offset that is tangent to it.  Only
// the tangent directions reachable at the sampled ruling angle can absorb,
// so in general a fixed fraction of the offset survives: for the built-in
// constant-offset families exactly half the offset energy is absorbable at
// every angle, and the nearest-point distance converges to |w|/sqrt(2)
// instead of zero (the four complex slot moduli of a sample differ from the
// cone's equal-moduli locus by the r-independent spread (+/-Im(w e^{i
// theta}), +/-Re(w e^{i theta}))/2).  The distance *relative to the radius*
// therefore decays like 1/r, while the absolute distance has log-log slope
// near zero.
DecayResult decay_measure(const RuledPatch& p, const std::vector<double>& radii,
                          const DecayOptions& opts = {});

}  // namespace ruled4
