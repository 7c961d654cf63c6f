#pragma once

#include <array>
#include <stdexcept>

#include "ruled4/vec.hpp"

// Calibrated-plane predicates on oriented 4-planes given by a frame of four
// spanning vectors (orientation is the order of the frame). Every predicate
// orthonormalizes first (Gram–Schmidt in order, preserving the oriented
// span) and works at a default tolerance of 1e-9: built-in constructions sit
// at machine-epsilon residuals, genuine failures at O(1), so the threshold
// separates them by more than six orders of magnitude.

namespace ruled4 {

struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Frame4 {
  std::array<Vec8, 4> v;
  int dim = 8;  // 7 or 8
};

// Gram determinant of the (possibly non-orthonormal) frame.
double gram_det(const Frame4& f);

// Gram–Schmidt in order; throws RankDeficientError if gram_det < 1e-10.
Frame4 orthonormalize(const Frame4& f);

struct CayleyCheck {
  bool pass = false;
  Vec8 witness = zero_vec();  // imaginary part of the fourfold cross
  double witness_norm = 0.0;
  // Value of the calibration 4-form on the orthonormalized frame; its sign
  // says which orientation of the plane is the calibrated one (the predicate
  // itself accepts either orientation).
  double form_value = 0.0;
};

// A 4-plane in R^8 is calibrated (in one of its orientations) iff the
// imaginary part of the fourfold cross of an orthonormal frame vanishes.
CayleyCheck is_cayley_plane(const Frame4& f, double tol = 1e-9);

struct CoassCheck {
  bool pass = false;
  double max_phi_triple = 0.0;  // max |phi(. , . , .)| over the 4 basis triples
  double form_value = 0.0;      // *phi on the orthonormalized frame
};

// A 4-plane in R^7 is coassociative iff phi vanishes on it; `pass`
// additionally requires the frame orientation to be the calibrated one
// (form_value > 0), which form_value reports either way.
CoassCheck is_coassociative_plane(const Frame4& f, double tol = 1e-9);

struct SLCheck {
  bool pass = false;
  double max_omega_pair = 0.0;  // max |omega| over the 6 basis pairs
  double defect_value = 0.0;    // (sin θ ReΩ − cos θ ImΩ)(frame)
  double calib_value = 0.0;     // (cos θ ReΩ + sin θ ImΩ)(frame)
};

// Special-Lagrangian plane with phase angle theta in C^4 = R^8.
SLCheck is_sl_plane(const Frame4& f, double theta, double tol = 1e-9);

}  // namespace ruled4
