#pragma once

#include <map>
#include <string>
#include <vector>

#include "ruled4/vec.hpp"

// Alternating k-forms on R^7 / R^8 with exact (integer-valued) coefficients
// for all built-ins, plus the three decomposition identities relating the
// calibration forms under the coordinate splits
//   R^8 = R ⊕ R^7          (x1 ⊥ x2..x8, R^7 coordinates shifted up by one)
//   R^8 = C^4               (z_j = x_{2j-1} + i x_{2j})
//   R^7 = R ⊕ C^3           (x1 ⊥ z_j = x_{2j} + i x_{2j+1})
//
// Built-in names: phi, star_phi (R^7); Phi, omega, ReOmega, ImOmega (R^8).

namespace ruled4 {

class KForm {
 public:
  KForm(int n, int k) : n_(n), k_(k) {}

  int n() const { return n_; }
  int k() const { return k_; }

  // Adds c * dx_I; idx may be unsorted (sorted in place with the permutation
  // sign); repeated indices contribute nothing. Zero net coefficients are
  // erased so terms() contains only genuine monomials.
  void add_term(std::vector<int> idx, double c);

  double coeff(std::vector<int> idx) const;

  const std::map<std::vector<int>, double>& terms() const { return terms_; }

  // Evaluation on k vectors (alternating multilinear).
  double eval(const std::vector<Vec8>& vectors) const;

  static KForm coordinate(int n, int i);  // dx_i

 private:
  int n_;
  int k_;
  std::map<std::vector<int>, double> terms_;
};

KForm wedge(const KForm& a, const KForm& b);
KForm scale(const KForm& a, double c);
KForm add(const KForm& a, const KForm& b);
KForm sub(const KForm& a, const KForm& b);

// Euclidean Hodge star on R^7, standard orientation dx1^...^dx7.
KForm hodge_star_r7(const KForm& a);

// Relabels indices: index_map[i-1] is the new 1-based index of old index i.
// The map must be injective into 1..new_n.
KForm relabel(const KForm& a, int new_n, const std::vector<int>& index_map);

// Kaehler form of C^m embedded in R^n with z_j = x_{first+2(j-1)} + i x_{...+1}.
KForm complex_kaehler_form(int m, int first, int n);
// Real/imaginary part of the holomorphic volume form dz_1 ^ ... ^ dz_m.
KForm complex_volume_re(int m, int first, int n);
KForm complex_volume_im(int m, int first, int n);

// Built-in calibration forms; throws std::invalid_argument on unknown name.
KForm builtin_form(const std::string& name);

// Largest absolute coefficient difference over the union of monomials.
double max_coeff_dev(const KForm& a, const KForm& b);

struct DecompositionReport {
  // All three must be exactly 0.
  double dev_r8_split;       // Phi  =  dx1 ^ phi + *phi        (R ⊕ R^7)
  double dev_c4_split;       // Phi  =  omega^2/2 + ReOmega     (C^4)
  double dev_r7_c3_split;    // *phi =  omega^2/2 - dx1 ^ ImOmega  (R ⊕ C^3)
};

DecompositionReport verify_decompositions();

}  // namespace ruled4
