#include "ruled4/forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ruled4/octonion.hpp"

namespace ruled4 {

namespace {

// Sorts idx ascending in place, returns the permutation sign, or 0 if any
// index repeats.
int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
      std::swap(idx[j], idx[j - 1]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

double det_square(std::vector<std::vector<double>>& m) {
  // Laplace expansion; matrices here are at most 8x8 and usually 4x4.
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (n == 3)
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  double out = 0.0;
  int sign = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<double>> sub(n - 1, std::vector<double>(n - 1));
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t cc = 0, k = 0; cc < n; ++cc)
        if (cc != c) sub[r - 1][k++] = m[r][cc];
    out += sign * m[0][c] * det_square(sub);
    sign = -sign;
  }
  return out;
}

}  // namespace

void KForm::add_term(std::vector<int> idx, double c) {
  if (static_cast<int>(idx.size()) != k_)
    throw std::invalid_argument("KForm::add_term: wrong index count");
  for (int i : idx)
    if (i < 1 || i > n_)
      throw std::invalid_argument("KForm::add_term: index out of range");
  const int sign = sort_sign(idx);
  if (sign == 0) return;
  double& slot = terms_[idx];
  slot += sign * c;
  if (slot == 0.0) terms_.erase(idx);
}

double KForm::coeff(std::vector<int> idx) const {
  const int sign = sort_sign(idx);
  if (sign == 0) return 0.0;
  auto it = terms_.find(idx);
  return it == terms_.end() ? 0.0 : sign * it->second;
}

double KForm::eval(const std::vector<Vec8>& vectors) const {
  if (static_cast<int>(vectors.size()) != k_)
    throw std::invalid_argument("KForm::eval: wrong vector count");
  double out = 0.0;
  for (const auto& [idx, c] : terms_) {
    std::vector<std::vector<double>> m(k_, std::vector<double>(k_));
    for (int r = 0; r < k_; ++r)
      for (int col = 0; col < k_; ++col) m[r][col] = vectors[r][idx[col] - 1];
    out += c * det_square(m);
  }
  return out;
}

KForm KForm::coordinate(int n, int i) {
  KForm f(n, 1);
  f.add_term({i}, 1.0);
  return f;
}

KForm wedge(const KForm& a, const KForm& b) {
  if (a.n() != b.n()) throw std::invalid_argument("wedge: dimension mismatch");
  if (a.k() + b.k() > a.n())
    throw std::invalid_argument("wedge: degree exceeds dimension");
  KForm out(a.n(), a.k() + b.k());
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      std::vector<int> idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add_term(std::move(idx), ca * cb);
    }
  }
  return out;
}

KForm scale(const KForm& a, double c) {
  KForm out(a.n(), a.k());
  for (const auto& [idx, ca] : a.terms()) out.add_term(idx, c * ca);
  return out;
}

KForm add(const KForm& a, const KForm& b) {
  if (a.n() != b.n() || a.k() != b.k())
    throw std::invalid_argument("add: form type mismatch");
  KForm out = a;
  for (const auto& [idx, cb] : b.terms()) out.add_term(idx, cb);
  return out;
}

KForm sub(const KForm& a, const KForm& b) { return add(a, scale(b, -1.0)); }

KForm hodge_star_r7(const KForm& a) {
  if (a.n() != 7) throw std::invalid_argument("hodge_star_r7: n must be 7");
  KForm out(7, 7 - a.k());
  for (const auto& [idx, c] : a.terms()) {
    std::vector<int> comp;
    for (int i = 1; i <= 7; ++i)
      if (std::find(idx.begin(), idx.end(), i) == idx.end()) comp.push_back(i);
    // Sign of the permutation (idx, comp) of (1..7): count inversions of the
    // concatenation (both halves are already ascending).
    int inversions = 0;
    for (int i : idx)
      for (int j : comp)
        if (j < i) ++inversions;
    const int sign = (inversions % 2 == 0) ? +1 : -1;
    out.add_term(comp, sign * c);
  }
  return out;
}

KForm relabel(const KForm& a, int new_n, const std::vector<int>& index_map) {
  if (static_cast<int>(index_map.size()) < a.n())
    throw std::invalid_argument("relabel: map too short");
  KForm out(new_n, a.k());
  for (const auto& [idx, c] : a.terms()) {
    std::vector<int> mapped;
    mapped.reserve(idx.size());
    for (int i : idx) mapped.push_back(index_map[i - 1]);
    out.add_term(std::move(mapped), c);
  }
  return out;
}

KForm complex_kaehler_form(int m, int first, int n) {
  KForm out(n, 2);
  for (int j = 0; j < m; ++j) out.add_term({first + 2 * j, first + 2 * j + 1}, 1.0);
  return out;
}

namespace {

// Expansion of dz_1 ^ ... ^ dz_m with dz_j = dx_{p_j} + i dx_{p_j + 1}:
// each subset S of factors contributes i^{|S|} dx_{a_1...a_m} where a_j picks
// the imaginary slot for j in S. want_im selects the imaginary part.
KForm complex_volume_part(int m, int first, int n, bool want_im) {
  KForm out(n, m);
  for (int mask = 0; mask < (1 << m); ++mask) {
    const int bits = __builtin_popcount(static_cast<unsigned>(mask));
    // i^bits = {1, i, -1, -i}[bits % 4]
    double re = 0.0, im = 0.0;
    switch (bits % 4) {
      case 0: re = 1.0; break;
      case 1: im = 1.0; break;
      case 2: re = -1.0; break;
      case 3: im = -1.0; break;
    }
    const double c = want_im ? im : re;
    if (c == 0.0) continue;
    std::vector<int> idx(m);
    for (int j = 0; j < m; ++j)
      idx[j] = first + 2 * j + ((mask >> j) & 1);
    out.add_term(std::move(idx), c);
  }
  return out;
}

}  // namespace

KForm complex_volume_re(int m, int first, int n) {
  return complex_volume_part(m, first, n, false);
}

KForm complex_volume_im(int m, int first, int n) {
  return complex_volume_part(m, first, n, true);
}

KForm builtin_form(const std::string& name) {
  if (name == "phi") {
    KForm f(7, 3);
    for (const Mono3& t : kPhi7Monos) f.add_term({t.i, t.j, t.k}, t.sign);
    return f;
  }
  if (name == "star_phi") {
    KForm f(7, 4);
    for (const Mono4& t : kStarPhi7Monos)
      f.add_term({t.i, t.j, t.k, t.l}, t.sign);
    return f;
  }
  if (name == "Phi") {
    KForm f(8, 4);
    for (const Mono4& t : kPhi8Monos) f.add_term({t.i, t.j, t.k, t.l}, t.sign);
    return f;
  }
  if (name == "omega") return complex_kaehler_form(4, 1, 8);
  if (name == "ReOmega") return complex_volume_re(4, 1, 8);
  if (name == "ImOmega") return complex_volume_im(4, 1, 8);
  throw std::invalid_argument("builtin_form: unknown name '" + name + "'");
}

double max_coeff_dev(const KForm& a, const KForm& b) {
  double dev = 0.0;
  for (const auto& [idx, c] : a.terms())
    dev = std::max(dev, std::fabs(c - b.coeff(idx)));
  for (const auto& [idx, c] : b.terms())
    dev = std::max(dev, std::fabs(c - a.coeff(idx)));
  return dev;
}

DecompositionReport verify_decompositions() {
  DecompositionReport rep{};

  const KForm Phi = builtin_form("Phi");
  const KForm phi = builtin_form("phi");
  const KForm star_phi = builtin_form("star_phi");

  // R^8 = R ⊕ R^7: shift the R^7 coordinates up by one slot.
  const std::vector<int> shift = {2, 3, 4, 5, 6, 7, 8};
  const KForm lhs1 = add(wedge(KForm::coordinate(8, 1), relabel(phi, 8, shift)),
                         relabel(star_phi, 8, shift));
  rep.dev_r8_split = max_coeff_dev(Phi, lhs1);

  // C^4: Phi = omega^2/2 + ReOmega.
  const KForm omega = builtin_form("omega");
  const KForm lhs2 =
      add(scale(wedge(omega, omega), 0.5), builtin_form("ReOmega"));
  rep.dev_c4_split = max_coeff_dev(Phi, lhs2);

  // R^7 = R ⊕ C^3 with z_j = x_{2j} + i x_{2j+1}:
  // *phi = omega^2/2 - dx1 ^ ImOmega.
  const KForm omega3 = complex_kaehler_form(3, 2, 7);
  const KForm im_vol3 = complex_volume_im(3, 2, 7);
  const KForm lhs3 = sub(scale(wedge(omega3, omega3), 0.5),
                         wedge(KForm::coordinate(7, 1), im_vol3));
  rep.dev_r7_c3_split = max_coeff_dev(star_phi, lhs3);

  return rep;
}

}  // namespace ruled4
