#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "ruled4/forms.hpp"
#include "ruled4/octonion.hpp"
#include "support.hpp"

using namespace ruled4;
using testsupport::random_gauss_vec;
using testsupport::random_orthonormal_frame;

namespace {

struct Lit3 {
  int a, b, c;
  double coef;
};
struct Lit4 {
  int a, b, c, d;
  double coef;
};

// Independently transcribed coefficient freezes for the built-ins.
const Lit3 kPhiLit[7] = {{1, 2, 3, 1},  {1, 4, 5, 1},  {1, 6, 7, 1},
                         {2, 4, 6, 1},  {2, 5, 7, -1}, {3, 4, 7, -1},
                         {3, 5, 6, -1}};
const Lit4 kStarPhiLit[7] = {{4, 5, 6, 7, 1},  {2, 3, 6, 7, 1},
                             {2, 3, 4, 5, 1},  {1, 3, 5, 7, 1},
                             {1, 3, 4, 6, -1}, {1, 2, 5, 6, -1},
                             {1, 2, 4, 7, -1}};
const Lit4 kPhi8Lit[14] = {
    {1, 2, 3, 4, 1},  {1, 2, 5, 6, 1},  {1, 2, 7, 8, 1},  {1, 3, 5, 7, 1},
    {1, 3, 6, 8, -1}, {1, 4, 5, 8, -1}, {1, 4, 6, 7, -1}, {5, 6, 7, 8, 1},
    {3, 4, 7, 8, 1},  {3, 4, 5, 6, 1},  {2, 4, 6, 8, 1},  {2, 4, 5, 7, -1},
    {2, 3, 6, 7, -1}, {2, 3, 5, 8, -1}};
const Lit4 kImOmegaLit[8] = {{2, 3, 5, 7, 1},  {1, 4, 5, 7, 1},
                             {1, 3, 6, 7, 1},  {1, 3, 5, 8, 1},
                             {2, 4, 6, 7, -1}, {2, 4, 5, 8, -1},
                             {2, 3, 6, 8, -1}, {1, 4, 6, 8, -1}};

std::vector<Vec8> frame_vec(const std::array<Vec8, 4>& f) {
  return {f[0], f[1], f[2], f[3]};
}

}  // namespace

TEST_CASE("builtin forms: frozen coefficients") {
  const KForm phi = builtin_form("phi");
  REQUIRE(phi.n() == 7);
  REQUIRE(phi.k() == 3);
  REQUIRE(phi.terms().size() == 7);
  for (const auto& t : kPhiLit) CHECK(phi.coeff({t.a, t.b, t.c}) == t.coef);

  const KForm sp = builtin_form("star_phi");
  REQUIRE(sp.terms().size() == 7);
  for (const auto& t : kStarPhiLit)
    CHECK(sp.coeff({t.a, t.b, t.c, t.d}) == t.coef);

  const KForm Phi = builtin_form("Phi");
  REQUIRE(Phi.n() == 8);
  REQUIRE(Phi.terms().size() == 14);
  for (const auto& t : kPhi8Lit)
    CHECK(Phi.coeff({t.a, t.b, t.c, t.d}) == t.coef);

  const KForm im = builtin_form("ImOmega");
  REQUIRE(im.terms().size() == 8);
  for (const auto& t : kImOmegaLit)
    CHECK(im.coeff({t.a, t.b, t.c, t.d}) == t.coef);

  // The contraction constants used by the SL triple cross must agree with
  // the programmatically expanded ReOmega.
  const KForm re = builtin_form("ReOmega");
  REQUIRE(re.terms().size() == 8);
  for (const Mono4& m : kReOmegaMonos)
    CHECK(re.coeff({m.i, m.j, m.k, m.l}) == static_cast<double>(m.sign));

  CHECK(builtin_form("omega").terms().size() == 4);
  CHECK_THROWS_AS(builtin_form("nope"), std::invalid_argument);
}

TEST_CASE("hodge star on R^7") {
  const KForm phi = builtin_form("phi");
  const KForm sp = builtin_form("star_phi");
  CHECK(max_coeff_dev(hodge_star_r7(phi), sp) == 0.0);
  CHECK(max_coeff_dev(hodge_star_r7(sp), phi) == 0.0);

  KForm dx123(7, 3);
  dx123.add_term({1, 2, 3}, 1.0);
  KForm dx4567(7, 4);
  dx4567.add_term({4, 5, 6, 7}, 1.0);
  CHECK(max_coeff_dev(hodge_star_r7(dx123), dx4567) == 0.0);

  KForm dx1 = KForm::coordinate(7, 1);
  KForm dx234567(7, 6);
  dx234567.add_term({2, 3, 4, 5, 6, 7}, 1.0);
  CHECK(max_coeff_dev(hodge_star_r7(dx1), dx234567) == 0.0);

  // *(*a) = a for all the built-ins and for a generic mixed form.
  KForm mixed(7, 2);
  mixed.add_term({1, 5}, 2.0);
  mixed.add_term({3, 4}, -7.0);
  mixed.add_term({2, 7}, 0.5);
  CHECK(max_coeff_dev(hodge_star_r7(hodge_star_r7(mixed)), mixed) == 0.0);
}

TEST_CASE("wedge product") {
  const KForm dx1 = KForm::coordinate(8, 1);
  const KForm dx2 = KForm::coordinate(8, 2);
  KForm dx12(8, 2);
  dx12.add_term({1, 2}, 1.0);
  CHECK(max_coeff_dev(wedge(dx1, dx2), dx12) == 0.0);

  // a ^ a = 0 for odd degree.
  KForm odd(8, 3);
  odd.add_term({1, 2, 3}, 2.0);
  odd.add_term({2, 5, 7}, -3.0);
  CHECK(wedge(odd, odd).terms().empty());

  // Graded commutativity: deg 1 x deg 3 anticommutes... sign (-1)^{1*3}.
  const KForm ab = wedge(dx1, odd);
  const KForm ba = wedge(odd, dx1);
  CHECK(max_coeff_dev(ab, scale(ba, -1.0)) == 0.0);

  // deg 2 x deg 2 commutes.
  const KForm omega = builtin_form("omega");
  CHECK(max_coeff_dev(wedge(omega, dx12), wedge(dx12, omega)) == 0.0);

  // Top degree is allowed: Phi ^ Phi is an 8-form on R^8 (14 squared-monomial
  // pairings contribute; the exact value is pinned as a frozen volume factor).
  const KForm Phi2 = wedge(builtin_form("Phi"), builtin_form("Phi"));
  std::array<Vec8, 8> full_frame;
  for (int i = 0; i < 8; ++i) full_frame[i] = basis(i + 1);
  CHECK(Phi2.eval({full_frame.begin(), full_frame.end()}) == 14.0);

  // Degree overflow throws: 4-form ^ 4-form on R^7.
  CHECK_THROWS_AS(
      (wedge(builtin_form("star_phi"), builtin_form("star_phi"))),
      std::invalid_argument);
}

TEST_CASE("form evaluation") {
  const KForm Phi = builtin_form("Phi");
  CHECK(Phi.eval({basis(1), basis(2), basis(3), basis(4)}) == 1.0);
  CHECK(Phi.eval({basis(1), basis(2), basis(3), basis(5)}) == 0.0);
  // Swapping two arguments flips the sign.
  CHECK(Phi.eval({basis(2), basis(1), basis(3), basis(4)}) == -1.0);

  const KForm omega = builtin_form("omega");
  const KForm om2 = wedge(omega, omega);
  CHECK(om2.eval({basis(1), basis(2), basis(3), basis(4)}) == 2.0);

  // omega vanishes identically on the real-locus frame.
  for (int i : {1, 3, 5, 7})
    for (int j : {1, 3, 5, 7})
      CHECK(omega.eval({basis(i), basis(j)}) == 0.0);

  // The volume form on the real locus is purely real and unital.
  CHECK(builtin_form("ReOmega").eval({basis(1), basis(3), basis(5), basis(7)}) ==
        1.0);
  CHECK(builtin_form("ImOmega").eval({basis(1), basis(3), basis(5), basis(7)}) ==
        0.0);

  // Multilinearity on random data.
  std::mt19937 rng(31337);
  for (int rep = 0; rep < 50; ++rep) {
    const Vec8 a = random_gauss_vec(rng);
    const Vec8 b = random_gauss_vec(rng);
    const Vec8 c = random_gauss_vec(rng);
    const Vec8 d = random_gauss_vec(rng);
    const Vec8 a2 = random_gauss_vec(rng);
    const double lam = 0.7, mu = -1.3;
    const double lhs = Phi.eval({axpy(scale(a, lam), mu, a2), b, c, d});
    const double rhs =
        lam * Phi.eval({a, b, c, d}) + mu * Phi.eval({a2, b, c, d});
    CHECK(std::fabs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("calibration form matches the triple cross pairing") {
  const KForm Phi = builtin_form("Phi");
  std::mt19937 rng(2024);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec8 x = random_gauss_vec(rng);
    const Vec8 y = random_gauss_vec(rng);
    const Vec8 z = random_gauss_vec(rng);
    const Vec8 w = random_gauss_vec(rng);
    const double lhs = Phi.eval({x, y, z, w});
    const double rhs = dot(triple_cross(x, y, z), w);
    REQUIRE(std::fabs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("decomposition identities hold exactly") {
  const DecompositionReport rep = verify_decompositions();
  CHECK(rep.dev_r8_split == 0.0);
  CHECK(rep.dev_c4_split == 0.0);
  CHECK(rep.dev_r7_c3_split == 0.0);
}

TEST_CASE("comass bound on random orthonormal frames") {
  const KForm Phi = builtin_form("Phi");
  const KForm sp = builtin_form("star_phi");
  std::mt19937 rng(7);
  double max8 = 0.0, max7 = 0.0;
  for (int rep = 0; rep < 10000; ++rep) {
    const auto f8 = random_orthonormal_frame(rng, 8);
    max8 = std::max(max8, std::fabs(Phi.eval(frame_vec(f8))));
    const auto f7 = random_orthonormal_frame(rng, 7);
    max7 = std::max(max7, std::fabs(sp.eval(frame_vec(f7))));
  }
  CHECK(max8 <= 1.0 + 1e-12);
  CHECK(max7 <= 1.0 + 1e-12);

  // Equality cases, exact.
  CHECK(Phi.eval({basis(1), basis(2), basis(3), basis(4)}) == 1.0);
  CHECK(sp.eval({basis(4), basis(5), basis(6), basis(7)}) == 1.0);
}

TEST_CASE("relabel embeds and permutes") {
  // Shift the R^7 3-form into R^8 (x_i -> x_{i+1}).
  const KForm phi = builtin_form("phi");
  const KForm shifted = relabel(phi, 8, {2, 3, 4, 5, 6, 7, 8});
  CHECK(shifted.coeff({2, 3, 4}) == 1.0);
  CHECK(shifted.coeff({4, 5, 8}) == -1.0);  // from -dx347
  CHECK(shifted.terms().size() == 7);

  // A transposition relabeling changes coefficient sign through re-sorting.
  KForm dx12(4, 2);
  dx12.add_term({1, 2}, 1.0);
  const KForm swapped = relabel(dx12, 4, {2, 1, 3, 4});
  CHECK(swapped.coeff({1, 2}) == -1.0);
}
