// Shared numerical kernels: fourth-order finite-difference stencils,
// cumulative quadrature (Gregory and spectral), trigonometric interpolation
// of doubly periodic grids, and a small derivative-free minimizer.
#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "ruled4/vec.hpp"

namespace ruled4 {

// Five-point first-derivative stencil with absolute node indices, so callers
// can apply it to any strided data without worrying about boundary cases.
struct Stencil5 {
  std::array<int, 5> idx;
  std::array<double, 5> w;
};

// Fourth-order first-derivative stencil at node i of an n-node grid with
// spacing h.  Periodic grids use the centered stencil with wraparound;
// non-periodic grids switch to one-sided stencils at the two nodes nearest
// each end.  Requires n >= 5.
Stencil5 deriv4_stencil(int n, int i, double h, bool periodic);

// Applies deriv4_stencil to a sampled scalar function.
std::vector<double> deriv4_line(const std::vector<double>& f, double h,
                                bool periodic);

// Cumulative integral F with F[0] = 0 and F[k] = integral of the sampled
// integrand from node 0 to node k, using fourth-order Gregory end
// corrections.  Requires n >= 4.
std::vector<double> cumulative_gregory(const std::vector<double>& f, double h);

// Cumulative integral for samples of a periodic function (period n*h, node k
// at k*h).  The mean of the samples contributes a linear term; the
// oscillatory part is integrated exactly through its trigonometric
// interpolant.  Spectrally accurate for smooth periodic integrands.
std::vector<double> cumulative_spectral(const std::vector<double>& f,
                                        double h);

// Trigonometric interpolation of a doubly periodic grid of R^8-valued
// samples.  Node (i, j) carries the value at parameters
// (s0 + i*hs, t0 + j*ht); the periods are Ns*hs and Nt*ht.  Coefficients
// below a relative threshold are dropped at build time, so evaluation cost
// scales with the active bandwidth of the data.
class TrigInterp2 {
 public:
  TrigInterp2(const std::vector<Vec8>& grid, int Ns, int Nt, double s0,
              double t0, double hs, double ht, double prune_rel = 1e-13);

  Vec8 eval(double s, double t) const;
  int mode_count() const { return static_cast<int>(modes_.size()); }

 private:
  struct Mode {
    int k;  // signed frequency in s (k = Ns/2 flags the Nyquist cosine)
    int l;  // signed frequency in t (l = Nt/2 flags the Nyquist cosine)
    Vec8 re;
    Vec8 im;
  };
  std::vector<Mode> modes_;
  int Ns_, Nt_;
  double s0_, t0_, hs_, ht_;
};

// Nelder-Mead minimization in two variables.  Deterministic for a given
// start; returns the best vertex and its value.
struct MinResult2 {
  std::array<double, 2> x;
  double value;
  int evals;
};
MinResult2 nelder_mead_2d(const std::function<double(double, double)>& f,
                          std::array<double, 2> start, double step,
                          int max_evals = 400, double ftol = 1e-12);

// Least-squares slope of y against x (both already transformed by the
// caller, e.g. log-log).  Requires at least two points.
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ruled4
