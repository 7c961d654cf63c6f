#include "ruled4/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace ruled4 {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

Stencil5 deriv4_stencil(int n, int i, double h, bool periodic) {
  if (n < 5) throw std::invalid_argument("deriv4_stencil: need at least 5 nodes");
  if (i < 0 || i >= n) throw std::invalid_argument("deriv4_stencil: node out of range");
  if (!(h > 0.0)) throw std::invalid_argument("deriv4_stencil: spacing must be positive");
  const double d = 1.0 / (12.0 * h);
  Stencil5 st{};
  if (periodic) {
    for (int k = 0; k < 5; ++k) st.idx[k] = (i + k - 2 + 2 * n) % n;
    st.w = {1.0 * d, -8.0 * d, 0.0, 8.0 * d, -1.0 * d};
    return st;
  }
  if (i >= 2 && i <= n - 3) {
    for (int k = 0; k < 5; ++k) st.idx[k] = i + k - 2;
    st.w = {1.0 * d, -8.0 * d, 0.0, 8.0 * d, -1.0 * d};
  } else if (i == 0) {
    st.idx = {0, 1, 2, 3, 4};
    st.w = {-25.0 * d, 48.0 * d, -36.0 * d, 16.0 * d, -3.0 * d};
  } else if (i == 1) {
    st.idx = {0, 1, 2, 3, 4};
    st.w = {-3.0 * d, -10.0 * d, 18.0 * d, -6.0 * d, 1.0 * d};
  } else if (i == n - 2) {
    st.idx = {n - 5, n - 4, n - 3, n - 2, n - 1};
    st.w = {-1.0 * d, 6.0 * d, -18.0 * d, 10.0 * d, 3.0 * d};
  } else {  // i == n - 1
    st.idx = {n - 5, n - 4, n - 3, n - 2, n - 1};
    st.w = {3.0 * d, -16.0 * d, 36.0 * d, -48.0 * d, 25.0 * d};
  }
  return st;
}

std::vector<double> deriv4_line(const std::vector<double>& f, double h,
                                bool periodic) {
  const int n = static_cast<int>(f.size());
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const Stencil5 st = deriv4_stencil(n, i, h, periodic);
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += st.w[k] * f[st.idx[k]];
    out[i] = acc;
  }
  return out;
}

std::vector<double> cumulative_gregory(const std::vector<double>& f, double h) {
  const int n = static_cast<int>(f.size());
  if (n < 4) throw std::invalid_argument("cumulative_gregory: need at least 4 nodes");
  std::vector<double> F(n, 0.0);
  const double c = h / 24.0;
  for (int k = 0; k + 1 < n; ++k) {
    double inc;
    if (k == 0) {
      inc = c * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    } else if (k == n - 2) {
      inc = c * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
    } else {
      inc = c * (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]);
    }
    F[k + 1] = F[k] + inc;
  }
  return F;
}

std::vector<double> cumulative_spectral(const std::vector<double>& f,
                                        double h) {
  const int n = static_cast<int>(f.size());
  if (n < 2) throw std::invalid_argument("cumulative_spectral: need at least 2 nodes");
  const double L = n * h;
  double mean = 0.0;
  for (double v : f) mean += v;
  mean /= n;

  // Real Fourier coefficients of the zero-mean part.  The Nyquist mode (n
  // even, k = n/2) interpolates as a cosine whose antiderivative vanishes at
  // every node, so it is skipped: this routine only reports node values.
  const int K = (n - 1) / 2;
  std::vector<double> a(K + 1, 0.0), b(K + 1, 0.0);
  for (int k = 1; k <= K; ++k) {
    double ak = 0.0, bk = 0.0;
    for (int j = 0; j < n; ++j) {
      const double ang = kTwoPi * k * j / n;
      const double g = f[j] - mean;
      ak += g * std::cos(ang);
      bk += g * std::sin(ang);
    }
    a[k] = 2.0 * ak / n;
    b[k] = 2.0 * bk / n;
  }

  std::vector<double> F(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double x = j * h;
    double acc = mean * x;
    for (int k = 1; k <= K; ++k) {
      const double w = kTwoPi * k / L;
      acc += (a[k] / w) * std::sin(w * x) + (b[k] / w) * (1.0 - std::cos(w * x));
    }
    F[j] = acc;
  }
  return F;
}

TrigInterp2::TrigInterp2(const std::vector<Vec8>& grid, int Ns, int Nt,
                         double s0, double t0, double hs, double ht,
                         double prune_rel)
    : Ns_(Ns), Nt_(Nt), s0_(s0), t0_(t0), hs_(hs), ht_(ht) {
  if (Ns < 1 || Nt < 1 ||
      static_cast<int>(grid.size()) != Ns * Nt)
    throw std::invalid_argument("TrigInterp2: grid size mismatch");

  using Cx = std::complex<double>;
  // Separable DFT: rows (t direction) first, then columns (s direction).
  std::vector<std::array<Cx, 8>> stage(static_cast<size_t>(Ns) * Nt);
  for (int i = 0; i < Ns; ++i) {
    for (int l = 0; l < Nt; ++l) {
      std::array<Cx, 8> acc{};
      for (int j = 0; j < Nt; ++j) {
        const double ang = -kTwoPi * l * j / Nt;
        const Cx e(std::cos(ang), std::sin(ang));
        const Vec8& v = grid[static_cast<size_t>(i) * Nt + j];
        for (int c = 0; c < 8; ++c) acc[c] += e * v[c];
      }
      stage[static_cast<size_t>(i) * Nt + l] = acc;
    }
  }
  std::vector<std::array<Cx, 8>> coef(static_cast<size_t>(Ns) * Nt);
  double max_mag = 0.0;
  const double scale = 1.0 / (static_cast<double>(Ns) * Nt);
  for (int k = 0; k < Ns; ++k) {
    for (int l = 0; l < Nt; ++l) {
      std::array<Cx, 8> acc{};
      for (int i = 0; i < Ns; ++i) {
        const double ang = -kTwoPi * k * i / Ns;
        const Cx e(std::cos(ang), std::sin(ang));
        const auto& v = stage[static_cast<size_t>(i) * Nt + l];
        for (int c = 0; c < 8; ++c) acc[c] += e * v[c];
      }
      double m = 0.0;
      for (int c = 0; c < 8; ++c) {
        acc[c] *= scale;
        m = std::max(m, std::abs(acc[c]));
      }
      coef[static_cast<size_t>(k) * Nt + l] = acc;
      max_mag = std::max(max_mag, m);
    }
  }
  const double cut = prune_rel * max_mag;
  for (int k = 0; k < Ns; ++k) {
    for (int l = 0; l < Nt; ++l) {
      const auto& acc = coef[static_cast<size_t>(k) * Nt + l];
      double m = 0.0;
      for (int c = 0; c < 8; ++c) m = std::max(m, std::abs(acc[c]));
      if (m <= cut) continue;
      Mode mode;
      mode.k = (2 * k <= Ns) ? k : k - Ns;
      mode.l = (2 * l <= Nt) ? l : l - Nt;
      for (int c = 0; c < 8; ++c) {
        mode.re[c] = acc[c].real();
        mode.im[c] = acc[c].imag();
      }
      modes_.push_back(mode);
    }
  }
}

Vec8 TrigInterp2::eval(double s, double t) const {
  using Cx = std::complex<double>;
  const double u = (s - s0_) / hs_;
  const double v = (t - t0_) / ht_;
  Vec8 out = zero_vec();
  for (const Mode& m : modes_) {
    Cx fs, ft;
    if (Ns_ % 2 == 0 && m.k == Ns_ / 2) {
      fs = Cx(std::cos(kPi * u), 0.0);
    } else {
      const double ang = kTwoPi * m.k * u / Ns_;
      fs = Cx(std::cos(ang), std::sin(ang));
    }
    if (Nt_ % 2 == 0 && m.l == Nt_ / 2) {
      ft = Cx(std::cos(kPi * v), 0.0);
    } else {
      const double ang = kTwoPi * m.l * v / Nt_;
      ft = Cx(std::cos(ang), std::sin(ang));
    }
    const Cx ph = fs * ft;
    for (int c = 0; c < 8; ++c)
      out[c] += m.re[c] * ph.real() - m.im[c] * ph.imag();
  }
  return out;
}

MinResult2 nelder_mead_2d(const std::function<double(double, double)>& f,
                          std::array<double, 2> start, double step,
                          int max_evals, double ftol) {
  struct Vertex {
    std::array<double, 2> x;
    double v;
  };
  int evals = 0;
  auto ev = [&](std::array<double, 2> x) {
    ++evals;
    return Vertex{x, f(x[0], x[1])};
  };
  std::array<Vertex, 3> s = {
      ev(start), ev({start[0] + step, start[1]}), ev({start[0], start[1] + step})};
  auto sort3 = [&]() {
    if (s[0].v > s[1].v) std::swap(s[0], s[1]);
    if (s[1].v > s[2].v) std::swap(s[1], s[2]);
    if (s[0].v > s[1].v) std::swap(s[0], s[1]);
  };
  sort3();
  while (evals < max_evals &&
         std::fabs(s[2].v - s[0].v) > ftol * (1.0 + std::fabs(s[0].v))) {
    const std::array<double, 2> cen = {(s[0].x[0] + s[1].x[0]) / 2.0,
                                       (s[0].x[1] + s[1].x[1]) / 2.0};
    auto along = [&](double coef) {
      return std::array<double, 2>{cen[0] + coef * (cen[0] - s[2].x[0]),
                                   cen[1] + coef * (cen[1] - s[2].x[1])};
    };
    Vertex refl = ev(along(1.0));
    if (refl.v < s[0].v) {
      Vertex exp_v = ev(along(2.0));
      s[2] = (exp_v.v < refl.v) ? exp_v : refl;
    } else if (refl.v < s[1].v) {
      s[2] = refl;
    } else {
      Vertex con = ev(along(refl.v < s[2].v ? 0.5 : -0.5));
      if (con.v < std::min(refl.v, s[2].v)) {
        s[2] = con;
      } else {
        // Shrink toward the best vertex.
        for (int i = 1; i < 3; ++i) {
          std::array<double, 2> x = {(s[0].x[0] + s[i].x[0]) / 2.0,
                                     (s[0].x[1] + s[i].x[1]) / 2.0};
          s[i] = ev(x);
        }
      }
    }
    sort3();
  }
  return MinResult2{s[0].x, s[0].v, evals};
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != x.size())
    throw std::invalid_argument("lsq_slope: need at least two matched points");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  if (den == 0.0) throw std::invalid_argument("lsq_slope: degenerate abscissae");
  return num / den;
}

}  // namespace ruled4
