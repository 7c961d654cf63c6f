#include "ruled4/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ruled4/numerics.hpp"
#include "ruled4/octonion.hpp"

namespace ruled4 {

namespace {

Vec8 transport(int ambient_dim, const Vec8& f1, const Vec8& f2,
               const Vec8& v) {
  return ambient_dim == 8 ? triple_cross(f1, f2, v)
                          : triple_cross_r7(f1, f2, v);
}

struct State {
  Field phi1, phi2, psi;
};

State axpy_state(const State& a, double c, const State& b) {
  const size_t n = a.phi1.size();
  State r;
  r.phi1.resize(n);
  r.phi2.resize(n);
  r.psi.resize(n);
  for (size_t k = 0; k < n; ++k) {
    r.phi1[k] = axpy(a.phi1[k], c, b.phi1[k]);
    r.phi2[k] = axpy(a.phi2[k], c, b.phi2[k]);
    r.psi[k] = axpy(a.psi[k], c, b.psi[k]);
  }
  return r;
}

// Spatial derivative of a line of samples: fourth-order stencils, or exact
// differentiation of the trigonometric interpolant for periodic lines.
class LineDeriv {
 public:
  LineDeriv(int Ns, double hs, bool periodic, bool spectral)
      : Ns_(Ns), hs_(hs), periodic_(periodic), spectral_(spectral) {
    if (spectral_ && !periodic_)
      throw std::invalid_argument(
          "evolve: spectral derivatives require a periodic s-grid");
    if (!spectral_) {
      stencils_.resize(Ns);
      for (int i = 0; i < Ns; ++i)
        stencils_[i] = deriv4_stencil(Ns, i, hs, periodic);
    }
  }

  Field apply(const Field& f, Exec exec) const {
    Field out(f.size(), zero_vec());
    if (!spectral_) {
      parallel_for(exec, Ns_, [&](int i) {
        const Stencil5& st = stencils_[i];
        Vec8 acc = zero_vec();
        for (int k = 0; k < 5; ++k) acc = axpy(acc, st.w[k], f[st.idx[k]]);
        out[i] = acc;
      });
      return out;
    }
    // Differentiate the trigonometric interpolant componentwise: O(N^2)
    // direct sums (line lengths stay modest).
    const int n = Ns_;
    const double L = n * hs_;
    const double two_pi = 6.28318530717958647692;
    const int K = (n - 1) / 2;
    for (int c = 0; c < 8; ++c) {
      bool any = false;
      for (int j = 0; j < n; ++j)
        if (f[j][c] != 0.0) {
          any = true;
          break;
        }
      if (!any) continue;
      std::vector<double> a(K + 1, 0.0), b(K + 1, 0.0);
      for (int k = 1; k <= K; ++k) {
        double ak = 0.0, bk = 0.0;
        for (int j = 0; j < n; ++j) {
          const double ang = two_pi * k * j / n;
          ak += f[j][c] * std::cos(ang);
          bk += f[j][c] * std::sin(ang);
        }
        a[k] = 2.0 * ak / n;
        b[k] = 2.0 * bk / n;
      }
      // The Nyquist cosine mode differentiates to a sine that vanishes at
      // the nodes, so it drops out (consistent with the standard
      // trigonometric-interpolant derivative).
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 1; k <= K; ++k) {
          const double w = two_pi * k / L;
          const double ang = w * (j * hs_);
          acc += -a[k] * w * std::sin(ang) + b[k] * w * std::cos(ang);
        }
        out[j][c] = acc;
      }
    }
    return out;
  }

 private:
  int Ns_;
  double hs_;
  bool periodic_;
  bool spectral_;
  std::vector<Stencil5> stencils_;
};

}  // namespace

void check_initial_data(const InitialData& init, double tol) {
  if (init.Ns < 5)
    throw std::invalid_argument("initial data: need at least 5 s-nodes");
  if (!(init.hs > 0.0))
    throw std::invalid_argument("initial data: hs must be positive");
  if (init.ambient_dim != 7 && init.ambient_dim != 8)
    throw std::invalid_argument("initial data: ambient dimension must be 7 or 8");
  const size_t n = static_cast<size_t>(init.Ns);
  if (init.phi1_0.size() != n || init.phi2_0.size() != n ||
      init.psi_0.size() != n)
    throw std::invalid_argument("initial data: field lengths do not match Ns");
  for (int i = 0; i < init.Ns; ++i) {
    const double n1 = norm(init.phi1_0[i]);
    const double n2 = norm(init.phi2_0[i]);
    const double ip = dot(init.phi1_0[i], init.phi2_0[i]);
    if (std::fabs(n1 - 1.0) > tol || std::fabs(n2 - 1.0) > tol ||
        std::fabs(ip) > tol)
      throw std::invalid_argument(
          "initial data: frame invariant violated at s-node " +
          std::to_string(i));
    if (init.ambient_dim == 7 &&
        (std::fabs(init.phi1_0[i][7]) > tol ||
         std::fabs(init.phi2_0[i][7]) > tol ||
         std::fabs(init.psi_0[i][7]) > tol))
      throw std::invalid_argument(
          "initial data: slot 7 must be empty for 7-dimensional data (node " +
          std::to_string(i) + ")");
  }
}

EvolveResult evolve(const InitialData& init, double epsilon, int Nt,
                    const EvolveOptions& opts) {
  if (Nt < 1) throw std::invalid_argument("evolve: Nt must be >= 1");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("evolve: epsilon must be positive");
  check_initial_data(init);
  const double ht = epsilon / Nt;
  if (ht > opts.cfl_factor * init.hs)
    throw CflError("evolve: time step " + std::to_string(ht) +
                   " exceeds the stability bound " +
                   std::to_string(opts.cfl_factor) + " * hs = " +
                   std::to_string(opts.cfl_factor * init.hs) +
                   "; increase Nt or coarsen epsilon");

  const LineDeriv deriv(init.Ns, init.hs, init.periodic_s, opts.spectral);
  const int dim = init.ambient_dim;
  auto f_at = [&](double s, double t) -> double {
    return init.f ? init.f(s, t) : 0.0;
  };

  auto rhs = [&](const State& y, double t) {
    const Field d1 = deriv.apply(y.phi1, opts.exec);
    const Field d2 = deriv.apply(y.phi2, opts.exec);
    const Field dp = deriv.apply(y.psi, opts.exec);
    State r;
    r.phi1.resize(y.phi1.size());
    r.phi2.resize(y.phi1.size());
    r.psi.resize(y.phi1.size());
    parallel_for(opts.exec, init.Ns, [&](int i) {
      const double fv = f_at(init.s0 + i * init.hs, t);
      const Vec8 &f1 = y.phi1[i], &f2 = y.phi2[i];
      r.phi1[i] = axpy(transport(dim, f1, f2, d1[i]), fv, f2);
      r.phi2[i] = axpy(transport(dim, f1, f2, d2[i]), -fv, f1);
      r.psi[i] = transport(dim, f1, f2, dp[i]);
    });
    return r;
  };

  const State initial{init.phi1_0, init.phi2_0, init.psi_0};
  const int total_rows = 2 * Nt + 1;

  EvolveResult result;
  result.patch.ambient_dim = dim;
  result.patch.grid = GridSpec{init.Ns, total_rows, init.hs,     ht,
                               init.s0, -epsilon,  init.periodic_s, false};
  result.patch.phi1.assign(static_cast<size_t>(init.Ns) * total_rows,
                           zero_vec());
  result.patch.phi2 = result.patch.phi1;
  result.patch.psi = result.patch.phi1;

  auto store_row = [&](const State& y, int j) {
    for (int i = 0; i < init.Ns; ++i) {
      const int n = result.patch.grid.at(i, j);
      result.patch.phi1[n] = y.phi1[i];
      result.patch.phi2[n] = y.phi2[i];
      result.patch.psi[n] = y.psi[i];
    }
  };
  store_row(initial, Nt);

  auto march = [&](int direction) {  // +1 forward, -1 backward
    State y = initial;
    const double dt = direction * ht;
    for (int step = 1; step <= Nt; ++step) {
      const double t = (step - 1) * dt;
      const State k1 = rhs(y, t);
      const State k2 = rhs(axpy_state(y, dt / 2.0, k1), t + dt / 2.0);
      const State k3 = rhs(axpy_state(y, dt / 2.0, k2), t + dt / 2.0);
      const State k4 = rhs(axpy_state(y, dt, k3), t + dt);
      State next = y;
      for (int i = 0; i < init.Ns; ++i) {
        auto comb = [&](const Field State::* fp) {
          Vec8 acc = (y.*fp)[i];
          acc = axpy(acc, dt / 6.0, (k1.*fp)[i]);
          acc = axpy(acc, dt / 3.0, (k2.*fp)[i]);
          acc = axpy(acc, dt / 3.0, (k3.*fp)[i]);
          acc = axpy(acc, dt / 6.0, (k4.*fp)[i]);
          return acc;
        };
        next.phi1[i] = comb(&State::phi1);
        next.phi2[i] = comb(&State::phi2);
        next.psi[i] = comb(&State::psi);
      }

      // Drift of the frame invariants before any correction.
      double norm_dev = 0.0, ortho_dev = 0.0;
      for (int i = 0; i < init.Ns; ++i) {
        norm_dev = std::max(norm_dev, std::fabs(norm(next.phi1[i]) - 1.0));
        norm_dev = std::max(norm_dev, std::fabs(norm(next.phi2[i]) - 1.0));
        ortho_dev =
            std::max(ortho_dev, std::fabs(dot(next.phi1[i], next.phi2[i])));
      }
      const double drift = std::max(norm_dev, ortho_dev);
      result.drift.push_back(
          DriftSample{direction * step, step * dt, norm_dev, ortho_dev});
      result.max_drift = std::max(result.max_drift, drift);
      if (drift > opts.drift_abort)
        throw DriftError("evolve: frame drift " + std::to_string(drift) +
                         " at step " + std::to_string(direction * step) +
                         " exceeds the abort threshold " +
                         std::to_string(opts.drift_abort));

      if (opts.reorthonormalize) {
        for (int i = 0; i < init.Ns; ++i) {
          next.phi1[i] = normalized(next.phi1[i]);
          Vec8 p2 = axpy(next.phi2[i], -dot(next.phi2[i], next.phi1[i]),
                         next.phi1[i]);
          next.phi2[i] = normalized(p2);
        }
      }
      y = next;
      store_row(y, Nt + direction * step);
    }
  };
  march(+1);
  march(-1);

  result.patch = canonicalize(result.patch);
  return result;
}

InitialData initial_from_patch_row(const RuledPatch& p, int j) {
  if (j < 0 || j >= p.grid.Nt)
    throw std::invalid_argument("initial_from_patch_row: row out of range");
  InitialData init;
  init.ambient_dim = p.ambient_dim;
  init.Ns = p.grid.Ns;
  init.hs = p.grid.hs;
  init.s0 = p.grid.s0;
  init.periodic_s = p.grid.periodic_s;
  init.phi1_0.resize(p.grid.Ns);
  init.phi2_0.resize(p.grid.Ns);
  init.psi_0.resize(p.grid.Ns);
  for (int i = 0; i < p.grid.Ns; ++i) {
    init.phi1_0[i] = p.phi1[p.grid.at(i, j)];
    init.phi2_0[i] = p.phi2[p.grid.at(i, j)];
    init.psi_0[i] = p.psi[p.grid.at(i, j)];
  }
  return init;
}

}  // namespace ruled4
