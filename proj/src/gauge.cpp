#include "ruled4/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ruled4/numerics.hpp"
#include "ruled4/octonion.hpp"

namespace ruled4 {

namespace {

Vec8 transport(int ambient_dim, const Vec8& f1, const Vec8& f2,
               const Vec8& v) {
  return ambient_dim == 8 ? triple_cross(f1, f2, v)
                          : triple_cross_r7(f1, f2, v);
}

// Scalar-grid derivative along one direction with the fourth-order stencils.
std::vector<double> scalar_grid_deriv(const std::vector<double>& f,
                                      const GridSpec& g, int dir) {
  const int n_dir = dir == 0 ? g.Ns : g.Nt;
  const bool periodic = dir == 0 ? g.periodic_s : g.periodic_t;
  const double h = dir == 0 ? g.hs : g.ht;
  std::vector<Stencil5> stencils(n_dir);
  for (int i = 0; i < n_dir; ++i)
    stencils[i] = deriv4_stencil(n_dir, i, h, periodic);
  std::vector<double> out(f.size(), 0.0);
  for (int i = 0; i < g.Ns; ++i) {
    for (int j = 0; j < g.Nt; ++j) {
      const Stencil5& st = stencils[dir == 0 ? i : j];
      double acc = 0.0;
      for (int k = 0; k < 5; ++k)
        acc += st.w[k] * f[dir == 0 ? g.at(st.idx[k], j) : g.at(i, st.idx[k])];
      out[g.at(i, j)] = acc;
    }
  }
  return out;
}

}  // namespace

GaugeData gauge_data(const RuledPatch& p, DerivMode mode, double residual_tol,
                     Exec exec) {
  const PatchDerivs d = patch_derivs(p, mode, exec);
  const GridSpec& g = p.grid;
  const int nn = g.nodes();

  GaugeData gd;
  gd.f.assign(nn, 0.0);
  gd.f_prime.assign(nn, 0.0);
  std::vector<double> res(nn, 0.0);
  parallel_for(exec, g.Ns, [&](int i) {
    for (int j = 0; j < g.Nt; ++j) {
      const int n = g.at(i, j);
      const Vec8 &f1 = p.phi1[n], &f2 = p.phi2[n];
      // Rotation rate along t, from the t-evolution of phi1.
      const Vec8 e_t = sub(d.dphi1_dt[n], transport(p.ambient_dim, f1, f2,
                                                    d.dphi1_ds[n]));
      gd.f[n] = dot(e_t, f2);
      // Rotation rate along s, from the s-equation (the transport applied
      // to the t-derivative, with the opposite sign).
      const Vec8 e_s = add(d.dphi1_ds[n], transport(p.ambient_dim, f1, f2,
                                                    d.dphi1_dt[n]));
      gd.f_prime[n] = dot(e_s, f2);
      // The rates are defined only modulo these equations holding; measure
      // how far the data is from satisfying them (phi2 equation included).
      const Vec8 e2_t = sub(d.dphi2_dt[n], transport(p.ambient_dim, f1, f2,
                                                     d.dphi2_ds[n]));
      double r = norm(axpy(e_t, -gd.f[n], f2));
      r = std::max(r, norm(axpy(e_s, -gd.f_prime[n], f2)));
      r = std::max(r, norm(axpy(e2_t, gd.f[n], f1)));
      res[n] = r;
    }
  });
  for (double r : res)
    gd.max_evolution_residual = std::max(gd.max_evolution_residual, r);
  if (gd.max_evolution_residual > residual_tol)
    throw std::runtime_error(
        "gauge_data: the frame field does not satisfy the evolution "
        "equations (max orthogonal residual " +
        std::to_string(gd.max_evolution_residual) +
        " exceeds tolerance); rotation rates are undefined");

  const std::vector<double> dfp_dt = scalar_grid_deriv(gd.f_prime, g, 1);
  const std::vector<double> df_ds = scalar_grid_deriv(gd.f, g, 0);
  gd.curvature.assign(nn, 0.0);
  for (int n = 0; n < nn; ++n) gd.curvature[n] = dfp_dt[n] - df_ds[n];
  return gd;
}

RuledPatch gauge_rotate(const RuledPatch& p, const std::vector<double>& theta,
                        const std::vector<double>* theta_s,
                        const std::vector<double>* theta_t) {
  const int nn = p.grid.nodes();
  if (static_cast<int>(theta.size()) != nn)
    throw std::invalid_argument("gauge_rotate: theta grid size mismatch");
  if ((theta_s && static_cast<int>(theta_s->size()) != nn) ||
      (theta_t && static_cast<int>(theta_t->size()) != nn))
    throw std::invalid_argument(
        "gauge_rotate: theta derivative grid size mismatch");

  RuledPatch out = p;
  for (int n = 0; n < nn; ++n) {
    const double c = std::cos(theta[n]), s = std::sin(theta[n]);
    const Vec8 f1 = p.phi1[n], f2 = p.phi2[n];
    out.phi1[n] = add(scale(f1, c), scale(f2, s));
    out.phi2[n] = add(scale(f1, -s), scale(f2, c));
  }

  const bool keep_analytic =
      p.has_analytic_derivatives() && theta_s != nullptr && theta_t != nullptr;
  if (keep_analytic) {
    Field d1s(nn), d1t(nn), d2s(nn), d2t(nn);
    for (int n = 0; n < nn; ++n) {
      const double c = std::cos(theta[n]), s = std::sin(theta[n]);
      auto rot_d = [&](const Vec8& df1, const Vec8& df2, double dth, int which) {
        // d(new phi1) = c df1 + s df2 + dth * new_phi2
        // d(new phi2) = -s df1 + c df2 - dth * new_phi1
        if (which == 1)
          return axpy(add(scale(df1, c), scale(df2, s)), dth, out.phi2[n]);
        return axpy(add(scale(df1, -s), scale(df2, c)), -dth, out.phi1[n]);
      };
      d1s[n] = rot_d((*p.dphi1_ds)[n], (*p.dphi2_ds)[n], (*theta_s)[n], 1);
      d1t[n] = rot_d((*p.dphi1_dt)[n], (*p.dphi2_dt)[n], (*theta_t)[n], 1);
      d2s[n] = rot_d((*p.dphi1_ds)[n], (*p.dphi2_ds)[n], (*theta_s)[n], 2);
      d2t[n] = rot_d((*p.dphi1_dt)[n], (*p.dphi2_dt)[n], (*theta_t)[n], 2);
    }
    out.dphi1_ds = std::move(d1s);
    out.dphi1_dt = std::move(d1t);
    out.dphi2_ds = std::move(d2s);
    out.dphi2_dt = std::move(d2t);
    // dpsi grids carry over unchanged (psi is untouched).
  } else {
    out.dphi1_ds.reset();
    out.dphi1_dt.reset();
    out.dphi2_ds.reset();
    out.dphi2_dt.reset();
    out.dpsi_ds.reset();
    out.dpsi_dt.reset();
  }
  // Second derivatives of the rotated frame would need second derivatives
  // of theta; drop them.
  out.d2phi1_dss.reset();
  out.d2phi1_dst.reset();
  out.d2phi1_dtt.reset();
  out.d2phi2_dss.reset();
  out.d2phi2_dst.reset();
  out.d2phi2_dtt.reset();
  return out;
}

std::vector<double> flat_gauge_theta(const GaugeData& gd, const GridSpec& g,
                                     double curvature_tol) {
  double max_curv = 0.0;
  for (double c : gd.curvature) max_curv = std::max(max_curv, std::fabs(c));
  if (max_curv >= curvature_tol)
    throw std::runtime_error(
        "flat_gauge_theta: connection curvature " + std::to_string(max_curv) +
        " is not below tolerance; no flattening angle exists");

  auto cumulative = [](const std::vector<double>& f, double h, bool periodic) {
    return periodic ? cumulative_spectral(f, h) : cumulative_gregory(f, h);
  };

  // theta(s, 0) integrates -f' along the first row; theta(s, t) continues
  // with -f along t.  Path independence is the flatness just checked.
  std::vector<double> theta(g.nodes(), 0.0);
  std::vector<double> row(g.Ns);
  for (int i = 0; i < g.Ns; ++i) row[i] = -gd.f_prime[g.at(i, 0)];
  const std::vector<double> theta_s0 = cumulative(row, g.hs, g.periodic_s);
  std::vector<double> col(g.Nt);
  for (int i = 0; i < g.Ns; ++i) {
    for (int j = 0; j < g.Nt; ++j) col[j] = -gd.f[g.at(i, j)];
    const std::vector<double> along_t = cumulative(col, g.ht, g.periodic_t);
    for (int j = 0; j < g.Nt; ++j)
      theta[g.at(i, j)] = theta_s0[i] + along_t[j];
  }
  return theta;
}

FlatGaugeResult flat_gauge_solve(const RuledPatch& p, DerivMode mode,
                                 double curvature_tol, Exec exec) {
  const GaugeData gd = gauge_data(p, mode, 1e-4, exec);
  FlatGaugeResult out;
  out.theta = flat_gauge_theta(gd, p.grid, curvature_tol);

  // The flattening angle has known derivatives by construction, so the
  // rotation can keep analytic grids when the input has them.
  std::vector<double> th_s(gd.f_prime.size()), th_t(gd.f.size());
  for (size_t n = 0; n < th_s.size(); ++n) {
    th_s[n] = -gd.f_prime[n];
    th_t[n] = -gd.f[n];
  }
  out.patch = gauge_rotate(p, out.theta, &th_s, &th_t);

  const DerivMode remeasure =
      out.patch.has_analytic_derivatives() ? mode : DerivMode::stencil;
  const GaugeData after = gauge_data(out.patch, remeasure, 1e-4, exec);
  for (size_t n = 0; n < after.f.size(); ++n) {
    out.max_f_after = std::max(out.max_f_after, std::fabs(after.f[n]));
    out.max_f_prime_after =
        std::max(out.max_f_prime_after, std::fabs(after.f_prime[n]));
  }
  return out;
}

}  // namespace ruled4
