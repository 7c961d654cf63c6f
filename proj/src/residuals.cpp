// The four residual systems that decide whether sampled framed-surface data
// generates a calibrated 4-fold: the quadratic alternating-product system,
// the first-order evolution system, and the special-Lagrangian and
// coassociative refinements.
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ruled4/octonion.hpp"
#include "ruled4/patch.hpp"

namespace ruled4 {

namespace {

// Inclusion of 7-dimensional data (slots 0..6 hold x1..x7) into R^8 as the
// hyperplane x1 = 0.
Vec8 lift7(const Vec8& v) {
  Vec8 r = zero_vec();
  for (int k = 0; k < 7; ++k) r[k + 1] = v[k];
  return r;
}

// Kaehler pairing on C^4 = R^8 with z_j = x_{2j-1} + i x_{2j}.
double omega_pair(const Vec8& x, const Vec8& y) {
  double acc = 0.0;
  for (int j = 0; j < 4; ++j)
    acc += x[2 * j] * y[2 * j + 1] - x[2 * j + 1] * y[2 * j];
  return acc;
}

struct NodeSweep {
  std::vector<std::vector<double>> vals;  // [node][equation]
  std::vector<char> skip;
};

ResidualReport reduce_report(const GridSpec& g,
                             const std::vector<const char*>& names,
                             const NodeSweep& sweep) {
  ResidualReport rep;
  const int ne = static_cast<int>(names.size());
  for (int e = 0; e < ne; ++e) {
    EquationStats st;
    st.name = names[e];
    double sum = 0.0;
    int counted = 0;
    for (int i = 0; i < g.Ns; ++i) {
      for (int j = 0; j < g.Nt; ++j) {
        const int n = g.at(i, j);
        if (sweep.skip[n]) continue;
        ++counted;
        const double v = sweep.vals[n][e];
        sum += v;
        if (v > st.max_norm) {
          st.max_norm = v;
          st.argmax_i = i;
          st.argmax_j = j;
        }
      }
    }
    st.mean_norm = counted ? sum / counted : 0.0;
    rep.equations.push_back(st);
  }
  int skipped = 0;
  for (char s : sweep.skip) skipped += s;
  rep.non_immersion_count = skipped;
  return rep;
}

char immersion_skip(const Vec8& f1, const Vec8& f2, const Vec8& d1s,
                    const Vec8& d2s) {
  return non_immersion_node(perp_project(d1s, f1, f2),
                            perp_project(d2s, f1, f2))
             ? 1
             : 0;
}

}  // namespace

ResidualReport residuals_quadratic(const RuledPatch& p, DerivMode mode,
                                   Exec exec) {
  const PatchDerivs d = patch_derivs(p, mode, exec);
  const GridSpec& g = p.grid;
  const bool seven = p.ambient_dim == 7;

  NodeSweep sweep;
  sweep.vals.assign(g.nodes(), std::vector<double>(6, 0.0));
  sweep.skip.assign(g.nodes(), 0);
  parallel_for(exec, g.Ns, [&](int i) {
    for (int j = 0; j < g.Nt; ++j) {
      const int n = g.at(i, j);
      Vec8 f1 = p.phi1[n], f2 = p.phi2[n];
      Vec8 d1s = d.dphi1_ds[n], d1t = d.dphi1_dt[n];
      Vec8 d2s = d.dphi2_ds[n], d2t = d.dphi2_dt[n];
      Vec8 dps = d.dpsi_ds[n], dpt = d.dpsi_dt[n];
      sweep.skip[n] = immersion_skip(f1, f2, d1s, d2s);
      if (seven) {
        f1 = lift7(f1);
        f2 = lift7(f2);
        d1s = lift7(d1s);
        d1t = lift7(d1t);
        d2s = lift7(d2s);
        d2t = lift7(d2t);
        dps = lift7(dps);
        dpt = lift7(dpt);
      }
      auto r = [&](const Vec8& a, const Vec8& b) {
        return norm(im_part(fourfold_cross(f1, f2, a, b)));
      };
      auto r_sym = [&](const Vec8& a, const Vec8& b, const Vec8& c,
                       const Vec8& e) {
        const Vec8 u = fourfold_cross(f1, f2, a, b);
        const Vec8 v = fourfold_cross(f1, f2, c, e);
        return norm(im_part(add(u, v)));
      };
      sweep.vals[n] = {r(d1s, d1t),
                       r(d2s, d2t),
                       r_sym(d1s, d2t, d2s, d1t),
                       r(dps, dpt),
                       r_sym(d1s, dpt, dps, d1t),
                       r_sym(d2s, dpt, dps, d2t)};
    }
  });
  return reduce_report(
      g,
      {"phi1_phi1", "phi2_phi2", "phi1_phi2", "psi_psi", "phi1_psi",
       "phi2_psi"},
      sweep);
}

EvolutionResiduals residuals_evolution(const RuledPatch& p, DerivMode mode,
                                       Exec exec) {
  const PatchDerivs d = patch_derivs(p, mode, exec);
  const GridSpec& g = p.grid;
  const bool seven = p.ambient_dim == 7;
  auto T = [&](const Vec8& a, const Vec8& b, const Vec8& v) {
    return seven ? triple_cross_r7(a, b, v) : triple_cross(a, b, v);
  };

  EvolutionResiduals out;
  out.f.assign(g.nodes(), 0.0);
  out.g1.assign(g.nodes(), 0.0);
  out.g2.assign(g.nodes(), 0.0);
  NodeSweep sweep;
  sweep.vals.assign(g.nodes(), std::vector<double>(4, 0.0));
  sweep.skip.assign(g.nodes(), 0);
  parallel_for(exec, g.Ns, [&](int i) {
    for (int j = 0; j < g.Nt; ++j) {
      const int n = g.at(i, j);
      const Vec8 &f1 = p.phi1[n], &f2 = p.phi2[n];
      sweep.skip[n] = immersion_skip(f1, f2, d.dphi1_ds[n], d.dphi2_ds[n]);

      const Vec8 e1 = sub(d.dphi1_dt[n], T(f1, f2, d.dphi1_ds[n]));
      const double f32 = dot(e1, f2);
      const Vec8 e2 = sub(d.dphi2_dt[n], T(f1, f2, d.dphi2_ds[n]));
      const double f33 = dot(e2, f1);
      const Vec8 e3 = sub(d.dpsi_dt[n], T(f1, f2, d.dpsi_ds[n]));
      const double c1 = dot(e3, f1), c2 = dot(e3, f2);

      out.f[n] = f32;
      out.g1[n] = c1;
      out.g2[n] = c2;
      Vec8 r3 = axpy(e3, -c1, f1);
      r3 = axpy(r3, -c2, f2);
      sweep.vals[n] = {norm(axpy(e1, -f32, f2)), norm(axpy(e2, -f33, f1)),
                       norm(r3), std::fabs(f33 + f32)};
    }
  });
  out.report = reduce_report(
      g, {"ruling_dir1", "ruling_dir2", "offset", "gauge_consistency"},
      sweep);
  return out;
}

ResidualReport residuals_sl(const RuledPatch& p, DerivMode mode, Exec exec) {
  if (p.ambient_dim != 8)
    throw std::invalid_argument(
        "residuals_sl: requires 8-dimensional ambient data (C^4)");
  const PatchDerivs d = patch_derivs(p, mode, exec);
  const GridSpec& g = p.grid;

  NodeSweep sweep;
  sweep.vals.assign(g.nodes(), std::vector<double>(11, 0.0));
  sweep.skip.assign(g.nodes(), 0);
  parallel_for(exec, g.Ns, [&](int i) {
    for (int j = 0; j < g.Nt; ++j) {
      const int n = g.at(i, j);
      const Vec8 &f1 = p.phi1[n], &f2 = p.phi2[n];
      const Vec8 &d1s = d.dphi1_ds[n], &d1t = d.dphi1_dt[n];
      const Vec8 &d2s = d.dphi2_ds[n], &d2t = d.dphi2_dt[n];
      const Vec8 &dps = d.dpsi_ds[n], &dpt = d.dpsi_dt[n];
      sweep.skip[n] = immersion_skip(f1, f2, d1s, d2s);

      const double w_ruling = std::fabs(omega_pair(f1, f2));
      const double w_phi_ds =
          std::max({std::fabs(omega_pair(f1, d1s)), std::fabs(omega_pair(f1, d2s)),
                    std::fabs(omega_pair(f2, d1s)), std::fabs(omega_pair(f2, d2s))});
      const double w_psi_ds =
          std::max(std::fabs(omega_pair(f1, dps)), std::fabs(omega_pair(f2, dps)));

      const Vec8 e1 = sub(d1t, triple_cross_sl(f1, f2, d1s));
      const double f32 = dot(e1, f2);
      const Vec8 e2 = sub(d2t, triple_cross_sl(f1, f2, d2s));
      const double f33 = dot(e2, f1);
      const Vec8 e3 = sub(dpt, triple_cross_sl(f1, f2, dps));
      const double c1 = dot(e3, f1), c2 = dot(e3, f2);
      Vec8 r3 = axpy(e3, -c1, f1);
      r3 = axpy(r3, -c2, f2);

      const double w_phi_dt =
          std::max({std::fabs(omega_pair(f1, d1t)), std::fabs(omega_pair(f1, d2t)),
                    std::fabs(omega_pair(f2, d1t)), std::fabs(omega_pair(f2, d2t))});
      const double w_psi_dt =
          std::max(std::fabs(omega_pair(f1, dpt)), std::fabs(omega_pair(f2, dpt)));
      const double w_diag = std::max({std::fabs(omega_pair(d1s, d1t)),
                                      std::fabs(omega_pair(d2s, d2t)),
                                      std::fabs(omega_pair(dps, dpt))});
      const double w_cross =
          std::fabs(omega_pair(d1s, d2t) + omega_pair(d2s, d1t));
      const double w_psi_cross =
          std::max(std::fabs(omega_pair(d1s, dpt) + omega_pair(dps, d1t)),
                   std::fabs(omega_pair(d2s, dpt) + omega_pair(dps, d2t)));

      sweep.vals[n] = {w_ruling,
                       w_phi_ds,
                       w_psi_ds,
                       norm(axpy(e1, -f32, f2)),
                       norm(axpy(e2, -f33, f1)),
                       norm(r3),
                       w_phi_dt,
                       w_psi_dt,
                       w_diag,
                       w_cross,
                       w_psi_cross};
    }
  });
  return reduce_report(g,
                       {"omega_ruling", "omega_phi_ds", "omega_psi_ds",
                        "ruling_dir1", "ruling_dir2", "offset", "omega_phi_dt",
                        "omega_psi_dt", "omega_ds_dt_diag", "omega_ds_dt_cross",
                        "omega_ds_dt_psi"},
                       sweep);
}

ResidualReport residuals_coass(const RuledPatch& p, DerivMode mode,
                               Exec exec) {
  if (p.ambient_dim != 7)
    throw std::invalid_argument(
        "residuals_coass: requires 7-dimensional ambient data");
  const PatchDerivs d = patch_derivs(p, mode, exec);
  const GridSpec& g = p.grid;

  NodeSweep sweep;
  sweep.vals.assign(g.nodes(), std::vector<double>(5, 0.0));
  sweep.skip.assign(g.nodes(), 0);
  parallel_for(exec, g.Ns, [&](int i) {
    for (int j = 0; j < g.Nt; ++j) {
      const int n = g.at(i, j);
      const Vec8 &f1 = p.phi1[n], &f2 = p.phi2[n];
      const Vec8 &d1s = d.dphi1_ds[n], &d2s = d.dphi2_ds[n];
      const Vec8 &dps = d.dpsi_ds[n];
      sweep.skip[n] = immersion_skip(f1, f2, d1s, d2s);

      const double c_dphi = std::max(std::fabs(phi7_eval(f1, f2, d1s)),
                                     std::fabs(phi7_eval(f1, f2, d2s)));
      const double c_dpsi = std::fabs(phi7_eval(f1, f2, dps));

      const Vec8 e1 = sub(d.dphi1_dt[n], triple_cross_r7(f1, f2, d1s));
      const double f32 = dot(e1, f2);
      const Vec8 e2 = sub(d.dphi2_dt[n], triple_cross_r7(f1, f2, d2s));
      const double f33 = dot(e2, f1);
      const Vec8 e3 = sub(d.dpsi_dt[n], triple_cross_r7(f1, f2, dps));
      const double c1 = dot(e3, f1), c2 = dot(e3, f2);
      Vec8 r3 = axpy(e3, -c1, f1);
      r3 = axpy(r3, -c2, f2);

      sweep.vals[n] = {c_dphi, c_dpsi, norm(axpy(e1, -f32, f2)),
                       norm(axpy(e2, -f33, f1)), norm(r3)};
    }
  });
  return reduce_report(g,
                       {"phi3_ruling_dphi", "phi3_ruling_dpsi", "ruling_dir1",
                        "ruling_dir2", "offset"},
                       sweep);
}

}  // namespace ruled4
