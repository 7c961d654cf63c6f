#include "ruled4/patch.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ruled4/numerics.hpp"
#include "ruled4/octonion.hpp"

namespace ruled4 {

namespace {

void require_grid(const RuledPatch& p) {
  const GridSpec& g = p.grid;
  if (g.Ns < 1 || g.Nt < 1)
    throw std::invalid_argument("patch: empty grid");
  const size_t n = static_cast<size_t>(g.nodes());
  if (p.phi1.size() != n || p.phi2.size() != n || p.psi.size() != n)
    throw std::invalid_argument("patch: field size does not match grid");
  if (p.ambient_dim != 7 && p.ambient_dim != 8)
    throw std::invalid_argument("patch: ambient dimension must be 7 or 8");
}

// Differentiates one field along one grid direction with the fourth-order
// stencils.  dir = 0 differentiates in s (outer index), dir = 1 in t.
Field stencil_derivative(const Field& f, const GridSpec& g, int dir,
                         Exec exec) {
  const int n_dir = dir == 0 ? g.Ns : g.Nt;
  const bool periodic = dir == 0 ? g.periodic_s : g.periodic_t;
  const double h = dir == 0 ? g.hs : g.ht;
  std::vector<Stencil5> stencils(n_dir);
  for (int i = 0; i < n_dir; ++i)
    stencils[i] = deriv4_stencil(n_dir, i, h, periodic);

  Field out(f.size(), zero_vec());
  parallel_for(exec, g.Ns, [&](int i) {
    for (int j = 0; j < g.Nt; ++j) {
      const Stencil5& st = stencils[dir == 0 ? i : j];
      Vec8 acc = zero_vec();
      for (int k = 0; k < 5; ++k) {
        const int node =
            dir == 0 ? g.at(st.idx[k], j) : g.at(i, st.idx[k]);
        acc = axpy(acc, st.w[k], f[node]);
      }
      out[g.at(i, j)] = acc;
    }
  });
  return out;
}

}  // namespace

PatchDerivs patch_derivs(const RuledPatch& p, DerivMode mode, Exec exec) {
  require_grid(p);
  if (mode == DerivMode::analytic) {
    if (!p.has_analytic_derivatives())
      throw std::invalid_argument(
          "patch_derivs: analytic mode requested but the patch carries no "
          "analytic derivative grids");
    return PatchDerivs{*p.dphi1_ds, *p.dphi1_dt, *p.dphi2_ds,
                       *p.dphi2_dt, *p.dpsi_ds,  *p.dpsi_dt};
  }
  PatchDerivs d;
  d.dphi1_ds = stencil_derivative(p.phi1, p.grid, 0, exec);
  d.dphi1_dt = stencil_derivative(p.phi1, p.grid, 1, exec);
  d.dphi2_ds = stencil_derivative(p.phi2, p.grid, 0, exec);
  d.dphi2_dt = stencil_derivative(p.phi2, p.grid, 1, exec);
  d.dpsi_ds = stencil_derivative(p.psi, p.grid, 0, exec);
  d.dpsi_dt = stencil_derivative(p.psi, p.grid, 1, exec);
  return d;
}

double stencil_error_scale(const GridSpec& g, double scale) {
  const double h = std::max(g.hs, g.Nt > 1 ? g.ht : 0.0);
  return scale * h * h * h * h;
}

void check_invariants(const RuledPatch& p, double tol) {
  require_grid(p);
  const GridSpec& g = p.grid;
  for (int i = 0; i < g.Ns; ++i) {
    for (int j = 0; j < g.Nt; ++j) {
      const int n = g.at(i, j);
      const double n1 = norm(p.phi1[n]);
      const double n2 = norm(p.phi2[n]);
      const double ip = dot(p.phi1[n], p.phi2[n]);
      auto fail = [&](const std::string& what, double value) {
        throw std::invalid_argument("patch invariant violated at node (" +
                                    std::to_string(i) + ", " +
                                    std::to_string(j) + "): " + what +
                                    " = " + std::to_string(value));
      };
      if (std::fabs(n1 - 1.0) > tol) fail("| |phi1| - 1 |", n1 - 1.0);
      if (std::fabs(n2 - 1.0) > tol) fail("| |phi2| - 1 |", n2 - 1.0);
      if (std::fabs(ip) > tol) fail("g(phi1, phi2)", ip);
      if (p.ambient_dim == 7) {
        if (std::fabs(p.phi1[n][7]) > tol || std::fabs(p.phi2[n][7]) > tol ||
            std::fabs(p.psi[n][7]) > tol)
          fail("slot 7 occupancy for 7-dimensional data",
               std::max({std::fabs(p.phi1[n][7]), std::fabs(p.phi2[n][7]),
                         std::fabs(p.psi[n][7])}));
      }
    }
  }
}

Vec8 perp_project(const Vec8& v, const Vec8& phi1, const Vec8& phi2) {
  Vec8 r = axpy(v, -dot(v, phi1), phi1);
  return axpy(r, -dot(r, phi2), phi2);
}

RuledPatch canonicalize(const RuledPatch& p) {
  require_grid(p);
  RuledPatch out = p;
  const int n = p.grid.nodes();
  for (int k = 0; k < n; ++k)
    out.psi[k] = perp_project(p.psi[k], p.phi1[k], p.phi2[k]);

  if (p.has_analytic_derivatives()) {
    // psi~ = psi - a phi1 - b phi2 with a = g(psi, phi1), b = g(psi, phi2);
    // differentiate the projection alongside the field.
    Field dps(n), dpt(n);
    for (int k = 0; k < n; ++k) {
      const Vec8 &f1 = p.phi1[k], &f2 = p.phi2[k], &ps = p.psi[k];
      const double a = dot(ps, f1), b = dot(ps, f2);
      auto d_proj = [&](const Vec8& dpsi, const Vec8& df1, const Vec8& df2) {
        const double da = dot(dpsi, f1) + dot(ps, df1);
        const double db = dot(dpsi, f2) + dot(ps, df2);
        Vec8 r = dpsi;
        r = axpy(r, -da, f1);
        r = axpy(r, -a, df1);
        r = axpy(r, -db, f2);
        r = axpy(r, -b, df2);
        return r;
      };
      dps[k] = d_proj((*p.dpsi_ds)[k], (*p.dphi1_ds)[k], (*p.dphi2_ds)[k]);
      dpt[k] = d_proj((*p.dpsi_dt)[k], (*p.dphi1_dt)[k], (*p.dphi2_dt)[k]);
    }
    out.dpsi_ds = std::move(dps);
    out.dpsi_dt = std::move(dpt);
  } else {
    out.dpsi_ds.reset();
    out.dpsi_dt.reset();
  }
  return out;
}

RuledPatch asymptotic_cone(const RuledPatch& p) {
  require_grid(p);
  RuledPatch out = p;
  const size_t n = out.psi.size();
  out.psi.assign(n, zero_vec());
  if (out.dpsi_ds) out.dpsi_ds->assign(n, zero_vec());
  if (out.dpsi_dt) out.dpsi_dt->assign(n, zero_vec());
  return out;
}

bool non_immersion_node(const Vec8& dphi1_ds_perp, const Vec8& dphi2_ds_perp,
                        double tol) {
  return norm(dphi1_ds_perp) < tol && norm(dphi2_ds_perp) < tol;
}

namespace {

// Transport operator: the triple product with the frame, in the dimension
// the patch lives in.
Vec8 transport(int ambient_dim, const Vec8& f1, const Vec8& f2,
               const Vec8& v) {
  return ambient_dim == 8 ? triple_cross(f1, f2, v)
                          : triple_cross_r7(f1, f2, v);
}

}  // namespace

int vsigma_dim(const RuledPatch& p, int i, int j, DerivMode mode,
               double rel_tol) {
  require_grid(p);
  const GridSpec& g = p.grid;
  Vec8 d1, d2;
  if (mode == DerivMode::analytic) {
    if (!p.dphi1_ds || !p.dphi2_ds)
      throw std::invalid_argument("vsigma_dim: no analytic derivative grids");
    d1 = (*p.dphi1_ds)[g.at(i, j)];
    d2 = (*p.dphi2_ds)[g.at(i, j)];
  } else {
    const Stencil5 st = deriv4_stencil(g.Ns, i, g.hs, g.periodic_s);
    d1 = zero_vec();
    d2 = zero_vec();
    for (int k = 0; k < 5; ++k) {
      d1 = axpy(d1, st.w[k], p.phi1[g.at(st.idx[k], j)]);
      d2 = axpy(d2, st.w[k], p.phi2[g.at(st.idx[k], j)]);
    }
  }
  const int n = g.at(i, j);
  const Vec8& f1 = p.phi1[n];
  const Vec8& f2 = p.phi2[n];
  const Vec8 a1 = perp_project(d1, f1, f2);
  const Vec8 a2 = perp_project(d2, f1, f2);
  const Vec8 b1 = transport(p.ambient_dim, f1, f2, a1);
  const Vec8 b2 = transport(p.ambient_dim, f1, f2, a2);

  Eigen::MatrixXd m(8, 4);
  for (int r = 0; r < 8; ++r) {
    m(r, 0) = a1[r];
    m(r, 1) = a2[r];
    m(r, 2) = b1[r];
    m(r, 3) = b2[r];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double s_max = sv(0);
  if (s_max < 1e-14)
    throw std::runtime_error(
        "vsigma_dim: projected derivative span has rank 0 (node is not an "
        "immersion point)");
  int rank = 0;
  bool ambiguous = false;
  for (int k = 0; k < sv.size(); ++k) {
    const double ratio = sv(k) / s_max;
    if (ratio > rel_tol) ++rank;
    if (ratio > rel_tol * 0.1 && ratio < rel_tol * 10.0) ambiguous = true;
  }
  if (ambiguous)
    throw std::runtime_error(
        "vsigma_dim: singular value within a decade of the rank threshold; "
        "dimension is ambiguous at this node");
  if (rank != 2 && rank != 4)
    throw std::runtime_error("vsigma_dim: unexpected rank " +
                             std::to_string(rank) +
                             " (the span must be J-invariant)");
  return rank;
}

MetricFit metric_extract(const RuledPatch& p, int i, int j, DerivMode mode) {
  require_grid(p);
  const GridSpec& g = p.grid;
  Vec8 ds, dt;
  if (mode == DerivMode::analytic) {
    if (!p.dphi1_ds || !p.dphi1_dt)
      throw std::invalid_argument(
          "metric_extract: no analytic derivative grids");
    ds = (*p.dphi1_ds)[g.at(i, j)];
    dt = (*p.dphi1_dt)[g.at(i, j)];
  } else {
    const Stencil5 ss = deriv4_stencil(g.Ns, i, g.hs, g.periodic_s);
    const Stencil5 stt = deriv4_stencil(g.Nt, j, g.ht, g.periodic_t);
    ds = zero_vec();
    dt = zero_vec();
    for (int k = 0; k < 5; ++k) {
      ds = axpy(ds, ss.w[k], p.phi1[g.at(ss.idx[k], j)]);
      dt = axpy(dt, stt.w[k], p.phi1[g.at(i, stt.idx[k])]);
    }
  }
  const int n = g.at(i, j);
  const Vec8& f1 = p.phi1[n];
  const Vec8& f2 = p.phi2[n];
  const Vec8 a = perp_project(ds, f1, f2);
  const Vec8 v = perp_project(dt, f1, f2);
  if (norm(a) < 1e-10)
    throw std::runtime_error(
        "metric_extract: projected s-derivative vanishes at this node");
  const Vec8 ja = transport(p.ambient_dim, f1, f2, a);

  // 2x2 normal equations for v = A a + B ja.
  const double gaa = dot(a, a), gjj = dot(ja, ja), gaj = dot(a, ja);
  const double ra = dot(v, a), rj = dot(v, ja);
  const double det = gaa * gjj - gaj * gaj;
  if (std::fabs(det) < 1e-20)
    throw std::runtime_error("metric_extract: degenerate fit basis");
  MetricFit fit;
  fit.A = (gjj * ra - gaj * rj) / det;
  fit.B = (gaa * rj - gaj * ra) / det;
  Vec8 res = axpy(v, -fit.A, a);
  res = axpy(res, -fit.B, ja);
  fit.residual = norm(res);
  return fit;
}

ResidualReport conformal_check(const RuledPatch& p, DerivMode mode,
                               Exec exec) {
  require_grid(p);
  const GridSpec& g = p.grid;
  const PatchDerivs d = patch_derivs(p, mode, exec);
  const int nn = g.nodes();

  // Per-node values for the four diagnostics, then a serial reduction so
  // both execution policies agree bitwise.
  std::vector<std::array<double, 4>> vals(nn);
  std::vector<char> skip(nn, 0);
  parallel_for(exec, g.Ns, [&](int i) {
    for (int j = 0; j < g.Nt; ++j) {
      const int n = g.at(i, j);
      const Vec8 &f1 = p.phi1[n], &f2 = p.phi2[n];
      const Vec8 a1 = perp_project(d.dphi1_ds[n], f1, f2);
      const Vec8 a2 = perp_project(d.dphi2_ds[n], f1, f2);
      const Vec8 b1 = perp_project(d.dphi1_dt[n], f1, f2);
      const Vec8 b2 = perp_project(d.dphi2_dt[n], f1, f2);
      skip[n] = non_immersion_node(a1, a2) ? 1 : 0;
      vals[n] = {std::fabs(norm(b1) - norm(a1)),
                 std::fabs(norm(b2) - norm(a2)), std::fabs(dot(a1, b1)),
                 std::fabs(dot(a2, b2))};
    }
  });

  ResidualReport rep;
  const char* names[4] = {"norm_match_phi1", "norm_match_phi2", "ortho_phi1",
                          "ortho_phi2"};
  for (int e = 0; e < 4; ++e) {
    EquationStats st;
    st.name = names[e];
    double sum = 0.0;
    int counted = 0;
    for (int i = 0; i < g.Ns; ++i) {
      for (int j = 0; j < g.Nt; ++j) {
        const int n = g.at(i, j);
        if (skip[n]) continue;
        ++counted;
        sum += vals[n][e];
        if (vals[n][e] > st.max_norm) {
          st.max_norm = vals[n][e];
          st.argmax_i = i;
          st.argmax_j = j;
        }
      }
    }
    st.mean_norm = counted ? sum / counted : 0.0;
    rep.equations.push_back(st);
  }
  int skipped = 0;
  for (char s : skip) skipped += s;
  rep.non_immersion_count = skipped;
  return rep;
}

}  // namespace ruled4
