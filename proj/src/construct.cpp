#include "ruled4/construct.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ruled4/gauge.hpp"

namespace ruled4 {

namespace {

using cx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;
constexpr cx kI{0.0, 1.0};

Vec8 pack4(const std::array<cx, 4>& z, double scale = 1.0) {
  Vec8 v = zero_vec();
  for (int j = 0; j < 4; ++j) {
    v[2 * j] = scale * z[j].real();
    v[2 * j + 1] = scale * z[j].imag();
  }
  return v;
}

std::array<cx, 4> unpack4(const Vec8& v) {
  return {cx{v[0], v[1]}, cx{v[2], v[3]}, cx{v[4], v[5]}, cx{v[6], v[7]}};
}

// Slot phase pattern for family k: integer rates of the slot phases in s and
// t.  Exactly one of rs[j], rt[j] is nonzero per slot.
struct SlotSpec {
  std::array<cx, 4> c;    // constant slot factors (unit modulus)
  std::array<int, 4> rs;  // phase rate in s
  std::array<int, 4> rt;  // phase rate in t
};

SlotSpec family_spec(int k) {
  SlotSpec sp;
  sp.c = {kI, cx{1.0, 0.0}, cx{1.0, 0.0}, cx{1.0, 0.0}};
  switch (k) {
    case 1:
      sp.rs = {1, -1, 0, 0};
      sp.rt = {0, 0, 1, -1};
      break;
    case 2:
      // The t-direction runs opposite to the naive slot order: with
      // rt = (0, -1, 1, 0) the frame satisfies the evolution equations
      // with the wrong orientation (the triple product returns the exact
      // negative of dphi1/dt).
      sp.rs = {1, 0, 0, -1};
      sp.rt = {0, 1, -1, 0};
      break;
    case 3:
      sp.rs = {1, 0, -1, 0};
      sp.rt = {0, -1, 0, 1};
      break;
    default:
      throw std::invalid_argument(
          "family index must be 1, 2, or 3 (got " + std::to_string(k) + ")");
  }
  return sp;
}

// Shared kernel for the doubly periodic families and their asymptotic
// cones: slot j carries u_j = c_j e^{i(rs_j s + rt_j t)}, the frame is
// phi1 = u/2, phi2 = i sigma u / 2 with sigma_j = +1 on s-slots and -1 on
// t-slots, and the offset is psi_j = u_j o_j / 2 where o_j couples the
// holomorphic field w into the slot: o_j = rs_j i conj(w) on s-slots and
// o_j = rt_j w on t-slots.
RuledPatch fill_family(const SlotSpec& sp, const HoloField& w,
                       const GridSpec& grid) {
  RuledPatch p;
  p.ambient_dim = 8;
  p.grid = grid;
  const int n = grid.nodes();
  p.phi1.resize(n);
  p.phi2.resize(n);
  p.psi.resize(n);
  Field d1s(n), d1t(n), d2s(n), d2t(n), dps(n), dpt(n);
  Field s11(n), s12(n), s13(n), s21(n), s22(n), s23(n);

  std::array<double, 4> sigma;
  for (int j = 0; j < 4; ++j) sigma[j] = sp.rs[j] != 0 ? 1.0 : -1.0;

  for (int i = 0; i < grid.Ns; ++i) {
    const double s = grid.s(i);
    for (int jj = 0; jj < grid.Nt; ++jj) {
      const double t = grid.t(jj);
      const HoloField::Jet jet = w.eval(cx{s, t});
      std::array<cx, 4> u, f1, f2, ps, du_s, du_t, o, do_s, do_t;
      std::array<cx, 4> dps_s, dps_t, c1ss, c1st, c1tt, c2ss, c2st, c2tt;
      for (int j = 0; j < 4; ++j) {
        const double rs = sp.rs[j], rt = sp.rt[j];
        u[j] = sp.c[j] * std::exp(kI * (rs * s + rt * t));
        f1[j] = u[j];
        f2[j] = kI * sigma[j] * u[j];
        du_s[j] = kI * rs * u[j];
        du_t[j] = kI * rt * u[j];
        if (sp.rs[j] != 0) {
          o[j] = rs * kI * std::conj(jet.w);
          do_s[j] = rs * kI * std::conj(jet.dw);
          do_t[j] = rs * std::conj(jet.dw);
        } else {
          o[j] = rt * jet.w;
          do_s[j] = rt * jet.dw;
          do_t[j] = rt * kI * jet.dw;
        }
        ps[j] = u[j] * o[j];
        dps_s[j] = du_s[j] * o[j] + u[j] * do_s[j];
        dps_t[j] = du_t[j] * o[j] + u[j] * do_t[j];
        c1ss[j] = -rs * rs * u[j];
        c1st[j] = -rs * rt * u[j];
        c1tt[j] = -rt * rt * u[j];
        c2ss[j] = kI * sigma[j] * c1ss[j];
        c2st[j] = kI * sigma[j] * c1st[j];
        c2tt[j] = kI * sigma[j] * c1tt[j];
      }
      const int node = grid.at(i, jj);
      p.phi1[node] = pack4(f1, 0.5);
      p.phi2[node] = pack4(f2, 0.5);
      p.psi[node] = pack4(ps, 0.5);
      d1s[node] = pack4(du_s, 0.5);
      d1t[node] = pack4(du_t, 0.5);
      std::array<cx, 4> d2sj, d2tj;
      for (int j = 0; j < 4; ++j) {
        d2sj[j] = kI * sigma[j] * du_s[j];
        d2tj[j] = kI * sigma[j] * du_t[j];
      }
      d2s[node] = pack4(d2sj, 0.5);
      d2t[node] = pack4(d2tj, 0.5);
      dps[node] = pack4(dps_s, 0.5);
      dpt[node] = pack4(dps_t, 0.5);
      s11[node] = pack4(c1ss, 0.5);
      s12[node] = pack4(c1st, 0.5);
      s13[node] = pack4(c1tt, 0.5);
      s21[node] = pack4(c2ss, 0.5);
      s22[node] = pack4(c2st, 0.5);
      s23[node] = pack4(c2tt, 0.5);
    }
  }
  p.dphi1_ds = std::move(d1s);
  p.dphi1_dt = std::move(d1t);
  p.dphi2_ds = std::move(d2s);
  p.dphi2_dt = std::move(d2t);
  p.dpsi_ds = std::move(dps);
  p.dpsi_dt = std::move(dpt);
  p.d2phi1_dss = std::move(s11);
  p.d2phi1_dst = std::move(s12);
  p.d2phi1_dtt = std::move(s13);
  p.d2phi2_dss = std::move(s21);
  p.d2phi2_dst = std::move(s22);
  p.d2phi2_dtt = std::move(s23);
  return p;
}

Vec8 shift_up(const Vec8& v) {
  Vec8 out = zero_vec();
  for (int k = 0; k < 7; ++k) out[k + 1] = v[k];
  return out;
}

Field shift_field(const Field& f) {
  Field out(f.size());
  for (size_t k = 0; k < f.size(); ++k) out[k] = shift_up(f[k]);
  return out;
}

// Conformal parameterization of the unit 2-sphere (s = longitude,
// t = Mercator latitude) and its derivatives, used by the ray-style
// built-in 3-folds.
struct Mercator {
  std::array<double, 3> m, ds, dt, dss, dst, dtt;
};

Mercator mercator(double s, double t) {
  const double p = 1.0 / std::cosh(t);
  const double q = std::tanh(t);
  const double c = std::cos(s), sn = std::sin(s);
  Mercator r;
  r.m = {c * p, sn * p, q};
  r.ds = {-sn * p, c * p, 0.0};
  r.dt = {-c * p * q, -sn * p * q, p * p};
  r.dss = {-c * p, -sn * p, 0.0};
  r.dst = {sn * p * q, -c * p * q, 0.0};
  const double ptt = p * p * p - p * q * q;  // d/dt of -p q
  r.dtt = {-c * ptt, -sn * ptt, -2.0 * p * p * q};
  return r;
}

Ruled3Fold builtin_associative(ProductStyle style, const GridSpec& grid) {
  Ruled3Fold n;
  n.ambient_dim = 7;
  n.grid = grid;
  const int count = grid.nodes();
  n.phi.assign(count, zero_vec());
  n.chi.assign(count, zero_vec());
  Field dps(count, zero_vec()), dpt(count, zero_vec());
  Field dcs(count, zero_vec()), dct(count, zero_vec());
  Field pss(count, zero_vec()), pst(count, zero_vec()), ptt(count, zero_vec());
  for (int i = 0; i < grid.Ns; ++i)
    for (int j = 0; j < grid.Nt; ++j) {
      const int node = grid.at(i, j);
      if (style == ProductStyle::lines) {
        n.phi[node] = basis(1);
        n.chi[node][1] = grid.s(i);
        n.chi[node][2] = grid.t(j);
        dcs[node][1] = 1.0;
        dct[node][2] = 1.0;
      } else {
        const Mercator mc = mercator(grid.s(i), grid.t(j));
        for (int k = 0; k < 3; ++k) {
          n.phi[node][k] = mc.m[k];
          dps[node][k] = mc.ds[k];
          dpt[node][k] = mc.dt[k];
          pss[node][k] = mc.dss[k];
          pst[node][k] = mc.dst[k];
          ptt[node][k] = mc.dtt[k];
        }
      }
    }
  n.dphi_ds = std::move(dps);
  n.dphi_dt = std::move(dpt);
  n.dchi_ds = std::move(dcs);
  n.dchi_dt = std::move(dct);
  n.d2phi_dss = std::move(pss);
  n.d2phi_dst = std::move(pst);
  n.d2phi_dtt = std::move(ptt);
  return n;
}

Ruled3Fold builtin_sl_plane(ProductStyle style,
                            const std::array<double, 3>& phases,
                            const GridSpec& grid) {
  Ruled3Fold n;
  n.ambient_dim = 6;
  n.grid = grid;
  const int count = grid.nodes();
  n.phi.assign(count, zero_vec());
  n.chi.assign(count, zero_vec());
  Field dps(count, zero_vec()), dpt(count, zero_vec());
  Field dcs(count, zero_vec()), dct(count, zero_vec());
  Field pss(count, zero_vec()), pst(count, zero_vec()), ptt(count, zero_vec());
  std::array<cx, 3> ph;
  for (int k = 0; k < 3; ++k) ph[k] = std::exp(kI * phases[k]);
  auto put = [](Vec8& v, int slot, cx z) {
    v[2 * slot] = z.real();
    v[2 * slot + 1] = z.imag();
  };
  for (int i = 0; i < grid.Ns; ++i)
    for (int j = 0; j < grid.Nt; ++j) {
      const int node = grid.at(i, j);
      if (style == ProductStyle::lines) {
        put(n.phi[node], 0, ph[0]);
        put(n.chi[node], 1, grid.s(i) * ph[1]);
        put(n.chi[node], 2, grid.t(j) * ph[2]);
        put(dcs[node], 1, ph[1]);
        put(dct[node], 2, ph[2]);
      } else {
        const Mercator mc = mercator(grid.s(i), grid.t(j));
        for (int k = 0; k < 3; ++k) {
          put(n.phi[node], k, ph[k] * mc.m[k]);
          put(dps[node], k, ph[k] * mc.ds[k]);
          put(dpt[node], k, ph[k] * mc.dt[k]);
          put(pss[node], k, ph[k] * mc.dss[k]);
          put(pst[node], k, ph[k] * mc.dst[k]);
          put(ptt[node], k, ph[k] * mc.dtt[k]);
        }
      }
    }
  n.dphi_ds = std::move(dps);
  n.dphi_dt = std::move(dpt);
  n.dchi_ds = std::move(dcs);
  n.dchi_dt = std::move(dct);
  n.d2phi_dss = std::move(pss);
  n.d2phi_dst = std::move(pst);
  n.d2phi_dtt = std::move(ptt);
  return n;
}

}  // namespace

HoloField HoloField::zero() { return HoloField{}; }

HoloField HoloField::constant(cx c) { return polynomial({c}); }

HoloField HoloField::linear(cx a, cx b) { return polynomial({a, b}); }

HoloField HoloField::polynomial(std::vector<cx> coeffs) {
  while (!coeffs.empty() && coeffs.back() == cx{0.0, 0.0}) coeffs.pop_back();
  HoloField h;
  h.coeffs_ = std::move(coeffs);
  return h;
}

HoloField HoloField::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  std::vector<double> nums;
  if (colon != std::string::npos) {
    std::istringstream in(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(in, tok, ',')) {
      size_t used = 0;
      double v;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("holomorphic field spec: bad number '" +
                                    tok + "' in '" + spec + "'");
      }
      while (used < tok.size() && std::isspace(static_cast<unsigned char>(
                                      tok[used])))
        ++used;
      if (used != tok.size())
        throw std::invalid_argument("holomorphic field spec: bad number '" +
                                    tok + "' in '" + spec + "'");
      nums.push_back(v);
    }
  }
  auto expect = [&](size_t n) {
    if (nums.size() != n)
      throw std::invalid_argument("holomorphic field spec '" + spec +
                                  "': expected " + std::to_string(n) +
                                  " numbers, got " +
                                  std::to_string(nums.size()));
  };
  if (head == "zero") {
    expect(0);
    return zero();
  }
  if (head == "const") {
    expect(2);
    return constant(cx{nums[0], nums[1]});
  }
  if (head == "linear") {
    expect(4);
    return linear(cx{nums[0], nums[1]}, cx{nums[2], nums[3]});
  }
  if (head == "poly") {
    if (nums.empty() || nums.size() % 2 != 0)
      throw std::invalid_argument(
          "holomorphic field spec '" + spec +
          "': poly needs a nonzero even count of numbers");
    std::vector<cx> coeffs(nums.size() / 2);
    for (size_t k = 0; k < coeffs.size(); ++k)
      coeffs[k] = cx{nums[2 * k], nums[2 * k + 1]};
    return polynomial(std::move(coeffs));
  }
  throw std::invalid_argument(
      "holomorphic field spec '" + spec +
      "': expected zero | const:... | linear:... | poly:...");
}

HoloField::Jet HoloField::eval(cx zeta) const {
  cx w{0.0, 0.0}, dw{0.0, 0.0}, d2w{0.0, 0.0};
  for (size_t k = coeffs_.size(); k-- > 0;) {
    d2w = d2w * zeta + dw;
    dw = dw * zeta + w;
    w = w * zeta + coeffs_[k];
  }
  return Jet{w, dw, 2.0 * d2w};
}

bool HoloField::is_zero() const {
  for (const cx& c : coeffs_)
    if (c != cx{0.0, 0.0}) return false;
  return true;
}

RuledPatch make_example_m(int k, const HoloField& w, const GridSpec& grid) {
  return fill_family(family_spec(k), w, grid);
}

RuledPatch make_hl_cone(const HlConeParams& params, const GridSpec& grid) {
  if (params.branch != 1 && params.branch != -1)
    throw std::invalid_argument("cone branch must be +1 or -1");
  SlotSpec sp = family_spec(params.ruling);
  const double a4 = params.branch * (kPi / 2.0) - params.offsets[0] -
                    params.offsets[1] - params.offsets[2];
  sp.c = {std::exp(kI * params.offsets[0]), std::exp(kI * params.offsets[1]),
          std::exp(kI * params.offsets[2]), std::exp(kI * a4)};
  return fill_family(sp, HoloField::zero(), grid);
}

Ruled3Fold make_sl_torus_cone_c3(double c1, double c2, const GridSpec& grid) {
  Ruled3Fold n;
  n.ambient_dim = 6;
  n.grid = grid;
  const int count = grid.nodes();
  n.phi.assign(count, zero_vec());
  n.chi.assign(count, zero_vec());
  Field dps(count, zero_vec()), dpt(count, zero_vec());
  Field dcs(count, zero_vec()), dct(count, zero_vec());
  Field pss(count, zero_vec()), pst(count, zero_vec()), ptt(count, zero_vec());
  const double r3 = std::sqrt(3.0);
  const std::array<double, 3> au = {1.0, 1.0, -2.0};
  const std::array<double, 3> av = {r3, -r3, 0.0};
  const double inv = 1.0 / r3;
  auto put = [](Vec8& v, int slot, cx z) {
    v[2 * slot] = z.real();
    v[2 * slot + 1] = z.imag();
  };
  for (int i = 0; i < grid.Ns; ++i) {
    const double u = grid.s(i);
    for (int j = 0; j < grid.Nt; ++j) {
      const double v = grid.t(j);
      const std::array<double, 3> alpha = {u + r3 * v + c1, u - r3 * v + c2,
                                           -kPi / 2.0 - c1 - c2 - 2.0 * u};
      const int node = grid.at(i, j);
      for (int kk = 0; kk < 3; ++kk) {
        const cx e = inv * std::exp(kI * alpha[kk]);
        put(n.phi[node], kk, e);
        put(dps[node], kk, kI * au[kk] * e);
        put(dpt[node], kk, kI * av[kk] * e);
        put(pss[node], kk, -au[kk] * au[kk] * e);
        put(pst[node], kk, -au[kk] * av[kk] * e);
        put(ptt[node], kk, -av[kk] * av[kk] * e);
      }
    }
  }
  n.dphi_ds = std::move(dps);
  n.dphi_dt = std::move(dpt);
  n.dchi_ds = std::move(dcs);
  n.dchi_dt = std::move(dct);
  n.d2phi_dss = std::move(pss);
  n.d2phi_dst = std::move(pst);
  n.d2phi_dtt = std::move(ptt);
  return n;
}

RuledPatch make_product(const ProductParams& params, const GridSpec& grid) {
  Ruled3Fold builtin;
  const Ruled3Fold* n = nullptr;
  switch (params.kind) {
    case ProductKind::associative_plane:
      builtin = builtin_associative(params.style, grid);
      n = &builtin;
      break;
    case ProductKind::sl_phase_minus_i_plane:
      builtin = builtin_sl_plane(params.style, params.phases, grid);
      n = &builtin;
      break;
    case ProductKind::user_ruled_3fold:
      if (!params.input)
        throw std::invalid_argument(
            "product: user input selected but none supplied");
      n = params.input;
      break;
  }
  if (n->ambient_dim != 6 && n->ambient_dim != 7)
    throw std::invalid_argument(
        "product: input dimension must be 6 or 7, got " +
        std::to_string(n->ambient_dim));
  const int count = n->grid.nodes();
  if (static_cast<int>(n->phi.size()) != count ||
      static_cast<int>(n->chi.size()) != count)
    throw std::invalid_argument("product: input field sizes do not match grid");
  for (int node = 0; node < count; ++node) {
    if (std::fabs(norm(n->phi[node]) - 1.0) > 1e-10)
      throw std::invalid_argument(
          "product: input direction field is not unit at node " +
          std::to_string(node));
    for (int k = n->ambient_dim; k < 8; ++k)
      if (std::fabs(n->phi[node][k]) > 1e-12 ||
          std::fabs(n->chi[node][k]) > 1e-12)
        throw std::invalid_argument(
            "product: input occupies slots beyond its dimension at node " +
            std::to_string(node));
  }

  RuledPatch p;
  p.ambient_dim = n->ambient_dim + 1;
  p.grid = n->grid;
  p.phi1.assign(count, basis(1));
  p.phi2 = shift_field(n->phi);
  p.psi = shift_field(n->chi);
  const bool firsts =
      n->dphi_ds && n->dphi_dt && n->dchi_ds && n->dchi_dt;
  if (firsts) {
    const Field zero(count, zero_vec());
    p.dphi1_ds = zero;
    p.dphi1_dt = zero;
    p.dphi2_ds = shift_field(*n->dphi_ds);
    p.dphi2_dt = shift_field(*n->dphi_dt);
    p.dpsi_ds = shift_field(*n->dchi_ds);
    p.dpsi_dt = shift_field(*n->dchi_dt);
    if (n->d2phi_dss && n->d2phi_dst && n->d2phi_dtt) {
      p.d2phi1_dss = zero;
      p.d2phi1_dst = zero;
      p.d2phi1_dtt = zero;
      p.d2phi2_dss = shift_field(*n->d2phi_dss);
      p.d2phi2_dst = shift_field(*n->d2phi_dst);
      p.d2phi2_dtt = shift_field(*n->d2phi_dtt);
    }
  }
  return p;
}

RuledPatch embed_r7_in_r8(const RuledPatch& p) {
  if (p.ambient_dim != 7)
    throw std::invalid_argument(
        "embedding expects 7-dimensional data, got dimension " +
        std::to_string(p.ambient_dim));
  RuledPatch out;
  out.ambient_dim = 8;
  out.grid = p.grid;
  out.phi1 = shift_field(p.phi1);
  out.phi2 = shift_field(p.phi2);
  out.psi = shift_field(p.psi);
  auto lift = [](const std::optional<Field>& f) -> std::optional<Field> {
    if (!f) return std::nullopt;
    return shift_field(*f);
  };
  out.dphi1_ds = lift(p.dphi1_ds);
  out.dphi1_dt = lift(p.dphi1_dt);
  out.dphi2_ds = lift(p.dphi2_ds);
  out.dphi2_dt = lift(p.dphi2_dt);
  out.dpsi_ds = lift(p.dpsi_ds);
  out.dpsi_dt = lift(p.dpsi_dt);
  out.d2phi1_dss = lift(p.d2phi1_dss);
  out.d2phi1_dst = lift(p.d2phi1_dst);
  out.d2phi1_dtt = lift(p.d2phi1_dtt);
  out.d2phi2_dss = lift(p.d2phi2_dss);
  out.d2phi2_dst = lift(p.d2phi2_dst);
  out.d2phi2_dtt = lift(p.d2phi2_dtt);
  return out;
}

RuledPatch holomorphic_construct(const RuledPatch& cone, const HoloField& w,
                                 double pre_tol) {
  const DerivMode mode = cone.has_analytic_derivatives()
                             ? DerivMode::analytic
                             : DerivMode::stencil;
  double psi_max = 0.0;
  for (const Vec8& v : cone.psi) psi_max = std::max(psi_max, norm(v));
  if (psi_max >= pre_tol)
    throw std::runtime_error(
        "offset construction: input offset field is not zero (max " +
        std::to_string(psi_max) + ")");
  const GaugeData gd = gauge_data(cone, mode, pre_tol);
  double f_max = 0.0, fp_max = 0.0, curv_max = 0.0;
  for (double v : gd.f) f_max = std::max(f_max, std::fabs(v));
  for (double v : gd.f_prime) fp_max = std::max(fp_max, std::fabs(v));
  for (double v : gd.curvature) curv_max = std::max(curv_max, std::fabs(v));
  if (f_max >= pre_tol || fp_max >= pre_tol)
    throw std::runtime_error(
        "offset construction: input is not in the flat rate-free gauge "
        "(max rates " +
        std::to_string(f_max) + ", " + std::to_string(fp_max) + ")");
  if (curv_max >= pre_tol)
    throw std::runtime_error("offset construction: gauge curvature " +
                             std::to_string(curv_max) + " is not zero");

  const PatchDerivs pd = patch_derivs(cone, mode);
  RuledPatch out = cone;
  const int count = cone.grid.nodes();
  const bool analytic_out =
      cone.has_analytic_derivatives() && cone.has_analytic_seconds();
  Field dpsi_s, dpsi_t;
  if (analytic_out) {
    dpsi_s.assign(count, zero_vec());
    dpsi_t.assign(count, zero_vec());
  }
  for (int i = 0; i < cone.grid.Ns; ++i)
    for (int j = 0; j < cone.grid.Nt; ++j) {
      const int node = cone.grid.at(i, j);
      const HoloField::Jet jet =
          w.eval(cx{cone.grid.s(i), cone.grid.t(j)});
      const double u = jet.w.real(), v = jet.w.imag();
      Vec8 ps = scale(pd.dphi1_ds[node], u);
      ps = axpy(ps, v, pd.dphi1_dt[node]);
      ps = axpy(ps, -v, pd.dphi2_ds[node]);
      ps = axpy(ps, u, pd.dphi2_dt[node]);
      out.psi[node] = ps;
      if (analytic_out) {
        const double us = jet.dw.real(), vs = jet.dw.imag();
        const double ut = -vs, vt = us;  // holomorphy of w
        Vec8 a = scale(pd.dphi1_ds[node], us);
        a = axpy(a, u, (*cone.d2phi1_dss)[node]);
        a = axpy(a, vs, pd.dphi1_dt[node]);
        a = axpy(a, v, (*cone.d2phi1_dst)[node]);
        a = axpy(a, -vs, pd.dphi2_ds[node]);
        a = axpy(a, -v, (*cone.d2phi2_dss)[node]);
        a = axpy(a, us, pd.dphi2_dt[node]);
        a = axpy(a, u, (*cone.d2phi2_dst)[node]);
        dpsi_s[node] = a;
        Vec8 b = scale(pd.dphi1_ds[node], ut);
        b = axpy(b, u, (*cone.d2phi1_dst)[node]);
        b = axpy(b, vt, pd.dphi1_dt[node]);
        b = axpy(b, v, (*cone.d2phi1_dtt)[node]);
        b = axpy(b, -vt, pd.dphi2_ds[node]);
        b = axpy(b, -v, (*cone.d2phi2_dst)[node]);
        b = axpy(b, ut, pd.dphi2_dt[node]);
        b = axpy(b, u, (*cone.d2phi2_dtt)[node]);
        dpsi_t[node] = b;
      }
    }
  if (analytic_out) {
    out.dpsi_ds = std::move(dpsi_s);
    out.dpsi_dt = std::move(dpsi_t);
  } else {
    out.dphi1_ds.reset();
    out.dphi1_dt.reset();
    out.dphi2_ds.reset();
    out.dphi2_dt.reset();
    out.dpsi_ds.reset();
    out.dpsi_dt.reset();
    out.d2phi1_dss.reset();
    out.d2phi1_dst.reset();
    out.d2phi1_dtt.reset();
    out.d2phi2_dss.reset();
    out.d2phi2_dst.reset();
    out.d2phi2_dtt.reset();
  }
  return out;
}

bool sl_holo_predicate(const RuledPatch& cone, const HoloField& w,
                       double tol) {
  double w_max = 0.0;
  for (int i = 0; i < cone.grid.Ns; ++i)
    for (int j = 0; j < cone.grid.Nt; ++j)
      w_max = std::max(
          w_max, std::abs(w.eval(cx{cone.grid.s(i), cone.grid.t(j)}).w));
  if (w_max <= tol) return true;

  // Worst-case spread of the rotated direction cos(theta) phi1 +
  // sin(theta) phi2 across the grid; the construction stays special
  // Lagrangian iff some rotation makes this field constant.
  auto spread = [&](double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Vec8 ref = axpy(scale(cone.phi1[0], c), s, cone.phi2[0]);
    double worst = 0.0;
    for (size_t node = 1; node < cone.phi1.size(); ++node) {
      const Vec8 v = axpy(scale(cone.phi1[node], c), s, cone.phi2[node]);
      worst = std::max(worst, norm(sub(v, ref)));
    }
    return worst;
  };
  const int steps = 720;  // period pi: a sign flip does not change the spread
  double best_theta = 0.0, best = spread(0.0);
  for (int k = 1; k < steps; ++k) {
    const double theta = kPi * k / steps;
    const double v = spread(theta);
    if (v < best) {
      best = v;
      best_theta = theta;
    }
  }
  double lo = best_theta - kPi / steps, hi = best_theta + kPi / steps;
  for (int it = 0; it < 80; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (spread(m1) <= spread(m2))
      hi = m2;
    else
      lo = m1;
  }
  best = std::min(best, spread(0.5 * (lo + hi)));
  return best < tol;
}

ComplexCurve sample_builtin_curve(const std::string& name,
                                  const GridSpec& g) {
  ComplexCurve curve;
  curve.z.resize(g.nodes());
  for (int i = 0; i < g.Ns; ++i)
    for (int j = 0; j < g.Nt; ++j) {
      const cx u{g.s(i), g.t(j)};
      auto& z = curve.z[g.at(i, j)];
      if (name == "rnc3")
        z = {cx{1.0, 0.0}, u, u * u, u * u * u};
      else if (name == "planar")
        z = {cx{0.0, 0.0}, cx{0.0, 0.0}, u, cx{1.0, 0.0}};
      else
        throw std::invalid_argument("unknown built-in curve '" + name +
                                    "' (expected rnc3 or planar)");
    }
  return curve;
}

ComplexConeResult make_complex_cone(const ComplexCurve& curve,
                                    const GridSpec& g) {
  if (static_cast<int>(curve.z.size()) != g.nodes())
    throw std::invalid_argument(
        "complex cone: curve sample count does not match the grid");
  ComplexConeResult res;
  RuledPatch& p = res.patch;
  p.ambient_dim = 8;
  p.grid = g;
  const int count = g.nodes();
  p.phi1.resize(count);
  p.phi2.resize(count);
  p.psi.assign(count, zero_vec());
  for (int i = 0; i < g.Ns; ++i)
    for (int j = 0; j < g.Nt; ++j) {
      const int node = g.at(i, j);
      const auto& z = curve.z[node];
      double zmax = 0.0;
      for (const cx& c : z) zmax = std::max(zmax, std::abs(c));
      if (zmax == 0.0 || std::abs(z[3]) <= 1e-10 * zmax)
        throw std::runtime_error(
            "complex cone: the affine chart fails at grid node (" +
            std::to_string(i) + ", " + std::to_string(j) +
            "): last coordinate is ~zero");
      std::array<cx, 4> dir = {z[0] / z[3], z[1] / z[3], z[2] / z[3],
                               cx{1.0, 0.0}};
      double r2 = 0.0;
      for (const cx& c : dir) r2 += std::norm(c);
      const double inv_r = 1.0 / std::sqrt(r2);
      std::array<cx, 4> rot;
      for (int k = 0; k < 4; ++k) {
        dir[k] *= inv_r;
        rot[k] = kI * dir[k];
      }
      p.phi1[node] = pack4(dir);
      p.phi2[node] = pack4(rot);
    }

  // Planarity: rank of the direction samples as complex 4-vectors.
  const int stride = std::max(1, (count + 199) / 200);
  std::vector<int> picks;
  for (int node = 0; node < count; node += stride) picks.push_back(node);
  Eigen::MatrixXcd m(picks.size(), 4);
  for (size_t r = 0; r < picks.size(); ++r) {
    const auto z = unpack4(p.phi1[picks[r]]);
    for (int k = 0; k < 4; ++k) m(r, k) = z[k];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) > 1e-8 * sv(0)) ++rank;
  res.planar = rank <= 2;
  return res;
}

}  // namespace ruled4
