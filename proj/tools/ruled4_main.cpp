// ruled4: command-line front end for the 2-ruled calibrated 4-fold library.
//
// Subcommands:
//   check-tables  exhaustive algebra/form table conformance (exit 1 on any
//                 mismatch; --inject-fault demonstrates the failure path)
//   check-plane   calibrated-plane predicates on a 4-frame from a file or
//                 inline vectors
//   residuals     residual system sweep over a patch file (exit 0 iff the
//                 worst equation norm is below --tol)
//   example       built-in patch generators, written as patch files
//   evolve        integrate initial data; optional drift log and
//                 self-convergence study
//   decay         distance-to-cone measurement over a radius ladder
//
// Exit codes: 0 = pass, 1 = check failure, 2 = configuration or numerical
// error (bad flags, malformed files, CFL violation, frame drift, chart
// failure).  Every command is deterministic given its flags; the decay
// search seed is surfaced as --seed.
//
// --config FILE loads a JSON object of defaults per subcommand, e.g.
//   { "residuals": { "tol": 1e-6, "mode": "stencil" } }
// Keys are long flag names without the leading dashes; flags given on the
// command line win over config values.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ruled4/construct.hpp"
#include "ruled4/decay.hpp"
#include "ruled4/evolve.hpp"
#include "ruled4/forms.hpp"
#include "ruled4/io.hpp"
#include "ruled4/octonion.hpp"
#include "ruled4/patch.hpp"
#include "ruled4/planes.hpp"

using namespace ruled4;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Shared helpers

struct CheckFailure {};  // thrown to signal exit code 1 after messages

double parse_double(const std::string& tok, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size())
    throw std::invalid_argument(std::string(what) + ": bad number '" + tok +
                                "'");
  return v;
}

std::vector<double> parse_double_list(const std::string& spec,
                                      const char* what) {
  std::vector<double> out;
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(parse_double(tok, what));
  return out;
}

void parse_grid_shape(const std::string& spec, int& ns, int& nt) {
  const auto x = spec.find('x');
  bool ok = x != std::string::npos;
  if (ok) {
    try {
      std::size_t u1 = 0, u2 = 0;
      ns = std::stoi(spec.substr(0, x), &u1);
      nt = std::stoi(spec.substr(x + 1), &u2);
      ok = u1 == x && x + 1 + u2 == spec.size();
    } catch (const std::exception&) {
      ok = false;
    }
  }
  if (!ok || ns < 1 || nt < 1)
    throw std::invalid_argument("--grid expects NSxNT with positive sizes, got '" +
                                spec + "'");
}

void ensure_distinct_paths(const std::vector<std::string>& paths) {
  for (std::size_t a = 0; a < paths.size(); ++a)
    for (std::size_t b = a + 1; b < paths.size(); ++b)
      if (!paths[a].empty() && paths[a] == paths[b])
        throw std::invalid_argument("input and output paths must be distinct: '" +
                                    paths[a] + "'");
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// check-tables

// Frozen multiplication table: entry [i][j] is the signed 1-based basis
// index of e_{i+1} * e_{j+1}.  Kept as an independent transcription here so
// the command cross-checks the library rather than echoing it.
const int kFrozenMulTable[8][8] = {
    {+1, +2, +3, +4, +5, +6, +7, +8}, {+2, -1, +4, -3, +6, -5, +8, -7},
    {+3, -4, -1, +2, +7, -8, -5, +6}, {+4, +3, -2, -1, -8, -7, +6, +5},
    {+5, -6, -7, +8, -1, +2, +3, -4}, {+6, +5, +8, +7, -2, -1, -4, -3},
    {+7, -8, +5, -6, -3, +4, -1, +2}, {+8, +7, -6, -5, +4, +3, -2, -1},
};

// The twelve frozen fourfold identities on frames (e1, e2, e_j, e_k).
struct FourfoldIdentity {
  int j, k, expect;
};
const FourfoldIdentity kFourfoldIds[12] = {
    {5, 8, 3}, {6, 7, 3}, {5, 7, 4}, {8, 6, 4}, {7, 4, 5}, {8, 3, 5},
    {4, 8, 6}, {7, 3, 6}, {3, 6, 7}, {4, 5, 7}, {3, 5, 8}, {6, 4, 8},
};

Vec8 signed_basis(int signed_index) {
  Vec8 v = zero_vec();
  v[std::abs(signed_index) - 1] = signed_index > 0 ? 1.0 : -1.0;
  return v;
}

bool exactly_equal(const Vec8& a, const Vec8& b) {
  for (int i = 0; i < 8; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// Octonion route for the triple cross, independent of the form contraction
// used by the library kernel.
Vec8 triple_via_octonions(const Vec8& x, const Vec8& y, const Vec8& z) {
  const Vec8 yc = oct_conj(y);
  return scale(sub(oct_mul(oct_mul(x, yc), z), oct_mul(oct_mul(z, yc), x)),
               -0.5);
}

int cmd_check_tables(const std::string& inject, bool json_mode) {
  int products = 0, triples = 0, fourfolds = 0, decomps = 0;
  std::string failure;

  for (int i = 1; i <= 8 && failure.empty(); ++i)
    for (int j = 1; j <= 8 && failure.empty(); ++j) {
      int expect = kFrozenMulTable[i - 1][j - 1];
      if (inject == "product" && i == 3 && j == 5) expect = -expect;
      if (!exactly_equal(oct_mul(basis(i), basis(j)), signed_basis(expect))) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "product table entry (e%d, e%d)", i, j);
        failure = buf;
      } else {
        ++products;
      }
    }

  for (int i = 1; i <= 8 && failure.empty(); ++i)
    for (int j = 1; j <= 8 && failure.empty(); ++j)
      for (int k = 1; k <= 8 && failure.empty(); ++k) {
        Vec8 expect = triple_via_octonions(basis(i), basis(j), basis(k));
        if (inject == "triple" && i == 2 && j == 3 && k == 5)
          expect = add(expect, basis(1));
        if (!exactly_equal(triple_cross(basis(i), basis(j), basis(k)),
                           expect)) {
          char buf[96];
          std::snprintf(buf, sizeof(buf), "triple cross entry (e%d, e%d, e%d)",
                        i, j, k);
          failure = buf;
        } else {
          ++triples;
        }
      }

  for (const auto& id : kFourfoldIds) {
    if (!failure.empty()) break;
    int expect = id.expect;
    if (inject == "fourfold" && id.j == 5 && id.k == 8) expect = -expect;
    const Vec8 lit =
        fourfold_cross_literal(basis(1), basis(2), basis(id.j), basis(id.k));
    const Vec8 half =
        fourfold_cross(basis(1), basis(2), basis(id.j), basis(id.k));
    if (!exactly_equal(lit, signed_basis(expect)) ||
        !exactly_equal(half, scale(signed_basis(expect), 0.5))) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "fourfold identity (e1, e2, e%d, e%d)",
                    id.j, id.k);
      failure = buf;
    } else {
      ++fourfolds;
    }
  }

  if (failure.empty()) {
    const DecompositionReport rep = verify_decompositions();
    const struct {
      const char* name;
      double dev;
    } rows[3] = {{"R + R^7 split", rep.dev_r8_split},
                 {"C^4 split", rep.dev_c4_split},
                 {"R + C^3 split", rep.dev_r7_c3_split}};
    for (const auto& row : rows) {
      double dev = row.dev;
      if (inject == "decomposition" && decomps == 1) dev += 1.0;
      if (dev != 0.0) {
        failure = std::string("decomposition '") + row.name + "'";
        break;
      }
      ++decomps;
    }
  }

  if (json_mode) {
    json j;
    j["products"] = products;
    j["triples"] = triples;
    j["fourfold"] = fourfolds;
    j["decompositions"] = decomps;
    j["pass"] = failure.empty();
    if (!failure.empty()) j["failure"] = failure;
    std::printf("%s\n", j.dump(1, '\t').c_str());
  } else if (failure.empty()) {
    std::printf("64/64 products, 512/512 triples, 12/12 fourfold, "
                "3/3 decompositions\n");
  } else {
    std::printf("FAIL: %s\n", failure.c_str());
  }
  return failure.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// check-plane

std::vector<std::vector<double>> read_vector_rows(const std::string& text,
                                                  char row_sep) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line, row_sep)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // Accept comma or whitespace separated numbers.
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    std::vector<double> nums;
    double v;
    while (ls >> v) nums.push_back(v);
    if (!nums.empty()) rows.push_back(std::move(nums));
  }
  return rows;
}

Frame4 frame_from_rows(std::vector<std::vector<double>> rows, int want_dim) {
  if (rows.size() != 4)
    throw std::invalid_argument("a plane check needs exactly 4 vectors, got " +
                                std::to_string(rows.size()));
  Frame4 f;
  f.dim = want_dim;
  for (int r = 0; r < 4; ++r) {
    if (static_cast<int>(rows[r].size()) != want_dim)
      throw std::invalid_argument(
          "vector " + std::to_string(r + 1) + " has " +
          std::to_string(rows[r].size()) + " components, expected " +
          std::to_string(want_dim));
    f.v[r] = zero_vec();
    for (int k = 0; k < want_dim; ++k) f.v[r][k] = rows[r][k];
  }
  return f;
}

int cmd_check_plane(const std::string& type, const std::string& file,
                    const std::string& vectors, double theta, double tol,
                    bool json_mode) {
  if (file.empty() == vectors.empty())
    throw std::invalid_argument(
        "check-plane needs exactly one of --file or --vectors");
  std::string text = vectors;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open '" + file + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  const int dim = (type == "coass") ? 7 : 8;
  const Frame4 f =
      frame_from_rows(read_vector_rows(text, file.empty() ? ';' : '\n'), dim);

  bool pass = false;
  json detail;
  std::string witness_text;
  if (type == "cayley") {
    const CayleyCheck c = is_cayley_plane(f, tol);
    pass = c.pass;
    detail["witness_norm"] = c.witness_norm;
    detail["form_value"] = c.form_value;
    json w = json::array();
    for (int k = 0; k < 8; ++k) w.push_back(c.witness[k]);
    detail["witness"] = w;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "witness |Im cross| = %.3e, form value = %+0.6f",
                  c.witness_norm, c.form_value);
    witness_text = buf;
    if (!pass) {
      std::string wv = "  witness vector:";
      for (int k = 0; k < 8; ++k) wv += " " + format_g17(c.witness[k]);
      witness_text += "\n" + wv;
    }
  } else if (type == "sl") {
    const SLCheck c = is_sl_plane(f, theta, tol);
    pass = c.pass;
    detail["max_omega_pair"] = c.max_omega_pair;
    detail["defect_value"] = c.defect_value;
    detail["calib_value"] = c.calib_value;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "max |omega| = %.3e, phase defect = %.3e, calibration = %+0.6f",
                  c.max_omega_pair, c.defect_value, c.calib_value);
    witness_text = buf;
  } else if (type == "coass") {
    const CoassCheck c = is_coassociative_plane(f, tol);
    pass = c.pass;
    detail["max_phi_triple"] = c.max_phi_triple;
    detail["form_value"] = c.form_value;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "max |phi triple| = %.3e, form value = %+0.6f",
                  c.max_phi_triple, c.form_value);
    witness_text = buf;
  } else {
    throw std::invalid_argument("--type must be cayley, sl, or coass");
  }

  if (json_mode) {
    detail["type"] = type;
    detail["pass"] = pass;
    std::printf("%s\n", detail.dump(1, '\t').c_str());
  } else {
    std::printf("%s: %s (%s)\n", type.c_str(), pass ? "PASS" : "FAIL",
                witness_text.c_str());
  }
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// residuals

DerivMode pick_mode(const std::string& mode, const RuledPatch& p) {
  if (mode == "analytic") return DerivMode::analytic;
  if (mode == "stencil") return DerivMode::stencil;
  if (mode == "auto")
    return p.has_analytic_derivatives() ? DerivMode::analytic
                                        : DerivMode::stencil;
  throw std::invalid_argument("--mode must be auto, analytic, or stencil");
}

Exec pick_exec(const std::string& exec) {
  if (exec == "serial") return Exec::serial;
  if (exec == "parallel") return Exec::parallel;
  throw std::invalid_argument("--exec must be serial or parallel");
}

double grid_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double grid_max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

int cmd_residuals(const std::string& patch_path, const std::string& system,
                  double tol, const std::string& mode_name,
                  const std::string& exec_name, const std::string& out,
                  bool json_mode) {
  if (tol <= 0) throw std::invalid_argument("--tol must be positive");
  ensure_distinct_paths({patch_path, out});
  const RuledPatch p = read_patch(patch_path);
  const DerivMode mode = pick_mode(mode_name, p);
  const Exec exec = pick_exec(exec_name);

  ResidualReport report;
  std::string gauge_text;
  json gauge_json;
  if (system == "quadratic") {
    report = residuals_quadratic(p, mode, exec);
  } else if (system == "evolution") {
    const EvolutionResiduals er = residuals_evolution(p, mode, exec);
    report = er.report;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "gauge f: mean %+.6e (max |f| %.3e); g1: mean %+.6e; "
                  "g2: mean %+.6e\n",
                  grid_mean(er.f), grid_max_abs(er.f), grid_mean(er.g1),
                  grid_mean(er.g2));
    gauge_text = buf;
    gauge_json["f_mean"] = grid_mean(er.f);
    gauge_json["f_max_abs"] = grid_max_abs(er.f);
    gauge_json["g1_mean"] = grid_mean(er.g1);
    gauge_json["g2_mean"] = grid_mean(er.g2);
  } else if (system == "sl") {
    report = residuals_sl(p, mode, exec);
  } else if (system == "coass") {
    report = residuals_coass(p, mode, exec);
  } else {
    throw std::invalid_argument(
        "--system must be quadratic, evolution, sl, or coass");
  }

  if (!out.empty()) write_residual_report(out, report);

  const double worst = report.max_over_equations();
  const bool pass = worst < tol;
  if (json_mode) {
    json j = json::parse(residual_report_json(report));
    j["tol"] = tol;
    j["pass"] = pass;
    j["mode"] = (mode == DerivMode::analytic) ? "analytic" : "stencil";
    if (!gauge_json.empty()) j["gauge"] = gauge_json;
    std::printf("%s\n", j.dump(1, '\t').c_str());
  } else {
    std::printf("system %s on %s (%s derivatives, %d x %d grid)\n",
                system.c_str(), patch_path.c_str(),
                mode == DerivMode::analytic ? "analytic" : "stencil",
                p.grid.Ns, p.grid.Nt);
    for (const EquationStats& e : report.equations)
      std::printf("  %-18s max %.6e  mean %.6e  argmax (%d, %d)\n",
                  e.name.c_str(), e.max_norm, e.mean_norm, e.argmax_i,
                  e.argmax_j);
    if (!gauge_text.empty()) std::printf("%s", gauge_text.c_str());
    if (report.non_immersion_count > 0)
      std::printf("  non-immersion nodes: %d\n", report.non_immersion_count);
    std::printf("max residual %.6e %s tol %.1e: %s\n", worst,
                pass ? "<" : ">=", tol, pass ? "PASS" : "FAIL");
  }
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// example

struct GridFlags {
  std::string shape;  // NSxNT
  double hs = NAN, ht = NAN, s0 = NAN, t0 = NAN;
  int periodic_s = -1, periodic_t = -1;  // -1 = selector default
};

GridSpec resolve_grid(const GridFlags& f, int def_ns, int def_nt,
                      std::function<double(int)> def_hs,
                      std::function<double(int)> def_ht, double def_s0,
                      double def_t0, bool def_ps, bool def_pt) {
  GridSpec g;
  g.Ns = def_ns;
  g.Nt = def_nt;
  if (!f.shape.empty()) parse_grid_shape(f.shape, g.Ns, g.Nt);
  g.hs = std::isnan(f.hs) ? def_hs(g.Ns) : f.hs;
  g.ht = std::isnan(f.ht) ? def_ht(g.Nt) : f.ht;
  g.s0 = std::isnan(f.s0) ? def_s0 : f.s0;
  g.t0 = std::isnan(f.t0) ? def_t0 : f.t0;
  g.periodic_s = f.periodic_s < 0 ? def_ps : (f.periodic_s != 0);
  g.periodic_t = f.periodic_t < 0 ? def_pt : (f.periodic_t != 0);
  if (g.Ns < 1 || g.Nt < 1 || g.hs <= 0 || g.ht <= 0)
    throw std::invalid_argument("grid sizes and spacings must be positive");
  return g;
}

std::array<double, 3> parse_triple(const std::string& spec, const char* what) {
  const std::vector<double> v = parse_double_list(spec, what);
  if (v.size() != 3)
    throw std::invalid_argument(std::string(what) + ": expected 3 numbers");
  return {v[0], v[1], v[2]};
}

int cmd_example(const std::string& selector, const std::string& w_spec,
                const GridFlags& gf, int ruling, int branch,
                const std::string& offsets_spec, const std::string& style_name,
                const std::string& phases_spec, const std::string& curve_name,
                const std::string& curve_file, double c1, double c2,
                const std::string& out) {
  if (out.empty()) throw std::invalid_argument("example requires --out");
  ensure_distinct_paths({curve_file, out});
  const auto torus_hs = [](int n) { return 2.0 * kPi / n; };

  RuledPatch p;
  std::string note;
  if (selector == "m1" || selector == "m2" || selector == "m3") {
    const int k = selector[1] - '0';
    const GridSpec g = resolve_grid(gf, 24, 24, torus_hs, torus_hs, 0.0, 0.0,
                                    true, true);
    p = make_example_m(k, HoloField::parse(w_spec), g);
  } else if (selector == "hl-cone") {
    const GridSpec g = resolve_grid(gf, 24, 24, torus_hs, torus_hs, 0.0, 0.0,
                                    true, true);
    HlConeParams params;
    params.ruling = ruling;
    params.branch = branch;
    if (!offsets_spec.empty())
      params.offsets = parse_triple(offsets_spec, "--offsets");
    p = make_hl_cone(params, g);
  } else if (selector == "product-assoc" || selector == "product-sl") {
    ProductParams params;
    params.kind = selector == "product-assoc"
                      ? ProductKind::associative_plane
                      : ProductKind::sl_phase_minus_i_plane;
    if (style_name == "lines")
      params.style = ProductStyle::lines;
    else if (style_name == "rays")
      params.style = ProductStyle::rays;
    else
      throw std::invalid_argument("--style must be lines or rays");
    if (!phases_spec.empty())
      params.phases = parse_triple(phases_spec, "--phases");
    const GridSpec g = resolve_grid(
        gf, 16, 10, torus_hs, [](int) { return 0.2; }, 0.0, -0.9, true, false);
    p = make_product(params, g);
  } else if (selector == "complex-cone") {
    const GridSpec g = resolve_grid(
        gf, 24, 24, [](int n) { return 1.0 / n; },
        [](int n) { return 1.0 / n; }, 1.3, 0.9, false, false);
    ComplexCurve curve;
    if (!curve_file.empty())
      curve = read_curve(curve_file);
    else
      curve = sample_builtin_curve(curve_name, g);
    if (static_cast<int>(curve.z.size()) != g.nodes())
      throw std::invalid_argument(
          "curve sample count " + std::to_string(curve.z.size()) +
          " does not match the grid (" + std::to_string(g.nodes()) +
          " nodes)");
    const ComplexConeResult res = make_complex_cone(curve, g);
    p = res.patch;
    note = res.planar ? "planar: the direction samples span a complex "
                        "2-plane or less\n"
                      : "";
  } else if (selector == "sl-torus-product") {
    // Torus-phase cone direction field lifted to a 2-ruled patch in R^7.
    const GridSpec g = resolve_grid(
        gf, 16, 16, torus_hs, [](int n) { return 2.0 * kPi / (std::sqrt(3.0) * n); },
        0.0, 0.0, true, true);
    const Ruled3Fold cone3 = make_sl_torus_cone_c3(c1, c2, g);
    ProductParams params;
    params.kind = ProductKind::user_ruled_3fold;
    params.input = &cone3;
    p = make_product(params, g);
  } else {
    throw std::invalid_argument(
        "unknown example '" + selector +
        "' (use m1, m2, m3, hl-cone, product-assoc, product-sl, "
        "sl-torus-product, complex-cone)");
  }

  write_patch(out, p);
  std::printf("%swrote %s: ambient dim %d, grid %d x %d, %s derivatives\n",
              note.c_str(), out.c_str(), p.ambient_dim, p.grid.Ns, p.grid.Nt,
              p.has_analytic_derivatives() ? "analytic" : "stencil-only");
  return 0;
}

// ---------------------------------------------------------------------------
// evolve

double patch_row_diff(const RuledPatch& coarse, const RuledPatch& fine) {
  // Max frame/offset deviation over coarse nodes; fine has 2x the s-nodes
  // and 2x the t-steps (same span).
  double worst = 0.0;
  for (int i = 0; i < coarse.grid.Ns; ++i)
    for (int j = 0; j < coarse.grid.Nt; ++j) {
      const int a = coarse.grid.at(i, j);
      const int b = fine.grid.at(2 * i, 2 * j);
      worst = std::max(worst, max_abs(sub(coarse.phi1[a], fine.phi1[b])));
      worst = std::max(worst, max_abs(sub(coarse.phi2[a], fine.phi2[b])));
      worst = std::max(worst, max_abs(sub(coarse.psi[a], fine.psi[b])));
    }
  return worst;
}

InitialData subsample_initial(const InitialData& init, int stride) {
  InitialData out;
  out.ambient_dim = init.ambient_dim;
  out.Ns = init.Ns / stride;
  out.hs = init.hs * stride;
  out.s0 = init.s0;
  out.periodic_s = init.periodic_s;
  out.f = init.f;
  for (int i = 0; i < init.Ns; i += stride) {
    out.phi1_0.push_back(init.phi1_0[i]);
    out.phi2_0.push_back(init.phi2_0[i]);
    out.psi_0.push_back(init.psi_0[i]);
  }
  return out;
}

int cmd_evolve(const std::string& init_path, double epsilon, int steps,
               bool no_reortho, bool spectral, double f_const, double cfl,
               const std::string& exec_name, const std::string& out,
               const std::string& drift_log, bool convergence,
               bool json_mode) {
  if (epsilon <= 0) throw std::invalid_argument("--epsilon must be positive");
  if (steps < 1) throw std::invalid_argument("--steps must be >= 1");
  ensure_distinct_paths({init_path, out, drift_log});

  InitialData init = read_initial_data(init_path);
  if (f_const != 0.0) init.f = [f_const](double, double) { return f_const; };

  EvolveOptions opts;
  opts.reorthonormalize = !no_reortho;
  opts.spectral = spectral;
  opts.cfl_factor = cfl;
  opts.exec = pick_exec(exec_name);

  try {
    if (convergence) {
      if (!init.periodic_s)
        throw std::invalid_argument(
            "--convergence subsamples the initial line and needs periodic "
            "data");
      if (init.Ns % 4 != 0 || steps % 4 != 0)
        throw std::invalid_argument(
            "--convergence needs Ns and --steps divisible by 4");
      RuledPatch levels[3];
      const int strides[3] = {4, 2, 1};
      for (int k = 0; k < 3; ++k)
        levels[k] =
            evolve(subsample_initial(init, strides[k]), epsilon,
                   steps / strides[k], opts)
                .patch;
      const double e0 = patch_row_diff(levels[0], levels[1]);
      const double e1 = patch_row_diff(levels[1], levels[2]);
      const double order = std::log2(e0 / e1);
      std::string csv = "Ns,steps,diff_to_next_level\n";
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", init.Ns / 4, steps / 4,
                    e0);
      csv += buf;
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", init.Ns / 2, steps / 2,
                    e1);
      csv += buf;
      std::snprintf(buf, sizeof(buf), "# observed_order = %.4f\n", order);
      csv += buf;
      if (!out.empty()) write_text_file(out, csv);
      if (json_mode) {
        json j;
        j["diffs"] = {e0, e1};
        j["observed_order"] = order;
        std::printf("%s\n", j.dump(1, '\t').c_str());
      } else {
        std::printf("%s", csv.c_str());
      }
      return 0;
    }

    const EvolveResult res = evolve(init, epsilon, steps, opts);
    if (!out.empty()) write_patch(out, res.patch);
    if (!drift_log.empty()) {
      std::string csv = "step,t,norm_dev,ortho_dev\n";
      for (const DriftSample& d : res.drift) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", d.step, d.t,
                      d.norm_dev, d.ortho_dev);
        csv += buf;
      }
      write_text_file(drift_log, csv);
    }
    if (json_mode) {
      json j;
      j["Ns"] = res.patch.grid.Ns;
      j["Nt"] = res.patch.grid.Nt;
      j["t0"] = res.patch.grid.t0;
      j["ht"] = res.patch.grid.ht;
      j["max_drift"] = res.max_drift;
      j["out"] = out;
      std::printf("%s\n", j.dump(1, '\t').c_str());
    } else {
      std::printf(
          "evolved %d columns (t in [%+.4f, %+.4f], ht = %.5f); "
          "max drift %.3e%s%s\n",
          res.patch.grid.Nt, res.patch.grid.t0,
          res.patch.grid.t0 + (res.patch.grid.Nt - 1) * res.patch.grid.ht,
          res.patch.grid.ht, res.max_drift, out.empty() ? "" : "; wrote ",
          out.c_str());
    }
    return 0;
  } catch (const CflError& e) {
    std::fprintf(stderr, "CFL violation: %s\n", e.what());
    return 2;
  } catch (const DriftError& e) {
    std::fprintf(stderr, "frame drift: %s\n", e.what());
    return 2;
  }
}

// ---------------------------------------------------------------------------
// decay

int cmd_decay(const std::string& patch_path, const std::string& radii_spec,
              const std::string& mode_name, unsigned seed, int starts,
              const std::string& out, bool json_mode) {
  ensure_distinct_paths({patch_path, out});
  const std::vector<double> radii = parse_double_list(radii_spec, "--radii");
  for (std::size_t k = 0; k + 1 < radii.size(); ++k)
    if (radii[k] >= radii[k + 1])
      throw std::invalid_argument("--radii must be strictly increasing");

  DecayOptions opts;
  if (mode_name == "nearest")
    opts.mode = DecayMode::nearest;
  else if (mode_name == "radial")
    opts.mode = DecayMode::radial;
  else
    throw std::invalid_argument("--decay-mode must be nearest or radial");
  opts.seed = seed;
  opts.starts = starts;

  const RuledPatch p = read_patch(patch_path);
  const DecayResult res = decay_measure(p, radii, opts);

  std::string csv = "r,distance\n";
  for (const DecaySample& s : res.samples) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", s.r, s.dist);
    csv += buf;
  }
  if (!out.empty()) write_text_file(out, csv);

  if (json_mode) {
    json j;
    json samples = json::array();
    for (const DecaySample& s : res.samples)
      samples.push_back({{"r", s.r}, {"dist", s.dist}});
    j["samples"] = samples;
    j["slope"] = res.slope;
    std::printf("%s\n", j.dump(1, '\t').c_str());
  } else {
    std::printf("%s", csv.c_str());
    std::printf("# fitted log-log slope = %.6f\n", res.slope);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// config-file defaults

bool argv_has_flag(const std::vector<std::string>& args,
                   const std::string& name) {
  const std::string plain = "--" + name;
  const std::string eq = plain + "=";
  for (const std::string& a : args)
    if (a == plain || a.rfind(eq, 0) == 0) return true;
  return false;
}

// Appends config-file values as synthetic flags for options the user did
// not pass explicitly.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in)
    throw std::runtime_error("cannot open config '" + config_path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("cannot parse config '" + config_path +
                             "': " + e.what());
  }
  if (!cfg.is_object())
    throw std::runtime_error("config '" + config_path +
                             "' must be a JSON object");

  // The first non-flag token is the subcommand name.
  std::string sub;
  for (const std::string& a : args)
    if (!a.empty() && a[0] != '-' && a != config_path) {
      sub = a;
      break;
    }
  if (sub.empty() || !cfg.contains(sub)) return args;
  const json& section = cfg.at(sub);
  if (!section.is_object())
    throw std::runtime_error("config section '" + sub +
                             "' must be a JSON object");

  for (const auto& [key, value] : section.items()) {
    if (argv_has_flag(args, key)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
    } else if (value.is_number_integer()) {
      args.push_back("--" + key);
      args.push_back(std::to_string(value.get<long long>()));
    } else if (value.is_number()) {
      args.push_back("--" + key);
      args.push_back(format_g17(value.get<double>()));
    } else if (value.is_string()) {
      args.push_back("--" + key);
      args.push_back(value.get<std::string>());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ",";
        joined += item.is_number() ? format_g17(item.get<double>())
                                   : item.get<std::string>();
      }
      args.push_back("--" + key);
      args.push_back(joined);
    } else {
      throw std::runtime_error("config key '" + key +
                               "' has an unsupported value type");
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ruled4: construction, residual checks, evolution, and asymptotics "
      "for 2-ruled calibrated 4-fold patches"};
  app.name("ruled4");
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON file of per-subcommand flag defaults");

  // check-tables
  auto* tables = app.add_subcommand(
      "check-tables", "exhaustive product/triple/fourfold/decomposition "
                      "table conformance");
  std::string inject;
  bool tables_json = false;
  tables->add_option("--inject-fault", inject,
                     "corrupt one expected entry (product, triple, fourfold, "
                     "decomposition) to demonstrate the failure path")
      ->check(CLI::IsMember({"product", "triple", "fourfold", "decomposition"}));
  tables->add_flag("--json", tables_json, "machine-readable summary");

  // check-plane
  auto* plane = app.add_subcommand("check-plane",
                                   "calibrated-plane predicate on a 4-frame");
  std::string plane_type, plane_file, plane_vectors;
  double plane_theta = 0.0, plane_tol = 1e-9;
  bool plane_json = false;
  plane->add_option("--type", plane_type, "cayley, sl, or coass")->required();
  plane->add_option("--file", plane_file,
                    "text file with 4 vectors, one per line (# comments)");
  plane->add_option("--vectors", plane_vectors,
                    "inline vectors 'x1,..,xD;y1,..;z1,..;w1,..'");
  plane->add_option("--theta", plane_theta,
                    "phase angle for --type sl (default 0)");
  plane->add_option("--tol", plane_tol, "predicate tolerance (default 1e-9)");
  plane->add_flag("--json", plane_json, "machine-readable result");

  // residuals
  auto* resid = app.add_subcommand("residuals",
                                   "residual system sweep over a patch file");
  std::string resid_patch, resid_system = "quadratic", resid_mode = "auto";
  std::string resid_exec = "serial", resid_out;
  double resid_tol = 1e-8;
  bool resid_json = false;
  resid->add_option("patch", resid_patch, "patch file")->required();
  resid->add_option("--system", resid_system,
                    "quadratic, evolution, sl, or coass");
  resid->add_option("--tol", resid_tol, "pass threshold (default 1e-8)");
  resid->add_option("--mode", resid_mode, "auto, analytic, or stencil");
  resid->add_option("--exec", resid_exec, "serial or parallel sweeps");
  resid->add_option("--out", resid_out, "write the report as JSON");
  resid->add_flag("--json", resid_json, "print the report as JSON");

  // example
  auto* example = app.add_subcommand("example",
                                     "write a built-in example patch file");
  std::string ex_selector, ex_w = "zero", ex_offsets, ex_style = "lines";
  std::string ex_phases, ex_curve = "rnc3", ex_curve_file, ex_out;
  GridFlags ex_grid;
  int ex_ruling = 1, ex_branch = 1;
  double ex_c1 = 0.0, ex_c2 = 0.0;
  example->add_option("selector", ex_selector,
                      "m1, m2, m3, hl-cone, product-assoc, product-sl, "
                      "sl-torus-product, complex-cone")
      ->required();
  example->add_option("--w", ex_w,
                      "offset field: zero | const:re,im | linear:ar,ai,br,bi "
                      "| poly:c0r,c0i,c1r,c1i,...");
  example->add_option("--grid", ex_grid.shape, "grid shape NSxNT");
  example->add_option("--hs", ex_grid.hs, "s spacing (selector default)");
  example->add_option("--ht", ex_grid.ht, "t spacing (selector default)");
  example->add_option("--s0", ex_grid.s0, "s origin (selector default)");
  example->add_option("--t0", ex_grid.t0, "t origin (selector default)");
  example->add_option("--periodic-s", ex_grid.periodic_s,
                      "1 = periodic in s, 0 = open");
  example->add_option("--periodic-t", ex_grid.periodic_t,
                      "1 = periodic in t, 0 = open");
  example->add_option("--ruling", ex_ruling, "hl-cone ruling (1, 2, 3)");
  example->add_option("--branch", ex_branch, "hl-cone branch (+1 or -1)");
  example->add_option("--offsets", ex_offsets,
                      "hl-cone slot phase offsets 'a1,a2,a3'");
  example->add_option("--style", ex_style, "product style: lines or rays");
  example->add_option("--phases", ex_phases,
                      "product-sl plane phases 'a1,a2,a3'");
  example->add_option("--curve", ex_curve,
                      "builtin curve name for complex-cone (rnc3, planar)");
  example->add_option("--curve-file", ex_curve_file,
                      "curve sample file for complex-cone");
  example->add_option("--c1", ex_c1, "sl-torus-product phase constant c1");
  example->add_option("--c2", ex_c2, "sl-torus-product phase constant c2");
  example->add_option("--out", ex_out, "output patch file")->required();

  // evolve
  auto* evo = app.add_subcommand("evolve",
                                 "integrate initial data to t in "
                                 "[-epsilon, +epsilon]");
  std::string evo_init, evo_out, evo_drift, evo_exec = "serial";
  double evo_eps = 0.25, evo_f = 0.0, evo_cfl = 0.5;
  int evo_steps = 16;
  bool evo_noreortho = false, evo_spectral = false, evo_conv = false;
  bool evo_json = false;
  evo->add_option("--init", evo_init, "initial data file (single-row patch)")
      ->required();
  evo->add_option("--epsilon", evo_eps, "half-width of the t interval");
  evo->add_option("--steps", evo_steps, "time steps per direction");
  evo->add_flag("--no-reortho", evo_noreortho,
                "disable per-step frame re-orthonormalization");
  evo->add_flag("--spectral", evo_spectral,
                "spectral s-derivatives (periodic data only)");
  evo->add_option("--f-const", evo_f, "constant gauge driver value");
  evo->add_option("--cfl", evo_cfl, "CFL factor: require ht <= cfl * hs");
  evo->add_option("--exec", evo_exec, "serial or parallel sweeps");
  evo->add_option("--out", evo_out, "output patch file (or convergence CSV)");
  evo->add_option("--drift-log", evo_drift, "write per-step drift CSV");
  evo->add_flag("--convergence", evo_conv,
                "run 3 refinement levels and report the observed order");
  evo->add_flag("--json", evo_json, "machine-readable summary");

  // decay
  auto* dec = app.add_subcommand("decay",
                                 "distance to the asymptotic cone over a "
                                 "radius ladder");
  std::string dec_patch, dec_radii = "10,31.6,100,316,1000";
  std::string dec_mode = "nearest", dec_out;
  unsigned dec_seed = 12345;
  int dec_starts = 8;
  bool dec_json = false;
  dec->add_option("patch", dec_patch, "patch file")->required();
  dec->add_option("--radii", dec_radii, "comma-separated increasing radii");
  dec->add_option("--decay-mode", dec_mode, "nearest or radial");
  dec->add_option("--seed", dec_seed, "probe placement seed");
  dec->add_option("--starts", dec_starts, "minimizer starts per sample");
  dec->add_option("--out", dec_out, "write r,distance CSV");
  dec->add_flag("--json", dec_json, "machine-readable result");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config(std::move(args));
    // CLI11 parses reversed vectors.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (tables->parsed()) return cmd_check_tables(inject, tables_json);
    if (plane->parsed())
      return cmd_check_plane(plane_type, plane_file, plane_vectors,
                             plane_theta, plane_tol, plane_json);
    if (resid->parsed())
      return cmd_residuals(resid_patch, resid_system, resid_tol, resid_mode,
                           resid_exec, resid_out, resid_json);
    if (example->parsed())
      return cmd_example(ex_selector, ex_w, ex_grid, ex_ruling, ex_branch,
                         ex_offsets, ex_style, ex_phases, ex_curve,
                         ex_curve_file, ex_c1, ex_c2, ex_out);
    if (evo->parsed())
      return cmd_evolve(evo_init, evo_eps, evo_steps, evo_noreortho,
                        evo_spectral, evo_f, evo_cfl, evo_exec, evo_out,
                        evo_drift, evo_conv, evo_json);
    if (dec->parsed())
      return cmd_decay(dec_patch, dec_radii, dec_mode, dec_seed, dec_starts,
                       dec_out, dec_json);
  } catch (const CheckFailure&) {
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
