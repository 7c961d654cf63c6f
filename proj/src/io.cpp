#include "ruled4/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ruled4/evolve.hpp"

namespace ruled4 {

namespace {

using nlohmann::json;

json field_to_json(const Field& f, int dim) {
  json arr = json::array();
  for (const Vec8& v : f)
    for (int k = 0; k < dim; ++k) arr.push_back(v[k]);
  return arr;
}

Field field_from_json(const json& arr, int dim, int nodes,
                      const std::string& name) {
  if (!arr.is_array() ||
      arr.size() != static_cast<size_t>(nodes) * static_cast<size_t>(dim))
    throw std::runtime_error("patch file: array '" + name + "' must hold " +
                             std::to_string(nodes * dim) + " numbers");
  Field f(nodes, zero_vec());
  size_t idx = 0;
  for (int n = 0; n < nodes; ++n)
    for (int k = 0; k < dim; ++k) {
      const json& v = arr[idx++];
      if (!v.is_number())
        throw std::runtime_error("patch file: array '" + name +
                                 "' holds a non-number");
      f[n][k] = v.get<double>();
    }
  return f;
}

json patch_to_json(const RuledPatch& p) {
  json j;
  j["ambient_dim"] = p.ambient_dim;
  j["Ns"] = p.grid.Ns;
  j["Nt"] = p.grid.Nt;
  j["hs"] = p.grid.hs;
  j["ht"] = p.grid.ht;
  j["s0"] = p.grid.s0;
  j["t0"] = p.grid.t0;
  j["periodic_s"] = p.grid.periodic_s;
  j["periodic_t"] = p.grid.periodic_t;
  j["phi1"] = field_to_json(p.phi1, p.ambient_dim);
  j["phi2"] = field_to_json(p.phi2, p.ambient_dim);
  j["psi"] = field_to_json(p.psi, p.ambient_dim);
  if (p.has_analytic_derivatives()) {
    j["dphi1_ds"] = field_to_json(*p.dphi1_ds, p.ambient_dim);
    j["dphi1_dt"] = field_to_json(*p.dphi1_dt, p.ambient_dim);
    j["dphi2_ds"] = field_to_json(*p.dphi2_ds, p.ambient_dim);
    j["dphi2_dt"] = field_to_json(*p.dphi2_dt, p.ambient_dim);
    j["dpsi_ds"] = field_to_json(*p.dpsi_ds, p.ambient_dim);
    j["dpsi_dt"] = field_to_json(*p.dpsi_dt, p.ambient_dim);
  }
  return j;
}

RuledPatch patch_from_json(const json& j, const std::string& path) {
  for (const char* key :
       {"ambient_dim", "Ns", "Nt", "hs", "ht", "s0", "t0", "periodic_s",
        "periodic_t", "phi1", "phi2", "psi"})
    if (!j.contains(key))
      throw std::runtime_error("patch file '" + path + "': missing key '" +
                               std::string(key) + "'");
  RuledPatch p;
  p.ambient_dim = j.at("ambient_dim").get<int>();
  if (p.ambient_dim != 7 && p.ambient_dim != 8)
    throw std::runtime_error("patch file '" + path +
                             "': ambient_dim must be 7 or 8");
  p.grid.Ns = j.at("Ns").get<int>();
  p.grid.Nt = j.at("Nt").get<int>();
  if (p.grid.Ns < 1 || p.grid.Nt < 1)
    throw std::runtime_error("patch file '" + path + "': bad grid shape");
  p.grid.hs = j.at("hs").get<double>();
  p.grid.ht = j.at("ht").get<double>();
  p.grid.s0 = j.at("s0").get<double>();
  p.grid.t0 = j.at("t0").get<double>();
  p.grid.periodic_s = j.at("periodic_s").get<bool>();
  p.grid.periodic_t = j.at("periodic_t").get<bool>();
  const int nodes = p.grid.nodes();
  p.phi1 = field_from_json(j.at("phi1"), p.ambient_dim, nodes, "phi1");
  p.phi2 = field_from_json(j.at("phi2"), p.ambient_dim, nodes, "phi2");
  p.psi = field_from_json(j.at("psi"), p.ambient_dim, nodes, "psi");
  const char* dkeys[] = {"dphi1_ds", "dphi1_dt", "dphi2_ds",
                         "dphi2_dt", "dpsi_ds",  "dpsi_dt"};
  int present = 0;
  for (const char* key : dkeys)
    if (j.contains(key)) ++present;
  if (present == 6) {
    p.dphi1_ds = field_from_json(j.at("dphi1_ds"), p.ambient_dim, nodes,
                                 "dphi1_ds");
    p.dphi1_dt = field_from_json(j.at("dphi1_dt"), p.ambient_dim, nodes,
                                 "dphi1_dt");
    p.dphi2_ds = field_from_json(j.at("dphi2_ds"), p.ambient_dim, nodes,
                                 "dphi2_ds");
    p.dphi2_dt = field_from_json(j.at("dphi2_dt"), p.ambient_dim, nodes,
                                 "dphi2_dt");
    p.dpsi_ds =
        field_from_json(j.at("dpsi_ds"), p.ambient_dim, nodes, "dpsi_ds");
    p.dpsi_dt =
        field_from_json(j.at("dpsi_dt"), p.ambient_dim, nodes, "dpsi_dt");
  } else if (present != 0) {
    throw std::runtime_error("patch file '" + path +
                             "': derivative arrays must appear all together");
  }
  return p;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("cannot parse '" + path + "': " + e.what());
  }
  return j;
}

void dump_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << j.dump(1, '\t') << '\n';
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

void write_patch(const std::string& path, const RuledPatch& p) {
  dump_json(path, patch_to_json(p));
}

RuledPatch read_patch(const std::string& path) {
  return patch_from_json(load_json(path), path);
}

void write_initial_data(const std::string& path, const InitialData& init) {
  RuledPatch row;
  row.ambient_dim = init.ambient_dim;
  row.grid =
      GridSpec{init.Ns, 1, init.hs, 0.0, init.s0, 0.0, init.periodic_s, false};
  row.phi1 = init.phi1_0;
  row.phi2 = init.phi2_0;
  row.psi = init.psi_0;
  dump_json(path, patch_to_json(row));
}

InitialData read_initial_data(const std::string& path) {
  const RuledPatch row = patch_from_json(load_json(path), path);
  if (row.grid.Nt != 1)
    throw std::runtime_error("initial data file '" + path +
                             "': expected a single-row patch (Nt = 1)");
  InitialData init;
  init.ambient_dim = row.ambient_dim;
  init.Ns = row.grid.Ns;
  init.hs = row.grid.hs;
  init.s0 = row.grid.s0;
  init.periodic_s = row.grid.periodic_s;
  init.phi1_0 = row.phi1;
  init.phi2_0 = row.phi2;
  init.psi_0 = row.psi;
  return init;
}

std::string residual_report_json(const ResidualReport& r) {
  json j;
  j["non_immersion_count"] = r.non_immersion_count;
  j["max_over_equations"] = r.max_over_equations();
  json eqs = json::array();
  for (const EquationStats& e : r.equations) {
    json je;
    je["name"] = e.name;
    je["max_norm"] = e.max_norm;
    je["mean_norm"] = e.mean_norm;
    je["argmax_i"] = e.argmax_i;
    je["argmax_j"] = e.argmax_j;
    eqs.push_back(je);
  }
  j["equations"] = eqs;
  return j.dump(1, '\t') + "\n";
}

void write_residual_report(const std::string& path, const ResidualReport& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << residual_report_json(r);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

ComplexCurve read_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  ComplexCurve c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double nums[8];
    int got = 0;
    while (got < 8 && (ls >> nums[got])) ++got;
    if (got == 0) continue;  // blank or comment-only line
    double extra;
    if (got != 8 || (ls >> extra))
      throw std::runtime_error("curve file '" + path + "' line " +
                               std::to_string(lineno) +
                               ": expected exactly 8 numbers");
    std::array<std::complex<double>, 4> z;
    for (int k = 0; k < 4; ++k)
      z[k] = std::complex<double>{nums[2 * k], nums[2 * k + 1]};
    c.z.push_back(z);
  }
  return c;
}

void write_curve(const std::string& path, const ComplexCurve& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "# re1 im1 re2 im2 re3 im3 re4 im4 (one projective sample per line)\n";
  char buf[512];
  for (const auto& z : c.z) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                  z[0].real(), z[0].imag(), z[1].real(), z[1].imag(),
                  z[2].real(), z[2].imag(), z[3].real(), z[3].imag());
    out << buf;
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace ruled4
