// File formats: JSON-shaped patch files (header + flat row-major arrays),
// single-row initial data, residual reports, and the plain-text complex
// curve sample format.
#pragma once

#include <string>

#include "ruled4/construct.hpp"
#include "ruled4/evolve.hpp"
#include "ruled4/patch.hpp"

namespace ruled4 {

// Writes header {ambient_dim, Ns, Nt, hs, ht, s0, t0, periodic_s,
// periodic_t} plus flat row-major arrays phi1, phi2, psi of length
// Ns*Nt*ambient_dim (and the analytic first-derivative arrays when
// present), round-trip exact.
void write_patch(const std::string& path, const RuledPatch& p);
RuledPatch read_patch(const std::string& path);

// Initial data uses the patch format with Nt = 1 (one t-row); the f driver
// is not serialized.
void write_initial_data(const std::string& path, const InitialData& init);
InitialData read_initial_data(const std::string& path);

void write_residual_report(const std::string& path, const ResidualReport& r);

// Serializes a residual report as a JSON object (used by the CLI's --json
// mode as well as write_residual_report).
std::string residual_report_json(const ResidualReport& r);

// Curve samples: one sample per line, four components per line as
// whitespace-separated re/im pairs (8 numbers); '#' starts a comment.  The
// sample count must equal Ns*Nt of the grid it is used with.
ComplexCurve read_curve(const std::string& path);
void write_curve(const std::string& path, const ComplexCurve& c);

}  // namespace ruled4
