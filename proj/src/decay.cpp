#include "ruled4/decay.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ruled4/numerics.hpp"

namespace ruled4 {

namespace {

// Squared distance from x to the 2-plane spanned by (possibly slightly
// non-orthonormal) f1, f2, via the Gram-corrected projection.
double plane_dist2(const Vec8& x, const Vec8& f1, const Vec8& f2) {
  const double g11 = dot(f1, f1), g22 = dot(f2, f2), g12 = dot(f1, f2);
  const double a = dot(x, f1), b = dot(x, f2);
  const double det = g11 * g22 - g12 * g12;
  if (det < 1e-20) return norm2(x) - a * a / std::max(g11, 1e-300);
  const double proj2 = (g22 * a * a - 2.0 * g12 * a * b + g11 * b * b) / det;
  return std::max(0.0, norm2(x) - proj2);
}

}  // namespace

DecayResult decay_measure(const RuledPatch& p, const std::vector<double>& radii,
                          const DecayOptions& opts) {
  if (radii.empty())
    throw std::invalid_argument("decay measurement: no radii given");
  if (opts.probe_sigma < 1 || opts.probe_theta < 1 || opts.starts < 1)
    throw std::invalid_argument("decay measurement: probe counts must be >= 1");
  const GridSpec& g = p.grid;
  if (opts.mode == DecayMode::nearest && (!g.periodic_s || !g.periodic_t))
    throw std::invalid_argument(
        "decay measurement: nearest mode needs a doubly periodic grid for "
        "the trigonometric cone interpolant");

  // Deterministic probe placement: grid nodes for sigma, angles for the
  // position within the ruling plane.
  std::mt19937 gen(opts.seed);
  std::uniform_int_distribution<int> pick_i(0, g.Ns - 1);
  std::uniform_int_distribution<int> pick_j(0, g.Nt - 1);
  std::uniform_real_distribution<double> pick_theta(0.0,
                                                    6.28318530717958647692);
  std::vector<std::pair<int, int>> sigma_probes(opts.probe_sigma);
  for (auto& pr : sigma_probes) pr = {pick_i(gen), pick_j(gen)};
  std::vector<double> thetas(opts.probe_theta);
  for (double& th : thetas) th = pick_theta(gen);

  DecayResult result;
  result.samples.reserve(radii.size());

  if (opts.mode == DecayMode::radial) {
    double worst = 0.0;
    for (const auto& pr : sigma_probes)
      worst = std::max(worst, norm(p.psi[g.at(pr.first, pr.second)]));
    for (double r : radii) result.samples.push_back(DecaySample{r, worst});
  } else {
    const TrigInterp2 cone1(p.phi1, g.Ns, g.Nt, g.s0, g.t0, g.hs, g.ht);
    const TrigInterp2 cone2(p.phi2, g.Ns, g.Nt, g.s0, g.t0, g.hs, g.ht);
    for (double r : radii) {
      double worst = 0.0;
      for (const auto& pr : sigma_probes) {
        const int node = g.at(pr.first, pr.second);
        for (double th : thetas) {
          Vec8 x = scale(p.phi1[node], r * std::cos(th));
          x = axpy(x, r * std::sin(th), p.phi2[node]);
          x = axpy(x, 1.0, p.psi[node]);
          // Coarse scan over the cone's own nodes...
          std::vector<std::pair<double, int>> scored(g.nodes());
          for (int i = 0; i < g.Ns; ++i)
            for (int j = 0; j < g.Nt; ++j) {
              const int n2 = g.at(i, j);
              scored[n2] = {plane_dist2(x, p.phi1[n2], p.phi2[n2]), n2};
            }
          std::partial_sort(
              scored.begin(),
              scored.begin() + std::min<size_t>(opts.starts, scored.size()),
              scored.end());
          // ...then continuous refinement from the best starts.
          auto objective = [&](double s, double t) {
            return plane_dist2(x, cone1.eval(s, t), cone2.eval(s, t));
          };
          double best = scored[0].first;
          const int n_starts = std::min<int>(opts.starts, g.nodes());
          for (int k = 0; k < n_starts; ++k) {
            const int n2 = scored[k].second;
            const int si = n2 / g.Nt, tj = n2 % g.Nt;
            const MinResult2 mr = nelder_mead_2d(
                objective, {g.s(si), g.t(tj)},
                0.25 * std::max(g.hs, g.ht));
            best = std::min(best, mr.value);
          }
          worst = std::max(worst, std::sqrt(std::max(0.0, best)));
        }
      }
      result.samples.push_back(DecaySample{r, worst});
    }
  }

  std::vector<double> lx, ly;
  for (const DecaySample& sm : result.samples)
    if (sm.r > 0.0 && sm.dist > 0.0) {
      lx.push_back(std::log(sm.r));
      ly.push_back(std::log(sm.dist));
    }
  result.slope = lx.size() >= 2 ? lsq_slope(lx, ly) : 0.0;
  return result;
}

}  // namespace ruled4
