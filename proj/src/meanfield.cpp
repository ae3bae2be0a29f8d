#include "contagion/meanfield.hpp"

#include <algorithm>
#include <cmath>

#include "contagion/parallel.hpp"

namespace contagion::meanfield {

void MeanFieldParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("a and b must be finite");
  if (b < 0.0) throw std::invalid_argument("b must be >= 0 (b = zJ / sigma)");
}

std::string to_string(Stability s) { return s == Stability::Stable ? "stable" : "unstable"; }

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Monostable: return "monostable";
    case Regime::Bistable: return "bistable";
    case Regime::TangentLower: return "tangent_lower";
    case Regime::TangentUpper: return "tangent_upper";
  }
  return "unknown";
}

double iterate_map(const MeanFieldParams& params, double p) {
  return params.dist.sf(params.a - params.b * p);
}

FixedPointResult solve_fixed_point(const MeanFieldParams& params, double p0, double tol,
                                   std::size_t max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("p0 must lie in [0, 1]");
  double p = p0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const double next = iterate_map(params, p);
    if (std::abs(next - p) <= tol) return {next, it};
    p = next;
  }
  throw NonConvergence("fixed-point iteration did not converge within " +
                       std::to_string(max_iter) + " iterations (a=" + std::to_string(params.a) +
                       ", b=" + std::to_string(params.b) + ")");
}

double critical_coupling(const LocationScaleDistribution& dist) { return 1.0 / dist.peak_density(); }

std::optional<double> tangency_offset(double b, const LocationScaleDistribution& dist) {
  const double bc = critical_coupling(dist);
  if (!(b > bc)) return std::nullopt;
  if (dist.family() == Family::Normal) return std::sqrt(2.0 * std::log(b / bc));
  // pdf is decreasing on s > 0; bracket and bisect pdf(s) = 1/b.
  const double target = 1.0 / b;
  double lo = 0.0;
  double hi = 1.0;
  while (dist.pdf(hi) > target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (dist.pdf(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::optional<std::pair<double, double>> hysteresis_bounds(double b,
                                                           const LocationScaleDistribution& dist) {
  const auto s = tangency_offset(b, dist);
  if (!s) return std::nullopt;
  // At tangency x = F(x) = sf(s) with s = a - b x, so a = s + b sf(s).
  const double a1 = *s + b * dist.sf(*s);
  const double a2 = -*s + b * dist.sf(-*s);
  return std::pair{a1, a2};
}

std::optional<std::pair<double, double>> extrema(const MeanFieldParams& params) {
  const auto s = tangency_offset(params.b, params.dist);
  if (!s) return std::nullopt;
  return std::pair{(params.a - *s) / params.b, (params.a + *s) / params.b};
}

double branching_number(const MeanFieldParams& params, double x) {
  return params.b * params.dist.pdf(params.a - params.b * x);
}

namespace {

double residual(const MeanFieldParams& params, double p) { return p - iterate_map(params, p); }

double bisect_root(const MeanFieldParams& params, double lo, double hi, double g_lo) {
  while (hi - lo > kRootTol) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = residual(params, mid);
    if (g_mid == 0.0) return mid;
    if ((g_mid < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Root make_root(const MeanFieldParams& params, double p) {
  const double slope = branching_number(params, p);
  return {p, slope < 1.0 ? Stability::Stable : Stability::Unstable, slope};
}

}  // namespace

FixedPointSolution classify_fixed_points(const MeanFieldParams& params) {
  params.validate();
  FixedPointSolution out;
  out.b_critical = critical_coupling(params.dist);
  out.bounds = hysteresis_bounds(params.b, params.dist);
  out.x_extrema = extrema(params);

  // Sign-change scan over p_k = k / kScanPoints. g is monotone between the
  // extrema of p - F(p), so a stretch whose ends share a nonzero sign and that
  // contains no extremum has no sign change; it is skipped without visiting
  // its points. The cells that remain are exactly those a linear scan flags.
  const double n_points = static_cast<double>(kScanPoints);
  std::vector<double> turns;
  if (out.x_extrema) turns = {out.x_extrema->first, out.x_extrema->second};
  auto grid_p = [&](std::size_t k) { return static_cast<double>(k) / n_points; };
  auto sign = [](double g) { return (g > 0.0) - (g < 0.0); };

  std::vector<double> found;
  if (residual(params, 0.0) == 0.0) found.push_back(0.0);
  std::vector<std::pair<std::size_t, std::size_t>> todo{{0, kScanPoints}};
  while (!todo.empty()) {
    const auto [lo, hi] = todo.back();
    todo.pop_back();
    const double p_lo = grid_p(lo);
    const double p_hi = grid_p(hi);
    const double g_lo = residual(params, p_lo);
    const double g_hi = residual(params, p_hi);
    if (hi - lo == 1) {
      if (g_hi == 0.0) {
        found.push_back(p_hi);
      } else if (g_lo != 0.0 && sign(g_lo) != sign(g_hi)) {
        found.push_back(bisect_root(params, p_lo, p_hi, g_lo));
      }
      continue;
    }
    const bool turn_inside =
        std::any_of(turns.begin(), turns.end(), [&](double x) { return x > p_lo && x < p_hi; });
    if (!turn_inside && g_lo != 0.0 && sign(g_lo) == sign(g_hi)) continue;
    const std::size_t mid = lo + (hi - lo) / 2;
    todo.emplace_back(mid, hi);
    todo.emplace_back(lo, mid);
  }

  // A double root at tangency produces no sign change; insert it explicitly.
  if (out.bounds && out.x_extrema) {
    const auto [a1, a2] = *out.bounds;
    const auto [x1, x2] = *out.x_extrema;
    std::optional<double> tangent;
    if (std::abs(params.a - a1) <= kTangencyTol) {
      out.regime = Regime::TangentLower;
      tangent = x1;
    } else if (std::abs(params.a - a2) <= kTangencyTol) {
      out.regime = Regime::TangentUpper;
      tangent = x2;
    }
    if (tangent) {
      std::erase_if(found, [&](double r) { return std::abs(r - *tangent) < 1e-3; });
      found.push_back(std::clamp(*tangent, 0.0, 1.0));
    }
  }

  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end(),
                          [](double x, double y) { return std::abs(x - y) <= 10 * kRootTol; }),
              found.end());
  for (double p : found) out.roots.push_back(make_root(params, p));

  if (out.regime == Regime::Monostable && out.roots.size() >= 3) out.regime = Regime::Bistable;
  return out;
}

double capital_relation(double capital, double sigma, double b, double p) {
  if (!(sigma > 0.0)) throw std::invalid_argument("capital_relation: sigma must be > 0");
  return -capital / sigma + b * p;
}

HysteresisCurves hysteresis_sweep(double b, const std::vector<double>& a_grid,
                                  const LocationScaleDistribution& dist) {
  if (a_grid.size() < 2) throw std::invalid_argument("hysteresis_sweep: need at least 2 grid points");
  if (!std::is_sorted(a_grid.begin(), a_grid.end())) {
    throw std::invalid_argument("hysteresis_sweep: a_grid must be ascending");
  }
  const std::size_t n = a_grid.size();
  HysteresisCurves out{a_grid, std::vector<double>(n), std::vector<double>(n)};
  double p = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    p = solve_fixed_point({a_grid[i], b, dist}, p).p;
    out.forward[i] = p;
  }
  p = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    p = solve_fixed_point({a_grid[i], b, dist}, p).p;
    out.backward[i] = p;
  }
  return out;
}

PhaseDiagram phase_diagram(const std::vector<double>& a_grid, const std::vector<double>& b_grid,
                           double p0, const LocationScaleDistribution& dist) {
  if (a_grid.empty() || b_grid.empty()) throw std::invalid_argument("phase_diagram: empty grid");
  for (double b : b_grid) {
    if (b < 0.0) throw std::invalid_argument("phase_diagram: b must be >= 0");
  }
  PhaseDiagram out{a_grid, b_grid, p0, std::vector<double>(a_grid.size() * b_grid.size())};
  const std::size_t nb = b_grid.size();
  parallel_for(out.p.size(), [&](std::size_t cell) {
    out.p[cell] = solve_fixed_point({a_grid[cell / nb], b_grid[cell % nb], dist}, p0).p;
  });
  return out;
}

double critical_theta(double sigma_frac, const LocationScaleDistribution& dist) {
  return sigma_frac * critical_coupling(dist);
}

double leverage_min(double theta, double sigma_frac, const LocationScaleDistribution& dist) {
  if (!(theta > 0.0) || theta > 1.0) throw std::invalid_argument("leverage_min: theta must lie in (0, 1]");
  if (!(sigma_frac > 0.0)) throw std::invalid_argument("leverage_min: sigma_frac must be > 0");
  const auto s = tangency_offset(theta / sigma_frac, dist);
  if (!s) return 0.0;
  // gamma >= (sigma / mu_A) s* + theta cdf(-s*), with sigma / mu_A = theta_c / b_c.
  return sigma_frac * *s + theta * dist.cdf(-*s);
}

MeanFieldParams collateral_transform(double mu_L, double mu_g, double zJ, double sigma, double q,
                                     const LocationScaleDistribution& dist) {
  if (!(sigma > 0.0)) throw std::invalid_argument("collateral_transform: sigma must be > 0");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("collateral_transform: q must lie in [0, 1]");
  if (zJ < 0.0) throw std::invalid_argument("collateral_transform: zJ must be >= 0");
  return {(mu_L - mu_g - q * zJ) / sigma, zJ * (1.0 - q) / sigma, dist};
}

}  // namespace contagion::meanfield
