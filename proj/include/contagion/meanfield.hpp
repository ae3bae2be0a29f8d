#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "contagion/distributions.hpp"

namespace contagion::meanfield {

inline constexpr double kFixedPointTol = 1e-12;
inline constexpr std::size_t kMaxIterations = 100000;
inline constexpr double kRootTol = 1e-12;
inline constexpr double kTangencyTol = 1e-6;
inline constexpr std::size_t kScanPoints = 10000;

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimensionless parameters of the homogeneous model: a is the scaled capital
/// shortfall (mu_L - mu_g) / sigma and b the scaled coupling zJ / sigma.
struct MeanFieldParams {
  double a = 0.0;
  double b = 0.0;
  LocationScaleDistribution dist = LocationScaleDistribution::normal();

  /// Throws std::invalid_argument when b < 0 or a, b are not finite.
  void validate() const;
};

enum class Stability { Stable, Unstable };
enum class Regime { Monostable, Bistable, TangentLower, TangentUpper };

std::string to_string(Stability s);
std::string to_string(Regime r);

struct Root {
  double p;
  Stability stability;
  double slope;  // F'(p)
};

struct FixedPointSolution {
  std::vector<Root> roots;  // strictly increasing in p
  Regime regime = Regime::Monostable;
  std::optional<std::pair<double, double>> x_extrema;  // (x1, x2), when b > b_c
  std::optional<std::pair<double, double>> bounds;     // (a1, a2), when b > b_c
  double b_critical = 0.0;
};

struct FixedPointResult {
  double p;
  std::size_t iterations;
};

/// F(p) = 1 - cdf(a - b p): surviving fraction after one propagation round.
double iterate_map(const MeanFieldParams& params, double p);

/// Iterates p <- F(p) from p0 until successive values differ by at most tol.
/// Throws NonConvergence after max_iter steps.
FixedPointResult solve_fixed_point(const MeanFieldParams& params, double p0,
                                   double tol = kFixedPointTol,
                                   std::size_t max_iter = kMaxIterations);

/// b_c = 1 / peak density of the innovation distribution.
double critical_coupling(const LocationScaleDistribution& dist);

/// Positive offset s* with b * pdf(s*) = 1, or nullopt when b <= b_c.
std::optional<double> tangency_offset(double b, const LocationScaleDistribution& dist);

/// Bistable wedge (a1, a2) for coupling b, or nullopt when b <= b_c. The
/// bounds come from the tangency condition F(x) = x, F'(x) = 1.
std::optional<std::pair<double, double>> hysteresis_bounds(double b,
                                                           const LocationScaleDistribution& dist);

/// Extrema (x1, x2) of p - F(p), i.e. the points where F'(x) = 1.
std::optional<std::pair<double, double>> extrema(const MeanFieldParams& params);

/// All roots of p = F(p) on [0, 1] with stability and regime.
FixedPointSolution classify_fixed_points(const MeanFieldParams& params);

/// n = F'(x) = b pdf(a - b x): expected new distresses per distressed bank.
double branching_number(const MeanFieldParams& params, double x);

/// a = -E / sigma + b p.
double capital_relation(double capital, double sigma, double b, double p);

struct HysteresisCurves {
  std::vector<double> a;
  std::vector<double> forward;   // swept upward from p = 1
  std::vector<double> backward;  // swept downward from p = 0, stored by ascending a
};

/// Path-dependent equilibria along an ascending grid of a, warm-starting each
/// solve from the previous equilibrium.
HysteresisCurves hysteresis_sweep(double b, const std::vector<double>& a_grid,
                                  const LocationScaleDistribution& dist);

struct PhaseDiagram {
  std::vector<double> a_grid;
  std::vector<double> b_grid;
  double p0 = 1.0;
  std::vector<double> p;  // row-major: p[i * b_grid.size() + j] for (a_i, b_j)

  double at(std::size_t i, std::size_t j) const { return p[i * b_grid.size() + j]; }
};

PhaseDiagram phase_diagram(const std::vector<double>& a_grid, const std::vector<double>& b_grid,
                           double p0, const LocationScaleDistribution& dist);

/// Minimum capital-to-assets ratio keeping a fully operating system below the
/// upper tangency a2. sigma_frac is sigma / mu_A. Returns 0 when theta <= theta_c.
double leverage_min(double theta, double sigma_frac, const LocationScaleDistribution& dist);

/// theta_c = sigma_frac * b_c.
double critical_theta(double sigma_frac, const LocationScaleDistribution& dist);

/// Parameters with a recovered fraction q of each defaulted loan:
/// a' = (mu_L - mu_g - q zJ) / sigma, b' = (1 - q) zJ / sigma.
MeanFieldParams collateral_transform(double mu_L, double mu_g, double zJ, double sigma, double q,
                                     const LocationScaleDistribution& dist =
                                         LocationScaleDistribution::normal());

}  // namespace contagion::meanfield
