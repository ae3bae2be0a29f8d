#pragma once

#include <cstdint>
#include <string>

#include "contagion/rng.hpp"

namespace contagion {

enum class Family { Normal, StudentT };

/// Standardized location-scale family. The StudentT variate is the raw
/// (unscaled) t, so sigma in mu + sigma * t is a scale, not a standard deviation.
class LocationScaleDistribution {
 public:
  static LocationScaleDistribution normal() { return LocationScaleDistribution(Family::Normal, 0.0); }
  static LocationScaleDistribution student_t(double dof);

  /// Parses "normal" or "t:NU".
  static LocationScaleDistribution parse(const std::string& spec);

  Family family() const { return family_; }
  double dof() const { return dof_; }
  std::string name() const;

  double cdf(double x) const;
  /// Upper tail 1 - cdf(x), evaluated without cancellation.
  double sf(double x) const;
  double pdf(double x) const;
  double quantile(double p) const;
  /// Density at the mode (x = 0 for both families).
  double peak_density() const { return pdf(0.0); }

  /// Returns mu + sigma * z with z drawn by inverting the standard CDF on one
  /// 53-bit uniform. Throws std::invalid_argument when sigma <= 0.
  double sample(double mu, double sigma, RngStream& rng) const;

  bool operator==(const LocationScaleDistribution&) const = default;

 private:
  LocationScaleDistribution(Family f, double dof) : family_(f), dof_(dof) {}

  Family family_;
  double dof_;
};

}  // namespace contagion
