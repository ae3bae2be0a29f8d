#include "contagion/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace contagion {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Closed forms for nu = 2; the general path goes through the incomplete beta.
double t2_cdf(double x) { return 0.5 + x / (2.0 * std::sqrt(2.0 + x * x)); }
double t2_quantile(double p) {
  const double alpha = 4.0 * p * (1.0 - p);
  return 2.0 * (p - 0.5) * std::sqrt(2.0 / alpha);
}

}  // namespace

LocationScaleDistribution LocationScaleDistribution::student_t(double dof) {
  if (!(dof > 0.0) || !std::isfinite(dof)) {
    throw std::invalid_argument("StudentT requires dof > 0");
  }
  return LocationScaleDistribution(Family::StudentT, dof);
}

LocationScaleDistribution LocationScaleDistribution::parse(const std::string& spec) {
  if (spec == "normal") return normal();
  if (spec.rfind("t:", 0) == 0) {
    std::size_t used = 0;
    double nu = 0.0;
    try {
      nu = std::stod(spec.substr(2), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad distribution spec '" + spec + "'");
    }
    if (used != spec.size() - 2) throw std::invalid_argument("bad distribution spec '" + spec + "'");
    return student_t(nu);
  }
  throw std::invalid_argument("unknown distribution '" + spec + "' (expected normal or t:NU)");
}

std::string LocationScaleDistribution::name() const {
  if (family_ == Family::Normal) return "normal";
  std::string s = std::to_string(dof_);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return "t:" + s;
}

double LocationScaleDistribution::cdf(double x) const {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  if (family_ == Family::Normal) return normal_cdf(x);
  if (dof_ == 2.0) return t2_cdf(x);
  return boost::math::cdf(boost::math::students_t(dof_), x);
}

double LocationScaleDistribution::sf(double x) const {
  // Both families are symmetric about zero.
  return cdf(-x);
}

double LocationScaleDistribution::pdf(double x) const {
  if (std::isinf(x)) return 0.0;
  if (family_ == Family::Normal) return normal_pdf(x);
  if (dof_ == 2.0) return 1.0 / std::pow(2.0 + x * x, 1.5);
  return boost::math::pdf(boost::math::students_t(dof_), x);
}

double LocationScaleDistribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw std::domain_error("quantile probability outside [0, 1]");
  }
  if (family_ == Family::Normal) {
    return boost::math::quantile(boost::math::normal(), p);
  }
  if (dof_ == 2.0) return t2_quantile(p);
  return boost::math::quantile(boost::math::students_t(dof_), p);
}

double LocationScaleDistribution::sample(double mu, double sigma, RngStream& rng) const {
  if (!(sigma > 0.0)) throw std::invalid_argument("sample: sigma must be > 0");
  const double u = std::clamp(rng.uniform(), 1e-300, 1.0 - 1e-16);
  return mu + sigma * quantile(u);
}

}  // namespace contagion
