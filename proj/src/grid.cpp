#include "contagion/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace contagion {

namespace {

double number(const std::string& s, const std::string& spec) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("bad grid value '" + s + "' in '" + spec + "'");
  }
  return v;
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t steps) {
  if (steps == 0) throw std::invalid_argument("grid needs at least one point");
  if (steps == 1) return {lo};
  std::vector<double> out(steps);
  const double h = (hi - lo) / static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) out[i] = lo + h * static_cast<double>(i);
  out.back() = hi;
  return out;
}

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw std::invalid_argument("grid spec must be min:max:steps, got '" + spec + "'");
    const double lo = number(parts[0], spec);
    const double hi = number(parts[1], spec);
    const double steps = number(parts[2], spec);
    if (steps < 1 || steps != std::floor(steps)) throw std::invalid_argument("grid steps must be a positive integer");
    if (hi < lo) throw std::invalid_argument("grid max must be >= min");
    return linspace(lo, hi, static_cast<std::size_t>(steps));
  }
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(item, spec));
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

}  // namespace contagion
