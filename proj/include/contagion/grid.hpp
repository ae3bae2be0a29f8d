#pragma once

#include <string>
#include <vector>

namespace contagion {

/// `min:max:steps` gives `steps` evenly spaced points including both ends
/// (steps = 1 yields {min}); otherwise a comma-separated list of values.
std::vector<double> parse_grid(const std::string& spec);

/// Evenly spaced points, endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t steps);

}  // namespace contagion
