#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace eekit {

// One input variable: a physical interval [x_min, x_max] discretized on a
// `levels`-value regular grid of the reduced variable (x - x_min)/(x_max - x_min).
struct ParameterSpec {
  std::string name;
  double x_min = 0.0;
  double x_max = 1.0;
  int levels = 10;
  std::optional<double> nominal;  // informational, carried through reports

  void validate() const;

  // Reduced value of grid level m: m/(levels-1).
  double grid_value(int level) const;

  double reduce(double x) const;         // physical -> [0,1]
  double restore(double reduced) const;  // [0,1] -> physical
};

// Step size delta = levels/(2*(levels-1)); guarantees equal probability of
// every grid level under the reflection rule. Levels must be 2 or even.
double delta_for(int levels);

// Grid indices moved by one delta step: levels/2.
int delta_level_steps(int levels);

// Reflection rule: +1 below 0.5, -1 above. 0.5 cannot occur on an even grid.
int step_sign(double coord_value);

// A grid point stored as per-coordinate level indices, so point equality
// and cache keys are exact.
struct GridPoint {
  std::vector<int> levels_idx;

  auto operator<=>(const GridPoint&) const = default;
};

}  // namespace eekit
