#include "eekit/grid.hpp"

#include <cmath>

#include "eekit/errors.hpp"
#include "eekit/numeric.hpp"

namespace eekit {

void ParameterSpec::validate() const {
  if (name.empty()) throw ConfigError("parameter name must not be empty");
  if (name.find_first_of(",\"\n\r") != std::string::npos)
    throw ConfigError("parameter '" + name + "': name must not contain commas, quotes or newlines");
  if (!(x_min < x_max))
    throw GridError("parameter '" + name + "': x_min must be < x_max (got " +
                    format_double(x_min) + " >= " + format_double(x_max) + ")");
  if (levels < 2)
    throw GridError("parameter '" + name + "': levels must be >= 2");
  if (levels > 2 && levels % 2 != 0)
    throw GridError("parameter '" + name + "': levels must be even when > 2 (got " +
                    std::to_string(levels) + "); odd grids break level equiprobability");
  if (nominal && (*nominal < x_min || *nominal > x_max))
    throw RangeError("parameter '" + name + "': nominal outside [x_min, x_max]");
}

double ParameterSpec::grid_value(int level) const {
  if (level < 0 || level >= levels)
    throw RangeError("parameter '" + name + "': level " + std::to_string(level) +
                     " outside grid 0.." + std::to_string(levels - 1));
  return static_cast<double>(level) / static_cast<double>(levels - 1);
}

double ParameterSpec::reduce(double x) const {
  if (x < x_min || x > x_max)
    throw RangeError("parameter '" + name + "': value " + format_double(x) +
                     " outside [" + format_double(x_min) + ", " + format_double(x_max) + "]");
  return (x - x_min) / (x_max - x_min);
}

double ParameterSpec::restore(double reduced) const {
  if (reduced < 0.0 || reduced > 1.0)
    throw RangeError("parameter '" + name + "': reduced value " + format_double(reduced) +
                     " outside [0, 1]");
  return x_min + reduced * (x_max - x_min);
}

double delta_for(int levels) {
  if (levels < 2) throw GridError("delta_for: levels must be >= 2");
  if (levels > 2 && levels % 2 != 0)
    throw GridError("delta_for: levels must be even when > 2 (got " + std::to_string(levels) + ")");
  return static_cast<double>(levels) / (2.0 * (levels - 1));
}

int delta_level_steps(int levels) {
  if (levels < 2 || (levels > 2 && levels % 2 != 0))
    throw GridError("delta_level_steps: invalid grid with " + std::to_string(levels) + " levels");
  return levels / 2;
}

int step_sign(double coord_value) {
  if (coord_value == 0.5)
    throw InternalError("step_sign: coordinate exactly 0.5; even grids cannot produce this");
  return coord_value < 0.5 ? +1 : -1;
}

}  // namespace eekit
