#include "hysim/timegrid.hpp"

#include <algorithm>
#include <cmath>

namespace hysim {

bool same_time(double a, double b) {
  return std::abs(a - b) <= kTimeTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

double grid_time(std::size_t k, double period) {
  const double inv = 1.0 / period;
  const double n = std::round(inv);
  if (n >= 1.0 && std::abs(inv - n) <= kTimeTolerance * n) {
    return static_cast<double>(k) / n;
  }
  return static_cast<double>(k) * period;
}

std::size_t grid_size(double horizon, double period) {
  if (horizon < 0) return 0;
  return static_cast<std::size_t>(std::floor(horizon / period + kTimeTolerance)) + 1;
}

long grid_index_at_or_before(double t, double period) {
  if (t < 0 && !same_time(t, 0.0)) return -1;
  return static_cast<long>(std::floor(t / period + kTimeTolerance));
}

}  // namespace hysim
