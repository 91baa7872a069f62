#pragma once

#include <cstddef>

namespace hysim {

/// Relative tolerance used whenever two simulated times are compared for
/// "the same instant".
inline constexpr double kTimeTolerance = 1e-9;

bool same_time(double a, double b);

/// Time of the k-th point of a uniform grid with the given period. When the
/// period is the reciprocal of an integer N (0.1, 0.5, 0.25, ...) the point is
/// computed as k / N, which is correctly rounded; so 0.1-grid point 3 is
/// exactly the double nearest 0.3 and coarser grids share points bit-for-bit
/// with finer ones.
double grid_time(std::size_t k, double period);

/// Number of grid points in [0, horizon] (the horizon point counts when it is
/// a multiple of the period up to kTimeTolerance).
std::size_t grid_size(double horizon, double period);

/// Index of the last grid point <= t (with tolerance), or -1 when t < 0.
long grid_index_at_or_before(double t, double period);

}  // namespace hysim
