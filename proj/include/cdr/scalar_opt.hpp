#pragma once

#include <functional>
#include <vector>

namespace cdr::scalar_opt {

using Point = std::vector<double>;
using Objective = std::function<double(const Point&)>;

/// Per-coordinate bounds; one or two coordinates in practice.
struct Box {
  Point lower;
  Point upper;

  std::size_t dim() const { return lower.size(); }
  Point clamp(Point x) const;
};

struct OptResult {
  Point x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
};

/// Argmax over the uniform lattice with points_per_dim nodes per axis, both
/// endpoints included. Ties keep the first lattice point in row-major order
/// (lowest index of the first coordinate, then the second). NaN scores lose
/// to everything.
OptResult grid_search(const Objective& f, const Box& box, int points_per_dim);

/// Nelder-Mead maximization (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2) started from x0 with an initial edge of 5% of the box width.
/// Trial points are clamped to the box before evaluation. Stops when the
/// spread of function values over the simplex drops below tol and every
/// vertex lies within sqrt(tol) box widths of the best one, or after
/// max_iter iterations. Returns the best vertex, which is also the best
/// point seen.
OptResult nelder_mead(const Objective& f, const Box& box, Point x0, double tol, int max_iter);

/// grid_search followed by nelder_mead from the grid winner.
OptResult maximize(const Objective& f, const Box& box, int grid_points, double tol,
                   int max_iter = 500);

}  // namespace cdr::scalar_opt
