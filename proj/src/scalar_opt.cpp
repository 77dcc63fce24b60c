#include "cdr/scalar_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cdr::scalar_opt {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
constexpr double kInitialEdge = 0.05;

double score(const Objective& f, const Point& x, int& evaluations) {
  ++evaluations;
  const double v = f(x);
  return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
}

Point affine(const Point& base, const Point& toward, double t) {
  Point out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + t * (toward[i] - base[i]);
  return out;
}

// Largest per-axis distance from the best vertex, in units of the box width.
double simplex_extent(const std::vector<Point>& simplex, const Box& box) {
  double extent = 0.0;
  for (std::size_t k = 1; k < simplex.size(); ++k) {
    for (std::size_t i = 0; i < box.dim(); ++i) {
      const double width = box.upper[i] - box.lower[i];
      if (width > 0.0) extent = std::max(extent, std::abs(simplex[k][i] - simplex[0][i]) / width);
    }
  }
  return extent;
}

void check_box(const Box& box) {
  if (box.lower.size() != box.upper.size() || box.lower.empty()) {
    throw std::invalid_argument("box bounds must be non-empty and of equal dimension");
  }
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (!(box.lower[i] <= box.upper[i])) throw std::invalid_argument("box lower > upper");
  }
}

}  // namespace

Point Box::clamp(Point x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
  return x;
}

OptResult grid_search(const Objective& f, const Box& box, int points_per_dim) {
  check_box(box);
  if (points_per_dim < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
  const std::size_t dim = box.dim();

  auto node = [&](std::size_t axis, int k) {
    if (k == points_per_dim - 1) return box.upper[axis];
    return box.lower[axis] +
           (box.upper[axis] - box.lower[axis]) * static_cast<double>(k) / (points_per_dim - 1);
  };

  OptResult best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<int> idx(dim, 0);
  Point x(dim);
  bool first = true;
  while (true) {
    for (std::size_t a = 0; a < dim; ++a) x[a] = node(a, idx[a]);
    const double v = score(f, x, best.evaluations);
    if (first || v > best.value) {
      best.value = v;
      best.x = x;
      first = false;
    }
    // odometer, last axis fastest
    std::size_t a = dim;
    while (a > 0) {
      --a;
      if (++idx[a] < points_per_dim) break;
      idx[a] = 0;
      if (a == 0) return best;
    }
  }
}

OptResult nelder_mead(const Objective& f, const Box& box, Point x0, double tol, int max_iter) {
  check_box(box);
  if (x0.size() != box.dim()) throw std::invalid_argument("start point dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const std::size_t n = box.dim();

  OptResult res;
  std::vector<Point> simplex;
  std::vector<double> values;
  x0 = box.clamp(std::move(x0));
  simplex.push_back(x0);
  values.push_back(score(f, x0, res.evaluations));
  for (std::size_t i = 0; i < n; ++i) {
    Point v = x0;
    const double step = kInitialEdge * (box.upper[i] - box.lower[i]);
    v[i] = (v[i] + step <= box.upper[i]) ? v[i] + step : v[i] - step;
    simplex.push_back(box.clamp(std::move(v)));
    values.push_back(score(f, simplex.back(), res.evaluations));
  }

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    // descending in value; stable so the start point wins ties
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return values[l] > values[r]; });
    std::vector<Point> s;
    std::vector<double> v;
    for (auto i : order) {
      s.push_back(simplex[i]);
      v.push_back(values[i]);
    }
    simplex = std::move(s);
    values = std::move(v);
  };

  // A flat spread alone is not enough: vertices straddling a symmetric peak
  // have equal values while the simplex is still wide.
  const double x_tol = std::sqrt(tol);
  sort_simplex();
  for (; res.iterations < max_iter; ++res.iterations) {
    if (values.front() - values.back() < tol && simplex_extent(simplex, box) < x_tol) break;

    Point centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);
    }
    const Point& worst = simplex[n];

    Point xr = box.clamp(affine(centroid, worst, -kReflect));
    const double fr = score(f, xr, res.evaluations);
    if (fr > values.front()) {
      Point xe = box.clamp(affine(centroid, worst, -kReflect * kExpand));
      const double fe = score(f, xe, res.evaluations);
      if (fe > fr) {
        simplex[n] = std::move(xe);
        values[n] = fe;
      } else {
        simplex[n] = std::move(xr);
        values[n] = fr;
      }
    } else if (fr > values[n - 1]) {
      simplex[n] = std::move(xr);
      values[n] = fr;
    } else {
      const bool outside = fr > values[n];
      Point xc = outside ? box.clamp(affine(centroid, xr, kContract))
                         : box.clamp(affine(centroid, worst, kContract));
      const double fc = score(f, xc, res.evaluations);
      if ((outside && fc >= fr) || (!outside && fc > values[n])) {
        simplex[n] = std::move(xc);
        values[n] = fc;
      } else {
        for (std::size_t k = 1; k <= n; ++k) {
          simplex[k] = box.clamp(affine(simplex[0], simplex[k], kShrink));
          values[k] = score(f, simplex[k], res.evaluations);
        }
      }
    }
    sort_simplex();
  }

  res.x = simplex.front();
  res.value = values.front();
  return res;
}

OptResult maximize(const Objective& f, const Box& box, int grid_points, double tol,
                   int max_iter) {
  OptResult coarse = grid_search(f, box, grid_points);
  OptResult fine = nelder_mead(f, box, coarse.x, tol, max_iter);
  fine.evaluations += coarse.evaluations;
  if (fine.value >= coarse.value) return fine;
  coarse.evaluations = fine.evaluations;
  coarse.iterations = fine.iterations;
  return coarse;
}

}  // namespace cdr::scalar_opt
