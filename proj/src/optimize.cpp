#include "dpcjam/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dpcjam::opt {

namespace {
constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
}

ScalarResult golden_section_minimize(const std::function<double(double)>& f, double lo,
                                     double hi, double tol) {
  ScalarResult r;
  if (hi < lo) std::swap(lo, hi);
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  r.evaluations = 2;
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++r.evaluations;
  }
  if (fc <= fd) {
    r.x = c;
    r.value = fc;
  } else {
    r.x = d;
    r.value = fd;
  }
  return r;
}

ScalarResult grid_golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                                  int grid_points, double tol) {
  grid_points = std::max(grid_points, 3);
  if (hi < lo) std::swap(lo, hi);
  const double h = (hi - lo) / (grid_points - 1);
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  double worst_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) {
    const double v = f(lo + i * h);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
    worst_value = std::max(worst_value, v);
  }
  ScalarResult r;
  r.grid_best = best_value;
  r.flat = (worst_value - best_value) <= 1e-13 * std::max(1.0, std::abs(best_value));
  if (r.flat || h == 0.0) {
    r.x = lo + best * h;
    r.value = best_value;
    r.evaluations = grid_points;
    return r;
  }
  const double a = lo + std::max(best - 1, 0) * h;
  const double b = lo + std::min(best + 1, grid_points - 1) * h;
  r = golden_section_minimize(f, a, b, tol);
  r.evaluations += grid_points;
  r.grid_best = best_value;
  if (best_value < r.value) {
    r.x = lo + best * h;
    r.value = best_value;
  }
  return r;
}

Matrix fd_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x, double step) {
  const Eigen::Index n = x.rows();
  const double h = step * std::max(1.0, x.cwiseAbs().maxCoeff());
  Matrix g = Matrix::Zero(n, n);
  Matrix probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      if (i == j) {
        probe(i, i) = x(i, i) + h;
        const double up = f(probe);
        probe(i, i) = x(i, i) - h;
        const double down = f(probe);
        probe(i, i) = x(i, i);
        g(i, i) = (up - down) / (2.0 * h);
      } else {
        probe(i, j) = x(i, j) + h;
        probe(j, i) = x(j, i) + h;
        const double up = f(probe);
        probe(i, j) = x(i, j) - h;
        probe(j, i) = x(j, i) - h;
        const double down = f(probe);
        probe(i, j) = x(i, j);
        probe(j, i) = x(j, i);
        g(i, j) = g(j, i) = (up - down) / (4.0 * h);
      }
    }
  }
  return g;
}

PsdResult projected_gradient_minimize(const std::function<double(const Matrix&)>& f,
                                      const Matrix& start, double budget,
                                      const PsdOptions& options) {
  PsdResult r;
  r.x = linalg::project_psd_trace_ball(start, budget);
  r.value = f(r.x);
  if (budget <= 0.0) {
    r.converged = true;
    return r;
  }
  double step = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    r.iterations = it;
    const Matrix g = fd_gradient(f, r.x, options.fd_step);
    const double gnorm = g.norm();
    if (gnorm == 0.0) {
      r.converged = true;
      return r;
    }
    // Stationarity: the unit-scale projected step vanishes.
    const Matrix unit = r.x - linalg::project_psd_trace_ball(r.x - (budget / gnorm) * g, budget);
    if (unit.norm() < options.stationarity_tol) {
      r.converged = true;
      return r;
    }
    step = step > 0.0 ? 2.0 * step : budget / gnorm;
    bool accepted = false;
    while (step * gnorm > 1e-18 * budget) {
      const Matrix candidate = linalg::project_psd_trace_ball(r.x - step * g, budget);
      const Matrix delta = r.x - candidate;
      if (delta.norm() < options.stationarity_tol) break;
      const double value = f(candidate);
      if (value <= r.value - 1e-4 * (g.array() * delta.array()).sum()) {
        r.x = candidate;
        r.value = value;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      r.converged = true;
      return r;
    }
  }
  return r;
}

}  // namespace dpcjam::opt
