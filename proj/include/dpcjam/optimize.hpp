#pragma once

// Derivative-free scalar search and projected gradient descent over
// {PSD, trace <= budget}. All routines minimize; negate to maximize.

#include "dpcjam/linalg.hpp"

#include <functional>

namespace dpcjam::opt {

struct ScalarResult {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
  double grid_best = 0.0;  // best value on the coarse grid (grid_golden only)
  bool flat = false;       // grid values spread below 1e-13 (grid_golden only)
};

ScalarResult golden_section_minimize(const std::function<double(double)>& f, double lo,
                                     double hi, double tol = 1e-8);

/// Coarse grid over [lo, hi] followed by golden section inside the bracket of
/// the best grid point. Guards against non-unimodal objectives.
ScalarResult grid_golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                                  int grid_points = 41, double tol = 1e-8);

struct PsdOptions {
  int max_iterations = 10000;
  double stationarity_tol = 1e-10;  // Frobenius norm of the projected-gradient step
  double fd_step = 1e-6;            // relative central-difference step
};

struct PsdResult {
  Matrix x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Central-difference gradient with the symmetric (Frobenius) convention.
Matrix fd_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x, double step);

PsdResult projected_gradient_minimize(const std::function<double(const Matrix&)>& f,
                                      const Matrix& start, double budget,
                                      const PsdOptions& options = {});

}  // namespace dpcjam::opt
