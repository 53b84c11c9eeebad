#pragma once

#include <Eigen/Dense>

#include <optional>

namespace dpcjam {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPsdFloor = 1e-10;

bool is_symmetric(const Matrix& a, double rel_tol = kSymmetryTol);

// Smallest eigenvalue of the symmetric part.
double min_eigenvalue(const Matrix& a);

// Accepts eigenvalues down to -kPsdFloor * |trace|.
bool is_psd(const Matrix& a);

Matrix symmetrize(const Matrix& a);

/// Log-determinant through a Cholesky factorization. Returns nullopt when the
/// factorization fails (singular or indefinite input).
std::optional<double> log_det_cholesky(const Matrix& a);

/// Ratio of extreme eigenvalues; +inf for singular or indefinite input.
double condition_number(const Matrix& a);

/// Symmetric square root V sqrt(max(L,0)) V^T.
Matrix psd_sqrt(const Matrix& a);

/// Euclidean projection of v onto {x >= 0, sum x <= budget}.
Vector project_capped_simplex(const Vector& v, double budget);

/// Frobenius projection of a symmetric matrix onto {PSD, trace <= budget}.
Matrix project_psd_trace_ball(const Matrix& a, double budget);

}  // namespace linalg
}  // namespace dpcjam
