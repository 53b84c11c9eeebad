#include "dpcjam/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dpcjam::linalg {

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

double min_eigenvalue(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool is_psd(const Matrix& a) {
  if (a.size() == 0) return true;
  if (!a.allFinite()) return false;
  return min_eigenvalue(a) >= -kPsdFloor * std::abs(a.trace());
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

std::optional<double> log_det_cholesky(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const auto diag = llt.matrixLLT().diagonal();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0.0)) return std::nullopt;
    acc += std::log(diag(i));
  }
  return 2.0 * acc;
}

double condition_number(const Matrix& a) {
  if (a.size() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

Matrix psd_sqrt(const Matrix& a) {
  if (a.size() == 0) return a;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
  const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

Vector project_capped_simplex(const Vector& v, double budget) {
  Vector clipped = v.cwiseMax(0.0);
  if (clipped.sum() <= budget) return clipped;
  // Standard sort-based projection onto {x >= 0, sum x = budget}.
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - budget) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

Matrix project_psd_trace_ball(const Matrix& a, double budget) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
  const Vector lambda = project_capped_simplex(es.eigenvalues(), std::max(budget, 0.0));
  return symmetrize(es.eigenvectors() * lambda.asDiagonal() *
                    es.eigenvectors().transpose());
}

}  // namespace dpcjam::linalg
