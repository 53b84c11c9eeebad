#pragma once

// Reference computations that share no code path with the library: cofactor
// determinants, determinant-ratio mutual information, and hand-expanded
// scalar channel covariances.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;

// Laplace expansion along the first row; fine up to dimension ~8.
inline double det_cofactor(const Matrix& m) {
  const auto d = m.rows();
  if (d == 0) return 1.0;
  if (d == 1) return m(0, 0);
  if (d == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  double total = 0.0;
  for (Eigen::Index c = 0; c < d; ++c) {
    Matrix minor(d - 1, d - 1);
    for (Eigen::Index i = 1; i < d; ++i) {
      Eigen::Index cc = 0;
      for (Eigen::Index j = 0; j < d; ++j) {
        if (j == c) continue;
        minor(i - 1, cc++) = m(i, j);
      }
    }
    total += ((c % 2 == 0) ? 1.0 : -1.0) * m(0, c) * det_cofactor(minor);
  }
  return total;
}

inline Matrix sub(const Matrix& m, const std::vector<int>& idx) {
  Matrix out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

inline std::vector<int> cat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// I(A;B|C) = 1/2 log2( |S_AC| |S_BC| / (|S_ABC| |S_C|) ), in bits.
inline double mi_bits(const Matrix& cov, const std::vector<int>& a, const std::vector<int>& b,
                      const std::vector<int>& c) {
  const double ac = det_cofactor(sub(cov, cat(a, c)));
  const double bc = det_cofactor(sub(cov, cat(b, c)));
  const double abc = det_cofactor(sub(cov, cat(cat(a, b), c)));
  const double cc = det_cofactor(sub(cov, c));
  return 0.5 * std::log2(ac * bc / (abc * cc));
}

// Gaussian entropy in bits from the cofactor determinant.
inline double entropy_bits(const Matrix& cov) {
  const double d = static_cast<double>(cov.rows());
  return 0.5 * std::log2(std::pow(2.0 * M_PI * M_E, d) * det_cofactor(cov));
}

// Scalar channel, user X ~ N(0,P) independent of S, U = X + a S, jammer
// J = b S + R with Var R = r. Entries expanded by hand.
struct Scalar {
  double P, sS, sigma2, a, b, r;

  double var_u() const { return P + a * a * sS; }
  double var_y() const { return P + (1 + b) * (1 + b) * sS + r + sigma2; }
  double cov_uy() const { return P + a * (1 + b) * sS; }
  double cov_us() const { return a * sS; }

  double costa_bits() const {
    const double iuy =
        0.5 * std::log2(var_u() * var_y() / (var_u() * var_y() - cov_uy() * cov_uy()));
    const double ius = sS > 0 ? 0.5 * std::log2(var_u() / (var_u() - cov_us() * cov_us() / sS)) : 0.0;
    return iuy - ius;
  }
  double si_bits() const { return 0.5 * std::log2(1.0 + P / (r + sigma2)); }
};

}  // namespace oracle
