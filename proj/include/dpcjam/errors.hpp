#pragma once

#include <stdexcept>
#include <string>

namespace dpcjam {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input matrix is asymmetric or has an eigenvalue below -1e-10 * trace.
struct InvalidCovariance : Error {
  using Error::Error;
};

// Covariance whose determinant falls below 1e-300 where a finite entropy is required.
struct SingularCovariance : Error {
  using Error::Error;
};

// Conditioning block with condition number above 1e12 and no regularization requested.
struct IllConditioned : Error {
  using Error::Error;
};

struct InfeasiblePower : Error {
  using Error::Error;
};

struct NonConvergence : Error {
  using Error::Error;
};

// Sample covariance not PSD after symmetrization, or too few samples.
struct DegenerateSample : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace dpcjam
