#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace resent {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Per-party local dimensions, party 0 first.
using Dims = std::vector<int>;

/// Raised when an input violates a documented precondition or invariant.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace tol {
inline constexpr double kNorm = 1e-10;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kNegativeEigen = 1e-10;
inline constexpr double kEigenTruncation = 1e-12;
inline constexpr double kMonogamy = 1e-6;
}  // namespace tol

inline std::size_t dims_product(const Dims& dims) {
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  return total;
}

inline std::string dims_to_string(const Dims& dims) {
  std::string out = "(";
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(dims[k]);
  }
  return out + ")";
}

}  // namespace resent
