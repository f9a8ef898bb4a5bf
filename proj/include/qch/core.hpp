#pragma once

#include <complex>
#include <Eigen/Dense>

namespace qch {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Default tolerance for every invariant and comparison in the library.
/// Mutable so a front end can override it once (e.g. from a --tol flag);
/// every function also accepts the tolerance as an explicit parameter.
inline double& global_tolerance() {
  static double tol = 1e-10;
  return tol;
}

/// Threshold below which a conditioning probability counts as null.
/// Deliberately distinct from (and tighter than) the invariant tolerance.
inline constexpr double condition_eps = 1e-12;

/// Entrywise max norm, the norm used by every invariant in this library.
inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(Matrix(a - b)) <= tol;
}

}  // namespace qch
