#pragma once

#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "qch/core.hpp"
#include "qch/errors.hpp"

namespace qch {

/// A ket is a plain amplitude vector. Normalization is a property you check
/// (or establish with normalized()), never something applied silently.
struct Ket {
  Vector amps;

  Ket() = default;
  explicit Ket(Vector a) : amps(std::move(a)) {}
  Ket(std::initializer_list<Complex> a) : amps(Eigen::Map<const Vector>(a.begin(), static_cast<Index>(a.size()))) {}

  Index dim() const { return amps.size(); }
  double norm() const { return amps.norm(); }
  double norm_squared() const { return amps.squaredNorm(); }

  bool is_normalized(double tol = global_tolerance()) const {
    return std::abs(norm_squared() - 1.0) <= tol;
  }

  /// Explicit normalize helper.
  Ket normalized(double tol = global_tolerance()) const {
    double n = norm();
    if (n <= tol) throw ZeroSpan("cannot normalize a ket of norm " + std::to_string(n));
    return Ket(Vector(amps / n));
  }
};

inline Ket operator+(const Ket& a, const Ket& b) { return Ket(Vector(a.amps + b.amps)); }
inline Ket operator-(const Ket& a, const Ket& b) { return Ket(Vector(a.amps - b.amps)); }
inline Ket operator*(Complex s, const Ket& k) { return Ket(Vector(s * k.amps)); }

/// <phi|psi>, conjugate-linear in the first argument.
inline Complex inner_product(const Ket& phi, const Ket& psi) {
  if (phi.dim() != psi.dim())
    throw DimensionMismatch("inner_product: dims " + std::to_string(phi.dim()) + " vs " +
                            std::to_string(psi.dim()));
  return phi.amps.dot(psi.amps);
}

/// A direction on the Bloch sphere: polar angle in [0, pi], azimuth in [0, 2*pi).
struct Direction {
  double theta;
  double phi;

  Direction(double theta_, double phi_) : theta(theta_), phi(phi_) {
    constexpr double pi = 3.14159265358979323846;
    if (!(theta >= 0.0 && theta <= pi))
      throw std::invalid_argument("Direction: theta must lie in [0, pi]");
    if (!(phi >= 0.0 && phi < 2.0 * pi))
      throw std::invalid_argument("Direction: phi must lie in [0, 2*pi)");
  }

  static Direction z() { return {0.0, 0.0}; }
  static Direction x() { return {1.57079632679489661923, 0.0}; }
  static Direction y() { return {1.57079632679489661923, 1.57079632679489661923}; }
};

/// Spin-half kets along an arbitrary direction:
///   |w+> = cos(t/2)|z+> + e^{i p} sin(t/2)|z->
///   |w-> = sin(t/2)|z+> - e^{i p} cos(t/2)|z->
/// Always normalized, and <w+|w-> = 0 by construction.
inline Ket spin_ket(const Direction& w, int sign) {
  if (sign != +1 && sign != -1) throw std::invalid_argument("spin_ket: sign must be +1 or -1");
  double half = 0.5 * w.theta;
  Complex phase = std::polar(1.0, w.phi);
  Vector v(2);
  if (sign > 0) {
    v << Complex(std::cos(half), 0.0), phase * std::sin(half);
  } else {
    v << Complex(std::sin(half), 0.0), -phase * std::cos(half);
  }
  return Ket(std::move(v));
}

/// The entangled two-spin singlet (|z+ z-> - |z- z+>)/sqrt(2), dim 4.
inline Ket singlet() {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  Vector v = Vector::Zero(4);
  v(1) = Complex(inv_sqrt2, 0.0);
  v(2) = Complex(-inv_sqrt2, 0.0);
  return Ket(std::move(v));
}

/// Hermitian idempotent operator onto a subspace. Construction validates the
/// three invariants (Hermitian, idempotent, spectrum in {0,1}) unless the
/// caller vouches for the matrix through unchecked().
class Projector {
 public:
  explicit Projector(Matrix m, double tol = global_tolerance()) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw DimensionMismatch("Projector: matrix is " + std::to_string(m_.rows()) + "x" +
                              std::to_string(m_.cols()));
    if (!m_.allFinite()) throw NumericalInstability("Projector: non-finite entries");
    double herm = max_abs(Matrix(m_ - m_.adjoint()));
    if (herm > tol)
      throw NumericalInstability("Projector: not Hermitian, deviation " + std::to_string(herm));
    double idem = max_abs(Matrix(m_ * m_ - m_));
    if (idem > tol)
      throw NumericalInstability("Projector: not idempotent, deviation " + std::to_string(idem));
    compute_rank(tol);
  }

  static Projector unchecked(Matrix m) { return Projector(std::move(m), Unchecked{}); }

  static Projector zero(Index dim) { return unchecked(Matrix::Zero(dim, dim)); }
  static Projector identity(Index dim) { return unchecked(Matrix::Identity(dim, dim)); }

  const Matrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  int rank() const { return rank_; }

  bool is_zero(double tol = global_tolerance()) const { return max_abs(m_) <= tol; }
  bool is_identity(double tol = global_tolerance()) const {
    return max_abs(Matrix(m_ - Matrix::Identity(dim(), dim()))) <= tol;
  }

 private:
  struct Unchecked {};
  Projector(Matrix m, Unchecked) : m_(std::move(m)) { compute_rank(global_tolerance()); }

  void compute_rank(double tol) {
    // A near-idempotent Hermitian matrix has eigenvalues clustered at 0 and 1;
    // 1/2 sits safely mid-gap. Also enforces the spectrum invariant.
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    rank_ = 0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
      double lam = es.eigenvalues()(i);
      if (std::min(std::abs(lam), std::abs(lam - 1.0)) > std::max(tol, 1e-8))
        throw NumericalInstability("Projector: eigenvalue " + std::to_string(lam) +
                                   " not in {0,1}");
      if (lam > 0.5) ++rank_;
    }
  }

  Matrix m_;
  int rank_ = 0;
};

inline bool approx_equal(const Projector& p, const Projector& q, double tol = global_tolerance()) {
  return approx_equal(p.matrix(), q.matrix(), tol);
}

/// Orthogonal projector onto the span of the given kets: modified Gram-Schmidt
/// with one re-orthogonalization pass, then the sum of rank-1 projectors over
/// the surviving orthonormal vectors. Rank equals the numerical rank of the
/// span (residual cutoff 1e-8 relative to the largest input norm).
inline Projector projector_from_span(const std::vector<Ket>& kets, double tol = global_tolerance()) {
  if (kets.empty()) throw ZeroSpan("projector_from_span: empty list");
  Index dim = kets.front().dim();
  double largest = 0.0;
  for (const Ket& k : kets) {
    if (k.dim() != dim) throw DimensionMismatch("projector_from_span: mixed dims");
    largest = std::max(largest, k.norm());
  }
  if (largest <= tol) throw ZeroSpan("projector_from_span: all kets numerically zero");

  const double cutoff = 1e-8 * largest;
  std::vector<Vector> basis;
  for (const Ket& k : kets) {
    Vector v = k.amps;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& e : basis) v -= e.dot(v) * e;
    double n = v.norm();
    if (n > cutoff) basis.push_back(Vector(v / n));
  }
  Matrix p = Matrix::Zero(dim, dim);
  for (const Vector& e : basis) p += e * e.adjoint();
  return Projector(std::move(p), std::max(tol, 1e-10));
}

inline Projector projector_from_span(const Ket& ket, double tol = global_tolerance()) {
  return projector_from_span(std::vector<Ket>{ket}, tol);
}

/// Kronecker products; composite index is row-major (i_a * dim_b + i_b).
inline Ket tensor(const Ket& a, const Ket& b) {
  return Ket(Vector(Eigen::kroneckerProduct(a.amps, b.amps)));
}

inline Matrix tensor(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b);
}

inline Projector tensor(const Projector& a, const Projector& b) {
  return Projector::unchecked(tensor(a.matrix(), b.matrix()));
}

}  // namespace qch
