#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qch/core.hpp"
#include "qch/errors.hpp"
#include "qch/framework.hpp"
#include "qch/hilbert.hpp"
#include "qch/logic.hpp"

namespace qch {

namespace detail {

/// Tolerance check then clamp. Rounding-level excursions outside [0,1] are
/// clamped; anything past the 1e-9 window is a bug, not noise.
inline double clamp_probability(double p, const char* op) {
  constexpr double window = 1e-9;
  if (p < -window || p > 1.0 + window)
    throw NumericalInstability(std::string(op) + ": value " + std::to_string(p) +
                               " outside [0,1] beyond tolerance");
  return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

inline void require_normalized(const Ket& psi, const char* op, double tol) {
  if (!psi.is_normalized(tol))
    throw UnnormalizedState(std::string(op) + ": |<psi|psi> - 1| = " +
                            std::to_string(std::abs(psi.norm_squared() - 1.0)));
}

}  // namespace detail

/// Born rule: Pr(E) = <Psi|E|Psi> for a projector E and normalized state.
inline double born_probability(const Projector& e, const Ket& psi,
                               double tol = global_tolerance()) {
  if (e.dim() != psi.dim())
    throw DimensionMismatch("born_probability: dims " + std::to_string(e.dim()) + " vs " +
                            std::to_string(psi.dim()));
  detail::require_normalized(psi, "born_probability", tol);
  double p = psi.amps.dot(e.matrix() * psi.amps).real();
  return detail::clamp_probability(p, "born_probability");
}

/// Pr(A,B) = <Psi|AB|Psi>, defined only for commuting A, B (AB is then itself
/// a projector). Noncommuting pairs are refused: this is the single framework
/// rule at the probability level.
inline double joint_probability(const Projector& a, const Projector& b, const Ket& psi,
                                double tol = global_tolerance()) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("joint_probability: dims " + std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
  if (!compatible(a, b, tol))
    throw IncompatibleProjectors(
        "joint_probability: projectors do not commute; Pr(A,B) is meaningless");
  if (a.dim() != psi.dim())
    throw DimensionMismatch("joint_probability: state dim " + std::to_string(psi.dim()));
  detail::require_normalized(psi, "joint_probability", tol);
  double p = psi.amps.dot(a.matrix() * (b.matrix() * psi.amps)).real();
  return detail::clamp_probability(p, "joint_probability");
}

/// Pr(B|A) = Pr(A,B)/Pr(A). Conditioning on a numerically null event is
/// meaningless, hence the eps guard (distinct from the invariant tolerance).
inline double conditional_probability(const Projector& b, const Projector& a, const Ket& psi,
                                      double tol = global_tolerance(),
                                      double eps = condition_eps) {
  double joint = joint_probability(a, b, psi, tol);
  double pa = born_probability(a, psi, tol);
  if (pa <= eps)
    throw ZeroCondition("conditional_probability: Pr(A) = " + std::to_string(pa) + " <= eps");
  return detail::clamp_probability(joint / pa, "conditional_probability");
}

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m, double tol = global_tolerance()) : m_(std::move(m)) {
    if (m_.rows() != m_.cols())
      throw DimensionMismatch("DensityMatrix: matrix is " + std::to_string(m_.rows()) + "x" +
                              std::to_string(m_.cols()));
    double herm = max_abs(Matrix(m_ - m_.adjoint()));
    if (herm > tol)
      throw NumericalInstability("DensityMatrix: not Hermitian, deviation " + std::to_string(herm));
    double tr = std::abs(m_.trace().real() - 1.0) + std::abs(m_.trace().imag());
    if (tr > tol)
      throw NumericalInstability("DensityMatrix: trace deviates from 1 by " + std::to_string(tr));
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
      throw NumericalInstability("DensityMatrix: negative eigenvalue " +
                                 std::to_string(es.eigenvalues().minCoeff()));
  }

  const Matrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

enum class Factor { a, b };

namespace detail {

inline void require_factorization(Index total, Index dim_a, Index dim_b, const char* op) {
  if (dim_a < 1 || dim_b < 1)
    throw DimensionMismatch(std::string(op) + ": factor dims must be positive");
  if (dim_a * dim_b != total)
    throw BadFactorization(std::string(op) + ": " + std::to_string(dim_a) + "*" +
                           std::to_string(dim_b) + " != " + std::to_string(total));
}

}  // namespace detail

/// Partial trace over the factor that is not kept. Composite index layout is
/// row-major: index = i_a * dim_b + i_b.
inline DensityMatrix partial_trace(const DensityMatrix& rho, Factor keep, Index dim_a,
                                   Index dim_b, double tol = global_tolerance()) {
  detail::require_factorization(rho.dim(), dim_a, dim_b, "partial_trace");
  const Matrix& m = rho.matrix();
  if (keep == Factor::a) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i)
      for (Index j = 0; j < dim_a; ++j)
        for (Index k = 0; k < dim_b; ++k) out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return DensityMatrix(std::move(out), tol);
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (Index i = 0; i < dim_b; ++i)
    for (Index j = 0; j < dim_b; ++j)
      for (Index k = 0; k < dim_a; ++k) out(i, j) += m(k * dim_b + i, k * dim_b + j);
  return DensityMatrix(std::move(out), tol);
}

/// Ket overload: traces out from the pure-state projector [psi].
inline DensityMatrix partial_trace(const Ket& psi, Factor keep, Index dim_a, Index dim_b,
                                   double tol = global_tolerance()) {
  detail::require_factorization(psi.dim(), dim_a, dim_b, "partial_trace");
  detail::require_normalized(psi, "partial_trace", tol);
  Matrix rho = psi.amps * psi.amps.adjoint();
  return partial_trace(DensityMatrix(std::move(rho), std::max(tol, 1e-12)), keep, dim_a, dim_b,
                       tol);
}

/// Pr(P) = Tr(rho P); agrees with born_probability when rho = [Psi].
inline double dm_probability(const DensityMatrix& rho, const Projector& p,
                             double /*tol*/ = global_tolerance()) {
  if (rho.dim() != p.dim())
    throw DimensionMismatch("dm_probability: dims " + std::to_string(rho.dim()) + " vs " +
                            std::to_string(p.dim()));
  double v = (rho.matrix() * p.matrix()).trace().real();
  return detail::clamp_probability(v, "dm_probability");
}

/// An ensemble {p_j, |psi_j>}: nonnegative weights summing to one, attached to
/// normalized (in general nonorthogonal) pure states.
struct Ensemble {
  std::vector<std::pair<double, Ket>> entries;
};

/// rho = sum_j p_j [psi_j].
inline DensityMatrix ensemble_to_density(const Ensemble& ens, double tol = global_tolerance()) {
  if (ens.entries.empty()) throw InvalidEnsemble("ensemble_to_density: empty ensemble");
  const Index dim = ens.entries.front().second.dim();
  double total = 0.0;
  for (const auto& [w, ket] : ens.entries) {
    if (w < -tol) throw InvalidEnsemble("ensemble_to_density: negative weight");
    if (ket.dim() != dim) throw InvalidEnsemble("ensemble_to_density: mixed dims");
    if (!ket.is_normalized(tol))
      throw InvalidEnsemble("ensemble_to_density: entry ket is not normalized");
    total += w;
  }
  if (std::abs(total - 1.0) > tol)
    throw InvalidEnsemble("ensemble_to_density: weights sum to " + std::to_string(total));
  Matrix rho = Matrix::Zero(dim, dim);
  for (const auto& [w, ket] : ens.entries) rho += w * (ket.amps * ket.amps.adjoint());
  return DensityMatrix(std::move(rho), std::max(tol, 1e-12));
}

}  // namespace qch
