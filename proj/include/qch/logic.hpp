#pragma once

#include <string>

#include <Eigen/Eigenvalues>

#include "qch/core.hpp"
#include "qch/errors.hpp"
#include "qch/hilbert.hpp"

namespace qch {

namespace detail {
inline void require_same_dim(const Projector& p, const Projector& q, const char* op) {
  if (p.dim() != q.dim())
    throw DimensionMismatch(std::string(op) + ": dims " + std::to_string(p.dim()) + " vs " +
                            std::to_string(q.dim()));
}
}  // namespace detail

/// NOT P, the projector onto the orthogonal complement of range(P).
inline Projector negation(const Projector& p) {
  return Projector::unchecked(Matrix(Matrix::Identity(p.dim(), p.dim()) - p.matrix()));
}

/// P AND Q in the subspace lattice: the projector onto range(P) & range(Q).
/// A vector lies in both ranges iff Pv = v and Qv = v, i.e. iff it is an
/// eigenvector of (2I - P - Q) with eigenvalue 0, so the meet is assembled
/// from that eigenspace. Coincides with PQ whenever P and Q commute.
inline Projector meet(const Projector& p, const Projector& q) {
  detail::require_same_dim(p, q, "meet");
  const Index n = p.dim();
  Matrix gap = 2.0 * Matrix::Identity(n, n) - p.matrix() - q.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(gap);
  Matrix result = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    if (es.eigenvalues()(i) < 1e-8) {
      Vector v = es.eigenvectors().col(i);
      result += v * v.adjoint();
    }
  }
  return Projector::unchecked(std::move(result));
}

/// P OR Q: the projector onto span(range(P), range(Q)), via De Morgan in the
/// lattice: join(P,Q) = NOT meet(NOT P, NOT Q).
inline Projector join(const Projector& p, const Projector& q) {
  detail::require_same_dim(p, q, "join");
  return negation(meet(negation(p), negation(q)));
}

/// True iff the projectors commute, i.e. the propositions can coexist in one
/// framework. Incompatibility is the strictly quantum relation; it is not
/// mutual exclusivity.
inline bool compatible(const Projector& p, const Projector& q, double tol = global_tolerance()) {
  detail::require_same_dim(p, q, "compatible");
  return max_abs(Matrix(p.matrix() * q.matrix() - q.matrix() * p.matrix())) <= tol;
}

/// True iff PQ = 0 (equivalently QP = 0): the quantum counterpart of disjoint
/// classical events.
inline bool mutually_exclusive(const Projector& p, const Projector& q,
                               double tol = global_tolerance()) {
  detail::require_same_dim(p, q, "mutually_exclusive");
  return max_abs(Matrix(p.matrix() * q.matrix())) <= tol;
}

/// Tests P AND (Q OR R) = (P AND Q) OR (P AND R) in the subspace lattice.
/// Holds on any Boolean subalgebra (e.g. a framework's event algebra); fails
/// for generic noncommuting triples.
inline bool distributive_identity_holds(const Projector& p, const Projector& q, const Projector& r,
                                        double tol = global_tolerance()) {
  detail::require_same_dim(p, q, "distributive_identity_holds");
  detail::require_same_dim(p, r, "distributive_identity_holds");
  Projector lhs = meet(p, join(q, r));
  Projector rhs = join(meet(p, q), meet(p, r));
  return approx_equal(lhs, rhs, tol);
}

}  // namespace qch
