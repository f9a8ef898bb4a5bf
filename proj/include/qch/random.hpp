#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "qch/core.hpp"
#include "qch/framework.hpp"
#include "qch/hilbert.hpp"

namespace qch {

/// Seeded draws of the random objects the scenarios and property checks use.
/// Deterministic for a fixed seed and standard library implementation.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  Complex gaussian() {
    std::normal_distribution<double> n(0.0, 1.0);
    return Complex(n(rng_), n(rng_));
  }

  /// Uniform over the sphere: theta = acos(1 - 2u) in [0, pi], phi in [0, 2pi).
  Direction direction() {
    double theta = std::acos(1.0 - 2.0 * uniform(0.0, 1.0));
    double phi = uniform(0.0, 2.0 * 3.14159265358979323846);
    if (phi >= 2.0 * 3.14159265358979323846) phi = 0.0;
    return Direction(theta, phi);
  }

  Ket state(Index dim) {
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = gaussian();
    return Ket(std::move(v)).normalized();
  }

  /// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
  /// of R's diagonal absorbed into Q.
  Matrix unitary(Index dim) {
    Matrix g(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) g(i, j) = gaussian();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < dim; ++i) {
      Complex d = r(i, i);
      q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0, 0.0));
    }
    return q;
  }

  Projector projector(Index dim, int rank) {
    std::vector<Ket> span;
    for (int i = 0; i < rank; ++i) span.push_back(state(dim));
    if (span.empty()) return Projector::zero(dim);
    return projector_from_span(span);
  }

  Projector projector(Index dim) {
    return projector(dim, 1 + static_cast<int>(uniform(0.0, 1.0) * static_cast<double>(dim - 1)));
  }

  /// Random orthonormal-basis decomposition of the identity with the given
  /// block sizes (must sum to dim); with none given, a uniform random split.
  Framework framework(Index dim, std::vector<int> block_sizes = {}) {
    if (block_sizes.empty()) {
      Index left = dim;
      while (left > 0) {
        int s = 1 + static_cast<int>(uniform(0.0, 1.0) * static_cast<double>(left));
        if (s > left) s = static_cast<int>(left);
        block_sizes.push_back(s);
        left -= s;
      }
    }
    Matrix u = unitary(dim);
    std::vector<Projector> elements;
    Index col = 0;
    for (int s : block_sizes) {
      Matrix block = u.middleCols(col, s);
      elements.push_back(Projector::unchecked(Matrix(block * block.adjoint())));
      col += s;
    }
    return make_framework(std::move(elements));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qch
