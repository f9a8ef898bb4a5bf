#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qch/core.hpp"
#include "qch/errors.hpp"
#include "qch/hilbert.hpp"
#include "qch/logic.hpp"

namespace qch {

/// A framework is a decomposition of the identity: mutually orthogonal nonzero
/// projectors summing to I. It is the quantum sample space; its event algebra
/// consists of the elements and their sums. Construct through make_framework.
class Framework {
 public:
  Index dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  const Projector& element(std::size_t i) const { return elements_.at(i); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<Projector>& elements() const { return elements_; }
  const std::vector<std::string>& names() const { return names_; }

  friend Framework make_framework(std::vector<Projector> projectors,
                                  std::vector<std::string> names, double tol);

 private:
  Framework(Index dim, std::vector<Projector> elements, std::vector<std::string> names)
      : dim_(dim), elements_(std::move(elements)), names_(std::move(names)) {}

  Index dim_;
  std::vector<Projector> elements_;
  std::vector<std::string> names_;
};

/// Validates and builds a framework, preserving input order. Names default to
/// "e0", "e1", ... so scenario reports have stable labels.
inline Framework make_framework(std::vector<Projector> projectors,
                                std::vector<std::string> names = {},
                                double tol = global_tolerance()) {
  if (projectors.empty()) throw NotADecomposition("make_framework: no projectors");
  const Index dim = projectors.front().dim();
  for (const Projector& p : projectors)
    if (p.dim() != dim) throw DimensionMismatch("make_framework: mixed dims");
  if (names.empty()) {
    names.reserve(projectors.size());
    for (std::size_t i = 0; i < projectors.size(); ++i) names.push_back("e" + std::to_string(i));
  }
  if (names.size() != projectors.size())
    throw DimensionMismatch("make_framework: " + std::to_string(names.size()) + " names for " +
                            std::to_string(projectors.size()) + " projectors");

  for (std::size_t i = 0; i < projectors.size(); ++i)
    if (projectors[i].is_zero(tol))
      throw ZeroElement("make_framework: element '" + names[i] + "' is the zero projector");

  Matrix sum = Matrix::Zero(dim, dim);
  for (const Projector& p : projectors) sum += p.matrix();
  double defect = max_abs(Matrix(sum - Matrix::Identity(dim, dim)));
  if (defect > tol)
    throw NotADecomposition("make_framework: elements sum to I + E with max|E| = " +
                            std::to_string(defect));

  for (std::size_t i = 0; i < projectors.size(); ++i)
    for (std::size_t j = i + 1; j < projectors.size(); ++j) {
      double overlap = max_abs(Matrix(projectors[i].matrix() * projectors[j].matrix()));
      if (overlap > tol)
        throw NotOrthogonal("make_framework: elements '" + names[i] + "' and '" + names[j] +
                            "' overlap with max|PQ| = " + std::to_string(overlap));
    }

  return Framework(dim, std::move(projectors), std::move(names));
}

/// The coarsest sample space containing P: {P, I - P}.
inline Framework two_projector_framework(const Projector& p, double tol = global_tolerance()) {
  if (p.is_zero(tol) || p.is_identity(tol))
    throw DegenerateProjector("two_projector_framework: P must differ from 0 and I");
  return make_framework({p, negation(p)}, {"P", "~P"}, tol);
}

/// Two frameworks are compatible iff every projector in one commutes with
/// every projector in the other.
inline bool frameworks_compatible(const Framework& f1, const Framework& f2,
                                  double tol = global_tolerance()) {
  if (f1.dim() != f2.dim())
    throw DimensionMismatch("frameworks_compatible: dims " + std::to_string(f1.dim()) + " vs " +
                            std::to_string(f2.dim()));
  for (const Projector& p : f1.elements())
    for (const Projector& q : f2.elements())
      if (!compatible(p, q, tol)) return false;
  return true;
}

namespace detail {

struct Refinement {
  Framework framework;
  // For each refinement element, the (index in f1, index in f2) it came from.
  std::vector<std::pair<std::size_t, std::size_t>> parents;
};

inline Refinement refine(const Framework& f1, const Framework& f2, double tol) {
  if (!frameworks_compatible(f1, f2, tol))
    throw IncompatibleFrameworks(
        "common_refinement: frameworks contain noncommuting projectors; the single framework "
        "rule forbids combining them");
  std::vector<Projector> products;
  std::vector<std::string> names;
  std::vector<std::pair<std::size_t, std::size_t>> parents;
  for (std::size_t i = 0; i < f1.size(); ++i)
    for (std::size_t j = 0; j < f2.size(); ++j) {
      Matrix prod = f1.element(i).matrix() * f2.element(j).matrix();
      // Products of commuting framework elements are projectors; rank-0 ones
      // are not framework material and are dropped.
      Projector cell = Projector::unchecked(Matrix(0.5 * (prod + prod.adjoint())));
      if (cell.rank() == 0) continue;
      products.push_back(std::move(cell));
      names.push_back(f1.name(i) + "&" + f2.name(j));
      parents.emplace_back(i, j);
    }
  return Refinement{make_framework(std::move(products), std::move(names), tol),
                    std::move(parents)};
}

}  // namespace detail

/// The coarsest common refinement of two compatible frameworks: all nonzero
/// products P_i Q_j. Every event of either input is an event of the result.
/// Raises IncompatibleFrameworks when none exists (single framework rule).
inline Framework common_refinement(const Framework& f1, const Framework& f2,
                                   double tol = global_tolerance()) {
  return detail::refine(f1, f2, tol).framework;
}

/// An event: a subset of a framework's elements. Its projector is the literal
/// sum over the subset.
class Event {
 public:
  Event(Framework framework, std::vector<std::size_t> indices)
      : framework_(std::move(framework)), indices_(std::move(indices)) {
    for (std::size_t i : indices_)
      if (i >= framework_.size())
        throw DimensionMismatch("Event: index " + std::to_string(i) + " out of range");
  }

  const Framework& framework() const { return framework_; }
  const std::vector<std::size_t>& indices() const { return indices_; }
  Index dim() const { return framework_.dim(); }

  bool contains(std::size_t i) const {
    for (std::size_t k : indices_)
      if (k == i) return true;
    return false;
  }

  Projector projector() const {
    Matrix sum = Matrix::Zero(dim(), dim());
    for (std::size_t i : indices_) sum += framework_.element(i).matrix();
    return Projector::unchecked(std::move(sum));
  }

  /// The sure event (every element).
  static Event sure(const Framework& f) {
    std::vector<std::size_t> all(f.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return Event(f, std::move(all));
  }

 private:
  Framework framework_;
  std::vector<std::size_t> indices_;
};

/// "e1 AND e2". Defined only when the parent frameworks admit a common
/// refinement; the result is the event of that refinement whose projector is
/// the product of the two event projectors. This is the engine's only route
/// to a conjunction, which is what structurally enforces the single framework
/// rule: for incompatible parents the combination is meaningless (neither
/// true nor false), signalled by MeaninglessCombination.
inline Event conjoin_events(const Event& e1, const Event& e2, double tol = global_tolerance()) {
  if (e1.dim() != e2.dim())
    throw DimensionMismatch("conjoin_events: dims " + std::to_string(e1.dim()) + " vs " +
                            std::to_string(e2.dim()));
  detail::Refinement ref = [&] {
    try {
      return detail::refine(e1.framework(), e2.framework(), tol);
    } catch (const IncompatibleFrameworks& err) {
      throw MeaninglessCombination(std::string("conjoin_events: ") + err.what());
    }
  }();
  std::vector<std::size_t> picked;
  for (std::size_t k = 0; k < ref.parents.size(); ++k) {
    auto [i, j] = ref.parents[k];
    if (e1.contains(i) && e2.contains(j)) picked.push_back(k);
  }
  return Event(std::move(ref.framework), std::move(picked));
}

}  // namespace qch
