#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qch/core.hpp"
#include "qch/errors.hpp"
#include "qch/framework.hpp"
#include "qch/hilbert.hpp"
#include "qch/probability.hpp"

namespace qch {

/// Unitary time development over a grid t_0 < t_1 < ... < t_n. Step k carries
/// the unitary mapping t_{k-1} to t_k; the labels themselves are dimensionless
/// bookkeeping. Zero-field evolution is the all-identity special case.
class Dynamics {
 public:
  Dynamics(std::vector<double> times, std::vector<Matrix> steps, double tol = global_tolerance())
      : times_(std::move(times)), steps_(std::move(steps)) {
    if (times_.size() != steps_.size() + 1)
      throw TimeMismatch("Dynamics: " + std::to_string(times_.size()) + " time labels for " +
                         std::to_string(steps_.size()) + " steps");
    for (std::size_t i = 0; i + 1 < times_.size(); ++i)
      if (!(times_[i] < times_[i + 1]))
        throw TimeMismatch("Dynamics: time labels must be strictly increasing");
    if (steps_.empty()) throw TimeMismatch("Dynamics: at least one step required");
    const Index d = steps_.front().rows();
    for (const Matrix& u : steps_) {
      if (u.rows() != d || u.cols() != d) throw DimensionMismatch("Dynamics: mixed step dims");
      double defect = max_abs(Matrix(u.adjoint() * u - Matrix::Identity(d, d)));
      if (defect > tol)
        throw std::invalid_argument("Dynamics: step is not unitary, |U^H U - I| = " +
                                    std::to_string(defect));
    }
  }

  /// Identity dynamics on labels 0, 1, ..., n_steps.
  static Dynamics trivial(Index dim, int n_steps) {
    std::vector<double> times(static_cast<std::size_t>(n_steps) + 1);
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i);
    std::vector<Matrix> steps(static_cast<std::size_t>(n_steps), Matrix::Identity(dim, dim));
    return Dynamics(std::move(times), std::move(steps));
  }

  Index dim() const { return steps_.front().rows(); }
  int step_count() const { return static_cast<int>(steps_.size()); }
  double time(int k) const { return times_.at(static_cast<std::size_t>(k)); }
  /// U_k : t_{k-1} -> t_k, for k in [1, step_count()].
  const Matrix& step(int k) const { return steps_.at(static_cast<std::size_t>(k - 1)); }

 private:
  std::vector<double> times_;
  std::vector<Matrix> steps_;
};

/// One event per listed time, applied to an initial state: the raw material of
/// a multi-time quantum description.
struct HistoryStep {
  int time;  // grid index, >= 1
  Projector projector;
};

struct History {
  Ket initial;
  std::vector<HistoryStep> steps;

  History(Ket initial_state, std::vector<HistoryStep> s)
      : initial(std::move(initial_state)), steps(std::move(s)) {
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (steps[i].time < 1) throw TimeMismatch("History: time indices start at 1");
      if (i > 0 && steps[i].time <= steps[i - 1].time)
        throw TimeMismatch("History: times must be strictly increasing");
      if (steps[i].projector.dim() != initial.dim())
        throw DimensionMismatch("History: projector dim " +
                                std::to_string(steps[i].projector.dim()) + " vs state dim " +
                                std::to_string(initial.dim()));
    }
  }
};

/// K = P_n U_n ... P_1 U_1 |Psi_0>, unnormalized. Unitaries are composed
/// across grid points the history does not mention (those times contribute I).
/// The squared norm is the history's probability once the family is known to
/// be consistent.
inline Ket chain_vector(const History& h, const Dynamics& dyn, double tol = global_tolerance()) {
  if (h.initial.dim() != dyn.dim())
    throw DimensionMismatch("chain_vector: state dim " + std::to_string(h.initial.dim()) +
                            " vs dynamics dim " + std::to_string(dyn.dim()));
  if (!h.steps.empty() && h.steps.back().time > dyn.step_count())
    throw TimeMismatch("chain_vector: history time " + std::to_string(h.steps.back().time) +
                       " beyond grid with " + std::to_string(dyn.step_count()) + " steps");
  detail::require_normalized(h.initial, "chain_vector", tol);

  Vector v = h.initial.amps;
  std::size_t next = 0;
  int last = h.steps.empty() ? 0 : h.steps.back().time;
  for (int k = 1; k <= last; ++k) {
    v = dyn.step(k) * v;
    if (next < h.steps.size() && h.steps[next].time == k) {
      v = h.steps[next].projector.matrix() * v;
      ++next;
    }
  }
  return Ket(std::move(v));
}

/// A family of histories: one framework per grid time, every element
/// combination giving one history. Probabilities make sense only when the
/// family is consistent.
class HistoryFamily {
 public:
  HistoryFamily(Ket initial, Dynamics dynamics, std::vector<Framework> frameworks,
                double tol = global_tolerance())
      : initial_(std::move(initial)), dynamics_(std::move(dynamics)),
        frameworks_(std::move(frameworks)) {
    if (static_cast<int>(frameworks_.size()) != dynamics_.step_count())
      throw TimeMismatch("HistoryFamily: " + std::to_string(frameworks_.size()) +
                         " frameworks for " + std::to_string(dynamics_.step_count()) + " steps");
    for (const Framework& f : frameworks_)
      if (f.dim() != dynamics_.dim())
        throw DimensionMismatch("HistoryFamily: framework dim " + std::to_string(f.dim()) +
                                " vs dynamics dim " + std::to_string(dynamics_.dim()));
    detail::require_normalized(initial_, "HistoryFamily", tol);
  }

  const Ket& initial() const { return initial_; }
  const Dynamics& dynamics() const { return dynamics_; }
  const std::vector<Framework>& frameworks() const { return frameworks_; }
  const Framework& framework_at(int time) const {
    return frameworks_.at(static_cast<std::size_t>(time - 1));
  }

  std::uint64_t history_count() const {
    std::uint64_t n = 1;
    for (const Framework& f : frameworks_) {
      n *= f.size();
      if (n > max_histories) return n;  // saturated; caller raises FamilyTooLarge
    }
    return n;
  }

  /// The history selecting element combo[k] from the framework at time k+1.
  History history(const std::vector<std::size_t>& combo) const {
    if (combo.size() != frameworks_.size())
      throw TimeMismatch("HistoryFamily::history: combo length " + std::to_string(combo.size()));
    std::vector<HistoryStep> steps;
    steps.reserve(combo.size());
    for (std::size_t k = 0; k < combo.size(); ++k)
      steps.push_back({static_cast<int>(k) + 1, frameworks_[k].element(combo[k])});
    return History(initial_, std::move(steps));
  }

  /// Streams every element combination in odometer order (last time fastest).
  template <class Fn>
  void for_each_history(Fn&& fn) const {
    std::vector<std::size_t> combo(frameworks_.size(), 0);
    while (true) {
      fn(std::as_const(combo));
      std::size_t k = combo.size();
      while (k > 0) {
        --k;
        if (++combo[k] < frameworks_[k].size()) break;
        combo[k] = 0;
        if (k == 0) return;
      }
    }
  }

  static constexpr std::uint64_t max_histories = 1000000;

 private:
  Ket initial_;
  Dynamics dynamics_;
  std::vector<Framework> frameworks_;
};

struct ConsistencyReport {
  bool consistent = false;
  double max_off_diagonal = 0.0;
  Eigen::MatrixXcd gram;                          // <K_alpha | K_beta>
  std::vector<std::vector<std::size_t>> combos;   // row/column labels
};

/// Gell-Mann-Hartle style consistency for a pure initial state: the family is
/// consistent iff the chain kets are pairwise orthogonal. The Gram matrix is
/// assembled row by row from the streamed histories.
inline ConsistencyReport consistency_check(const HistoryFamily& fam,
                                           double tol = global_tolerance()) {
  std::uint64_t count = fam.history_count();
  if (count > HistoryFamily::max_histories)
    throw FamilyTooLarge("consistency_check: family has more than " +
                         std::to_string(HistoryFamily::max_histories) + " histories");

  std::vector<Vector> chains;
  ConsistencyReport report;
  chains.reserve(static_cast<std::size_t>(count));
  fam.for_each_history([&](const std::vector<std::size_t>& combo) {
    chains.push_back(chain_vector(fam.history(combo), fam.dynamics(), tol).amps);
    report.combos.push_back(combo);
  });

  const Index n = static_cast<Index>(chains.size());
  report.gram.resize(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) report.gram(i, j) = chains[i].dot(chains[j]);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) report.max_off_diagonal = std::max(report.max_off_diagonal,
                                                     std::abs(report.gram(i, j)));
  report.consistent = report.max_off_diagonal <= tol;
  return report;
}

/// ||chain_vector(h)||^2, gated on the family being consistent. Probabilities
/// are refused for inconsistent families: the single framework rule for
/// histories.
inline double history_probability(const History& h, const HistoryFamily& fam,
                                  double tol = global_tolerance()) {
  ConsistencyReport rep = consistency_check(fam, tol);
  if (!rep.consistent)
    throw InconsistentFamily("history_probability: chain kets overlap up to " +
                             std::to_string(rep.max_off_diagonal));
  double p = chain_vector(h, fam.dynamics(), tol).norm_squared();
  return detail::clamp_probability(p, "history_probability");
}

/// Context for a two-time question: an initial state, the
/// dynamics grid, the two times of interest, and optionally a measurement
/// framework inserted at an intermediate time.
struct TwoTimeContext {
  Ket initial;
  Dynamics dynamics;
  int t1 = 1;
  int t3 = -1;  // defaults to the last grid time
  std::optional<std::pair<int, Framework>> measurement;

  int resolved_t3() const { return t3 > 0 ? t3 : dynamics.step_count(); }
};

namespace detail {

inline Framework coarse_framework(const Projector& p, double tol) {
  if (p.is_zero(tol))
    throw DegenerateProjector("two_time: event projector is zero");
  if (p.is_identity(tol)) return make_framework({p}, {"I"}, tol);
  return two_projector_framework(p, tol);
}

inline HistoryFamily two_time_family(const Projector& p1, const Projector& p3,
                                     const TwoTimeContext& ctx, double tol) {
  const int t1 = ctx.t1;
  const int t3 = ctx.resolved_t3();
  const int n = ctx.dynamics.step_count();
  if (t1 < 1 || t3 > n || t1 >= t3)
    throw TimeMismatch("two_time: need 1 <= t1 < t3 <= " + std::to_string(n));
  Framework trivial_fw = make_framework({Projector::identity(ctx.dynamics.dim())}, {"I"}, tol);
  std::vector<Framework> fws(static_cast<std::size_t>(n), trivial_fw);
  fws[static_cast<std::size_t>(t1 - 1)] = coarse_framework(p1, tol);
  fws[static_cast<std::size_t>(t3 - 1)] = coarse_framework(p3, tol);
  if (ctx.measurement) {
    const auto& [t2, fw] = *ctx.measurement;
    if (t2 <= t1 || t2 >= t3)
      throw TimeMismatch("two_time: measurement time must lie strictly between t1 and t3");
    fws[static_cast<std::size_t>(t2 - 1)] = fw;
  }
  return HistoryFamily(ctx.initial, ctx.dynamics, std::move(fws), tol);
}

}  // namespace detail

/// Pr(P1 at t1 ; P3 at t3): the marginal joint probability over whatever is
/// measured in between, computed in the family {P1, I-P1} / measurement /
/// {P3, I-P3}. Requires that family to be consistent.
inline double two_time_joint(const Projector& p1, const Projector& p3, const TwoTimeContext& ctx,
                             double tol = global_tolerance()) {
  HistoryFamily fam = detail::two_time_family(p1, p3, ctx, tol);
  ConsistencyReport rep = consistency_check(fam, tol);
  if (!rep.consistent)
    throw InconsistentFamily("two_time_joint: chain kets overlap up to " +
                             std::to_string(rep.max_off_diagonal));
  const int t1 = ctx.t1;
  const int t3 = ctx.resolved_t3();
  double total = 0.0;
  auto middle = [&]() -> std::vector<Projector> {
    if (!ctx.measurement) return {Projector::identity(ctx.dynamics.dim())};
    return ctx.measurement->second.elements();
  }();
  for (const Projector& m : middle) {
    std::vector<HistoryStep> steps;
    steps.push_back({t1, p1});
    if (ctx.measurement) steps.push_back({ctx.measurement->first, m});
    steps.push_back({t3, p3});
    std::sort(steps.begin(), steps.end(),
              [](const HistoryStep& x, const HistoryStep& y) { return x.time < y.time; });
    total += chain_vector(History(ctx.initial, std::move(steps)), ctx.dynamics, tol).norm_squared();
  }
  return detail::clamp_probability(total, "two_time_joint");
}

/// Pr(P3 at t3 | P1 at t1) = two_time_joint / Pr(P1 at t1).
inline double two_time_conditional(const Projector& p3, const Projector& p1,
                                   const TwoTimeContext& ctx, double tol = global_tolerance(),
                                   double eps = condition_eps) {
  double joint = two_time_joint(p1, p3, ctx, tol);
  double p_first =
      chain_vector(History(ctx.initial, {{ctx.t1, p1}}), ctx.dynamics, tol).norm_squared();
  if (p_first <= eps)
    throw ZeroCondition("two_time_conditional: Pr(P1 at t1) = " + std::to_string(p_first));
  return detail::clamp_probability(joint / p_first, "two_time_conditional");
}

}  // namespace qch
