#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qch/core.hpp"
#include "qch/errors.hpp"
#include "qch/framework.hpp"
#include "qch/hilbert.hpp"
#include "qch/histories.hpp"
#include "qch/logic.hpp"
#include "qch/probability.hpp"
#include "qch/random.hpp"
#include "qch/report.hpp"

namespace qch {

// ---------------------------------------------------------------------------
// Hardy construction
// ---------------------------------------------------------------------------

/// A concrete realization of the four-projector Hardy setup on two qubits:
/// A = [a] x I and C = [c] x I live on factor 1 in noncommuting bases, B and D
/// on factor 2 likewise, and the state yields the three zero joints with
/// Pr(A and not-D) positive.
struct HardyInstance {
  Ket basis_a, basis_c;  // factor-1 rays (dim 2)
  Ket basis_b, basis_d;  // factor-2 rays (dim 2)
  Ket state;             // dim 4

  Projector A() const { return tensor(projector_from_span(basis_a), Projector::identity(2)); }
  Projector C() const { return tensor(projector_from_span(basis_c), Projector::identity(2)); }
  Projector B() const { return tensor(Projector::identity(2), projector_from_span(basis_b)); }
  Projector D() const { return tensor(Projector::identity(2), projector_from_span(basis_d)); }
};

/// The committed instance: the optimum of the constrained maximization of
/// Pr(A, not-D), which lands exactly on golden-ratio values. With
/// g = (sqrt(5)-1)/2 the rays are |a> = |d> = (sqrt(g), g), |b> = |c> = (1, 0)
/// and the state is (g, g^{3/2}, 0, -g), which is unit-norm since g + g^2 = 1.
/// The maximum equals g^5 = 0.09016994...; regenerate with `hardy-search`.
inline HardyInstance shipped_hardy_instance() {
  const double g = 0.61803398874989484820;
  const double sg = std::sqrt(g);
  HardyInstance h;
  h.basis_a = Ket{Complex(sg, 0), Complex(g, 0)};
  h.basis_c = Ket{Complex(1, 0), Complex(0, 0)};
  h.basis_b = Ket{Complex(1, 0), Complex(0, 0)};
  h.basis_d = Ket{Complex(sg, 0), Complex(g, 0)};
  h.state = Ket{Complex(g, 0), Complex(g * sg, 0), Complex(0, 0), Complex(-g, 0)};
  return h;
}

namespace detail {

/// Pr(A, not-D) for real basis angles, maximized over states satisfying the
/// three zero constraints: the best state is the normalized projection of
/// a x d_perp onto the orthogonal complement of the constraint span, so the
/// objective is the squared norm of that residual.
struct HardyObjective {
  // Real 4-vectors; modified Gram-Schmidt over the three constraint vectors.
  static double value(double alpha, double beta, double gamma, double delta) {
    double a[2] = {std::cos(alpha), std::sin(alpha)};
    double b[2] = {std::cos(beta), std::sin(beta)};
    double c[2] = {std::cos(gamma), std::sin(gamma)};
    double d[2] = {std::cos(delta), std::sin(delta)};
    double bp[2] = {-b[1], b[0]};
    double cp[2] = {-c[1], c[0]};
    double dp[2] = {-d[1], d[0]};

    double n[3][4], basis[3][4];
    kron2(a, bp, n[0]);
    kron2(cp, b, n[1]);
    kron2(c, dp, n[2]);
    int nb = 0;
    for (int i = 0; i < 3; ++i) {
      double v[4] = {n[i][0], n[i][1], n[i][2], n[i][3]};
      for (int pass = 0; pass < 2; ++pass)
        for (int e = 0; e < nb; ++e) {
          double dot = 0;
          for (int k = 0; k < 4; ++k) dot += basis[e][k] * v[k];
          for (int k = 0; k < 4; ++k) v[k] -= dot * basis[e][k];
        }
      double nrm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
      if (nrm > 1e-9) {
        for (int k = 0; k < 4; ++k) basis[nb][k] = v[k] / nrm;
        ++nb;
      }
    }
    double phi[4];
    kron2(a, dp, phi);
    for (int e = 0; e < nb; ++e) {
      double dot = 0;
      for (int k = 0; k < 4; ++k) dot += basis[e][k] * phi[k];
      for (int k = 0; k < 4; ++k) phi[k] -= dot * basis[e][k];
    }
    return phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2] + phi[3] * phi[3];
  }

  static void kron2(const double x[2], const double y[2], double out[4]) {
    out[0] = x[0] * y[0];
    out[1] = x[0] * y[1];
    out[2] = x[1] * y[0];
    out[3] = x[1] * y[1];
  }
};

}  // namespace detail

struct HardySearchResult {
  HardyInstance instance;
  double max_joint = 0.0;  // the found maximum of Pr(A, not-D)
  double alpha = 0.0, delta = 0.0;
};

/// Regenerates the committed instance: gauge-fixes |b> = |c> = (1,0) (a local
/// rotation per qubit costs nothing) and maximizes Pr(A, not-D) over the two
/// remaining basis angles by a coarse scan plus shrinking coordinate descent.
/// The optimal state is recovered from the constraint nullspace.
inline HardySearchResult hardy_search(int coarse = 180, int refine_rounds = 64) {
  constexpr double pi = 3.14159265358979323846;
  auto objective = [](double alpha, double delta) {
    return detail::HardyObjective::value(alpha, 0.0, 0.0, delta);
  };

  double best = -1.0, ba = 0.0, bd = 0.0;
  for (int i = 0; i < coarse; ++i)
    for (int j = 0; j < coarse; ++j) {
      double alpha = pi * i / coarse, delta = pi * j / coarse;
      double v = objective(alpha, delta);
      if (v > best) {
        best = v;
        ba = alpha;
        bd = delta;
      }
    }
  double step = pi / coarse;
  for (int round = 0; round < refine_rounds; ++round) {
    bool improved = false;
    for (int axis = 0; axis < 2; ++axis)
      for (double s : {-step, step}) {
        double a2 = ba + (axis == 0 ? s : 0.0), d2 = bd + (axis == 1 ? s : 0.0);
        double v = objective(a2, d2);
        if (v > best) {
          best = v;
          ba = a2;
          bd = d2;
          improved = true;
        }
      }
    if (!improved) step *= 0.5;
  }
  if (best < 0.05)
    throw ConstructionFailed("hardy_search: converged to " + std::to_string(best) +
                             ", below any usable Hardy violation");

  HardySearchResult r;
  r.max_joint = best;
  r.alpha = ba;
  r.delta = bd;
  r.instance.basis_a = Ket{Complex(std::cos(ba), 0), Complex(std::sin(ba), 0)};
  r.instance.basis_c = Ket{Complex(1, 0), Complex(0, 0)};
  r.instance.basis_b = Ket{Complex(1, 0), Complex(0, 0)};
  r.instance.basis_d = Ket{Complex(std::cos(bd), 0), Complex(std::sin(bd), 0)};

  // State: project a x d_perp onto the constraint nullspace and normalize.
  Ket a = r.instance.basis_a, d = r.instance.basis_d;
  Ket dp{Complex(-d.amps(1).real(), 0), Complex(d.amps(0).real(), 0)};
  Ket e0{Complex(1, 0), Complex(0, 0)}, e1{Complex(0, 0), Complex(1, 0)};
  std::vector<Ket> constraints = {tensor(a, e1), tensor(e1, e0), tensor(e0, dp)};
  Projector span = projector_from_span(constraints);
  Vector phi = tensor(a, dp).amps;
  Vector resid = phi - span.matrix() * phi;
  double nrm = resid.norm();
  if (nrm < 1e-8) throw ConstructionFailed("hardy_search: constraint nullspace degenerate");
  r.instance.state = Ket(Vector(resid / nrm));
  return r;
}

/// Reproduces the Hardy-paradox bookkeeping on the committed instance: the
/// commutation pattern, the three zero joints with the fourth positive, the
/// conditional chain with its broken last link, and the structural refusal to
/// build the single sample space the Venn-diagram argument would need.
inline ScenarioReport hardy_scenario(double tol = global_tolerance()) {
  HardyInstance h = shipped_hardy_instance();
  Projector A = h.A(), B = h.B(), C = h.C(), D = h.D();
  const Ket& psi = h.state;
  if (!psi.is_normalized(tol))
    throw ConstructionFailed("hardy_scenario: shipped state not normalized");

  ScenarioReport r;
  r.name = "hardy";

  auto comm = [](const Projector& p, const Projector& q) {
    return max_abs(Matrix(p.matrix() * q.matrix() - q.matrix() * p.matrix()));
  };
  r.lines.push_back({"max|AC - CA| (noncommuting pair)", comm(A, C), Bound::at_least(0.01)});
  r.lines.push_back({"max|BD - DB| (noncommuting pair)", comm(B, D), Bound::at_least(0.01)});
  r.lines.push_back({"max|AB - BA|", comm(A, B), Bound::at_most(1e-12)});
  r.lines.push_back({"max|AD - DA|", comm(A, D), Bound::at_most(1e-12)});
  r.lines.push_back({"max|CB - BC|", comm(C, B), Bound::at_most(1e-12)});
  r.lines.push_back({"max|CD - DC|", comm(C, D), Bound::at_most(1e-12)});

  r.lines.push_back({"Pr(A,~B)", joint_probability(A, negation(B), psi, tol), Bound::at_most(1e-10)});
  r.lines.push_back({"Pr(B,~C)", joint_probability(B, negation(C), psi, tol), Bound::at_most(1e-10)});
  r.lines.push_back({"Pr(C,~D)", joint_probability(C, negation(D), psi, tol), Bound::at_most(1e-10)});
  r.lines.push_back({"Pr(A,~D)", joint_probability(A, negation(D), psi, tol), Bound::at_least(0.05)});

  r.lines.push_back({"Pr(B|A)", conditional_probability(B, A, psi, tol), Bound::equals(1.0, 1e-10)});
  r.lines.push_back({"Pr(C|B)", conditional_probability(C, B, psi, tol), Bound::equals(1.0, 1e-10)});
  r.lines.push_back({"Pr(D|C)", conditional_probability(D, C, psi, tol), Bound::equals(1.0, 1e-10)});
  r.lines.push_back({"Pr(D|A)", conditional_probability(D, A, psi, tol), Bound::at_most(0.95)});

  // The Venn-diagram contradiction needs one sample space carrying A, B, C, D
  // at once. Chaining refinements over the four two-element frameworks must
  // therefore fail at the first incompatible join.
  Framework fa = two_projector_framework(A, tol), fb = two_projector_framework(B, tol);
  Framework fc = two_projector_framework(C, tol), fd = two_projector_framework(D, tol);
  ErrorDemo venn{"single sample space for A,B,C,D via chained common_refinement",
                 "IncompatibleFrameworks", ""};
  try {
    Framework r1 = common_refinement(fa, fb, tol);
    Framework r2 = common_refinement(r1, fc, tol);
    common_refinement(r2, fd, tol);
  } catch (const Error& e) {
    venn.raised_kind = to_string(e.kind());
  }
  r.errors.push_back(venn);

  ErrorDemo conj{"conjoin the A-event with the C-event", "MeaninglessCombination", ""};
  try {
    conjoin_events(Event(fa, {0}), Event(fc, {0}), tol);
  } catch (const Error& e) {
    conj.raised_kind = to_string(e.kind());
  }
  r.errors.push_back(conj);

  return r;
}

// ---------------------------------------------------------------------------
// Einstein locality on the singlet
// ---------------------------------------------------------------------------

/// Builds the t1/t2/t3 family with S_aw at t1 and t3 and S_bv measured at t2,
/// optionally with a b-side unitary folded into every dynamics step, and
/// reports consistency together with the two-time zeros and ones.
inline ScenarioReport singlet_locality_scenario(const Direction& w, const Direction& v,
                                                const std::optional<Matrix>& b_unitary = {},
                                                double tol = global_tolerance()) {
  Matrix u_b = b_unitary.value_or(Matrix::Identity(2, 2));
  if (u_b.rows() != 2 || u_b.cols() != 2)
    throw DimensionMismatch("singlet_locality_scenario: b unitary must be 2x2");
  Matrix step = tensor(Matrix(Matrix::Identity(2, 2)), u_b);

  Projector wa_plus = tensor(projector_from_span(spin_ket(w, +1)), Projector::identity(2));
  Projector wa_minus = tensor(projector_from_span(spin_ket(w, -1)), Projector::identity(2));
  Framework measure = make_framework(
      {tensor(Projector::identity(2), projector_from_span(spin_ket(v, +1))),
       tensor(Projector::identity(2), projector_from_span(spin_ket(v, -1)))},
      {"v+", "v-"}, tol);

  TwoTimeContext ctx{singlet(), Dynamics({0, 1, 2, 3}, {step, step, step}, tol), 1, 3,
                     std::make_pair(2, measure)};

  ScenarioReport r;
  r.name = "singlet";
  ConsistencyReport cons =
      consistency_check(detail::two_time_family(wa_plus, wa_plus, ctx, tol), tol);
  r.lines.push_back({"family Gram max off-diagonal", cons.max_off_diagonal, Bound::at_most(tol)});
  r.lines.push_back({"Pr([w+a],t3; [w-a],t1)", two_time_joint(wa_minus, wa_plus, ctx, tol),
                     Bound::at_most(1e-12)});
  r.lines.push_back({"Pr([w-a],t3; [w+a],t1)", two_time_joint(wa_plus, wa_minus, ctx, tol),
                     Bound::at_most(1e-12)});
  r.lines.push_back({"Pr([w+a],t3 | [w+a],t1)", two_time_conditional(wa_plus, wa_plus, ctx, tol),
                     Bound::equals(1.0, 1e-12)});
  r.lines.push_back({"Pr([w-a],t3 | [w-a],t1)", two_time_conditional(wa_minus, wa_minus, ctx, tol),
                     Bound::equals(1.0, 1e-12)});
  return r;
}

// ---------------------------------------------------------------------------
// Ensemble ambiguity of the reduced density matrix
// ---------------------------------------------------------------------------

/// The z-ensemble and x-ensemble of the singlet's reduced state are different
/// stories with the same density matrix; so is any equal mix of antipodal
/// spin directions. The report exhibits the matrices and their agreement.
inline ScenarioReport ensemble_ambiguity_scenario(std::uint64_t seed = 0,
                                                  double tol = global_tolerance()) {
  auto mix = [&](const Direction& dir) {
    Ensemble e;
    e.entries.emplace_back(0.5, spin_ket(dir, +1));
    e.entries.emplace_back(0.5, spin_ket(dir, -1));
    return ensemble_to_density(e, tol);
  };
  DensityMatrix rho_z = mix(Direction::z());
  DensityMatrix rho_x = mix(Direction::x());
  Matrix half_identity = 0.5 * Matrix::Identity(2, 2);

  ScenarioReport r;
  r.name = "ensemble";
  r.lines.push_back({"max|rho_z - rho_x|", max_abs(Matrix(rho_z.matrix() - rho_x.matrix())),
                     Bound::at_most(1e-12)});
  r.lines.push_back({"max|rho_z - I/2|", max_abs(Matrix(rho_z.matrix() - half_identity)),
                     Bound::at_most(1e-12)});
  r.lines.push_back({"max|rho_x - I/2|", max_abs(Matrix(rho_x.matrix() - half_identity)),
                     Bound::at_most(1e-12)});

  RandomSource rng(seed);
  for (int i = 0; i < 5; ++i) {
    DensityMatrix rho_w = mix(rng.direction());
    r.lines.push_back({"random antipodal ensemble " + std::to_string(i) + ": max|rho - I/2|",
                       max_abs(Matrix(rho_w.matrix() - half_identity)), Bound::at_most(1e-12)});
  }
  r.matrices.emplace_back("rho_z", rho_z.matrix());
  r.matrices.emplace_back("rho_x", rho_x.matrix());
  return r;
}

// ---------------------------------------------------------------------------
// Dragon / pointer toy model
// ---------------------------------------------------------------------------

/// Two-qubit measurement toy: system alpha|z+> + beta|z->, pointer |0>, and a
/// controlled flip recording the spin in the pointer. Reports the unitary
/// framework's incompatibility with pointer talk, the dragon framework's
/// pointer probabilities, and the measurement framework's retrodiction.
inline ScenarioReport dragon_scenario(Complex alpha, Complex beta,
                                      double tol = global_tolerance()) {
  double norm2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm2 - 1.0) > tol)
    throw UnnormalizedState("dragon_scenario: |alpha|^2 + |beta|^2 = " + std::to_string(norm2));

  // U: |z+,0> -> |z+,0>, |z-,0> -> |z-,1> (and the flip back on the 1 sector).
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = 1;
  u(1, 1) = 1;
  u(3, 2) = 1;
  u(2, 3) = 1;

  Ket psi0 = tensor(Ket{alpha, beta}, Ket{Complex(1, 0), Complex(0, 0)});
  Ket psi1(Vector(u * psi0.amps));

  Projector pointer0 = tensor(Projector::identity(2), Projector::unchecked([] {
                                Matrix m = Matrix::Zero(2, 2);
                                m(0, 0) = 1;
                                return m;
                              }()));
  Projector pointer1 = negation(pointer0);
  Projector psi1_proj = projector_from_span(psi1, tol);

  auto comm = [](const Projector& p, const Projector& q) {
    return max_abs(Matrix(p.matrix() * q.matrix() - q.matrix() * p.matrix()));
  };
  double ab = std::abs(alpha) * std::abs(beta);

  ScenarioReport r;
  r.name = "dragon";
  r.lines.push_back({"max|[Psi1](Ix[0]) - (Ix[0])[Psi1]|", comm(psi1_proj, pointer0),
                     Bound::equals(ab, 1e-12)});
  r.lines.push_back({"max|[Psi1](Ix[1]) - (Ix[1])[Psi1]|", comm(psi1_proj, pointer1),
                     Bound::equals(ab, 1e-12)});
  r.lines.push_back({"Pr(pointer = 0)", born_probability(pointer0, psi1, tol),
                     Bound::equals(std::norm(alpha), 1e-12)});
  r.lines.push_back({"Pr(pointer = 1)", born_probability(pointer1, psi1, tol),
                     Bound::equals(std::norm(beta), 1e-12)});

  if (std::norm(beta) > condition_eps) {
    Projector sz_minus = tensor(Projector::unchecked([] {
                                  Matrix m = Matrix::Zero(2, 2);
                                  m(1, 1) = 1;
                                  return m;
                                }()),
                                Projector::identity(2));
    TwoTimeContext ctx{psi0, Dynamics({0, 1, 2}, {Matrix::Identity(4, 4), u}, tol), 1, 2, {}};
    double joint = two_time_joint(sz_minus, pointer1, ctx, tol);
    double marginal = chain_vector(History(psi0, {{2, pointer1}}), ctx.dynamics, tol).norm_squared();
    r.lines.push_back({"Pr(S_z=-1/2 at t1 | pointer=1 at t2)", joint / marginal,
                       Bound::equals(1.0, 1e-12)});
  }

  if (ab > tol) {
    ErrorDemo demo{"conjoin unitary-framework event [Psi1] with a pointer event",
                   "MeaninglessCombination", ""};
    try {
      conjoin_events(Event(two_projector_framework(psi1_proj, tol), {0}),
                     Event(two_projector_framework(pointer1, tol), {0}), tol);
    } catch (const Error& e) {
      demo.raised_kind = to_string(e.kind());
    }
    r.errors.push_back(demo);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Brownian analogy
// ---------------------------------------------------------------------------

/// Probability density (4 pi D t)^{-3/2} exp(-r^2 / 4 D t) for a Brownian
/// particle released from the origin. Units: r in length, t in time, D in
/// length^2/time; the result is a density in length^-3 (documented, not
/// enforced by types).
inline double brownian_density(double r, double t, double d) {
  if (!(t > 0.0)) throw NonpositiveTime("brownian_density: t = " + std::to_string(t));
  if (!(d > 0.0)) throw NonpositiveDiffusion("brownian_density: D = " + std::to_string(d));
  if (r < 0.0) throw std::invalid_argument("brownian_density: r must be nonnegative");
  constexpr double pi = 3.14159265358979323846;
  double denom = 4.0 * pi * d * t;
  return std::pow(denom, -1.5) * std::exp(-r * r / (4.0 * d * t));
}

inline ScenarioReport brownian_scenario(double r, double t, double d) {
  ScenarioReport rep;
  rep.name = "brownian";
  double at_r = brownian_density(r, t, d);
  double at_half = brownian_density(0.5 * r, t, d);
  double at_zero = brownian_density(0.0, t, d);
  rep.lines.push_back({"rho(r,t)", at_r, Bound::none()});
  rep.lines.push_back({"rho(r/2,t)", at_half, Bound::none()});
  rep.lines.push_back({"rho(0,t) (peak)", at_zero, Bound::none()});
  rep.lines.push_back({"monotone: rho(r) - rho(r/2)", at_r - at_half, Bound::at_most(0.0)});
  rep.lines.push_back({"monotone: rho(r/2) - rho(0)", at_half - at_zero, Bound::at_most(0.0)});
  return rep;
}

// ---------------------------------------------------------------------------
// Classical marginal ambiguity
// ---------------------------------------------------------------------------

/// Two classical two-time processes on {+,-} with the same uniform marginals
/// at both times and different joints: persistence (stay put) and full
/// randomization. The single-time distribution cannot tell them apart, which
/// is the classical face of the density-matrix-is-not-enough argument.
inline ScenarioReport marginal_ambiguity_scenario() {
  const double m1[2] = {0.5, 0.5};
  const double persist[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
  const double randomize[2][2] = {{0.5, 0.5}, {0.5, 0.5}};
  const char* outcome[2] = {"+", "-"};

  ScenarioReport r;
  r.name = "marginals";
  double joint_p[2][2], joint_r[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      joint_p[i][j] = m1[i] * persist[i][j];
      joint_r[i][j] = m1[i] * randomize[i][j];
    }

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double expect = (i == j) ? 0.5 : 0.0;
      r.lines.push_back({std::string("persist joint Pr(") + outcome[i] + "," + outcome[j] + ")",
                         joint_p[i][j], Bound::equals(expect, 1e-15)});
    }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.lines.push_back({std::string("randomize joint Pr(") + outcome[i] + "," + outcome[j] + ")",
                         joint_r[i][j], Bound::equals(0.25, 1e-15)});

  for (int i = 0; i < 2; ++i) {
    double t2_p = joint_p[0][i] + joint_p[1][i];
    double t2_r = joint_r[0][i] + joint_r[1][i];
    r.lines.push_back({std::string("persist marginal t1(") + outcome[i] + ")", m1[i],
                       Bound::equals(0.5, 1e-15)});
    r.lines.push_back({std::string("persist marginal t2(") + outcome[i] + ")", t2_p,
                       Bound::equals(0.5, 1e-15)});
    r.lines.push_back({std::string("randomize marginal t2(") + outcome[i] + ")", t2_r,
                       Bound::equals(0.5, 1e-15)});
  }

  double max_joint_diff = 0.0, max_marg_diff = 0.0;
  for (int i = 0; i < 2; ++i) {
    max_marg_diff = std::max(max_marg_diff,
                             std::abs((joint_p[0][i] + joint_p[1][i]) -
                                      (joint_r[0][i] + joint_r[1][i])));
    for (int j = 0; j < 2; ++j)
      max_joint_diff = std::max(max_joint_diff, std::abs(joint_p[i][j] - joint_r[i][j]));
  }
  r.lines.push_back({"max marginal difference", max_marg_diff, Bound::at_most(1e-15)});
  r.lines.push_back({"max joint difference", max_joint_diff, Bound::at_least(0.2)});
  return r;
}

}  // namespace qch
