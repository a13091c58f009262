#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pennyflip/gamesim.hpp"
#include "pennyflip/qalg.hpp"

namespace pennyflip {

// ---------------------------------------------------------------------------
// Closed-form winning-strategy families
// ---------------------------------------------------------------------------

/// Q's Hadamard pair against the classical adversary {1, sigma1}.
inline StrategyPair meyer_hadamard() { return {hadamard(), hadamard()}; }

/// Modified flipping operator F(alpha) = e^{i alpha sigma3/2} sigma1.
inline UnitaryOp flip_op(double alpha) {
  Complex ep = std::exp(Complex(0, alpha / 2)), em = std::exp(Complex(0, -alpha / 2));
  return UnitaryOp(Mat2{{0, ep, em, 0}});
}

/// Modified non-flipping operator N(beta) = e^{i beta sigma3/2}.
inline UnitaryOp nonflip_op(double beta) {
  Complex ep = std::exp(Complex(0, beta / 2)), em = std::exp(Complex(0, -beta / 2));
  return UnitaryOp(Mat2{{ep, 0, 0, em}});
}

struct ChappellParams {
  double theta;
  double phi = 0;
  double delta1 = 0;
  double delta2 = 0;
  int a_sign = +1;
  int b_sign = +1;
};

struct PhaseVariableParams {
  double theta;
  double phi = 0;
  double alpha = 0;  // adversary's F phase
  double beta = 0;   // adversary's N phase
  double delta1 = 0;
  double delta2 = 0;
  int a_sign = +1;
  int b_sign = +1;

  double delta() const { return alpha - beta; }
};

namespace detail {

inline double cot_half(double theta) {
  double s = std::sin(theta / 2);
  if (std::abs(s) < kEpsSing) throw std::domain_error("cot(theta/2) diverges at theta in 2*pi*Z");
  return std::cos(theta / 2) / s;
}

// a = +-sqrt((1 - cot^2(theta/2)) / 2); real only for |theta| in [pi/2, 3pi/2].
inline double family_a(double k, int a_sign) {
  double arg = 0.5 * (1.0 - k * k);
  if (arg < -1e-12)
    throw std::domain_error("theta outside [pi/2, 3pi/2] in magnitude: axis component is imaginary");
  return (a_sign >= 0 ? 1.0 : -1.0) * std::sqrt(std::max(0.0, arg));
}

// First-move axis for the phase-variable game, Delta = alpha - beta.
// Derived from U1† N† F U1 = +-sigma3 under the e^{+i theta n.sigma/2}
// convention; reduces to (b k, a b, a) at Delta = -pi and to the
// sigma1-game axis (a b, -b k, a) at Delta = 0.
inline Vec3 family_axis(double theta, double delta_angle, int a_sign, int b_sign) {
  double k = cot_half(theta);
  double a = family_a(k, a_sign);
  double b = b_sign >= 0 ? 1.0 : -1.0;
  double cd = std::cos(delta_angle / 2), sd = std::sin(delta_angle / 2);
  return {b * (a * cd - k * sd), -b * (k * cd + a * sd), a};
}

inline UnitaryOp scaled(Complex phase, const Mat2& m) { return UnitaryOp(phase * m); }

}  // namespace detail

/// Axis of U1 for the {F(alpha), N(beta)} game (unit norm by construction).
inline Vec3 phase_variable_axis(const PhaseVariableParams& p) {
  return detail::family_axis(p.theta, p.delta(), p.a_sign, p.b_sign);
}

/// Complete winning family against the phase-variable adversary
/// {F(alpha), N(beta)}:  U2 = e^{i delta2} e^{i phi sigma3/2} U1† N(beta)†.
inline StrategyPair phase_variable_family(const PhaseVariableParams& p) {
  UnitaryOp u1 = from_axis_angle({p.delta1, p.theta, phase_variable_axis(p)});
  Mat2 m2 = nonflip_op(p.phi).mat() * u1.adjoint().mat() * nonflip_op(p.beta).adjoint().mat();
  return {u1, detail::scaled(std::exp(Complex(0, p.delta2)), m2)};
}

/// Winning family against Meyer's classical adversary {1, sigma1}
/// (the phase-variable family at Delta = 0).
inline StrategyPair chappell_family(const ChappellParams& p) {
  Vec3 axis = detail::family_axis(p.theta, 0.0, p.a_sign, p.b_sign);
  UnitaryOp u1 = from_axis_angle({p.delta1, p.theta, axis});
  Mat2 m2 = nonflip_op(p.phi).mat() * u1.adjoint().mat();
  return {u1, detail::scaled(std::exp(Complex(0, p.delta2)), m2)};
}

/// Winning family against the non-Abelian adversary {sigma1, sigma3}:
/// axis (b cot(theta/2), a b, a), U2 = e^{i delta2} e^{i phi sigma3/2} U1† sigma3.
inline StrategyPair sigma13_family(const ChappellParams& p) {
  double k = detail::cot_half(p.theta);
  double a = detail::family_a(k, p.a_sign);
  double b = p.b_sign >= 0 ? 1.0 : -1.0;
  Vec3 axis{b * k, a * b, a};
  UnitaryOp u1 = from_axis_angle({p.delta1, p.theta, axis});
  Mat2 m2 = nonflip_op(p.phi).mat() * u1.adjoint().mat() * pauli(3).mat();
  return {u1, detail::scaled(std::exp(Complex(0, p.delta2)), m2)};
}

// ---------------------------------------------------------------------------
// Arbitrary two-unitary adversary (linear-system solver)
// ---------------------------------------------------------------------------

/// Axis-angle data of K = up2† up1, the only combination of the adversary's
/// operations that player Q's first move must diagonalize.
struct AdversaryComposition {
  double varphi;   // rotation angle of K
  Vec3 axis;       // M, the rotation axis of K
  double phase;    // global phase of K
  bool degenerate; // sin(varphi/2) < kEpsSing: proportional operators
};

/// Computed by the closed-form composition law (not by multiplying matrices);
/// tests cross-check it against to_axis_angle(up2† * up1).
inline AdversaryComposition compose_adversary(const UnitaryOp& up1, const UnitaryOp& up2) {
  AxisAngle k = compose_axis_angle(to_axis_angle(up2).inverse(), to_axis_angle(up1));
  return {k.theta, k.axis, k.delta, std::sin(k.theta / 2) < kEpsSing};
}

/// Problem instance for the two-unitary game. theta1/gamma/c_sign must be
/// mutually consistent (see two_unitary_strategy); synthesize_two_unitary
/// chooses them automatically.
struct TwoUnitaryProblem {
  UnitaryOp up1, up2;
  double theta1 = kPi;
  double theta2 = 0;
  double gamma = 0;
  double delta1 = 0;
  double delta2 = 0;
  int c_sign = +1;
};

/// The 3x3 real system V n = rhs whose solution is U1's Bloch axis.
struct TwoUnitarySystem {
  std::array<std::array<double, 3>, 3> v;
  Vec3 rhs;
};

inline TwoUnitarySystem two_unitary_system(const TwoUnitaryProblem& pb) {
  AdversaryComposition comp = compose_adversary(pb.up1, pb.up2);
  if (comp.degenerate)
    throw SingularProblemError("adversary composition is degenerate; use the commuting path");
  double c = pb.c_sign >= 0 ? 1.0 : -1.0;
  double s1 = std::sin(pb.theta1 / 2), c1 = std::cos(pb.theta1 / 2);
  double cp = std::cos(comp.varphi / 2), sp = std::sin(comp.varphi / 2);
  double cg = std::cos(pb.gamma / 2), sg = std::sin(pb.gamma / 2);
  const Vec3& m = comp.axis;
  double d = cp - c * cg;
  TwoUnitarySystem sys;
  sys.v = {{{s1 * d, -s1 * (m.z * sp + c * sg), s1 * (m.y * sp)},
            {s1 * (m.z * sp + c * sg), s1 * d, -s1 * (m.x * sp)},
            {-s1 * (m.y * sp), s1 * (m.x * sp), s1 * d}}};
  sys.rhs = {c1 * m.x * sp, c1 * m.y * sp, c1 * (m.z * sp - c * sg)};
  return sys;
}

/// Closed-form determinant of V:
///   2 c sin^3(theta1/2) (cos(phi/2) - c cos(gamma/2))
///     (M3 sin(phi/2) sin(gamma/2) - cos(phi/2) cos(gamma/2) + c)
inline double det_v(const TwoUnitaryProblem& pb) {
  AdversaryComposition comp = compose_adversary(pb.up1, pb.up2);
  if (comp.degenerate)
    throw SingularProblemError("adversary composition is degenerate; determinant undefined");
  double c = pb.c_sign >= 0 ? 1.0 : -1.0;
  double s1 = std::sin(pb.theta1 / 2);
  double cp = std::cos(comp.varphi / 2), sp = std::sin(comp.varphi / 2);
  double cg = std::cos(pb.gamma / 2), sg = std::sin(pb.gamma / 2);
  return 2.0 * c * s1 * s1 * s1 * (cp - c * cg) * (comp.axis.z * sp * sg - cp * cg + c);
}

namespace detail {

struct AxisSolution {
  Vec3 w;        // unnormalized direction
  double denom;  // M3 sp sg - cp cg + c; also the last det_v factor
};

inline AxisSolution axis_solution_parts(const AdversaryComposition& comp, double gamma, double c) {
  double cp = std::cos(comp.varphi / 2), sp = std::sin(comp.varphi / 2);
  double cg = std::cos(gamma / 2), sg = std::sin(gamma / 2);
  const Vec3& m = comp.axis;
  Vec3 w{(m.x * cg - m.y * sg) * sp, (m.x * sg + m.y * cg) * sp, m.z * sp * cg + cp * sg};
  double denom = m.z * sp * sg - cp * cg + c;
  return {w, denom};
}

}  // namespace detail

/// Bloch axis n = -cot(theta1/2)/denom * w from the closed-form solution of
/// the linear system. ||n|| = |cot(theta1/2)| * ||w||/|denom|, so theta1
/// controls the norm directly.
inline Vec3 two_unitary_axis(const TwoUnitaryProblem& pb) {
  AdversaryComposition comp = compose_adversary(pb.up1, pb.up2);
  if (comp.degenerate)
    throw SingularProblemError("adversary composition is degenerate; use the commuting path");
  double c = pb.c_sign >= 0 ? 1.0 : -1.0;
  auto parts = detail::axis_solution_parts(comp, pb.gamma, c);
  if (std::abs(parts.denom) < kEpsDet)
    throw SingularProblemError("linear system is singular; perturb gamma");
  double k = detail::cot_half(pb.theta1);
  return (-k / parts.denom) * parts.w;
}

/// Solves cot(theta1/2) so that the closed-form axis has unit norm, by
/// bisection on [-1, 1] (tolerance 1e-12). Throws AxisNormError carrying the
/// best achievable norm when no root exists in that interval.
inline double solve_theta1(const UnitaryOp& up1, const UnitaryOp& up2, double gamma,
                           int c_sign = +1) {
  AdversaryComposition comp = compose_adversary(up1, up2);
  if (comp.degenerate)
    throw SingularProblemError("adversary composition is degenerate; use the commuting path");
  double c = c_sign >= 0 ? 1.0 : -1.0;
  auto parts = detail::axis_solution_parts(comp, gamma, c);
  if (std::abs(parts.denom) < kEpsDet)
    throw SingularProblemError("linear system is singular; perturb gamma");
  double ratio = parts.w.norm() / std::abs(parts.denom);  // ||n|| = |cot| * ratio
  auto norm_at = [&](double x) { return std::abs(x) * ratio; };
  if (norm_at(1.0) < 1.0 - kEpsNorm) throw AxisNormError(norm_at(1.0));
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    (norm_at(mid) < 1.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  return 2.0 * std::atan2(1.0, x);
}

/// Builds Q's pair from the closed-form axis:
///   U1 = e^{i delta1} e^{i theta1 n.sigma/2},
///   U2 = e^{i delta2} e^{i theta2 sigma3/2} U1† up2†.
/// Beyond the unit-norm requirement on n, gamma must sit in the consistency
/// class gamma = +-varphi (mod 4pi shifts absorbed by c_sign): the norm alone
/// does not force the branch condition, so the result is verified and an
/// InconsistentParamsError (with the off-diagonal residual) is thrown for
/// incompatible parameters. Commuting adversaries are redirected to the
/// simultaneous-eigenvector construction.
inline StrategyPair two_unitary_strategy(const TwoUnitaryProblem& pb);

/// Winning pair for a pairwise-commuting adversary set: U1 maps heads onto a
/// simultaneous eigenvector, U2 undoes it.
inline StrategyPair commuting_strategy(const std::vector<UnitaryOp>& ops, double theta2 = 0,
                                       double delta1 = 0, double delta2 = 0) {
  std::vector<StateVector> vs = simultaneous_eigenvectors(ops);
  if (vs.empty()) throw NonCommutingError("no simultaneous eigenvector found");
  UnitaryOp u1 = detail::scaled(std::exp(Complex(0, delta1)), basis_from_state(vs.front()).mat());
  Mat2 m2 = nonflip_op(theta2).mat() * u1.adjoint().mat();
  return {u1, detail::scaled(std::exp(Complex(0, delta2)), m2)};
}

inline StrategyPair two_unitary_strategy(const TwoUnitaryProblem& pb) {
  if (commutes(pb.up1, pb.up2))
    return commuting_strategy({pb.up1, pb.up2}, pb.theta2, pb.delta1, pb.delta2);

  Vec3 n = two_unitary_axis(pb);
  double nrm = n.norm();
  if (std::abs(nrm - 1.0) > kEpsNorm) throw AxisNormError(nrm);

  UnitaryOp u1 = from_axis_angle({pb.delta1, pb.theta1, n * (1.0 / nrm)});
  Mat2 m2 = nonflip_op(pb.theta2).mat() * u1.adjoint().mat() * pb.up2.adjoint().mat();
  StrategyPair pair{u1, detail::scaled(std::exp(Complex(0, pb.delta2)), m2)};

  double residual = 0;
  for (const UnitaryOp* a : {&pb.up1, &pb.up2}) {
    Mat2 w = pair.u2.mat() * a->mat() * pair.u1.mat();
    residual = std::max(residual, std::max(std::abs(w(0, 1)), std::abs(w(1, 0))));
  }
  if (residual * residual > kEpsWin) throw InconsistentParamsError(residual);
  return pair;
}

/// Diagnostics of the automatic two-unitary synthesis.
struct SynthesisResult {
  StrategyPair pair;
  bool via_eigenvector;  // commuting adversary handled without the V system
  double theta1 = 0;
  double gamma = 0;
  int c_sign = +1;
  Vec3 axis{0, 0, 1};
  double axis_norm = 1;
  double det_v_value = 0;
  double varphi = 0;
  Vec3 composition_axis{0, 0, 1};
};

namespace detail {

inline SynthesisResult finish_synthesis(const TwoUnitaryProblem& pb,
                                        const AdversaryComposition& comp) {
  SynthesisResult r{two_unitary_strategy(pb), false};
  r.theta1 = pb.theta1;
  r.gamma = pb.gamma;
  r.c_sign = pb.c_sign;
  r.axis = two_unitary_axis(pb);
  r.axis_norm = r.axis.norm();
  r.det_v_value = det_v(pb);
  r.varphi = comp.varphi;
  r.composition_axis = comp.axis;
  return r;
}

}  // namespace detail

/// Full pipeline for an arbitrary two-unitary adversary. Tries the
/// consistency classes gamma = -+ sign(M3) * varphi with c = +1 and both
/// cotangent roots; the leading class keeps cot(theta1/2) inside [-1, 1] so
/// the bisection helper applies. If every closed-form attempt is rejected
/// (possible only for near-diagonal compositions, |M3| ~ 1, where the system
/// turns singular) the strategy falls back to diagonalizing up2† up1
/// directly, which is exact for any pair.
inline SynthesisResult synthesize_two_unitary(const UnitaryOp& up1, const UnitaryOp& up2,
                                              double theta2 = 0, double delta1 = 0,
                                              double delta2 = 0,
                                              std::optional<double> gamma_override = {},
                                              std::optional<int> c_override = {}) {
  if (commutes(up1, up2)) {
    SynthesisResult r{commuting_strategy({up1, up2}, theta2, delta1, delta2), true};
    return r;
  }
  AdversaryComposition comp = compose_adversary(up1, up2);

  if (gamma_override) {
    // explicit parameters are honored strictly: errors propagate
    double gamma = *gamma_override;
    int c = c_override.value_or(1) >= 0 ? +1 : -1;
    double theta1 = solve_theta1(up1, up2, gamma, c);
    return detail::finish_synthesis({up1, up2, theta1, theta2, gamma, delta1, delta2, c},
                                    comp);
  }

  double sm = comp.axis.z >= 0 ? 1.0 : -1.0;
  for (double gamma : {-sm * comp.varphi, sm * comp.varphi}) {
    auto parts = detail::axis_solution_parts(comp, gamma, 1.0);
    if (std::abs(parts.denom) < kEpsDet) continue;
    double wn = parts.w.norm();
    if (!(wn > std::abs(parts.denom) * kEpsSing)) continue;  // cot would overflow
    double ratio = wn / std::abs(parts.denom);               // ||n|| = |cot| * ratio
    for (double sign : {1.0, -1.0}) {
      try {
        double cot;
        if (ratio >= 1.0) {
          // the unit-norm root lies in [-1, 1]: use the bisection helper
          cot = sign * detail::cot_half(solve_theta1(up1, up2, gamma, +1));
        } else {
          cot = sign / ratio;
        }
        double theta1 = 2.0 * std::atan2(1.0, cot);
        return detail::finish_synthesis(
            {up1, up2, theta1, theta2, gamma, delta1, delta2, +1}, comp);
      } catch (const std::domain_error&) {
        // singular, off-norm or inconsistent: try the next candidate
      }
    }
  }

  // exact last resort: U1's columns are the eigenvectors of K = up2† up1
  Mat2 k = up2.adjoint().mat() * up1.mat();
  UnitaryOp u1 = detail::scaled(std::exp(Complex(0, delta1)),
                                basis_from_state(detail::eigenvectors(k).front()).mat());
  Mat2 m2 = nonflip_op(theta2).mat() * u1.adjoint().mat() * up2.adjoint().mat();
  SynthesisResult r{{u1, detail::scaled(std::exp(Complex(0, delta2)), m2)}, true};
  r.varphi = comp.varphi;
  r.composition_axis = comp.axis;
  return r;
}

// ---------------------------------------------------------------------------
// Multiple strategies (l >= 2 typed operations)
// ---------------------------------------------------------------------------

/// One adversary operation given as a typed flip/non-flip preset.
struct PhasedOp {
  enum class Kind { flip, nonflip };
  Kind kind;
  double angle;

  UnitaryOp matrix() const {
    return kind == Kind::flip ? flip_op(angle) : nonflip_op(angle);
  }
};

enum class MultiKind {
  all_commuting,
  flip_commuting_trivial_n,
  flip_commuting_nontrivial_n,
  general,
};

enum class Existence { exists, no_in_general, unknown };

struct MultiStrategyClass {
  MultiKind kind;
  int s = 0;    // number of flip-type operations
  int ell = 0;  // total operations
  Existence strategy_exists = Existence::unknown;
};

/// Taxonomy of the multi-operation game:
///  (i)   all operations pairwise commute -> winning strategy exists
///        (simultaneous eigenvector);
///  (ii)  flips mutually commute and every beta is in pi*Z -> exists;
///  (iii) flips mutually commute, some nonflip nontrivial -> exists iff
///        s == 1 or s == ell-1, otherwise none in general;
///  (iv)  otherwise unknown (delegated to the brute-force oracle).
inline MultiStrategyClass classify_multiple(const std::vector<PhasedOp>& ops) {
  if (ops.empty()) throw std::invalid_argument("empty operation list");
  MultiStrategyClass out;
  out.ell = static_cast<int>(ops.size());
  for (const auto& op : ops)
    if (op.kind == PhasedOp::Kind::flip) ++out.s;

  std::vector<UnitaryOp> mats;
  for (const auto& op : ops) mats.push_back(op.matrix());

  bool all_commute = true;
  for (size_t i = 0; i < mats.size() && all_commute; ++i)
    for (size_t j = i + 1; j < mats.size() && all_commute; ++j)
      if (!commutes(mats[i], mats[j])) all_commute = false;
  if (all_commute) {
    out.kind = MultiKind::all_commuting;
    out.strategy_exists = Existence::exists;
    return out;
  }

  bool flips_commute = true;
  for (size_t i = 0; i < ops.size() && flips_commute; ++i) {
    if (ops[i].kind != PhasedOp::Kind::flip) continue;
    for (size_t j = i + 1; j < ops.size() && flips_commute; ++j) {
      if (ops[j].kind != PhasedOp::Kind::flip) continue;
      if (!commutes(mats[i], mats[j])) flips_commute = false;
    }
  }
  if (!flips_commute) {
    out.kind = MultiKind::general;
    out.strategy_exists = Existence::unknown;
    return out;
  }

  auto trivial_beta = [](double beta) {
    double m = beta / kPi;
    return std::abs(m - std::round(m)) * kPi < 1e-9;
  };
  bool all_trivial = true;
  for (const auto& op : ops)
    if (op.kind == PhasedOp::Kind::nonflip && !trivial_beta(op.angle)) all_trivial = false;

  if (all_trivial) {
    out.kind = MultiKind::flip_commuting_trivial_n;
    out.strategy_exists = Existence::exists;
  } else {
    out.kind = MultiKind::flip_commuting_nontrivial_n;
    out.strategy_exists = (out.s == 1 || out.s == out.ell - 1) ? Existence::exists
                                                               : Existence::no_in_general;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force search oracle
// ---------------------------------------------------------------------------

struct OracleOptions {
  int grid = 8;            // points per angular dimension (>= 8)
  int climb_steps = 200;   // local refinement iterations
  double step_decay = 0.7;
  std::uint64_t seed = 0;
};

struct OracleResult {
  double best_worst_fidelity;
  StrategyPair best;
};

namespace detail {

// (theta, polar, azimuth) -> e^{i theta n.sigma/2}, global phase fixed to 0.
inline Mat2 oracle_mat(double theta, double polar, double azimuth) {
  double sa = std::sin(polar);
  Vec3 n{sa * std::cos(azimuth), sa * std::sin(azimuth), std::cos(polar)};
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const Complex i(0, 1);
  return c * Mat2::identity() + (i * s) * pauli_dot(n);
}

struct OracleObjective {
  StateVector psi0;
  std::vector<Mat2> branches;

  // min over branches of |<psi0| U2 A U1 |psi0>|^2
  double operator()(const std::array<double, 6>& x) const {
    Mat2 u1 = oracle_mat(x[0], x[1], x[2]);
    Mat2 u2 = oracle_mat(x[3], x[4], x[5]);
    Complex w0 = u1(0, 0) * psi0.a0 + u1(0, 1) * psi0.a1;
    Complex w1 = u1(1, 0) * psi0.a0 + u1(1, 1) * psi0.a1;
    Complex z0 = std::conj(u2(0, 0)) * psi0.a0 + std::conj(u2(1, 0)) * psi0.a1;
    Complex z1 = std::conj(u2(0, 1)) * psi0.a0 + std::conj(u2(1, 1)) * psi0.a1;
    double worst = 1.0;
    for (const Mat2& a : branches) {
      Complex v0 = a(0, 0) * w0 + a(0, 1) * w1;
      Complex v1 = a(1, 0) * w0 + a(1, 1) * w1;
      worst = std::min(worst, std::norm(std::conj(z0) * v0 + std::conj(z1) * v1));
    }
    return worst;
  }
};

}  // namespace detail

/// Grid search over two axis-angle triples (global phases fixed to zero; they
/// cannot move any fidelity) followed by seeded hill climbing on the
/// min-over-branches fidelity. Deterministic for a fixed seed. Returns the
/// best guaranteed fidelity found and the strategy achieving it.
inline OracleResult brute_force_oracle(const GameSpec& spec, const OracleOptions& opts = {}) {
  if (opts.grid < 8) throw std::invalid_argument("oracle grid must be >= 8 per dimension");

  detail::OracleObjective obj{spec.initial.principal_state(), {}};
  for (const auto& wo : spec.ops) obj.branches.push_back(wo.op.mat());

  const int g = opts.grid;

  // candidate parameter triples, shared by both moves
  std::vector<std::array<double, 3>> params;
  params.reserve(static_cast<size_t>(g) * g * g);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      for (int k = 0; k < g; ++k)
        params.push_back({kTau * i / g, kPi * (j + 0.5) / g, kTau * k / g});

  // precompute per-u1 branch images and per-u2 back-projections
  size_t np = params.size(), nb = obj.branches.size();
  std::vector<Complex> branch_img(np * nb * 2);
  std::vector<Complex> back(np * 2);
  for (size_t p = 0; p < np; ++p) {
    Mat2 u = detail::oracle_mat(params[p][0], params[p][1], params[p][2]);
    Complex w0 = u(0, 0) * obj.psi0.a0 + u(0, 1) * obj.psi0.a1;
    Complex w1 = u(1, 0) * obj.psi0.a0 + u(1, 1) * obj.psi0.a1;
    for (size_t b = 0; b < nb; ++b) {
      const Mat2& a = obj.branches[b];
      branch_img[(p * nb + b) * 2] = a(0, 0) * w0 + a(0, 1) * w1;
      branch_img[(p * nb + b) * 2 + 1] = a(1, 0) * w0 + a(1, 1) * w1;
    }
    back[p * 2] = std::conj(u(0, 0)) * obj.psi0.a0 + std::conj(u(1, 0)) * obj.psi0.a1;
    back[p * 2 + 1] = std::conj(u(0, 1)) * obj.psi0.a0 + std::conj(u(1, 1)) * obj.psi0.a1;
  }

  double best = -1;
  size_t best1 = 0, best2 = 0;
  for (size_t p1 = 0; p1 < np; ++p1) {
    for (size_t p2 = 0; p2 < np; ++p2) {
      Complex z0 = std::conj(back[p2 * 2]), z1 = std::conj(back[p2 * 2 + 1]);
      double worst = 1.0;
      for (size_t b = 0; b < nb; ++b) {
        Complex v0 = branch_img[(p1 * nb + b) * 2], v1 = branch_img[(p1 * nb + b) * 2 + 1];
        worst = std::min(worst, std::norm(z0 * v0 + z1 * v1));
        if (worst < best) break;
      }
      if (worst > best) {
        best = worst;
        best1 = p1;
        best2 = p2;
      }
    }
  }

  std::array<double, 6> x{params[best1][0], params[best1][1], params[best1][2],
                          params[best2][0], params[best2][1], params[best2][2]};
  double fx = obj(x);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double step = kTau / g;
  for (int it = 0; it < opts.climb_steps; ++it) {
    std::array<double, 6> best_cand = x;
    double best_val = fx;
    for (int dim = 0; dim < 6; ++dim) {
      for (double sgn : {1.0, -1.0}) {
        std::array<double, 6> cand = x;
        cand[dim] += sgn * step;
        double v = obj(cand);
        if (v > best_val) {
          best_val = v;
          best_cand = cand;
        }
      }
    }
    for (int r = 0; r < 6; ++r) {
      std::array<double, 6> cand = x;
      for (double& xi : cand) xi += step * gauss(rng) * 0.5;
      double v = obj(cand);
      if (v > best_val) {
        best_val = v;
        best_cand = cand;
      }
    }
    if (best_val > fx) {
      x = best_cand;
      fx = best_val;
    } else {
      step *= opts.step_decay;
    }
  }

  OracleResult res{fx, StrategyPair{UnitaryOp(detail::oracle_mat(x[0], x[1], x[2])),
                                    UnitaryOp(detail::oracle_mat(x[3], x[4], x[5]))}};
  return res;
}

}  // namespace pennyflip
