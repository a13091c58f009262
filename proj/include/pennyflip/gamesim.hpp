#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "pennyflip/qalg.hpp"

namespace pennyflip {

/// 2x2 density matrix: Hermitian, unit trace, positive semidefinite
/// (all within kEpsUnit).
class DensityMatrix {
 public:
  explicit DensityMatrix(const Mat2& m) : m_(m) {
    if (!m.is_finite()) throw std::domain_error("density matrix has non-finite entries");
    if (m.max_abs_diff(m.adjoint()) > kEpsUnit)
      throw std::domain_error("density matrix is not Hermitian");
    if (std::abs(m.trace() - Complex(1)) > kEpsUnit)
      throw std::domain_error("density matrix trace is not 1");
    // eigenvalues of a trace-1 Hermitian 2x2 are (1 +- r)/2 with r the Bloch norm
    double r = bloch_norm();
    if ((1.0 - r) / 2.0 < -kEpsUnit)
      throw std::domain_error("density matrix is not positive semidefinite");
  }

  static DensityMatrix pure(const StateVector& v) {
    Mat2 m{{v.a0 * std::conj(v.a0), v.a0 * std::conj(v.a1),
            v.a1 * std::conj(v.a0), v.a1 * std::conj(v.a1)}};
    return DensityMatrix(m);
  }

  const Mat2& mat() const { return m_; }

  /// tr(rho^2); 1 for pure states.
  double purity() const { return (m_ * m_).trace().real(); }

  double bloch_norm() const {
    double rx = 2.0 * m_(0, 1).real();
    double ry = -2.0 * m_(0, 1).imag();
    double rz = (m_(0, 0) - m_(1, 1)).real();
    return std::sqrt(rx * rx + ry * ry + rz * rz);
  }

  /// A unit vector spanning the range of a rank-1 density matrix.
  StateVector principal_state() const {
    if (std::abs(purity() - 1.0) > kEpsUnit)
      throw std::domain_error("density matrix is not pure");
    // columns of |psi><psi| are psi * conj(psi_j); take the stronger one
    if (m_(0, 0).real() >= m_(1, 1).real()) {
      double s = std::sqrt(m_(0, 0).real());
      return {m_(0, 0) / s, m_(1, 0) / s};
    }
    double s = std::sqrt(m_(1, 1).real());
    return {m_(0, 1) / s, m_(1, 1) / s};
  }

 private:
  Mat2 m_;
};

inline Vec3 bloch_vector(const DensityMatrix& rho) {
  const Mat2& m = rho.mat();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

inline DensityMatrix apply(const UnitaryOp& u, const DensityMatrix& rho) {
  return DensityMatrix(u.mat() * rho.mat() * u.mat().adjoint());
}

/// tr(a*b) for pure b; the transition probability to the pure state b.
inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (std::abs(b.purity() - 1.0) > kEpsUnit)
    throw std::domain_error("fidelity target state is not rank-1");
  double f = (a.mat() * b.mat()).trace().real();
  return f;
}

struct PayoffPair {
  double p;
  double q;
};

/// $_P = 1 - 2 |<f|i>|^2 and $_Q = -$_P for a pure initial state.
inline PayoffPair quantum_payoff(const DensityMatrix& final_state,
                                 const DensityMatrix& initial) {
  double pp = 1.0 - 2.0 * fidelity(final_state, initial);
  return {pp, -pp};
}

struct WeightedOp {
  UnitaryOp op;
  double weight;
};

/// One game instance: initial coin state plus the adversary's operation set
/// with mixing probabilities.
struct GameSpec {
  DensityMatrix initial;
  std::vector<WeightedOp> ops;
  std::string label;

  GameSpec(DensityMatrix init, std::vector<WeightedOp> adversary_ops, std::string name = {})
      : initial(std::move(init)), ops(std::move(adversary_ops)), label(std::move(name)) {
    if (ops.empty()) throw std::invalid_argument("game spec needs at least one adversary op");
    double sum = 0;
    for (const auto& wo : ops) {
      if (wo.weight < 0) throw std::invalid_argument("negative op probability");
      sum += wo.weight;
    }
    if (std::abs(sum - 1.0) > kEpsUnit)
      throw std::invalid_argument("op probabilities must sum to 1");
  }

  static GameSpec uniform(DensityMatrix init, std::vector<UnitaryOp> adversary_ops,
                          std::string name = {}) {
    std::vector<WeightedOp> wos;
    double w = 1.0 / static_cast<double>(adversary_ops.size());
    for (auto& op : adversary_ops) wos.push_back({std::move(op), w});
    return GameSpec(std::move(init), std::move(wos), std::move(name));
  }
};

/// Player Q's two moves.
struct StrategyPair {
  UnitaryOp u1;
  UnitaryOp u2;
};

/// U2 A U1 rho0 U1† A† U2† for adversary branch A = ops[branch].
inline DensityMatrix evolve_branch(const GameSpec& spec, const StrategyPair& s, size_t branch) {
  if (branch >= spec.ops.size()) throw std::out_of_range("branch index out of range");
  return apply(s.u2, apply(spec.ops[branch].op, apply(s.u1, spec.initial)));
}

/// Convex mixture of evolve_branch over all branches with the given weights.
inline DensityMatrix evolve_mixed(const GameSpec& spec, const StrategyPair& s,
                                  std::span<const double> weights) {
  if (weights.size() != spec.ops.size())
    throw std::invalid_argument("weight count does not match op count");
  double sum = 0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("negative mixture weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kEpsUnit) throw std::invalid_argument("weights must sum to 1");
  Mat2 acc = Mat2::zero();
  for (size_t i = 0; i < weights.size(); ++i)
    acc = acc + weights[i] * evolve_branch(spec, s, i).mat();
  return DensityMatrix(acc);
}

/// Bloch-sphere trace of one branch: initial state, after U1, after the
/// adversary op, after U2.
using BlochTrace = std::array<Vec3, 4>;

struct VerificationReport {
  bool win = false;
  double worst_fidelity = 0;
  std::vector<double> branch_fidelities;
  std::vector<double> probability_grid;
  std::vector<double> grid_fidelities;
  std::vector<BlochTrace> bloch_traces;
  double payoff_p = 0;  // payoffs of the mixture at the game's own weights
  double payoff_q = 0;
  double eps_win = kEpsWin;
};

/// Checks every adversary branch individually and, redundantly, mixtures over
/// a probability grid (for two ops: p in {0, 1/(g-1), ..., 1} on the first
/// op). Verdict is win iff every recorded fidelity reaches 1 - eps_win;
/// branch-wise success already implies grid success by convexity.
inline VerificationReport verify_strategy(const GameSpec& spec, const StrategyPair& s,
                                          int grid_size = 11, double eps_win = kEpsWin) {
  if (grid_size < 2) throw std::invalid_argument("grid size must be >= 2");
  VerificationReport rep;
  rep.eps_win = eps_win;
  rep.worst_fidelity = 1.0;

  DensityMatrix after_u1 = apply(s.u1, spec.initial);
  for (size_t i = 0; i < spec.ops.size(); ++i) {
    DensityMatrix after_p = apply(spec.ops[i].op, after_u1);
    DensityMatrix final_state = apply(s.u2, after_p);
    double f = fidelity(final_state, spec.initial);
    rep.branch_fidelities.push_back(f);
    rep.worst_fidelity = std::min(rep.worst_fidelity, f);
    rep.bloch_traces.push_back({bloch_vector(spec.initial), bloch_vector(after_u1),
                                bloch_vector(after_p), bloch_vector(final_state)});
  }

  auto record_mixture = [&](std::span<const double> w, double p0) {
    double f = fidelity(evolve_mixed(spec, s, w), spec.initial);
    rep.probability_grid.push_back(p0);
    rep.grid_fidelities.push_back(f);
    rep.worst_fidelity = std::min(rep.worst_fidelity, f);
  };

  size_t ell = spec.ops.size();
  if (ell == 2) {
    for (int k = 0; k < grid_size; ++k) {
      double p = static_cast<double>(k) / (grid_size - 1);
      std::array<double, 2> w{p, 1.0 - p};
      record_mixture(w, p);
    }
  } else {
    // vertices, the game's own weights, and the uniform mixture
    for (size_t i = 0; i < ell; ++i) {
      std::vector<double> w(ell, 0.0);
      w[i] = 1.0;
      record_mixture(w, w[0]);
    }
    std::vector<double> own;
    for (const auto& wo : spec.ops) own.push_back(wo.weight);
    record_mixture(own, own[0]);
    std::vector<double> uni(ell, 1.0 / static_cast<double>(ell));
    record_mixture(uni, uni[0]);
  }

  std::vector<double> own;
  for (const auto& wo : spec.ops) own.push_back(wo.weight);
  PayoffPair pay = quantum_payoff(evolve_mixed(spec, s, own), spec.initial);
  rep.payoff_p = pay.p;
  rep.payoff_q = pay.q;

  rep.win = rep.worst_fidelity >= 1.0 - eps_win;
  return rep;
}

}  // namespace pennyflip
