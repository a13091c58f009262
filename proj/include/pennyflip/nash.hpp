#pragma once

#include <random>
#include <utility>
#include <vector>

#include "pennyflip/core.hpp"

namespace pennyflip {
namespace nash {

/// P mixes over {N, F}.
struct MixedStrategyP {
  double p_n, p_f;

  MixedStrategyP(double n, double f) : p_n(n), p_f(f) {
    if (n < 0 || f < 0 || std::abs(n + f - 1.0) > kEpsUnit)
      throw std::invalid_argument("invalid P strategy");
  }
};

/// Q mixes over {NN, NF, FN, FF}.
struct MixedStrategyQ {
  double q_nn, q_nf, q_fn, q_ff;

  MixedStrategyQ(double nn, double nf, double fn, double ff)
      : q_nn(nn), q_nf(nf), q_fn(fn), q_ff(ff) {
    if (nn < 0 || nf < 0 || fn < 0 || ff < 0 ||
        std::abs(nn + nf + fn + ff - 1.0) > kEpsUnit)
      throw std::invalid_argument("invalid Q strategy");
  }
};

/// 2x4 bimatrix; rows are P's actions {N, F}, columns Q's {NN, NF, FN, FF}.
struct PayoffMatrix {
  struct Cell {
    int p, q;
  };
  std::array<std::array<Cell, 4>, 2> cells;

  bool zero_sum() const {
    for (const auto& row : cells)
      for (const auto& c : row)
        if (c.p + c.q != 0) return false;
    return true;
  }
};

/// The classical penny-flip table: the coin returns to heads (P loses) iff
/// the total number of flips is even.
inline PayoffMatrix canonical_payoff_matrix() {
  PayoffMatrix m;
  const int q_flips[4] = {0, 1, 1, 2};
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 4; ++q) {
      bool heads = (p + q_flips[q]) % 2 == 0;
      m.cells[p][q] = heads ? PayoffMatrix::Cell{-1, 1} : PayoffMatrix::Cell{1, -1};
    }
  }
  return m;
}

/// Closed form u_P = (1 - 2 p_N) [1 - 2 (q_NF + q_FN)].
inline double expected_payoff(const MixedStrategyP& p, const MixedStrategyQ& q) {
  return (1.0 - 2.0 * p.p_n) * (1.0 - 2.0 * (q.q_nf + q.q_fn));
}

/// Direct 8-term expectation over a payoff table (oracle for the closed form).
inline double matrix_expected_payoff(const PayoffMatrix& m, const MixedStrategyP& p,
                                     const MixedStrategyQ& q) {
  const double pw[2] = {p.p_n, p.p_f};
  const double qw[4] = {q.q_nn, q.q_nf, q.q_fn, q.q_ff};
  double u = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j) u += pw[i] * qw[j] * m.cells[i][j].p;
  return u;
}

/// No sampled unilateral deviation may improve the deviator by more than
/// eps. Both players' pure strategies are always included; for two-action P
/// (and vertex-optimal best responses in general) that alone is exact, the
/// grid is a redundant safety net. Deterministic for fixed n_deviations.
inline bool is_nash_equilibrium(const MixedStrategyP& p, const MixedStrategyQ& q,
                                int n_deviations = 101, double eps = kEpsUnit) {
  double base = expected_payoff(p, q);

  std::vector<double> p_candidates = {0.0, 1.0};
  for (int k = 0; k < n_deviations; ++k)
    p_candidates.push_back(static_cast<double>(k) / std::max(1, n_deviations - 1));
  for (double pn : p_candidates)
    if (expected_payoff(MixedStrategyP(pn, 1.0 - pn), q) > base + eps) return false;

  std::vector<MixedStrategyQ> q_candidates = {
      {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  std::mt19937_64 rng(0);  // fixed seed: deterministic deviation grid
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < n_deviations; ++k) {
    double w[4], sum = 0;
    for (double& x : w) {
      x = -std::log(1.0 - u(rng));
      sum += x;
    }
    q_candidates.push_back({w[0] / sum, w[1] / sum, w[2] / sum, w[3] / sum});
  }
  for (const auto& dev : q_candidates)
    if (-expected_payoff(p, dev) > -base + eps) return false;

  return true;
}

/// Exhaustive scan of the 2x4 pure profiles; a profile is an equilibrium iff
/// neither player has a strictly improving pure deviation. Empty for the
/// canonical zero-sum table.
inline std::vector<std::pair<int, int>> pure_equilibria(
    const PayoffMatrix& m = canonical_payoff_matrix()) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 4; ++j) {
      bool best_p = true, best_q = true;
      for (int i2 = 0; i2 < 2; ++i2)
        if (m.cells[i2][j].p > m.cells[i][j].p) best_p = false;
      for (int j2 = 0; j2 < 4; ++j2)
        if (m.cells[i][j2].q > m.cells[i][j].q) best_q = false;
      if (best_p && best_q) out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace nash
}  // namespace pennyflip
