// Walks through the game variants: synthesizes a winning pair for each
// adversary and prints the per-branch fidelities and the Bloch-sphere trace.

#include <cstdio>

#include "pennyflip/pennyflip.hpp"

using namespace pennyflip;

namespace {

void show(const char* name, const GameSpec& spec, const StrategyPair& s) {
  VerificationReport rep = verify_strategy(spec, s);
  std::printf("%-28s %s  worst fidelity %.12f\n", name, rep.win ? "WIN " : "LOSE",
              rep.worst_fidelity);
  for (size_t b = 0; b < rep.bloch_traces.size(); ++b) {
    std::printf("  branch %zu bloch:", b);
    for (const Vec3& v : rep.bloch_traces[b])
      std::printf("  (% .3f, % .3f, % .3f)", v.x, v.y, v.z);
    std::printf("   fidelity %.12f\n", rep.branch_fidelities[b]);
  }
}

}  // namespace

int main() {
  DensityMatrix heads = DensityMatrix::pure(ket0());

  GameSpec meyer = GameSpec::uniform(heads, {identity_op(), pauli(1)}, "meyer");
  show("Meyer {1, sigma1}", meyer, meyer_hadamard());

  GameSpec s13 = GameSpec::uniform(heads, {pauli(1), pauli(3)}, "sigma13");
  show("non-Abelian {sigma1, sigma3}", s13, sigma13_family({kPi / 2, 0, 0, kPi / 2}));

  double alpha = 1.3, beta = 0.4;
  GameSpec fn = GameSpec::uniform(heads, {flip_op(alpha), nonflip_op(beta)}, "phase");
  show("phase-variable {F, N}", fn, phase_variable_family({kPi / 2, 0, alpha, beta}));

  std::mt19937_64 rng(2024);
  UnitaryOp up1 = random_unitary(rng), up2 = random_unitary(rng);
  GameSpec arb = GameSpec::uniform(heads, {up1, up2}, "two-unitary");
  SynthesisResult syn = synthesize_two_unitary(up1, up2);
  std::printf("\ntwo-unitary synthesis: theta1 %.6f gamma %.6f axis (%.4f, %.4f, %.4f)\n",
              syn.theta1, syn.gamma, syn.axis.x, syn.axis.y, syn.axis.z);
  show("random two-unitary", arb, syn.pair);

  GameSpec multi = GameSpec::uniform(
      heads, {flip_op(0.4), flip_op(0.4 + kTau), nonflip_op(0.9), nonflip_op(2.1)}, "multi");
  OracleResult best = brute_force_oracle(multi);
  std::printf("\n4-op game (s=2, nontrivial N): oracle best worst-fidelity %.6f\n",
              best.best_worst_fidelity);
  return 0;
}
