// Command-line front end: load game specs, synthesize and verify strategies,
// classify multi-operation games, run the search oracle, emit reports.
//
// Exit codes: 0 win / success, 1 verified lose, 2 input error,
// 3 singular or inconsistent solver problem, 4 classifier-negative.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pennyflip/pennyflip.hpp"

using namespace pennyflip;
namespace sio = pennyflip::specio;

namespace {

constexpr int kExitWin = 0;
constexpr int kExitLose = 1;
constexpr int kExitInput = 2;
constexpr int kExitSingular = 3;
constexpr int kExitNoStrategy = 4;

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void emit(const sio::KvDocument& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.str();
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::invalid_argument("cannot write " + out_path);
  f << doc.str();
}

double win_eps_from_env() {
  const char* s = std::getenv("PENNYFLIP_EPS");
  if (!s) return kEpsWin;
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0' || !std::isfinite(v) || v < 0)
    throw std::invalid_argument("PENNYFLIP_EPS is not a valid tolerance");
  return v;
}

struct FamilyFlags {
  std::string family;
  std::string u1_token, u2_token;
  double theta = kPi;
  double phi = 0;
  double alpha = 0, beta = 0;
  bool alpha_set = false, beta_set = false;
  double delta1 = 0, delta2 = 0;
  int a_sign = 1, b_sign = 1;
};

void add_family_options(CLI::App* cmd, FamilyFlags& ff) {
  cmd->add_option("--family", ff.family, "strategy family: meyer|chappell|sigma13|phase");
  cmd->add_option("--u1", ff.u1_token, "first move (preset token or 2x2 matrix)");
  cmd->add_option("--u2", ff.u2_token, "second move (preset token or 2x2 matrix)");
  cmd->add_option("--theta", ff.theta, "family rotation angle (radians)");
  cmd->add_option("--phi", ff.phi, "free diagonal angle (radians)");
  cmd->add_option("--alpha", ff.alpha, "adversary flip phase")->each([&](const std::string&) {
    ff.alpha_set = true;
  });
  cmd->add_option("--beta", ff.beta, "adversary non-flip phase")->each([&](const std::string&) {
    ff.beta_set = true;
  });
  cmd->add_option("--delta1", ff.delta1, "global phase of the first move");
  cmd->add_option("--delta2", ff.delta2, "global phase of the second move");
  cmd->add_option("--a-sign", ff.a_sign, "sign branch of a (+1/-1)");
  cmd->add_option("--b-sign", ff.b_sign, "sign branch of b (+1/-1)");
}

void derive_phases_from_spec(const sio::ParsedSpec& ps, FamilyFlags& ff) {
  if (!ps.typed) return;
  for (const PhasedOp& op : *ps.typed) {
    if (op.kind == PhasedOp::Kind::flip && !ff.alpha_set) {
      ff.alpha = op.angle;
      ff.alpha_set = true;
    }
    if (op.kind == PhasedOp::Kind::nonflip && !ff.beta_set) {
      ff.beta = op.angle;
      ff.beta_set = true;
    }
  }
}

StrategyPair strategy_from_flags(const sio::ParsedSpec& ps, FamilyFlags ff,
                                 sio::KvDocument& doc) {
  if (!ff.u1_token.empty() || !ff.u2_token.empty()) {
    if (ff.u1_token.empty() || ff.u2_token.empty())
      throw std::invalid_argument("--u1 and --u2 must be given together");
    doc.add_raw("strategy_source", "explicit");
    return {sio::op_from_token(ff.u1_token), sio::op_from_token(ff.u2_token)};
  }
  if (ff.family.empty())
    throw std::invalid_argument("need a strategy: --family NAME or --u1/--u2");
  doc.add_raw("strategy_source", "family");
  doc.add_raw("family", ff.family);
  if (ff.family == "meyer") return meyer_hadamard();
  if (ff.family == "chappell")
    return chappell_family({ff.theta, ff.phi, ff.delta1, ff.delta2, ff.a_sign, ff.b_sign});
  if (ff.family == "sigma13")
    return sigma13_family({ff.theta, ff.phi, ff.delta1, ff.delta2, ff.a_sign, ff.b_sign});
  if (ff.family == "phase") {
    derive_phases_from_spec(ps, ff);
    if (!ff.alpha_set || !ff.beta_set)
      throw std::invalid_argument(
          "family phase needs --alpha/--beta or a spec with flip/nonflip ops");
    doc.add("alpha", ff.alpha);
    doc.add("beta", ff.beta);
    return phase_variable_family(
        {ff.theta, ff.phi, ff.alpha, ff.beta, ff.delta1, ff.delta2, ff.a_sign, ff.b_sign});
  }
  throw std::invalid_argument("unknown family: " + ff.family);
}

int report_verification(const sio::ParsedSpec& ps, const StrategyPair& s, int grid,
                        double eps_win, sio::KvDocument& doc, const std::string& out) {
  VerificationReport rep = verify_strategy(ps.spec, s, grid, eps_win);
  sio::add_strategy(doc, s);
  sio::add_verification(doc, rep);
  emit(doc, out);
  return rep.win ? kExitWin : kExitLose;
}

// ---- verify ----

struct VerifyArgs {
  std::string spec_path, out;
  FamilyFlags ff;
  int grid = 11;
};

int run_verify(const VerifyArgs& a) {
  sio::ParsedSpec ps = sio::parse_spec(read_file(a.spec_path));
  sio::KvDocument doc;
  doc.add_raw("report", "verify");
  doc.add_raw("label", ps.label.empty() ? "unnamed" : ps.label);
  StrategyPair s = strategy_from_flags(ps, a.ff, doc);
  return report_verification(ps, s, a.grid, win_eps_from_env(), doc, a.out);
}

// ---- solve ----

struct SolveArgs {
  std::string spec_path, out;
  double delta1 = 0, delta2 = 0;
  double gamma = 0;
  bool gamma_set = false;
  int c_sign = 1;
  bool c_sign_set = false;
  double theta = kPi, phi = 0;
  bool use_oracle = false;
  int grid = 8;
  int climb = 200;
  std::uint64_t seed = 0;
};

int solve_two_op(const sio::ParsedSpec& ps, const SolveArgs& a, double eps_win,
                 sio::KvDocument& doc) {
  const UnitaryOp& up1 = ps.spec.ops[0].op;
  const UnitaryOp& up2 = ps.spec.ops[1].op;
  std::optional<double> gamma;
  std::optional<int> c_sign;
  if (a.gamma_set) gamma = a.gamma;
  if (a.c_sign_set) c_sign = a.c_sign;
  SynthesisResult r =
      synthesize_two_unitary(up1, up2, a.phi, a.delta1, a.delta2, gamma, c_sign);
  doc.add_raw("method", r.via_eigenvector ? "simultaneous-eigenvector" : "two-unitary-system");
  if (!r.via_eigenvector) {
    doc.add("theta1", r.theta1);
    doc.add("gamma", r.gamma);
    doc.add("c_sign", r.c_sign);
    doc.add("varphi", r.varphi);
    doc.add("composition_axis", sio::vec3_to_json(r.composition_axis));
    doc.add("axis", sio::vec3_to_json(r.axis));
    doc.add("axis_norm", r.axis_norm);
    doc.add("det_v", r.det_v_value);
  }
  return report_verification(ps, r.pair, 11, eps_win, doc, a.out);
}

int solve_multi_op(const sio::ParsedSpec& ps, const SolveArgs& a, double eps_win,
                   sio::KvDocument& doc) {
  if (!ps.typed) {
    std::vector<UnitaryOp> mats;
    for (const auto& wo : ps.spec.ops) mats.push_back(wo.op);
    bool all_commute = true;
    for (size_t i = 0; i < mats.size() && all_commute; ++i)
      for (size_t j = i + 1; j < mats.size() && all_commute; ++j)
        if (!commutes(mats[i], mats[j])) all_commute = false;
    if (!all_commute)
      throw std::invalid_argument(
          "more than two untyped non-commuting ops: closed form unavailable, use --oracle");
    doc.add_raw("method", "simultaneous-eigenvector");
    return report_verification(ps, commuting_strategy(mats, a.phi, a.delta1, a.delta2), 11,
                               eps_win, doc, a.out);
  }

  MultiStrategyClass cls = classify_multiple(*ps.typed);
  doc.add_raw("classifier_kind", sio::kind_name(cls.kind));
  doc.add("flip_count", cls.s);
  doc.add("op_count", cls.ell);
  doc.add_raw("strategy_exists", sio::existence_name(cls.strategy_exists));

  if (cls.strategy_exists == Existence::no_in_general) {
    emit(doc, a.out);
    return kExitNoStrategy;
  }
  if (cls.strategy_exists == Existence::unknown)
    throw std::invalid_argument(
        "flips do not commute: classifier is inconclusive, rerun with --oracle");

  if (cls.kind == MultiKind::all_commuting) {
    std::vector<UnitaryOp> mats;
    for (const auto& wo : ps.spec.ops) mats.push_back(wo.op);
    doc.add_raw("method", "simultaneous-eigenvector");
    return report_verification(ps, commuting_strategy(mats, a.phi, a.delta1, a.delta2), 11,
                               eps_win, doc, a.out);
  }

  // one essential flip direction; use the phase-variable construction
  double alpha = 0;
  bool have_alpha = false;
  std::optional<double> beta_nontrivial, beta_any;
  for (const PhasedOp& op : *ps.typed) {
    if (op.kind == PhasedOp::Kind::flip && !have_alpha) {
      alpha = op.angle;
      have_alpha = true;
    }
    if (op.kind == PhasedOp::Kind::nonflip) {
      if (!beta_any) beta_any = op.angle;
      double m = op.angle / kPi;
      bool trivial = std::abs(m - std::round(m)) * kPi < 1e-9;
      double h = op.angle / kTau;
      bool identity_like = std::abs(h - std::round(h)) * kTau < 1e-9;
      if (!beta_nontrivial && (cls.kind == MultiKind::flip_commuting_trivial_n
                                   ? trivial && !identity_like
                                   : !trivial))
        beta_nontrivial = op.angle;
    }
  }
  double beta = beta_nontrivial.value_or(beta_any.value_or(0.0));
  doc.add_raw("method", "phase-variable-family");
  doc.add("alpha", alpha);
  doc.add("beta", beta);
  StrategyPair s = phase_variable_family({a.theta, a.phi, alpha, beta, a.delta1, a.delta2});
  return report_verification(ps, s, 11, eps_win, doc, a.out);
}

int run_solve(const SolveArgs& a) {
  sio::ParsedSpec ps = sio::parse_spec(read_file(a.spec_path));
  double eps_win = win_eps_from_env();
  sio::KvDocument doc;
  doc.add_raw("report", "solve");
  doc.add_raw("label", ps.label.empty() ? "unnamed" : ps.label);

  if (a.use_oracle) {
    OracleResult r = brute_force_oracle(ps.spec, {a.grid, a.climb, 0.7, a.seed});
    doc.add_raw("method", "oracle");
    doc.add("oracle_grid", a.grid);
    doc.add("seed", nlohmann::json(a.seed));
    doc.add("best_worst_fidelity", r.best_worst_fidelity);
    return report_verification(ps, r.best, 11, eps_win, doc, a.out);
  }
  if (ps.spec.ops.size() == 1) {
    UnitaryOp u1 = identity_op();
    UnitaryOp u2 = (ps.spec.ops[0].op * u1).adjoint();
    doc.add_raw("method", "direct-inversion");
    return report_verification(ps, {u1, u2}, 2, eps_win, doc, a.out);
  }
  if (ps.spec.ops.size() == 2) return solve_two_op(ps, a, eps_win, doc);
  return solve_multi_op(ps, a, eps_win, doc);
}

// ---- classify ----

int run_classify(const std::string& spec_path, const std::string& out) {
  sio::ParsedSpec ps = sio::parse_spec(read_file(spec_path));
  if (!ps.typed)
    throw std::invalid_argument("classify needs flip/nonflip-expressible ops");
  MultiStrategyClass cls = classify_multiple(*ps.typed);
  sio::KvDocument doc;
  doc.add_raw("report", "classify");
  doc.add_raw("label", ps.label.empty() ? "unnamed" : ps.label);
  doc.add_raw("kind", sio::kind_name(cls.kind));
  doc.add("flip_count", cls.s);
  doc.add("op_count", cls.ell);
  doc.add_raw("strategy_exists", sio::existence_name(cls.strategy_exists));
  emit(doc, out);
  return cls.strategy_exists == Existence::no_in_general ? kExitNoStrategy : kExitWin;
}

// ---- nash ----

struct NashArgs {
  double pn = 0.5;
  std::string q = "0.25,0.25,0.25,0.25";
  int deviations = 101;
  std::string out;
};

int run_nash(const NashArgs& a) {
  std::array<double, 4> qv{};
  std::istringstream is(a.q);
  std::string tok;
  size_t i = 0;
  while (std::getline(is, tok, ',')) {
    if (i >= 4) throw std::invalid_argument("--q needs exactly four probabilities");
    qv[i++] = std::stod(tok);
  }
  if (i != 4) throw std::invalid_argument("--q needs exactly four probabilities");

  nash::MixedStrategyP p(a.pn, 1.0 - a.pn);
  nash::MixedStrategyQ q(qv[0], qv[1], qv[2], qv[3]);
  double up = nash::expected_payoff(p, q);
  bool eq = nash::is_nash_equilibrium(p, q, a.deviations);

  sio::KvDocument doc;
  doc.add_raw("report", "nash");
  doc.add("p_n", a.pn);
  doc.add("q", nlohmann::json({qv[0], qv[1], qv[2], qv[3]}));
  doc.add("payoff_p", up);
  doc.add("payoff_q", -up);
  doc.add_raw("equilibrium", eq ? "true" : "false");
  emit(doc, a.out);
  return kExitWin;
}

// ---- sweep ----

struct SweepArgs {
  std::string spec_path, out;
  FamilyFlags ff;
  int grid = 11;
  int theta_grid = 1, phi_grid = 1, alpha_grid = 1, beta_grid = 1;
  int delta1_grid = 1, delta2_grid = 1;
  std::uint64_t seed = 0;
};

int run_sweep(const SweepArgs& a) {
  if (a.ff.family.empty()) throw std::invalid_argument("sweep needs --family");
  sio::ParsedSpec ps = sio::parse_spec(read_file(a.spec_path));
  double eps_win = win_eps_from_env();

  auto grid_values = [](int n, double fallback, double lo, double hi) {
    std::vector<double> v;
    if (n <= 1) {
      v.push_back(fallback);
      return v;
    }
    for (int k = 0; k < n; ++k) v.push_back(lo + (hi - lo) * k / n);
    return v;
  };

  // theta stays inside the family's validity range
  std::vector<double> thetas = grid_values(a.theta_grid, a.ff.theta, kPi / 2 + 1e-6,
                                           3 * kPi / 2 - 1e-6);
  std::vector<double> phis = grid_values(a.phi_grid, a.ff.phi, 0, kTau);
  std::vector<double> alphas = grid_values(a.alpha_grid, a.ff.alpha, 0, 2 * kTau);
  std::vector<double> betas = grid_values(a.beta_grid, a.ff.beta, 0, 2 * kTau);
  std::vector<double> d1s = grid_values(a.delta1_grid, a.ff.delta1, 0, kTau);
  std::vector<double> d2s = grid_values(a.delta2_grid, a.ff.delta2, 0, kTau);

  bool phase_family = a.ff.family == "phase";
  if (phase_family && !a.ff.alpha_set && !a.ff.beta_set) {
    FamilyFlags tmp = a.ff;
    derive_phases_from_spec(ps, tmp);
    if (a.alpha_grid <= 1) alphas = {tmp.alpha};
    if (a.beta_grid <= 1) betas = {tmp.beta};
  }

  double min_fid = 1.0;
  long samples = 0;
  for (double th : thetas)
    for (double ph : phis)
      for (double al : alphas)
        for (double be : betas)
          for (double d1 : d1s)
            for (double d2 : d2s) {
              FamilyFlags ff = a.ff;
              ff.theta = th;
              ff.phi = ph;
              ff.alpha = al;
              ff.beta = be;
              ff.alpha_set = ff.beta_set = true;
              ff.delta1 = d1;
              ff.delta2 = d2;
              sio::KvDocument scratch;
              const sio::ParsedSpec* target = &ps;
              std::optional<sio::ParsedSpec> rebuilt;
              if (phase_family) {
                // the phase-variable game itself moves with (alpha, beta)
                GameSpec g = GameSpec::uniform(ps.spec.initial,
                                               {flip_op(al), nonflip_op(be)}, ps.label);
                rebuilt = sio::ParsedSpec{std::move(g), std::nullopt, ps.label};
                target = &rebuilt.value();
              }
              StrategyPair s = strategy_from_flags(*target, ff, scratch);
              VerificationReport rep = verify_strategy(target->spec, s, a.grid, eps_win);
              min_fid = std::min(min_fid, rep.worst_fidelity);
              ++samples;
            }

  sio::KvDocument doc;
  doc.add_raw("report", "sweep");
  doc.add_raw("label", ps.label.empty() ? "unnamed" : ps.label);
  doc.add_raw("family", a.ff.family);
  doc.add("samples", static_cast<int>(samples));
  doc.add("min_fidelity", min_fid);
  doc.add("seed", nlohmann::json(a.seed));
  doc.add_raw("verdict", min_fid >= 1.0 - eps_win ? "win" : "lose");
  emit(doc, a.out);
  return min_fid >= 1.0 - eps_win ? kExitWin : kExitLose;
}

// ---- oracle ----

struct OracleArgs {
  std::string spec_path, out;
  int grid = 8;
  int climb = 200;
  std::uint64_t seed = 0;
};

int run_oracle(const OracleArgs& a) {
  sio::ParsedSpec ps = sio::parse_spec(read_file(a.spec_path));
  OracleResult r = brute_force_oracle(ps.spec, {a.grid, a.climb, 0.7, a.seed});
  sio::KvDocument doc;
  doc.add_raw("report", "oracle");
  doc.add_raw("label", ps.label.empty() ? "unnamed" : ps.label);
  doc.add("oracle_grid", a.grid);
  doc.add("climb_steps", a.climb);
  doc.add("seed", nlohmann::json(a.seed));
  doc.add("best_worst_fidelity", r.best_worst_fidelity);
  return report_verification(ps, r.best, 11, win_eps_from_env(), doc, a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum penny-flip games: strategy synthesis and verification"};
  app.require_subcommand(1);

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "verify a strategy against a game spec");
  verify->add_option("--spec", va.spec_path, "game spec file")->required();
  verify->add_option("--out", va.out, "write the report here instead of stdout");
  verify->add_option("--grid", va.grid, "probability-grid size (default 11)");
  add_family_options(verify, va.ff);

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "synthesize a winning strategy");
  solve->add_option("--spec", sa.spec_path, "game spec file")->required();
  solve->add_option("--out", sa.out, "write the report here instead of stdout");
  solve->add_option("--theta", sa.theta, "family angle for multi-op constructions");
  solve->add_option("--phi", sa.phi, "free diagonal angle (theta2 of the two-unitary pair)");
  solve->add_option("--delta1", sa.delta1, "global phase of the first move");
  solve->add_option("--delta2", sa.delta2, "global phase of the second move");
  solve->add_option("--gamma", sa.gamma, "override the diagonal angle gamma")
      ->each([&](const std::string&) { sa.gamma_set = true; });
  solve->add_option("--c-sign", sa.c_sign, "override the sign c (+1/-1)")
      ->each([&](const std::string&) { sa.c_sign_set = true; });
  solve->add_flag("--oracle", sa.use_oracle, "use the brute-force search oracle");
  solve->add_option("--grid", sa.grid, "oracle grid per dimension (default 8)");
  solve->add_option("--climb", sa.climb, "oracle hill-climb steps (default 200)");
  solve->add_option("--seed", sa.seed, "oracle random seed (default 0)");

  std::string cl_spec, cl_out;
  CLI::App* classify = app.add_subcommand("classify", "classify a multi-operation game");
  classify->add_option("--spec", cl_spec, "game spec file")->required();
  classify->add_option("--out", cl_out, "write the report here instead of stdout");

  NashArgs na;
  CLI::App* nash_cmd = app.add_subcommand("nash", "classical penny-flip equilibrium check");
  nash_cmd->add_option("--pn", na.pn, "P's probability of not flipping")->required();
  nash_cmd->add_option("--q", na.q, "Q's probabilities q_NN,q_NF,q_FN,q_FF")->required();
  nash_cmd->add_option("--deviations", na.deviations, "deviation grid size (default 101)");
  nash_cmd->add_option("--out", na.out, "write the report here instead of stdout");

  SweepArgs wa;
  CLI::App* sweep = app.add_subcommand("sweep", "verify a family over a parameter grid");
  sweep->add_option("--spec", wa.spec_path, "game spec file")->required();
  sweep->add_option("--out", wa.out, "write the report here instead of stdout");
  sweep->add_option("--grid", wa.grid, "probability-grid size (default 11)");
  sweep->add_option("--theta-grid", wa.theta_grid, "theta samples");
  sweep->add_option("--phi-grid", wa.phi_grid, "phi samples");
  sweep->add_option("--alpha-grid", wa.alpha_grid, "alpha samples");
  sweep->add_option("--beta-grid", wa.beta_grid, "beta samples");
  sweep->add_option("--delta1-grid", wa.delta1_grid, "delta1 samples");
  sweep->add_option("--delta2-grid", wa.delta2_grid, "delta2 samples");
  sweep->add_option("--seed", wa.seed, "seed echoed into the report (default 0)");
  add_family_options(sweep, wa.ff);

  OracleArgs oa;
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force search for the best strategy");
  oracle->add_option("--spec", oa.spec_path, "game spec file")->required();
  oracle->add_option("--out", oa.out, "write the report here instead of stdout");
  oracle->add_option("--grid", oa.grid, "grid per dimension (default 8)");
  oracle->add_option("--climb", oa.climb, "hill-climb steps (default 200)");
  oracle->add_option("--seed", oa.seed, "random seed (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*verify) return run_verify(va);
    if (*solve) return run_solve(sa);
    if (*classify) return run_classify(cl_spec, cl_out);
    if (*nash_cmd) return run_nash(na);
    if (*sweep) return run_sweep(wa);
    if (*oracle) return run_oracle(oa);
  } catch (const SingularProblemError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSingular;
  } catch (const AxisNormError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSingular;
  } catch (const InconsistentParamsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSingular;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
