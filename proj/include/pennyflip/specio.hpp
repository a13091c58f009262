#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pennyflip/gamesim.hpp"
#include "pennyflip/solver.hpp"

namespace pennyflip {
namespace specio {

using nlohmann::json;

// Both game specs and reports use one line-oriented `key = value` format.
// Values are either bare tokens (heads, sigma1, flip(1.3), win) or JSON
// arrays; complex numbers are [re, im] pairs. JSON emission uses
// shortest-round-trip doubles, so written reports re-parse bit-exactly.

struct KvDocument {
  std::vector<std::pair<std::string, std::string>> entries;

  void add_raw(const std::string& key, std::string value) {
    entries.emplace_back(key, std::move(value));
  }
  void add(const std::string& key, double v) { add_raw(key, json(v).dump()); }
  void add(const std::string& key, int v) { add_raw(key, json(v).dump()); }
  void add(const std::string& key, const json& v) { add_raw(key, v.dump()); }

  std::optional<std::string> find(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return v;
    return std::nullopt;
  }
  std::vector<std::string> find_all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries)
      if (k == key) out.push_back(v);
    return out;
  }

  std::string str() const {
    std::ostringstream os;
    for (const auto& [k, v] : entries) os << k << " = " << v << "\n";
    return os.str();
  }
};

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline KvDocument parse_kv(const std::string& text) {
  KvDocument doc;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("malformed line: " + line);
    doc.add_raw(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return doc;
}

// --- complex / matrix serialization ---

inline json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw std::invalid_argument("complex value must be a number or an [re, im] pair");
}

inline json matrix_to_json(const Mat2& m) {
  return json::array({json::array({complex_to_json(m(0, 0)), complex_to_json(m(0, 1))}),
                      json::array({complex_to_json(m(1, 0)), complex_to_json(m(1, 1))})});
}

inline Mat2 matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
      !j[1].is_array() || j[1].size() != 2)
    throw std::invalid_argument("matrix value must be a 2x2 nested array");
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = complex_from_json(j[r][c]);
  return m;
}

// --- operator tokens: presets, flip(a)/nonflip(b), raw matrices ---

inline std::optional<double> parse_call(const std::string& token, const std::string& name) {
  if (token.size() <= name.size() + 2 || token.compare(0, name.size(), name) != 0 ||
      token[name.size()] != '(' || token.back() != ')')
    return std::nullopt;
  std::string inner = token.substr(name.size() + 1, token.size() - name.size() - 2);
  size_t used = 0;
  double v = std::stod(inner, &used);
  if (trim(inner.substr(used)).size()) throw std::invalid_argument("bad angle in " + token);
  return v;
}

/// Typed view of an op token when it is expressible as a flip/nonflip preset
/// (sigma3 counts as nonflip(pi): equal to i*sigma3, a pure phase apart).
inline std::optional<PhasedOp> typed_op_from_token(const std::string& token) {
  if (token == "sigma1") return PhasedOp{PhasedOp::Kind::flip, 0.0};
  if (token == "identity") return PhasedOp{PhasedOp::Kind::nonflip, 0.0};
  if (token == "sigma3") return PhasedOp{PhasedOp::Kind::nonflip, kPi};
  if (auto a = parse_call(token, "flip")) return PhasedOp{PhasedOp::Kind::flip, *a};
  if (auto b = parse_call(token, "nonflip")) return PhasedOp{PhasedOp::Kind::nonflip, *b};
  return std::nullopt;
}

inline UnitaryOp op_from_token(const std::string& token) {
  if (token == "identity") return identity_op();
  if (token == "sigma1") return pauli(1);
  if (token == "sigma2") return pauli(2);
  if (token == "sigma3") return pauli(3);
  if (token == "hadamard") return hadamard();
  if (auto a = parse_call(token, "flip")) return flip_op(*a);
  if (auto b = parse_call(token, "nonflip")) return nonflip_op(*b);
  if (!token.empty() && token[0] == '[') {
    json j = json::parse(token);
    return UnitaryOp(matrix_from_json(j));  // unitarity enforced here
  }
  throw std::invalid_argument("unknown operator token: " + token);
}

inline DensityMatrix initial_from_token(const std::string& token) {
  if (token.empty() || token == "heads") return DensityMatrix::pure(ket0());
  if (token == "tails") return DensityMatrix::pure(ket1());
  if (token[0] == '[') {
    json j = json::parse(token);
    if (j.is_array() && j.size() == 2)
      return DensityMatrix::pure(StateVector(complex_from_json(j[0]), complex_from_json(j[1])));
  }
  throw std::invalid_argument("unknown initial-state token: " + token);
}

/// A parsed game-spec document. `typed` is populated when every op was given
/// as a flip/nonflip-expressible preset (required by classify).
struct ParsedSpec {
  GameSpec spec;
  std::optional<std::vector<PhasedOp>> typed;
  std::string label;
};

inline ParsedSpec parse_spec(const std::string& text) {
  KvDocument doc = parse_kv(text);
  std::string label = doc.find("label").value_or("");

  DensityMatrix initial = initial_from_token(doc.find("initial").value_or("heads"));

  std::vector<std::string> op_tokens = doc.find_all("op");
  if (op_tokens.empty()) throw std::invalid_argument("spec has no adversary ops");

  std::vector<UnitaryOp> ops;
  std::vector<PhasedOp> typed;
  bool all_typed = true;
  for (const auto& tok : op_tokens) {
    ops.push_back(op_from_token(tok));
    if (auto t = typed_op_from_token(tok))
      typed.push_back(*t);
    else
      all_typed = false;
  }

  std::vector<WeightedOp> weighted;
  if (auto probs = doc.find("probs")) {
    json j = json::parse(*probs);
    if (!j.is_array() || j.size() != ops.size())
      throw std::invalid_argument("probs must list one weight per op");
    for (size_t i = 0; i < ops.size(); ++i)
      weighted.push_back({ops[i], j[i].get<double>()});
  } else {
    double w = 1.0 / static_cast<double>(ops.size());
    for (auto& op : ops) weighted.push_back({op, w});
  }

  ParsedSpec out{GameSpec(std::move(initial), std::move(weighted), label), std::nullopt, label};
  if (all_typed) out.typed = std::move(typed);
  return out;
}

// --- report emission ---

inline json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

inline void add_verification(KvDocument& doc, const VerificationReport& rep) {
  doc.add_raw("verdict", rep.win ? "win" : "lose");
  doc.add("worst_fidelity", rep.worst_fidelity);
  doc.add("branch_count", static_cast<int>(rep.branch_fidelities.size()));
  doc.add("branch_fidelity", json(rep.branch_fidelities));
  doc.add("prob_grid", json(rep.probability_grid));
  doc.add("grid_fidelity", json(rep.grid_fidelities));
  doc.add("payoff_p", rep.payoff_p);
  doc.add("payoff_q", rep.payoff_q);
  doc.add("eps_win", rep.eps_win);
  for (size_t i = 0; i < rep.bloch_traces.size(); ++i) {
    json steps = json::array();
    for (const Vec3& v : rep.bloch_traces[i]) steps.push_back(vec3_to_json(v));
    doc.add("bloch_branch_" + std::to_string(i), steps);
  }
}

inline void add_strategy(KvDocument& doc, const StrategyPair& s) {
  doc.add("u1", matrix_to_json(s.u1.mat()));
  doc.add("u2", matrix_to_json(s.u2.mat()));
}

inline const char* kind_name(MultiKind k) {
  switch (k) {
    case MultiKind::all_commuting: return "all-commuting";
    case MultiKind::flip_commuting_trivial_n: return "flip-commuting-trivial-N";
    case MultiKind::flip_commuting_nontrivial_n: return "flip-commuting-nontrivial-N";
    case MultiKind::general: return "general";
  }
  return "general";
}

inline const char* existence_name(Existence e) {
  switch (e) {
    case Existence::exists: return "yes";
    case Existence::no_in_general: return "no-in-general";
    case Existence::unknown: return "unknown";
  }
  return "unknown";
}

}  // namespace specio
}  // namespace pennyflip
