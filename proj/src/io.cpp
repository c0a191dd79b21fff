#include "xorcomm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "xorcomm/errors.hpp"

namespace xorcomm {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json to_json(const RunConfig& config) {
  json j;
  j["command"] = config.command;
  j["params"] = config.params;
  j["seed"] = config.seed;
  j["budget"] = config.budget;
  j["tolerance"] = config.tolerance;
  j["format"] = config.format == OutputFormat::Json ? "json" : "csv";
  if (!config.out.empty()) j["out"] = config.out;
  return j;
}

namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw ValidationError(std::string("missing field '") + name + "'");
  return j.at(name);
}

int int_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) throw ValidationError(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

RowMatrixXd matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ValidationError(where + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw ValidationError(where + " row 0 is not an array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  RowMatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError(where + " row " + std::to_string(r) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        throw ValidationError(where + " entry (" + std::to_string(r) + ", " + std::to_string(c) + ") is not a number");
      }
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

template <typename Derived>
json matrix_to_json(const Eigen::MatrixBase<Derived>& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json signs_to_json(const Eigen::VectorXi& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXi signs_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + " must be an array");
  Eigen::VectorXi v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw ValidationError(where + " entry " + std::to_string(i) + " is not an integer");
    v(static_cast<Eigen::Index>(i)) = j[i].get<int>();
  }
  return v;
}

json pattern_to_json(const CommPattern& p) {
  json rounds = json::array();
  for (const Round& r : p.rounds) rounds.push_back({r.first_bits, r.second_bits});
  return {{"starter", p.starter == Starter::Alice ? "alice" : "bob"}, {"rounds", rounds}, {"text", p.to_string()}};
}

CommPattern pattern_from_json(const json& j) {
  CommPattern p;
  const std::string starter = field(j, "starter").get<std::string>();
  if (starter != "alice" && starter != "bob") throw ValidationError("field 'starter' must be alice or bob");
  p.starter = starter == "alice" ? Starter::Alice : Starter::Bob;
  const json& rounds = field(j, "rounds");
  if (!rounds.is_array() || rounds.empty()) throw ValidationError("field 'rounds' must be a non-empty array");
  p.rounds.clear();
  for (const json& r : rounds) {
    if (!r.is_array() || r.size() != 2) throw ValidationError("each round must be a [first, second] pair");
    p.rounds.push_back(Round{r[0].get<int>(), r[1].get<int>()});
  }
  p.validate();
  return p;
}

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

}  // namespace

GameFile parse_game(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  GameFile g;
  if (kind == "correlation") {
    g.kind = GameFile::Kind::Correlation;
    g.n = int_field(j, "n");
    if (g.n < 1 || g.n > 8) throw ValidationError("field 'n' must lie in [1, 8]");
    return g;
  }
  if (kind != "explicit") throw ValidationError("field 'kind' must be explicit or correlation");
  const int R = int_field(j, "R");
  const int S = int_field(j, "S");
  const RowMatrixXd m = matrix_from_json(field(j, "coeffs"), "field 'coeffs'");
  if (m.rows() != R || m.cols() != S) throw ShapeMismatch("field 'coeffs' does not have shape R x S");
  g.game = XorGame::from_raw(m);
  return g;
}

GameFile load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open game file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("game file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_game(j);
}

json game_to_json(const XorGame& game) {
  return {{"kind", "explicit"},
          {"R", game.alice_inputs()},
          {"S", game.bob_inputs()},
          {"coeffs", matrix_to_json(game.coeffs())},
          {"scale", game.scale()},
          {"rescaled", game.was_rescaled()}};
}

json correlation_game_to_json(int n) {
  const CorrelationGame g = correlation_game(n, true);
  const auto [lo, hi] = L_bounds(n);
  json j = {{"kind", "correlation"}, {"n", n}, {"L_exact", g.L_is_exact()}, {"L_bounds", {lo, hi}}};
  if (g.L_is_exact()) {
    j["L"] = exact_L(n);
  } else {
    j["L"] = g.L();
    j["approximate_L"] = true;
  }
  return j;
}

json strategy_to_json(const RandomizedStrategyPair& s) {
  json a = json::array(), b = json::array();
  for (const auto& m : s.alice_messages) a.push_back(matrix_to_json(m));
  for (const auto& m : s.bob_messages) b.push_back(matrix_to_json(m));
  return {{"pattern", pattern_to_json(s.pattern)},
          {"alice_inputs", s.alice_inputs},
          {"bob_inputs", s.bob_inputs},
          {"alice_messages", a},
          {"bob_messages", b},
          {"alice_answers", signs_to_json(s.alice_answers)},
          {"bob_answers", signs_to_json(s.bob_answers)}};
}

RandomizedStrategyPair strategy_from_json(const json& j) {
  RandomizedStrategyPair s;
  s.pattern = pattern_from_json(field(j, "pattern"));
  s.alice_inputs = int_field(j, "alice_inputs");
  s.bob_inputs = int_field(j, "bob_inputs");
  const json& a = field(j, "alice_messages");
  const json& b = field(j, "bob_messages");
  if (!a.is_array() || !b.is_array()) throw ValidationError("message tables must be arrays");
  for (std::size_t i = 0; i < a.size(); ++i) {
    s.alice_messages.push_back(matrix_from_json(a[i], "alice_messages[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    s.bob_messages.push_back(matrix_from_json(b[i], "bob_messages[" + std::to_string(i) + "]"));
  }
  s.alice_answers = signs_from_json(field(j, "alice_answers"), "field 'alice_answers'");
  s.bob_answers = signs_from_json(field(j, "bob_answers"), "field 'bob_answers'");
  s.validate();
  return s;
}

json protocol_to_json(const DeterministicProtocolPair& p) {
  return {{"pattern", pattern_to_json(p.pattern)},
          {"alice_inputs", p.alice_inputs},
          {"bob_inputs", p.bob_inputs},
          {"alice_messages", p.alice_messages},
          {"bob_messages", p.bob_messages},
          {"alice_answers", signs_to_json(p.alice_answers)},
          {"bob_answers", signs_to_json(p.bob_answers)},
          {"roles_swapped", p.roles_swapped}};
}

json quantum_strategy_to_json(const QuantumOneWayStrategy& s) {
  json states = json::array(), observables = json::array();
  for (const auto& psi : s.states) {
    json v = json::array();
    for (Eigen::Index i = 0; i < psi.size(); ++i) v.push_back(complex_to_json(psi(i)));
    states.push_back(std::move(v));
  }
  for (const auto& B : s.observables) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < B.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < B.cols(); ++c) row.push_back(complex_to_json(B(r, c)));
      rows.push_back(std::move(row));
    }
    observables.push_back(std::move(rows));
  }
  return {{"qubits", s.qubits},
          {"dimension", s.dimension()},
          {"states", states},
          {"observables", observables},
          {"answers", signs_to_json(s.answers)}};
}

json result_to_json(const SolveResult& r, const RunConfig& config) {
  json j = {{"value", r.value},
            {"method", r.method},
            {"cost", r.cost},
            {"wallclock", r.wallclock_seconds},
            {"config", to_json(config)},
            {"version", kVersion}};
  j["certificate"] = r.certificate ? protocol_to_json(*r.certificate) : json(nullptr);
  if (!r.traces.empty()) j["traces"] = r.traces;
  return j;
}

json report_to_json(const BoundReport& r) {
  return {{"name", r.name},
          {"parameters", r.parameters},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"slack", r.slack},
          {"pass", r.pass()}};
}

void write_reports_csv(std::ostream& os, const std::vector<BoundReport>& reports) {
  os << "name,parameters,lhs,rhs,slack,pass\n";
  for (const BoundReport& r : reports) {
    std::string params;
    for (const auto& [k, v] : r.parameters) {
      if (!params.empty()) params += ';';
      params += k + '=' + format_double(v);
    }
    os << r.name << ',' << params << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
       << format_double(r.slack) << ',' << (r.pass() ? "true" : "false") << '\n';
  }
}

}  // namespace xorcomm
