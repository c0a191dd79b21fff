#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xorcomm/bounds.hpp"
#include "xorcomm/errors.hpp"
#include "xorcomm/exact_solver.hpp"
#include "xorcomm/game.hpp"
#include "xorcomm/io.hpp"
#include "xorcomm/protocol.hpp"
#include "xorcomm/quantum.hpp"
#include "xorcomm/space_chain.hpp"

using namespace xorcomm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitRefused = 2;

const char* kCsvHelp = R"(CSV columns:
  verify      name,parameters,lhs,rhs,slack,pass
  value       method,value,cost,wallclock,seed,budget
  separation  n,method,quantum_value,stderr,value_sqrt_n,k,tw_bound,vacuous,classical_lb
Parameters are semicolon-separated key=value pairs. JSON output is a superset.)";

struct Options {
  std::string game_path;
  int correlation = 0;
  std::string pattern = "0,0";
  std::string starter = "alice";
  int qubits = 1;
  std::uint64_t seed = 0;
  double budget = kDefaultBudget;
  std::string format = "json";
  std::string out;

  // game gen
  std::vector<int> random_shape;
  bool chsh = false;

  // value
  std::string method = "classical";
  int restarts = 8;
  int sweeps = 100;
  std::uint64_t samples = 10000;

  // verify
  std::string suite = "khintchine";
  int instances = 100;
  int games = 20;
  int protocols = 50;
  double p_prime = 2.0;

  // separation
  std::vector<int> n_list{1, 2, 3, 4};
  double k = 4.0;
  int heuristic_max_n = 2;
};

double default_budget() {
  if (const char* env = std::getenv("XORCOMM_BUDGET")) {
    try {
      return std::stod(env);
    } catch (const std::exception&) {
      throw ValidationError(std::string("XORCOMM_BUDGET is not a number: ") + env);
    }
  }
  return kDefaultBudget;
}

RunConfig make_config(const std::string& command, const Options& o) {
  RunConfig c;
  c.command = command;
  c.seed = o.seed;
  c.budget = o.budget;
  c.out = o.out;
  c.format = o.format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  if (!o.game_path.empty()) c.params["game"] = o.game_path;
  if (o.correlation > 0) c.params["correlation"] = std::to_string(o.correlation);
  return c;
}

// Writes to --out or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ValidationError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

CommPattern pattern_of(const Options& o) {
  if (o.starter != "alice" && o.starter != "bob") throw ValidationError("--starter must be alice or bob");
  return CommPattern::parse(o.pattern, o.starter == "alice" ? Starter::Alice : Starter::Bob);
}

XorGame dense_game(const Options& o) {
  if (!o.game_path.empty()) {
    GameFile f = load_game(o.game_path);
    if (f.kind == GameFile::Kind::Explicit) return *f.game;
    return correlation_game(f.n, true).materialize();
  }
  if (o.correlation > 0) return correlation_game(o.correlation, true).materialize();
  throw ValidationError("one of --game or --correlation is required");
}

int correlation_n(const Options& o) {
  if (o.correlation > 0) return o.correlation;
  if (!o.game_path.empty()) {
    GameFile f = load_game(o.game_path);
    if (f.kind == GameFile::Kind::Correlation) return f.n;
  }
  throw ValidationError("this method needs a correlation game (--correlation N)");
}

Eigen::MatrixXd gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  return Eigen::MatrixXd::NullaryExpr(r, c, [&] { return normal(rng); });
}

// ---- game ---------------------------------------------------------------

int cmd_game_gen(const Options& o) {
  json j;
  if (o.correlation > 0) {
    j = correlation_game_to_json(o.correlation);
  } else if (o.chsh) {
    Eigen::MatrixXd t(2, 2);
    t << 1, 1, 1, -1;
    j = game_to_json(XorGame::from_raw(t));
  } else if (o.random_shape.size() == 2) {
    std::mt19937_64 rng(o.seed);
    j = game_to_json(XorGame::from_raw(gaussian(o.random_shape[0], o.random_shape[1], rng)));
  } else {
    throw ValidationError("game gen needs --correlation N, --chsh or --random R,S");
  }
  j["config"] = to_json(make_config("game gen", o));
  j["version"] = kVersion;
  Sink sink(o.out);
  sink.stream() << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_game_info(const Options& o) {
  json info;
  GameFile f;
  if (!o.game_path.empty()) {
    f = load_game(o.game_path);
  } else if (o.correlation > 0) {
    f.kind = GameFile::Kind::Correlation;
    f.n = o.correlation;
  } else {
    throw ValidationError("game info needs --game or --correlation");
  }
  if (f.kind == GameFile::Kind::Explicit) {
    const XorGame& g = *f.game;
    info = {{"kind", "explicit"},
            {"R", g.alice_inputs()},
            {"S", g.bob_inputs()},
            {"abs_sum", g.coeffs().cwiseAbs().sum()},
            {"rescaled", g.was_rescaled()},
            {"rescale_factor", g.scale()}};
  } else {
    const CorrelationGame g = correlation_game(f.n, true);
    info = correlation_game_to_json(f.n);
    info["R"] = g.alice_inputs();
    if (g.bob_bits() < 64) info["S"] = g.bob_inputs();
  }
  Sink sink(o.out);
  if (o.format == "csv") {
    sink.stream() << "key,value\n";
    for (auto it = info.begin(); it != info.end(); ++it) sink.stream() << it.key() << ',' << it.value().dump() << '\n';
  } else {
    sink.stream() << info.dump(2) << '\n';
  }
  return kExitOk;
}

// ---- value --------------------------------------------------------------

int cmd_value(const Options& o) {
  RunConfig config = make_config("value", o);
  config.params["method"] = o.method;
  const auto t0 = std::chrono::steady_clock::now();
  json record;
  SolveResult r;
  bool have_solve = false;

  if (o.method == "classical") {
    const XorGame g = dense_game(o);
    r.value = classical_value(g);
    r.method = "classical";
    r.cost = std::ldexp(1.0, static_cast<int>(std::min(g.alice_inputs(), g.bob_inputs())));
    have_solve = true;
  } else if (o.method == "tw-exact" || o.method == "epsilon" || o.method == "tw-heuristic") {
    const XorGame g = dense_game(o);
    const CommPattern p = pattern_of(o);
    config.params["pattern"] = p.to_string();
    if (o.method == "tw-exact") {
      r = exact_tw_value(g, p, o.budget);
    } else if (o.method == "epsilon") {
      r = epsilon_norm(g, p, o.budget);
    } else {
      config.params["restarts"] = std::to_string(o.restarts);
      r = heuristic_tw_lower_bound(g, p, o.restarts, o.seed);
    }
    have_solve = true;
  } else if (o.method == "quantum-explicit") {
    const int n = correlation_n(o);
    const CorrelationProtocol proto = explicit_protocol(n);
    record = {{"method", "quantum-explicit"}, {"n", n}, {"qubits", proto.qubits()}};
    if (n <= 4) {
      const double v = quantum_value_exact(correlation_game(n, true), proto);
      record["value"] = v;
      record["stderr"] = 0.0;
      record["evaluation"] = "exact";
    } else {
      config.params["samples"] = std::to_string(o.samples);
      const SampledValue sv = quantum_value_sampled(n, proto, o.samples, o.seed);
      record["value"] = sv.estimate;
      record["stderr"] = sv.stderr_;
      record["evaluation"] = "sampled";
      record["inner_exact"] = sv.inner_exact;
    }
  } else if (o.method == "quantum-seesaw") {
    const XorGame g = dense_game(o);
    SeeSawOptions so;
    so.sweeps = o.sweeps;
    so.restarts = o.restarts;
    so.seed = o.seed;
    so.warm_start_budget = std::min(o.budget, 1e8);
    config.params["qubits"] = std::to_string(o.qubits);
    const SeeSawResult res = see_saw(g, o.qubits, so);
    record = {{"method", "quantum-seesaw"},
              {"value", res.value},
              {"qubits", o.qubits},
              {"classical_warm_start", res.used_classical_warm_start},
              {"traces", res.traces},
              {"strategy", quantum_strategy_to_json(res.strategy)}};
  } else {
    throw ValidationError("unknown --method '" + o.method + "'");
  }

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (have_solve) {
    if (r.wallclock_seconds == 0.0) r.wallclock_seconds = elapsed;
    record = result_to_json(r, config);
  } else {
    record["wallclock"] = elapsed;
    record["config"] = to_json(config);
    record["version"] = kVersion;
  }

  Sink sink(o.out);
  if (o.format == "csv") {
    sink.stream() << "method,value,cost,wallclock,seed,budget\n"
                  << record["method"].get<std::string>() << ',' << format_double(record["value"].get<double>()) << ','
                  << format_double(record.value("cost", 0.0)) << ','
                  << format_double(record["wallclock"].get<double>()) << ',' << o.seed << ','
                  << format_double(o.budget) << '\n';
  } else {
    sink.stream() << record.dump(2) << '\n';
  }
  return kExitOk;
}

// ---- verify -------------------------------------------------------------

std::vector<BoundReport> suite_khintchine(const Options& o) {
  std::vector<BoundReport> rows;
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> pick_n(1, 10);
  for (int i = 0; i < o.instances; ++i) {
    const int n = pick_n(rng);
    const Eigen::VectorXd alpha = gaussian(n, 1, rng);
    const BoundReport k = khintchine_check(alpha, 2.0);
    rows.push_back(make_equality_report("parseval", k.parameters.at("middle"), k.parameters.at("l2"), 1e-12,
                                        {{"n", n}, {"instance", i}}));
  }
  std::uniform_int_distribution<int> pick_small(1, 4);
  const double p_primes[] = {2.0, 3.0, 4.0};
  for (int i = 0; i < 2 * o.instances; ++i) {
    const int n = pick_small(rng);
    const double pp = p_primes[i % 3];
    BoundReport single = transpose_khintchine_check(gaussian(Eigen::Index{1} << n, 1, rng), KhintchineMode::Single, pp);
    BoundReport dbl = transpose_khintchine_check(gaussian(Eigen::Index{1} << (2 * n), 1, rng), KhintchineMode::Double, pp);
    single.parameters["instance"] = i;
    dbl.parameters["instance"] = i;
    rows.push_back(std::move(single));
    rows.push_back(std::move(dbl));
  }
  return rows;
}

std::vector<BoundReport> suite_lemmas(const Options& o) {
  std::vector<BoundReport> rows;
  const std::vector<std::string> patterns = {"0,0", "1,0", "0,1", "1,1", "2,1", "1,1,1,0", "1,0,0,1", "1,1,0,1,1,0"};
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> pick_inputs(1, 3);
  for (int i = 0; i < 5 * o.instances; ++i) {
    const CommPattern p = CommPattern::parse(patterns[static_cast<std::size_t>(i) % patterns.size()]);
    const Eigen::Index R = pick_inputs(rng), S = pick_inputs(rng);
    const RandomizedStrategyPair s = random_strategy(p, R, S, rng);
    const StrategyTensor a = build_alice_tensor(s, p, R);
    const StrategyTensor b = build_bob_tensor(s, p, S);
    const std::map<std::string, double> params = {{"instance", i}, {"t", p.t()}, {"R", R}, {"S", S}};
    BoundReport na = make_report("nested_norm_alice", nested_norm(a, p), 1.0, params);
    BoundReport nb = make_report("nested_norm_bob", nested_norm(b, p), 1.0, params);
    double mass = 0.0;
    for (Eigen::Index x = 0; x < R; ++x)
      for (Eigen::Index y = 0; y < S; ++y) mass = std::max(mass, pair_product_mass(a, b, x, y));
    BoundReport m = make_report("message_mass", mass, 1.0, params);
    for (BoundReport* r : {&na, &nb, &m}) {
      r->tolerance = 1e-12;
      rows.push_back(std::move(*r));
    }
  }
  const std::vector<std::string> extreme_patterns = {"1,0", "0,1", "1,1", "1,1,1,0"};
  for (std::size_t i = 0; i < extreme_patterns.size(); ++i) {
    const CommPattern p = CommPattern::parse(extreme_patterns[i]);
    for (Side side : {Side::Alice, Side::Bob}) {
      const Eigen::Index inputs = 2;
      const SpaceChain chain = SpaceChain::for_side(side, p, static_cast<std::uint64_t>(inputs));
      double worst = 0.0;
      double decoded = 0.0, count = 0.0;
      chain.for_each_extreme_point(
          [&](std::span<const double> point) {
            StrategyTensor t;
            t.side = side;
            t.pattern = p;
            t.entries = Eigen::Map<const RowMatrixXd>(point.data(), inputs,
                                                       static_cast<Eigen::Index>(point.size()) / inputs);
            worst = std::max(worst, std::abs(nested_norm(t, p) - 1.0));
            decoded += decode_extreme_point(side, p, inputs, point).has_value() ? 1.0 : 0.0;
            count += 1.0;
          },
          o.budget);
      const std::map<std::string, double> params = {{"pattern", static_cast<double>(i)},
                                                    {"side", side == Side::Alice ? 0.0 : 1.0},
                                                    {"points", count}};
      rows.push_back(make_equality_report("extreme_point_norm", 1.0 + worst, 1.0, 1e-12, params));
      rows.push_back(make_equality_report("extreme_point_decodes", decoded, count, 0.0, params));
    }
  }
  return rows;
}

std::vector<BoundReport> suite_theorem2(const Options& o) {
  std::vector<BoundReport> rows;
  const std::vector<std::string> patterns = {"1,0", "0,1", "1,1", "1,1,1,0"};
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> pick_inputs(2, 3);
  for (int i = 0; i < o.games; ++i) {
    const Eigen::Index R = pick_inputs(rng), S = pick_inputs(rng);
    const XorGame g = XorGame::from_raw(gaussian(R, S, rng));
    const CommPattern p = CommPattern::parse(patterns[static_cast<std::size_t>(i) % patterns.size()]);
    const double exact = exact_tw_value(g, p, o.budget).value;
    const double eps = epsilon_norm(g, p, o.budget).value;
    rows.push_back(make_equality_report("tw_exact_eq_epsilon", exact, eps, 1e-9,
                                        {{"game", i}, {"R", R}, {"S", S}, {"t", p.t()}, {"bits", p.total_bits()}}));
  }
  return rows;
}

std::vector<BoundReport> suite_proofchain(const Options& o) {
  std::vector<BoundReport> rows;
  const int n = o.correlation > 0 ? o.correlation : 2;
  const CommPattern p = o.pattern == "0,0" ? CommPattern::parse("1,1") : pattern_of(o);
  const CorrelationGame g = correlation_game(n, true);
  const double k = std::ldexp(1.0, p.total_bits());
  std::mt19937_64 rng(o.seed);
  for (int i = 0; i < o.protocols; ++i) {
    const RandomizedStrategyPair s = random_strategy(p, static_cast<Eigen::Index>(g.alice_inputs()),
                                                     static_cast<Eigen::Index>(g.bob_inputs()), rng);
    std::vector<BoundReport> chain = proof_chain_audit(n, s, p, o.p_prime);
    const bool endpoint = o.p_prime >= 2.0 && std::abs(o.p_prime - std::log2(k)) < 1e-12;
    for (BoundReport& r : chain) r.parameters["protocol"] = i;
    if (endpoint) {
      BoundReport e = chain_endpoint_check(chain, n, k);
      e.parameters["protocol"] = i;
      chain.push_back(std::move(e));
    }
    rows.insert(rows.end(), chain.begin(), chain.end());
  }
  return rows;
}

int cmd_verify(const Options& o) {
  std::vector<BoundReport> rows;
  if (o.suite == "khintchine") {
    rows = suite_khintchine(o);
  } else if (o.suite == "lemmas") {
    rows = suite_lemmas(o);
  } else if (o.suite == "theorem2") {
    rows = suite_theorem2(o);
  } else if (o.suite == "proofchain") {
    rows = suite_proofchain(o);
  } else {
    throw ValidationError("unknown --suite '" + o.suite + "'");
  }
  bool all = true;
  for (const BoundReport& r : rows) all = all && r.pass();

  Sink sink(o.out);
  if (o.format == "json") {
    RunConfig config = make_config("verify", o);
    config.params["suite"] = o.suite;
    json j = {{"suite", o.suite}, {"pass", all}, {"config", to_json(config)}, {"version", kVersion}};
    j["reports"] = json::array();
    for (const BoundReport& r : rows) j["reports"].push_back(report_to_json(r));
    sink.stream() << j.dump(2) << '\n';
  } else {
    write_reports_csv(sink.stream(), rows);
  }
  std::size_t failed = 0;
  for (const BoundReport& r : rows) failed += r.pass() ? 0 : 1;
  std::cerr << o.suite << ": " << rows.size() << " checks, " << failed << " failed\n";
  return all ? kExitOk : kExitFailed;
}

// ---- separation ---------------------------------------------------------

CommPattern pattern_for_bits(int bits) {
  CommPattern p;
  p.rounds.clear();
  for (int b = 0; b < bits; b += 2) p.rounds.push_back(Round{1, b + 1 < bits ? 1 : 0});
  if (p.rounds.empty()) p.rounds.push_back(Round{});
  return p;
}

int cmd_separation(const Options& o) {
  const int bits = static_cast<int>(std::lround(std::log2(o.k)));
  json rows = json::array();
  for (int n : o.n_list) {
    json row = {{"n", n}, {"k", o.k}};
    const TwoWayBound bound = tw_upper_bound(n, o.k);
    row["tw_bound"] = bound.value;
    row["vacuous"] = bound.vacuous;
    if (n <= 8) {
      const CorrelationProtocol proto = explicit_protocol(n);
      double value = 0.0, err = 0.0;
      if (n <= 4) {
        value = quantum_value_exact(correlation_game(n, true), proto);
        row["method"] = "exact";
      } else {
        const SampledValue sv = quantum_value_sampled(n, proto, o.samples, o.seed);
        value = sv.estimate;
        err = sv.stderr_;
        row["method"] = "sampled";
      }
      row["quantum_value"] = value;
      row["stderr"] = err;
      row["value_sqrt_n"] = value * std::sqrt(static_cast<double>(n));
    } else {
      row["method"] = "bound-only";
    }
    if (n <= o.heuristic_max_n) {
      const XorGame g = correlation_game(n, true).materialize();
      row["classical_lb"] = heuristic_tw_lower_bound(g, pattern_for_bits(bits), o.restarts, o.seed).value;
      row["classical_pattern"] = pattern_for_bits(bits).to_string();
    }
    rows.push_back(std::move(row));
  }

  Sink sink(o.out);
  if (o.format == "csv") {
    auto num = [](const json& r, const char* key) {
      return r.contains(key) ? format_double(r[key].get<double>()) : std::string();
    };
    sink.stream() << "n,method,quantum_value,stderr,value_sqrt_n,k,tw_bound,vacuous,classical_lb\n";
    for (const json& r : rows) {
      sink.stream() << r["n"].get<int>() << ',' << r["method"].get<std::string>() << ',' << num(r, "quantum_value")
                    << ',' << num(r, "stderr") << ',' << num(r, "value_sqrt_n") << ',' << num(r, "k") << ','
                    << num(r, "tw_bound") << ',' << (r["vacuous"].get<bool>() ? "true" : "false") << ','
                    << num(r, "classical_lb") << '\n';
    }
  } else {
    RunConfig config = make_config("separation", o);
    config.params["k"] = format_double(o.k);
    config.params["samples"] = std::to_string(o.samples);
    sink.stream() << json{{"rows", rows}, {"config", to_json(config)}, {"version", kVersion}}.dump(2) << '\n';
  }
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--budget", o.budget, "Maximum estimated operations (default: $XORCOMM_BUDGET or 2e10)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", o.out, "Output path (default: stdout)");
}

void add_game_source(CLI::App* cmd, Options& o) {
  auto* g = cmd->add_option("--game", o.game_path, "JSON game file");
  auto* c = cmd->add_option("--correlation,--n", o.correlation, "Correlation game size n");
  g->excludes(c);
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  try {
    o.budget = default_budget();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRefused;
  }

  CLI::App app{"XOR games under bounded classical and quantum communication"};
  app.footer(kCsvHelp);
  app.require_subcommand(1);

  auto* game = app.add_subcommand("game", "Generate or inspect game files");
  game->require_subcommand(1);
  auto* gen = game->add_subcommand("gen", "Write a game file");
  gen->add_option("--correlation,--n", o.correlation, "Correlation game of size n");
  gen->add_flag("--chsh", o.chsh, "2x2 CHSH-like game");
  gen->add_option("--random", o.random_shape, "Gaussian game with shape R,S")->delimiter(',')->expected(2);
  add_common(gen, o);
  auto* info = game->add_subcommand("info", "Summarize a game");
  add_game_source(info, o);
  add_common(info, o);

  auto* value = app.add_subcommand("value", "Compute a game value");
  value->add_option("--method", o.method, "Method")
      ->check(CLI::IsMember({"classical", "tw-exact", "epsilon", "tw-heuristic", "quantum-explicit", "quantum-seesaw"}));
  add_game_source(value, o);
  value->add_option("--pattern", o.pattern, "Communication pattern c1,d1[,c2,d2...]");
  value->add_option("--starter", o.starter, "First speaker")->check(CLI::IsMember({"alice", "bob"}));
  value->add_option("--qubits", o.qubits, "Qubits for quantum-seesaw");
  value->add_option("--restarts", o.restarts, "Restarts for heuristic methods");
  value->add_option("--sweeps", o.sweeps, "Sweeps per see-saw run");
  value->add_option("--samples", o.samples, "Sampled Bob inputs for n > 4");
  add_common(value, o);

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", o.suite, "Suite")->check(CLI::IsMember({"khintchine", "lemmas", "theorem2", "proofchain"}));
  verify->add_option("--instances", o.instances, "Random instances (khintchine, lemmas)");
  verify->add_option("--games", o.games, "Random games (theorem2)");
  verify->add_option("--protocols", o.protocols, "Random protocols (proofchain)");
  verify->add_option("--correlation,--n", o.correlation, "Correlation game size (proofchain)");
  verify->add_option("--pattern", o.pattern, "Pattern (proofchain, default 1,1)");
  verify->add_option("--p-prime", o.p_prime, "Conjugate exponent (proofchain)");
  add_common(verify, o);

  auto* sep = app.add_subcommand("separation", "Quantum value against the two-way classical bound");
  sep->add_option("--n-list", o.n_list, "Sizes n")->delimiter(',');
  sep->add_option("--k", o.k, "Classical message count k");
  sep->add_option("--samples", o.samples, "Sampled Bob inputs for n > 4");
  sep->add_option("--restarts", o.restarts, "Heuristic restarts");
  sep->add_option("--heuristic-max-n", o.heuristic_max_n, "Largest n for the heuristic classical column");
  add_common(sep, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitRefused;
  }

  if (verify->parsed() && verify->count("--format") == 0) o.format = "csv";

  try {
    if (gen->parsed()) return cmd_game_gen(o);
    if (info->parsed()) return cmd_game_info(o);
    if (value->parsed()) return cmd_value(o);
    if (verify->parsed()) return cmd_verify(o);
    if (sep->parsed()) return cmd_separation(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRefused;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRefused;
  }
  return kExitRefused;
}
