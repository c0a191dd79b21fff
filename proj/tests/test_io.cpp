#include <doctest.h>

#include <random>
#include <sstream>

#include "xorcomm/errors.hpp"
#include "xorcomm/io.hpp"

using namespace xorcomm;

namespace {

std::string error_of(const json& j) {
  try {
    parse_game(j);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("explicit game round trip") {
  const json in = json::parse(R"({"kind":"explicit","R":2,"S":2,"coeffs":[[2,2],[2,-2]]})");
  const GameFile f = parse_game(in);
  REQUIRE(f.kind == GameFile::Kind::Explicit);
  REQUIRE(f.game.has_value());
  CHECK(f.game->scale() == 8.0);
  CHECK(f.game->was_rescaled());
  CHECK((*f.game)(1, 1) == -0.25);

  const json out = game_to_json(*f.game);
  CHECK(out.at("scale") == 8.0);
  CHECK(out.at("rescaled") == true);
  const GameFile again = parse_game(out);
  CHECK(again.game->coeffs() == f.game->coeffs());
  CHECK_FALSE(again.game->was_rescaled());
}

TEST_CASE("correlation game records") {
  const GameFile f = parse_game(json::parse(R"({"kind":"correlation","n":3})"));
  CHECK(f.kind == GameFile::Kind::Correlation);
  CHECK(f.n == 3);
  const json two = correlation_game_to_json(2);
  CHECK(two.at("L") == 384);
  CHECK(two.at("L_exact") == true);
  CHECK_FALSE(two.contains("approximate_L"));
  const json six = correlation_game_to_json(6);
  CHECK(six.at("approximate_L") == true);
  CHECK(six.at("L_exact") == false);
  CHECK(six.at("L_bounds")[0].get<double>() <= six.at("L").get<double>());
  CHECK(six.at("L").get<double>() <= six.at("L_bounds")[1].get<double>());
}

TEST_CASE("game parse errors name the field") {
  CHECK(error_of(json::parse(R"({"R":2,"S":2,"coeffs":[[1]]})")).find("'kind'") != std::string::npos);
  CHECK(error_of(json::parse(R"({"kind":"explicit","R":2.5,"S":2,"coeffs":[[1]]})")).find("'R'") != std::string::npos);
  CHECK(error_of(json::parse(R"({"kind":"explicit","R":2,"S":3,"coeffs":[[1,0],[0,1]]})")).find("'coeffs'") !=
        std::string::npos);
  CHECK(error_of(json::parse(R"({"kind":"explicit","R":2,"S":2,"coeffs":[[1,"a"],[0,1]]})")).find("(0, 1)") !=
        std::string::npos);
  CHECK(error_of(json::parse(R"({"kind":"correlation","n":9})")).find("'n'") != std::string::npos);
  CHECK_THROWS_AS(parse_game(json::parse(R"({"kind":"explicit","R":1,"S":1,"coeffs":[[0]]})")), AllZeroMatrix);
  CHECK_THROWS_AS(load_game("/nonexistent/game.json"), ValidationError);
}

TEST_CASE("strategy round trip and validation") {
  std::mt19937_64 rng(61);
  const CommPattern p = CommPattern::parse("1,1,1,0");
  const RandomizedStrategyPair s = random_strategy(p, 3, 2, rng);
  const json j = strategy_to_json(s);
  const RandomizedStrategyPair back = strategy_from_json(j);
  CHECK(back.pattern.to_string() == p.to_string());
  REQUIRE(back.alice_messages.size() == s.alice_messages.size());
  for (std::size_t i = 0; i < s.alice_messages.size(); ++i) CHECK(back.alice_messages[i] == s.alice_messages[i]);
  for (std::size_t i = 0; i < s.bob_messages.size(); ++i) CHECK(back.bob_messages[i] == s.bob_messages[i]);
  CHECK(back.alice_answers == s.alice_answers);
  CHECK(back.bob_answers == s.bob_answers);

  json broken = j;
  broken["alice_messages"][0][1] = json::array({0.7, 0.7});
  try {
    strategy_from_json(broken);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
  broken = j;
  broken["bob_answers"][0] = 3;
  CHECK_THROWS_AS(strategy_from_json(broken), ValidationError);
}

TEST_CASE("protocol and quantum exports") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 1, 1, -1;
  const SolveResult r = exact_tw_value(XorGame::from_raw(m), CommPattern::parse("1,0"));
  const json pj = protocol_to_json(*r.certificate);
  CHECK(pj.at("roles_swapped") == false);
  CHECK(pj.at("alice_messages")[0].size() == 2);

  const json q = quantum_strategy_to_json(explicit_protocol(1).materialize());
  CHECK(q.at("qubits") == 1);
  CHECK(q.at("dimension") == 2);
  CHECK(q.at("states").size() == 4);
  CHECK(q.at("observables").size() == 2);
  const json& entry = q.at("states")[0][0];
  REQUIRE(entry.is_array());
  CHECK(entry.size() == 2);
}

TEST_CASE("result records carry the run configuration") {
  RunConfig config;
  config.command = "value";
  config.params = {{"method", "classical"}};
  config.seed = 7;
  SolveResult r;
  r.value = 0.5;
  r.method = "classical";
  const json j = result_to_json(r, config);
  CHECK(j.at("value") == 0.5);
  CHECK(j.at("certificate").is_null());
  CHECK(j.at("version") == kVersion);
  CHECK(j.at("config").at("seed") == 7);
  CHECK(j.at("config").at("params").at("method") == "classical");
  CHECK(j.at("config").at("format") == "json");
  CHECK(j.contains("wallclock"));
}

TEST_CASE("report CSV") {
  std::ostringstream os;
  write_reports_csv(os, {make_report("a", 1.0, 2.0, {{"p", 2.0}, {"n", 3.0}}), make_report("b", 2.0, 1.0)});
  std::istringstream in(os.str());
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  CHECK(header == "name,parameters,lhs,rhs,slack,pass");
  CHECK(first == "a,n=3;p=2,1,2,1,true");
  CHECK(second == "b,,2,1,-1,false");
  const json rj = report_to_json(make_report("a", 1.0, 2.0));
  CHECK(rj.at("pass") == true);
  CHECK(rj.at("slack") == 1.0);
}

TEST_CASE("format_double round trips") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(384.0) == "384");
}
