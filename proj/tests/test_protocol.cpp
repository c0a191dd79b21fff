#include <doctest.h>

#include <random>

#include "xorcomm/errors.hpp"
#include "xorcomm/protocol.hpp"
#include "xorcomm/space_chain.hpp"

using namespace xorcomm;

namespace {

// Direct summation over transcripts for t <= 2, written against the table
// layout only: row index = input, then received symbols in order.
double reference_value(const XorGame& g, const RandomizedStrategyPair& s) {
  const CommPattern& p = s.pattern;
  const auto C1 = static_cast<Eigen::Index>(p.first_alphabet(0));
  const auto D1 = static_cast<Eigen::Index>(p.second_alphabet(0));
  double total = 0.0;
  for (Eigen::Index x = 0; x < g.alice_inputs(); ++x)
    for (Eigen::Index y = 0; y < g.bob_inputs(); ++y) {
      double corr = 0.0;
      for (Eigen::Index m1 = 0; m1 < C1; ++m1)
        for (Eigen::Index n1 = 0; n1 < D1; ++n1) {
          const double p1 = s.alice_messages[0](x, m1) * s.bob_messages[0](y * C1 + m1, n1);
          if (p.t() == 1) {
            corr += p1 * s.alice_answers(x * D1 + n1) * s.bob_answers(y * C1 + m1);
            continue;
          }
          const auto C2 = static_cast<Eigen::Index>(p.first_alphabet(1));
          const auto D2 = static_cast<Eigen::Index>(p.second_alphabet(1));
          for (Eigen::Index m2 = 0; m2 < C2; ++m2)
            for (Eigen::Index n2 = 0; n2 < D2; ++n2) {
              const double p2 = s.alice_messages[1](x * D1 + n1, m2) * s.bob_messages[1]((y * C1 + m1) * C2 + m2, n2);
              corr += p1 * p2 * s.alice_answers((x * D1 + n1) * D2 + n2) * s.bob_answers((y * C1 + m1) * C2 + m2);
            }
        }
      total += g(x, y) * corr;
    }
  return total;
}

XorGame random_game(Eigen::Index R, Eigen::Index S, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  return XorGame::from_raw(Eigen::MatrixXd::NullaryExpr(R, S, [&] { return normal(rng); }));
}

RandomizedStrategyPair one_bit_uniform() {
  RandomizedStrategyPair s;
  s.pattern = CommPattern::parse("1,0");
  s.alice_inputs = 1;
  s.bob_inputs = 1;
  s.alice_messages = {RowMatrixXd::Constant(1, 2, 0.5)};
  s.bob_messages = {RowMatrixXd::Ones(2, 1)};
  s.alice_answers = Eigen::VectorXi::Ones(1);
  s.bob_answers = Eigen::VectorXi::Ones(2);
  return s;
}

}  // namespace

TEST_CASE("pattern parsing and alphabets") {
  const CommPattern p = CommPattern::parse("1,0,2,3");
  CHECK(p.t() == 2);
  CHECK(p.total_bits() == 6);
  CHECK(p.first_alphabet(1) == 4);
  CHECK(p.second_alphabet(0) == 1);
  CHECK(p.transcripts() == 64);
  CHECK(p.radices() == std::vector<std::uint64_t>{2, 1, 4, 8});
  CHECK(p.to_string() == "1,0,2,3");
  CHECK_THROWS_AS(CommPattern::parse("1,0,2"), ValidationError);
  CHECK_THROWS_AS(CommPattern::parse("1,x"), ValidationError);
  CHECK_THROWS_AS(CommPattern::parse("1,17"), ValidationError);
  CHECK_THROWS_AS(CommPattern::parse("-1,0"), ValidationError);
}

TEST_CASE("pattern refinement") {
  const CommPattern coarse = CommPattern::parse("1,0");
  CHECK(CommPattern::parse("1,1").refines(coarse));
  CHECK(CommPattern::parse("1,0,1,0").refines(coarse));
  CHECK_FALSE(CommPattern::parse("0,1").refines(coarse));
  CHECK(CommPattern::parse("0,0").refines(CommPattern::parse("0,0")));
}

TEST_CASE("transcript encoding round-trips with m1 most significant") {
  const CommPattern p = CommPattern::parse("1,2,1,0");
  for (std::uint64_t i = 0; i < p.transcripts(); ++i) CHECK(encode_transcript(p, decode_transcript(p, i)) == i);
  const Transcript tr = decode_transcript(p, 0b1'01'1);
  CHECK(tr.m == std::vector<std::uint64_t>{1, 1});
  CHECK(tr.n == std::vector<std::uint64_t>{1, 0});
}

TEST_CASE("validation names the offending row") {
  RandomizedStrategyPair s = one_bit_uniform();
  s.validate();
  s.alice_messages[0](0, 0) = 0.7;
  try {
    s.validate();
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("row 0") != std::string::npos);
  }
  s = one_bit_uniform();
  s.bob_answers(1) = 0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = one_bit_uniform();
  s.bob_messages[0] = RowMatrixXd::Ones(3, 1);
  CHECK_THROWS_AS(s.validate(), ShapeMismatch);
}

TEST_CASE("tensor examples") {
  const RandomizedStrategyPair s = one_bit_uniform();
  const StrategyTensor a = build_alice_tensor(s, s.pattern, 1);
  REQUIRE(a.entries.cols() == 2);
  CHECK(a.entries(0, 0) == 0.5);
  CHECK(a.entries(0, 1) == 0.5);
  CHECK(nested_norm(a, s.pattern) == doctest::Approx(1.0));

  // d1 = 0: single n1 index and entries equal b(y, m1)
  RandomizedStrategyPair t = s;
  t.bob_answers << 1, -1;
  const StrategyTensor b = build_bob_tensor(t, t.pattern, 1);
  CHECK(b.entries(0, 0) == 1.0);
  CHECK(b.entries(0, 1) == -1.0);
  CHECK(nested_norm(b, t.pattern) == 1.0);

  // Alice uniform over two symbols, Bob deterministic: mass 1.
  CHECK(pair_product_mass(a, b, 0, 0) == doctest::Approx(1.0));

  StrategyTensor zero = a;
  zero.entries.setZero();
  CHECK(nested_norm(zero, s.pattern) == 0.0);

  CHECK_THROWS_AS(build_alice_tensor(s, CommPattern::parse("1,1"), 1), ShapeMismatch);
}

TEST_CASE("deterministic strategies give unit norms and unit mass") {
  std::mt19937_64 rng(11);
  for (const char* text : {"0,0", "1,1", "2,0", "1,1,1,0", "1,0,0,1,1,1"}) {
    const CommPattern p = CommPattern::parse(text);
    for (int trial = 0; trial < 5; ++trial) {
      const RandomizedStrategyPair s = random_strategy(p, 3, 2, rng, 1.0);
      const StrategyTensor a = build_alice_tensor(s, p, 3);
      const StrategyTensor b = build_bob_tensor(s, p, 2);
      CHECK((a.entries.array().abs() == 0.0 || a.entries.array().abs() == 1.0).all());
      CHECK(nested_norm(a, p) == 1.0);
      CHECK(nested_norm(b, p) == 1.0);
      for (Eigen::Index x = 0; x < 3; ++x)
        for (Eigen::Index y = 0; y < 2; ++y) CHECK(pair_product_mass(a, b, x, y) == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("random strategies respect the nested-norm and mass bounds") {
  std::mt19937_64 rng(12);
  for (const char* text : {"1,0", "0,1", "1,1", "2,1", "1,1,1,0", "1,1,1,1", "1,0,1,0,1,0"}) {
    const CommPattern p = CommPattern::parse(text);
    for (int trial = 0; trial < 20; ++trial) {
      const RandomizedStrategyPair s = random_strategy(p, 3, 3, rng);
      const StrategyTensor a = build_alice_tensor(s, p, 3);
      const StrategyTensor b = build_bob_tensor(s, p, 3);
      CHECK(nested_norm(a, p) <= 1.0 + 1e-12);
      CHECK(nested_norm(b, p) <= 1.0 + 1e-12);
      for (Eigen::Index x = 0; x < 3; ++x)
        for (Eigen::Index y = 0; y < 3; ++y) {
          const double mass = pair_product_mass(a, b, x, y);
          CHECK(mass >= 0.0);
          CHECK(mass <= 1.0 + 1e-12);
        }
    }
  }
}

TEST_CASE("nested_norm agrees with the space-chain norm") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> normal;
  for (const char* text : {"1,0", "1,1", "2,1", "1,1,1,0", "0,1,1,1"}) {
    const CommPattern p = CommPattern::parse(text);
    for (Side side : {Side::Alice, Side::Bob}) {
      StrategyTensor t;
      t.side = side;
      t.pattern = p;
      t.entries = RowMatrixXd::NullaryExpr(3, static_cast<Eigen::Index>(p.transcripts()), [&] { return normal(rng); });
      const SpaceChain chain = SpaceChain::for_side(side, p, 3);
      CHECK(nested_norm(t, p) == doctest::Approx(chain.norm({t.entries.data(), static_cast<std::size_t>(t.entries.size())})).epsilon(1e-12));
    }
  }
}

TEST_CASE("protocol_value matches direct transcript summation") {
  std::mt19937_64 rng(14);
  for (const char* text : {"0,0", "1,0", "0,1", "1,1", "2,1", "1,1,1,0", "1,0,0,1", "1,1,1,1"}) {
    const CommPattern p = CommPattern::parse(text);
    for (int trial = 0; trial < 10; ++trial) {
      const XorGame g = random_game(3, 2, rng);
      const RandomizedStrategyPair s = random_strategy(p, 3, 2, rng);
      const double v = protocol_value(g, build_alice_tensor(s, p, 3), build_bob_tensor(s, p, 2));
      CHECK(v == doctest::Approx(reference_value(g, s)).epsilon(1e-12));
      CHECK(std::abs(v) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("protocol_value examples") {
  const CommPattern none = CommPattern::parse("0,0");
  RandomizedStrategyPair s;
  s.pattern = none;
  s.alice_inputs = 1;
  s.bob_inputs = 1;
  s.alice_messages = {RowMatrixXd::Ones(1, 1)};
  s.bob_messages = {RowMatrixXd::Ones(1, 1)};
  s.alice_answers = Eigen::VectorXi::Ones(1);
  s.bob_answers = Eigen::VectorXi::Ones(1);
  const XorGame one = XorGame::from_raw(Eigen::MatrixXd::Ones(1, 1));
  CHECK(protocol_value(one, build_alice_tensor(s, none, 1), build_bob_tensor(s, none, 1)) == 1.0);

  Eigen::MatrixXd raw(2, 2);
  raw << 1, 1, 1, -1;
  const XorGame chsh = XorGame::from_raw(raw);
  s.alice_inputs = 2;
  s.bob_inputs = 2;
  s.alice_messages = {RowMatrixXd::Ones(2, 1)};
  s.bob_messages = {RowMatrixXd::Ones(2, 1)};
  s.alice_answers = Eigen::VectorXi::Ones(2);
  s.bob_answers = Eigen::VectorXi::Ones(2);
  CHECK(protocol_value(chsh, build_alice_tensor(s, none, 2), build_bob_tensor(s, none, 2)) == doctest::Approx(0.5));
}

TEST_CASE("protocol_value is bilinear under mixtures") {
  std::mt19937_64 rng(15);
  const CommPattern p = CommPattern::parse("1,1");
  const XorGame g = random_game(2, 3, rng);
  const RandomizedStrategyPair s1 = random_strategy(p, 2, 3, rng, 1.0);
  RandomizedStrategyPair s2 = s1;
  s2.alice_messages[0] = random_strategy(p, 2, 3, rng, 1.0).alice_messages[0];
  const StrategyTensor b = build_bob_tensor(s1, p, 3);
  const StrategyTensor a1 = build_alice_tensor(s1, p, 2);
  const StrategyTensor a2 = build_alice_tensor(s2, p, 2);
  StrategyTensor mix = a1;
  mix.entries = 0.3 * a1.entries + 0.7 * a2.entries;
  const double v1 = protocol_value(g, a1, b), v2 = protocol_value(g, a2, b);
  const double vm = protocol_value(g, mix, b);
  CHECK(vm == doctest::Approx(0.3 * v1 + 0.7 * v2));
  CHECK(vm >= std::min(v1, v2) - 1e-12);
  CHECK(vm <= std::max(v1, v2) + 1e-12);
}

TEST_CASE("transcript simulation") {
  std::mt19937_64 rng(16);
  const CommPattern p = CommPattern::parse("1,1");
  const RandomizedStrategyPair det = random_strategy(p, 2, 2, rng, 1.0);
  const TranscriptSample once = simulate_transcripts(det, p, 1, 0, 500, 3);
  CHECK(once.frequencies.size() == 1);
  CHECK(once.frequencies.begin()->second == 1.0);

  const RandomizedStrategyPair u = one_bit_uniform();
  const TranscriptSample a = simulate_transcripts(u, u.pattern, 0, 0, 10000, 42);
  const TranscriptSample b = simulate_transcripts(u, u.pattern, 0, 0, 10000, 42);
  CHECK(a.frequencies == b.frequencies);
  double m0 = 0.0;
  for (const auto& [key, f] : a.frequencies)
    if (std::get<0>(key) == 0) m0 += f;
  CHECK(std::abs(m0 - 0.5) < 0.02);
}

TEST_CASE("simulated correlation converges to the tensor value") {
  std::mt19937_64 rng(17);
  const CommPattern p = CommPattern::parse("1,1,1,0");
  const RandomizedStrategyPair s = random_strategy(p, 2, 2, rng, 0.0);
  Eigen::MatrixXd unit = Eigen::MatrixXd::Zero(2, 2);
  unit(1, 0) = 1.0;
  const double exact = protocol_value(XorGame::from_raw(unit), build_alice_tensor(s, p, 2), build_bob_tensor(s, p, 2));
  const TranscriptSample sample = simulate_transcripts(s, p, 1, 0, 200000, 5);
  // 5 sigma for a ±1 variable
  CHECK(std::abs(sample.correlation - exact) < 5.0 / std::sqrt(200000.0));
}

TEST_CASE("tensor budget guard") {
  const CommPattern big = CommPattern::parse("8,8,8,8");
  RandomizedStrategyPair s;
  s.pattern = big;
  s.alice_inputs = 4;
  CHECK_THROWS_AS(build_alice_tensor(s, big, 4), BudgetExceeded);
}
