#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "xorcomm/bounds.hpp"
#include "xorcomm/errors.hpp"

using namespace xorcomm;

namespace {

Eigen::VectorXd gaussian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  return Eigen::VectorXd::NullaryExpr(n, [&] { return normal(rng); });
}

}  // namespace

TEST_CASE("Khintchine constant") {
  CHECK(khintchine_b(1.5) == 1.0);
  CHECK(khintchine_b(2.0) == 1.0);
  CHECK(khintchine_b(4.0) == doctest::Approx(4.663287963194248));
  CHECK(conjugate_exponent(2.0) == 2.0);
  CHECK(conjugate_exponent(4.0) == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS_AS(khintchine_b(0.5), ValidationError);
}

TEST_CASE("single Khintchine examples") {
  // tests/oracles/oracles.py
  Eigen::VectorXd a(2);
  a << 1, 1;
  CHECK(khintchine_check(a, 4.0).parameters.at("middle") == doctest::Approx(1.681792830507429).epsilon(1e-14));
  Eigen::VectorXd b(3);
  b << 3, -1, 2;
  CHECK(khintchine_check(b, 3.0).parameters.at("middle") == doctest::Approx(4.160167646103808).epsilon(1e-14));
  Eigen::VectorXd c(4);
  c << 1, 2, 3, 4;
  CHECK(khintchine_check(c, 1.0).parameters.at("middle") == doctest::Approx(4.5).epsilon(1e-14));

  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(5, 0);
  const BoundReport r2 = khintchine_check(e1, 2.0);
  CHECK(r2.lhs == doctest::Approx(1.0));
  CHECK(r2.rhs == doctest::Approx(1.0));
  CHECK(r2.slack == doctest::Approx(0.0));
  CHECK(khintchine_check(e1, 4.0).lhs == doctest::Approx(1.0));

  CHECK_THROWS_AS(khintchine_check(Eigen::VectorXd::Ones(23), 2.0), BudgetExceeded);
}

TEST_CASE("Parseval at p = 2") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd a = gaussian(1 + trial % 10, rng);
    const BoundReport r = khintchine_check(a, 2.0);
    CHECK(std::abs(r.parameters.at("middle") - a.norm()) <= 1e-12 * std::max(1.0, a.norm()));
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(3, 3);
  const BoundReport d = double_khintchine_check(m, 2.0);
  CHECK(d.parameters.at("middle") == doctest::Approx(m.norm()).epsilon(1e-12));
}

TEST_CASE("Khintchine slacks on random inputs") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) CHECK(khintchine_check(gaussian(10, rng), 4.0).pass());
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd m = gaussian(16, rng).reshaped(4, 4);
    CHECK(double_khintchine_check(m, 4.0).pass());
  }
  const BoundReport single_entry = double_khintchine_check(Eigen::MatrixXd::Identity(3, 3).topLeftCorner(1, 1), 3.0);
  CHECK(single_entry.lhs == doctest::Approx(1.0));
  CHECK(single_entry.parameters.at("frobenius") == doctest::Approx(1.0));
}

TEST_CASE("transposed Khintchine examples") {
  for (int n = 1; n <= 6; ++n) {
    const Eigen::Index size = Eigen::Index{1} << n;
    const BoundReport point = transpose_khintchine_check(Eigen::VectorXd::Unit(size, 3 % size), KhintchineMode::Single, 2.0);
    CHECK(point.lhs == doctest::Approx(std::sqrt(static_cast<double>(n))));
    CHECK(point.rhs == doctest::Approx(std::pow(2.0, n / 2.0)));
    CHECK(point.pass());
    const BoundReport uniform = transpose_khintchine_check(Eigen::VectorXd::Constant(size, 1.0 / static_cast<double>(size)),
                                                          KhintchineMode::Single, 3.0);
    CHECK(uniform.lhs == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(transpose_khintchine_check(Eigen::VectorXd::Ones(6), KhintchineMode::Single, 2.0), ShapeMismatch);
  CHECK_THROWS_AS(transpose_khintchine_check(Eigen::VectorXd::Ones(8), KhintchineMode::Double, 2.0), ShapeMismatch);
}

TEST_CASE("transposed Khintchine on random inputs") {
  std::mt19937_64 rng(43);
  const double pps[] = {2.0, 3.0, 4.0};
  for (int trial = 0; trial < 200; ++trial) {
    const double pp = pps[trial % 3];
    CHECK(transpose_khintchine_check(gaussian(64, rng), KhintchineMode::Double, pp).pass());
    CHECK(transpose_khintchine_check(gaussian(8, rng), KhintchineMode::Single, pp).pass());
  }
}

TEST_CASE("Hölder check") {
  const BoundReport flat = holder_check(Eigen::VectorXd::Ones(7), 3.0);
  CHECK(flat.lhs == doctest::Approx(7.0));
  CHECK(flat.rhs == doctest::Approx(7.0));
  const BoundReport unit = holder_check(Eigen::VectorXd::Unit(7, 2), 3.0);
  CHECK(unit.lhs == 1.0);
  CHECK(unit.rhs == doctest::Approx(std::pow(7.0, 2.0 / 3.0)));
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 100; ++trial) CHECK(holder_check(gaussian(16, rng), 3.0).pass());
}

TEST_CASE("closed-form two-way bound") {
  // tests/oracles/oracles.py
  CHECK(tw_upper_bound(1024, 4).value == doctest::Approx(0.19035146813599174).epsilon(1e-13));
  CHECK_FALSE(tw_upper_bound(1024, 4).vacuous);
  CHECK(tw_upper_bound(64, 4).value == doctest::Approx(3.045623490175868).epsilon(1e-13));
  CHECK(tw_upper_bound(64, 4).vacuous);
  CHECK(tw_upper_bound(100, 8).value < tw_upper_bound(99, 8).value);
  CHECK(tw_upper_bound(100, 8).value > tw_upper_bound(100, 7).value);
}

TEST_CASE("proof-chain audit on a deterministic n = 1 protocol") {
  std::mt19937_64 rng(45);
  const CommPattern p = CommPattern::parse("1,1");
  const RandomizedStrategyPair s = random_strategy(p, 4, 2, rng, 1.0);
  const auto chain = proof_chain_audit(1, s, p, 2.0);
  REQUIRE(chain.size() == 5);
  for (const BoundReport& r : chain) {
    CHECK(r.pass());
    CHECK(r.parameters.at("k") == 4.0);
    CHECK(r.parameters.at("L") == 8.0);
  }
  for (std::size_t i = 1; i < chain.size(); ++i) CHECK(chain[i].lhs == chain[i - 1].rhs);

  // the first quantity is the protocol's value on the game
  const XorGame g = correlation_game(1).materialize();
  CHECK(chain[0].lhs == doctest::Approx(protocol_value(g, build_alice_tensor(s, p, 4), build_bob_tensor(s, p, 2))));
  CHECK(chain_endpoint_check(chain, 1, 4.0).pass());
}

TEST_CASE("proof-chain audit on random n = 2 protocols") {
  std::mt19937_64 rng(46);
  const CommPattern p = CommPattern::parse("1,1");
  for (double pp : {2.0, 4.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      const RandomizedStrategyPair s = random_strategy(p, 16, 16, rng);
      const auto chain = proof_chain_audit(2, s, p, pp);
      for (const BoundReport& r : chain) CHECK(r.pass());
      const double b = khintchine_b(pp);
      CHECK(chain.back().rhs == doctest::Approx(std::pow(4.0, 1.0 / pp) * b * b * b * 256.0 / 384.0));
    }
  }
}

TEST_CASE("proof-chain audit errors") {
  std::mt19937_64 rng(47);
  const CommPattern p = CommPattern::parse("1,1");
  const RandomizedStrategyPair s = random_strategy(p, 4, 2, rng);
  CHECK_THROWS_AS(proof_chain_audit(1, s, p, 2.0, 8.0), InfeasiblePattern);
  CHECK_NOTHROW(proof_chain_audit(1, s, p, 2.0, 4.0));
  CHECK_THROWS_AS(proof_chain_audit(1, s, CommPattern::parse("1,1", Starter::Bob), 2.0), InfeasiblePattern);
  CHECK_THROWS_AS(proof_chain_audit(3, s, p, 2.0), Error);
  CHECK_THROWS_AS(proof_chain_audit(2, s, p, 2.0), ShapeMismatch);
}

TEST_CASE("equality reports use zero tolerance") {
  const BoundReport eq = make_equality_report("x", 1.0, 1.0 + 2e-12, 1e-12);
  CHECK_FALSE(eq.pass());
  CHECK(eq.parameters.at("a") == 1.0);
  CHECK(make_equality_report("x", 1.0, 1.0 + 5e-13, 1e-12).pass());
}
