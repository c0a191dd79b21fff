#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xorcomm/errors.hpp"
#include "xorcomm/exact_solver.hpp"
#include "xorcomm/game.hpp"

namespace xorcomm {

/// Alice sends a pure state on `qubits` qubits depending on her input and
/// answers a fixed sign; Bob measures a ±1 observable (Hermitian, spectrum
/// in [-1, 1]) depending on his input.
struct QuantumOneWayStrategy {
  int qubits = 0;
  std::vector<Eigen::VectorXcd> states;
  std::vector<Eigen::MatrixXcd> observables;
  Eigen::VectorXi answers;

  Eigen::Index dimension() const { return Eigen::Index{1} << qubits; }
  Eigen::Index alice_inputs() const { return static_cast<Eigen::Index>(states.size()); }
  Eigen::Index bob_inputs() const { return static_cast<Eigen::Index>(observables.size()); }

  const Eigen::VectorXcd& state(std::uint64_t x) const { return states[x]; }
  const Eigen::MatrixXcd& observable(std::uint64_t y) const { return observables[y]; }
  int answer(std::uint64_t x) const { return answers(static_cast<Eigen::Index>(x)); }

  /// Throws ValidationError naming the offending input.
  void validate(double tol = 1e-10) const;
};

/// <psi|B|psi>, real part.
double expectation(const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& B);
/// Re tr(rho B) for a density matrix.
double expectation_density(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& B);

/// Protocol for the correlation game on log2(n) + 1 qubits (n padded to a
/// power of two). Alice sends (x̂ ⊕ ẑ)/√2 with x̂ = x/√n, ẑ = z/√n; Bob
/// measures [[0, Y], [Y^T, 0]] / σ_max(Y); Alice always answers +1.
/// The per-question correlation is x^T Y z / (n σ_max(Y)).
///
/// Observables are generated on demand since Bob has 2^{n^2} inputs.
class CorrelationProtocol {
 public:
  explicit CorrelationProtocol(int n);

  int n() const { return n_; }
  int qubits() const { return qubits_; }
  Eigen::Index dimension() const { return Eigen::Index{1} << qubits_; }

  Eigen::VectorXcd state(std::uint64_t alice) const;
  Eigen::MatrixXcd observable(std::uint64_t bob) const;
  int answer(std::uint64_t) const { return 1; }

  /// Dense strategy over every input; n <= 3.
  QuantumOneWayStrategy materialize() const;

 private:
  int n_;
  int padded_;
  int qubits_;
};

CorrelationProtocol explicit_protocol(int n);

/// Exact value sum_q T(q) a(x,z) <psi_{x,z}|B_Y|psi_{x,z}> over every
/// question of the correlation game. n <= 4 and exact L required.
template <typename Strategy>
double quantum_value_exact(const CorrelationGame& game, const Strategy& s) {
  if (!game.L_is_exact()) throw ApproximateL("quantum_value_exact needs the exact normalization");
  if (game.n() > 4) throw BudgetExceeded("exact quantum value enumerates 2^{2n+n^2} questions; n <= 4");
  const std::uint64_t alice = game.alice_inputs();
  const std::uint64_t bob = game.bob_inputs();
  std::vector<Eigen::VectorXcd> states;
  states.reserve(alice);
  for (std::uint64_t a = 0; a < alice; ++a) states.push_back(s.state(a));
  long double total = 0.0L;
  for (std::uint64_t y = 0; y < bob; ++y) {
    const Eigen::MatrixXcd B = s.observable(y);
    double partial = 0.0;
    for (std::uint64_t a = 0; a < alice; ++a) {
      const auto num = game.numerator(a, y);
      if (num == 0) continue;
      partial += static_cast<double>(num) * s.answer(a) * expectation(states[a], B);
    }
    total += partial;
  }
  return static_cast<double>(total / static_cast<long double>(game.L()));
}

/// Exact value of a dense strategy on an explicit game.
double quantum_value_exact(const XorGame& game, const QuantumOneWayStrategy& s);

struct SampledValue {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t y_samples = 0;
  /// Alice inputs per sampled Y; all of them when inner_exact.
  std::uint64_t inner_per_y = 0;
  bool inner_exact = false;
};

/// Self-normalized importance estimate over uniformly drawn Bob inputs Y:
/// value = sum num * a * <B> / sum |num|, so the estimate never needs L.
/// The inner (x, z) sum is exact when 2^{2n} <= `inner_exact_limit`, else
/// `inner_samples` uniform draws per Y. Standard error by the delta method
/// over per-Y clusters. n <= 8.
template <typename Strategy>
SampledValue quantum_value_sampled(int n, const Strategy& s, std::uint64_t y_samples, std::uint64_t seed,
                                   std::uint64_t inner_exact_limit = 256, std::uint64_t inner_samples = 64) {
  if (y_samples < 100) throw ValidationError("quantum_value_sampled needs at least 100 samples");
  if (n < 1 || n > 8) throw BudgetExceeded("sampled quantum value supports 1 <= n <= 8");
  const CorrelationGame game = correlation_game(n, true);
  const std::uint64_t alice = game.alice_inputs();
  const bool inner_exact = alice <= inner_exact_limit;
  const std::uint64_t inner = inner_exact ? alice : inner_samples;
  const int ybits = n * n;
  const std::uint64_t ymask = ybits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << ybits) - 1;

  std::vector<Eigen::VectorXcd> states;
  if (inner_exact)
    for (std::uint64_t a = 0; a < alice; ++a) states.push_back(s.state(a));

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick_alice(0, alice - 1);
  std::vector<double> F(y_samples), G(y_samples);
  for (std::uint64_t j = 0; j < y_samples; ++j) {
    const std::uint64_t y = rng() & ymask;
    const Eigen::MatrixXcd B = s.observable(y);
    double f = 0.0, g = 0.0;
    for (std::uint64_t k = 0; k < inner; ++k) {
      const std::uint64_t a = inner_exact ? k : pick_alice(rng);
      const auto num = game.numerator(a, y);
      if (num == 0) continue;
      const double e = inner_exact ? expectation(states[a], B) : expectation(s.state(a), B);
      f += static_cast<double>(num) * s.answer(a) * e;
      g += std::abs(static_cast<double>(num));
    }
    F[j] = f;
    G[j] = g;
  }
  const auto m = static_cast<double>(y_samples);
  double fbar = 0.0, gbar = 0.0;
  for (std::uint64_t j = 0; j < y_samples; ++j) {
    fbar += F[j];
    gbar += G[j];
  }
  fbar /= m;
  gbar /= m;
  SampledValue out;
  out.estimate = fbar / gbar;
  double ss = 0.0;
  for (std::uint64_t j = 0; j < y_samples; ++j) {
    const double e = F[j] - out.estimate * G[j];
    ss += e * e;
  }
  out.stderr_ = std::sqrt(ss / (m * (m - 1.0))) / gbar;
  out.y_samples = y_samples;
  out.inner_per_y = inner;
  out.inner_exact = inner_exact;
  return out;
}

struct SeeSawOptions {
  int sweeps = 100;
  int restarts = 8;
  std::uint64_t seed = 0;
  /// Also start from the optimal classical one-way protocol with `qubits`
  /// bits, embedded as orthogonal states, when the exact solver fits in
  /// `warm_start_budget`.
  bool classical_warm_start = true;
  double warm_start_budget = 1e8;
  std::vector<QuantumOneWayStrategy> warm_starts;
};

struct SeeSawResult {
  double value = 0.0;
  QuantumOneWayStrategy strategy;
  /// Objective after initialization and after every half-sweep, per run.
  std::vector<std::vector<double>> traces;
  bool used_classical_warm_start = false;
};

/// Alternating maximization: Bob's observables are the spectral sign of
/// sum_x T(x,y) a_x psi_x psi_x^†; Alice's state is the eigenvector of
/// sum_y T(x,y) B_y with the largest |eigenvalue| and her answer its sign.
/// Requires R, S <= 512 and 2^qubits <= 32.
SeeSawResult see_saw(const XorGame& game, int qubits, const SeeSawOptions& options = {});

/// Orthogonal-state embedding of a deterministic one-way protocol with
/// pattern (qubits, 0): psi_x = e_{m(x)}, B_y = diag_m b(y, m).
QuantumOneWayStrategy embed_classical_oneway(const DeterministicProtocolPair& protocol, int qubits);

}  // namespace xorcomm
