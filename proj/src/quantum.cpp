#include "xorcomm/quantum.hpp"

#include <algorithm>

namespace xorcomm {

namespace {

std::string input_name(const char* kind, std::size_t i) { return std::string(kind) + " " + std::to_string(i); }

}  // namespace

void QuantumOneWayStrategy::validate(double tol) const {
  if (qubits < 0 || qubits > 10) throw ValidationError("qubit count outside [0, 10]");
  const Eigen::Index d = dimension();
  if (answers.size() != alice_inputs()) throw ValidationError("one answer per Alice input is required");
  for (std::size_t x = 0; x < states.size(); ++x) {
    if (states[x].size() != d) throw ValidationError(input_name("state", x) + " has the wrong dimension");
    if (std::abs(states[x].norm() - 1.0) > tol) throw ValidationError(input_name("state", x) + " is not unit");
    if (answers(static_cast<Eigen::Index>(x)) != 1 && answers(static_cast<Eigen::Index>(x)) != -1) {
      throw ValidationError(input_name("answer", x) + " is not ±1");
    }
  }
  for (std::size_t y = 0; y < observables.size(); ++y) {
    const auto& B = observables[y];
    if (B.rows() != d || B.cols() != d) throw ValidationError(input_name("observable", y) + " has the wrong shape");
    if ((B - B.adjoint()).cwiseAbs().maxCoeff() > tol) {
      throw ValidationError(input_name("observable", y) + " is not Hermitian");
    }
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(B, Eigen::EigenvaluesOnly).eigenvalues();
    if (ev.cwiseAbs().maxCoeff() > 1.0 + tol) {
      throw ValidationError(input_name("observable", y) + " has spectrum outside [-1, 1]");
    }
  }
}

double expectation(const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& B) {
  return psi.dot(B * psi).real();
}

double expectation_density(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& B) {
  return (rho * B).trace().real();
}

CorrelationProtocol::CorrelationProtocol(int n) : n_(n) {
  if (n < 1 || n > 8) throw ValidationError("explicit protocol supports 1 <= n <= 8");
  padded_ = 1;
  int bits = 0;
  while (padded_ < n) {
    padded_ *= 2;
    ++bits;
  }
  qubits_ = bits + 1;
}

Eigen::VectorXcd CorrelationProtocol::state(std::uint64_t alice) const {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2 * padded_);
  const double scale = 1.0 / std::sqrt(2.0 * n_);
  for (int i = 0; i < n_; ++i) {
    psi(i) = scale * bit_sign(alice, i);
    psi(padded_ + i) = scale * bit_sign(alice, n_ + i);
  }
  return psi;
}

Eigen::MatrixXcd CorrelationProtocol::observable(std::uint64_t bob) const {
  Eigen::MatrixXd Y(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) Y(i, j) = bit_sign(bob, i * n_ + j);
  const double sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(Y).singularValues()(0);
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(2 * padded_, 2 * padded_);
  B.block(0, padded_, n_, n_) = (Y / sigma).cast<std::complex<double>>();
  B.block(padded_, 0, n_, n_) = (Y.transpose() / sigma).cast<std::complex<double>>();
  return B;
}

QuantumOneWayStrategy CorrelationProtocol::materialize() const {
  if (n_ > 3) throw BudgetExceeded("materializing the explicit protocol needs 2^{n^2} observables; n <= 3");
  const CorrelationGame g = correlation_game(n_, true);
  QuantumOneWayStrategy s;
  s.qubits = qubits_;
  for (std::uint64_t a = 0; a < g.alice_inputs(); ++a) s.states.push_back(state(a));
  for (std::uint64_t y = 0; y < g.bob_inputs(); ++y) s.observables.push_back(observable(y));
  s.answers = Eigen::VectorXi::Ones(static_cast<Eigen::Index>(g.alice_inputs()));
  return s;
}

CorrelationProtocol explicit_protocol(int n) { return CorrelationProtocol(n); }

double quantum_value_exact(const XorGame& game, const QuantumOneWayStrategy& s) {
  if (s.alice_inputs() != game.alice_inputs() || s.bob_inputs() != game.bob_inputs()) {
    throw ShapeMismatch("strategy does not match the game dimensions");
  }
  double total = 0.0;
  for (Eigen::Index y = 0; y < game.bob_inputs(); ++y)
    for (Eigen::Index x = 0; x < game.alice_inputs(); ++x) {
      if (game(x, y) == 0.0) continue;
      total += game(x, y) * s.answers(x) * expectation(s.states[x], s.observables[y]);
    }
  return total;
}

namespace {

// Spectral sign with zero eigenvalues mapped to +1.
Eigen::MatrixXcd spectral_sign(const Eigen::MatrixXcd& M, double& trace_norm) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
  const Eigen::VectorXd& ev = es.eigenvalues();
  Eigen::VectorXd signs(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) signs(i) = ev(i) < 0.0 ? -1.0 : 1.0;
  trace_norm = ev.cwiseAbs().sum();
  return es.eigenvectors() * signs.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
}

class SeeSaw {
 public:
  SeeSaw(const XorGame& game, int qubits) : T_(game.coeffs()), d_(Eigen::Index{1} << qubits) {
    s_.qubits = qubits;
  }

  void randomize(std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    s_.states.assign(static_cast<std::size_t>(T_.rows()), Eigen::VectorXcd(d_));
    s_.answers.resize(T_.rows());
    for (Eigen::Index x = 0; x < T_.rows(); ++x) {
      auto& psi = s_.states[static_cast<std::size_t>(x)];
      for (Eigen::Index i = 0; i < d_; ++i) psi(i) = {normal(rng), normal(rng)};
      psi.normalize();
      s_.answers(x) = coin(rng) ? 1 : -1;
    }
    s_.observables.assign(static_cast<std::size_t>(T_.cols()), Eigen::MatrixXcd::Zero(d_, d_));
  }

  void start_from(const QuantumOneWayStrategy& s) { s_ = s; }

  double value() const {
    double v = 0.0;
    for (Eigen::Index y = 0; y < T_.cols(); ++y)
      for (Eigen::Index x = 0; x < T_.rows(); ++x)
        v += T_(x, y) * s_.answers(x) *
             expectation(s_.states[static_cast<std::size_t>(x)], s_.observables[static_cast<std::size_t>(y)]);
    return v;
  }

  double update_observables() {
    double total = 0.0;
    for (Eigen::Index y = 0; y < T_.cols(); ++y) {
      Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d_, d_);
      for (Eigen::Index x = 0; x < T_.rows(); ++x) {
        const double w = T_(x, y) * s_.answers(x);
        if (w == 0.0) continue;
        const auto& psi = s_.states[static_cast<std::size_t>(x)];
        M.noalias() += w * psi * psi.adjoint();
      }
      double tn = 0.0;
      s_.observables[static_cast<std::size_t>(y)] = spectral_sign(M, tn);
      total += tn;
    }
    return total;
  }

  double update_states() {
    double total = 0.0;
    for (Eigen::Index x = 0; x < T_.rows(); ++x) {
      Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d_, d_);
      for (Eigen::Index y = 0; y < T_.cols(); ++y)
        if (T_(x, y) != 0.0) H += T_(x, y) * s_.observables[static_cast<std::size_t>(y)];
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
      const double top = es.eigenvalues()(d_ - 1);
      const double bottom = es.eigenvalues()(0);
      if (top >= -bottom) {
        s_.answers(x) = 1;
        s_.states[static_cast<std::size_t>(x)] = es.eigenvectors().col(d_ - 1);
        total += top;
      } else {
        s_.answers(x) = -1;
        s_.states[static_cast<std::size_t>(x)] = es.eigenvectors().col(0);
        total += -bottom;
      }
    }
    return total;
  }

  std::vector<double> run(int sweeps, bool have_observables) {
    std::vector<double> trace;
    if (have_observables) trace.push_back(value());
    for (int k = 0; k < sweeps; ++k) {
      trace.push_back(update_observables());
      trace.push_back(update_states());
      const std::size_t n = trace.size();
      if (n >= 3 && trace[n - 1] - trace[n - 3] <= 1e-14) break;
    }
    return trace;
  }

  const QuantumOneWayStrategy& strategy() const { return s_; }

 private:
  const Eigen::MatrixXd& T_;
  Eigen::Index d_;
  QuantumOneWayStrategy s_;
};

}  // namespace

QuantumOneWayStrategy embed_classical_oneway(const DeterministicProtocolPair& protocol, int qubits) {
  const CommPattern& p = protocol.pattern;
  if (p.t() != 1 || p.rounds[0].second_bits != 0 || p.rounds[0].first_bits != qubits) {
    throw ShapeMismatch("embedding needs a one-way protocol with pattern (" + std::to_string(qubits) + ",0)");
  }
  const Eigen::Index d = Eigen::Index{1} << qubits;
  QuantumOneWayStrategy s;
  s.qubits = qubits;
  for (Eigen::Index x = 0; x < protocol.alice_inputs; ++x) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
    psi(static_cast<Eigen::Index>(protocol.alice_messages[0][static_cast<std::size_t>(x)])) = 1.0;
    s.states.push_back(std::move(psi));
  }
  for (Eigen::Index y = 0; y < protocol.bob_inputs; ++y) {
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index m = 0; m < d; ++m) B(m, m) = protocol.bob_answers(y * d + m);
    s.observables.push_back(std::move(B));
  }
  s.answers = protocol.alice_answers;
  return s;
}

SeeSawResult see_saw(const XorGame& game, int qubits, const SeeSawOptions& options) {
  if (qubits < 0 || qubits > 5) throw BudgetExceeded("see-saw supports dimension 2^q <= 32");
  if (game.alice_inputs() > 512 || game.bob_inputs() > 512) throw BudgetExceeded("see-saw supports R, S <= 512");
  if (options.restarts < 0 || options.sweeps < 1) throw ValidationError("need sweeps >= 1 and restarts >= 0");

  SeeSawResult result;
  result.value = -1.0;
  auto consider = [&](const SeeSaw& run, std::vector<double> trace, bool warm) {
    if (trace.back() > result.value) {
      result.value = trace.back();
      result.strategy = run.strategy();
      result.used_classical_warm_start = warm;
    }
    result.traces.push_back(std::move(trace));
  };

  std::vector<QuantumOneWayStrategy> starts = options.warm_starts;
  bool have_classical = false;
  if (options.classical_warm_start) {
    CommPattern oneway;
    oneway.rounds = {Round{qubits, 0}};
    if (exact_tw_cost(game, oneway) <= options.warm_start_budget) {
      const SolveResult exact = exact_tw_value(game, oneway, options.warm_start_budget);
      starts.insert(starts.begin(), embed_classical_oneway(*exact.certificate, qubits));
      have_classical = true;
    }
  }
  for (std::size_t i = 0; i < starts.size(); ++i) {
    starts[i].validate();
    if (starts[i].alice_inputs() != game.alice_inputs() || starts[i].bob_inputs() != game.bob_inputs() ||
        starts[i].qubits != qubits) {
      throw ShapeMismatch("warm start does not match the game or qubit count");
    }
    SeeSaw run(game, qubits);
    run.start_from(starts[i]);
    auto trace = run.run(options.sweeps, true);
    consider(run, std::move(trace), have_classical && i == 0);
  }

  std::mt19937_64 master(options.seed);
  for (int r = 0; r < options.restarts; ++r) {
    std::mt19937_64 rng(master());
    SeeSaw run(game, qubits);
    run.randomize(rng);
    auto trace = run.run(options.sweeps, false);
    consider(run, std::move(trace), false);
  }
  if (result.traces.empty()) throw ValidationError("see-saw needs at least one restart or warm start");
  result.strategy.validate();
  return result;
}

}  // namespace xorcomm
