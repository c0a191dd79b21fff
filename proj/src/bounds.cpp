#include "xorcomm/bounds.hpp"

#include <numbers>

#include "xorcomm/errors.hpp"

namespace xorcomm {

BoundReport make_report(std::string name, double lhs, double rhs, std::map<std::string, double> params) {
  return BoundReport{std::move(name), lhs, rhs, rhs - lhs, std::move(params)};
}

BoundReport make_equality_report(std::string name, double a, double b, double tol,
                                 std::map<std::string, double> params) {
  params["a"] = a;
  params["b"] = b;
  BoundReport r = make_report(std::move(name), std::abs(a - b), tol, std::move(params));
  r.tolerance = 0.0;
  return r;
}

double khintchine_b(double p) {
  if (p < 1.0) throw ValidationError("Khintchine exponent must be at least 1");
  return p <= 2.0 ? 1.0 : std::sqrt(2.0 * std::numbers::e * p);
}

namespace {

void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ValidationError("exponent must be finite and > 1");
}

int log2_exact(Eigen::Index size) {
  if (size < 1 || (size & (size - 1)) != 0) throw ShapeMismatch("length must be a power of two");
  return __builtin_ctzll(static_cast<unsigned long long>(size));
}

}  // namespace

BoundReport khintchine_check(const Eigen::VectorXd& alpha, double p) {
  if (p < 1.0) throw ValidationError("Khintchine exponent must be at least 1");
  const int n = static_cast<int>(alpha.size());
  if (n < 1) throw ShapeMismatch("alpha is empty");
  if (n > 22) throw BudgetExceeded("Khintchine expectation over 2^" + std::to_string(n) + " signs (limit 2^22)");
  long double acc = 0.0L;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t y = 0; y < count; ++y) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += alpha(i) * bit_sign(y, i);
    acc += std::pow(static_cast<long double>(std::abs(s)), static_cast<long double>(p));
  }
  const double middle = static_cast<double>(std::pow(acc / static_cast<long double>(count), 1.0L / p));
  const double l2 = alpha.norm();
  return make_report("khintchine", middle, khintchine_b(p) * l2,
                     {{"n", n}, {"p", p}, {"b_p", khintchine_b(p)}, {"middle", middle}, {"l2", l2}});
}

BoundReport double_khintchine_check(const Eigen::MatrixXd& alpha, double p) {
  if (p < 1.0) throw ValidationError("Khintchine exponent must be at least 1");
  if (alpha.rows() != alpha.cols() || alpha.rows() < 1) throw ShapeMismatch("alpha must be square and nonempty");
  const int n = static_cast<int>(alpha.rows());
  if (2 * n > 22) throw BudgetExceeded("double Khintchine expectation over 2^" + std::to_string(2 * n) + " signs");
  const std::uint64_t count = std::uint64_t{1} << n;
  long double acc = 0.0L;
  Eigen::VectorXd xs(n), zs(n), w(n);
  for (std::uint64_t x = 0; x < count; ++x) {
    for (int i = 0; i < n; ++i) xs(i) = bit_sign(x, i);
    w.noalias() = alpha.transpose() * xs;
    for (std::uint64_t z = 0; z < count; ++z) {
      for (int j = 0; j < n; ++j) zs(j) = bit_sign(z, j);
      acc += std::pow(static_cast<long double>(std::abs(w.dot(zs))), static_cast<long double>(p));
    }
  }
  const double middle =
      static_cast<double>(std::pow(acc / static_cast<long double>(count * count), 1.0L / p));
  const double fro = alpha.norm();
  const double b = khintchine_b(p);
  return make_report("double_khintchine", middle, b * b * fro,
                     {{"n", n}, {"p", p}, {"b_p", b}, {"middle", middle}, {"frobenius", fro}});
}

BoundReport transpose_khintchine_check(const Eigen::VectorXd& alpha, KhintchineMode mode, double p_prime) {
  require_exponent(p_prime);
  if (alpha.size() > (Eigen::Index{1} << 16)) throw BudgetExceeded("transposed Khintchine index space exceeds 2^16");
  const int bits = log2_exact(alpha.size());
  const bool dbl = mode == KhintchineMode::Double;
  if (dbl && bits % 2 != 0) throw ShapeMismatch("double mode needs 2^{2n} entries");
  const int n = dbl ? bits / 2 : bits;
  const double p = conjugate_exponent(p_prime);

  Eigen::VectorXd coords = Eigen::VectorXd::Zero(dbl ? n * n : n);
  for (Eigen::Index idx = 0; idx < alpha.size(); ++idx) {
    const auto s = static_cast<std::uint64_t>(idx);
    if (dbl) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) coords(i * n + j) += bit_sign(s, i) * bit_sign(s, n + j) * alpha(idx);
    } else {
      for (int i = 0; i < n; ++i) coords(i) += bit_sign(s, i) * alpha(idx);
    }
  }
  const double lhs = coords.norm();
  const double lp = std::pow(alpha.cwiseAbs().array().pow(p).sum(), 1.0 / p);
  const double b = khintchine_b(p_prime);
  const double rhs = b * b * std::exp2(bits / p_prime) * lp;
  return make_report(dbl ? "transpose_khintchine_double" : "transpose_khintchine_single", lhs, rhs,
                     {{"n", n}, {"p", p}, {"p_prime", p_prime}, {"b_p_prime", b}});
}

TwoWayBound tw_upper_bound(int n, double k) {
  if (n < 1) throw ValidationError("n must be positive");
  if (!(k >= 2.0)) throw ValidationError("k must be at least 2");
  const double v = 4.0 * std::numbers::sqrt2 * std::exp(2.5) * std::pow(std::log2(k), 1.5) / n;
  return {v, v > 1.0};
}

std::vector<BoundReport> proof_chain_audit(int n, const RandomizedStrategyPair& s, const CommPattern& p,
                                           double p_prime, std::optional<double> k_claim) {
  require_exponent(p_prime);
  if (n < 1 || n > 2) throw BudgetExceeded("proof-chain audit supports n = 1, 2");
  if (p.starter != Starter::Alice) throw InfeasiblePattern("the audited argument has Alice speaking first");
  const double k = std::exp2(p.total_bits());
  if (k_claim && *k_claim != k) {
    throw InfeasiblePattern("pattern exchanges " + std::to_string(p.total_bits()) + " bits, so k = " +
                            std::to_string(k) + ", not " + std::to_string(*k_claim));
  }
  const CorrelationGame cg = correlation_game(n, false);
  const XorGame& game = *cg.materialized();
  const Eigen::Index R = game.alice_inputs();
  const Eigen::Index S = game.bob_inputs();
  const StrategyTensor A = build_alice_tensor(s, p, R);
  const StrategyTensor B = build_bob_tensor(s, p, S);
  const double L = cg.L();
  const double pp = conjugate_exponent(p_prime);
  const double kfac = std::pow(k, 1.0 / p_prime);
  const double N = 2.0 * n + n * n;
  const double b = khintchine_b(p_prime);

  // Q0: the game value of the protocol.
  const double q0 = protocol_value(game, A, B);

  // Q1: per-transcript sums, taken in absolute value.
  const RowMatrixXd TB = game.coeffs() * B.entries;
  const Eigen::RowVectorXd per_tau = A.entries.cwiseProduct(TB).colwise().sum();
  const double q1 = per_tau.cwiseAbs().sum();

  // Q2: Hölder over the k transcripts, with each sum rewritten through the
  // Khintchine coordinates hatA(ij) = sum_{xz} x_i z_j ā, hatB(ij) = sum_y y_ij b̄.
  Eigen::MatrixXd xz(n * n, R), yy(n * n, S);
  for (Eigen::Index a = 0; a < R; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) xz(i * n + j, a) = bit_sign(a, i) * bit_sign(a, n + j);
  for (Eigen::Index y = 0; y < S; ++y)
    for (int ij = 0; ij < n * n; ++ij) yy(ij, y) = bit_sign(y, ij);
  const Eigen::MatrixXd hatA = xz * A.entries;
  const Eigen::MatrixXd hatB = yy * B.entries;
  const Eigen::RowVectorXd rewritten = hatA.cwiseProduct(hatB).colwise().sum() / L;
  const double q2 = kfac * std::pow(rewritten.cwiseAbs().array().pow(pp).sum(), 1.0 / pp);

  // Q3: Cauchy-Schwarz per transcript.
  const Eigen::RowVectorXd cs = hatA.colwise().norm().cwiseProduct(hatB.colwise().norm());
  const double q3 = kfac / L * std::pow(cs.array().pow(pp).sum(), 1.0 / pp);

  // Q4: transposed Khintchine on both factors.
  const Eigen::RowVectorXd amass = A.entries.cwiseAbs().array().pow(pp).matrix().colwise().sum();
  const Eigen::RowVectorXd bmass = B.entries.cwiseAbs().array().pow(pp).matrix().colwise().sum();
  const double front = kfac / L * b * b * b * std::exp2(N / p_prime);
  const double q4 = front * std::pow(amass.cwiseProduct(bmass).sum(), 1.0 / pp);

  // Q5: message-mass bound, sum_{x,y} sum_tau |ā b̄|^p <= 2^N.
  const double q5 = front * std::exp2(N / pp);

  const std::map<std::string, double> params{{"n", n},       {"p", pp},  {"p_prime", p_prime},
                                             {"k", k},       {"L", L},   {"b_p_prime", b},
                                             {"log_base", 2}};
  return {make_report("raw_le_l1_over_transcripts", q0, q1, params),
          make_report("l1_le_holder", q1, q2, params),
          make_report("holder_le_cauchy_schwarz", q2, q3, params),
          make_report("cauchy_schwarz_le_transposed_khintchine", q3, q4, params),
          make_report("transposed_khintchine_le_message_mass", q4, q5, params)};
}

BoundReport chain_endpoint_check(const std::vector<BoundReport>& chain, int n, double k) {
  if (chain.empty()) throw ValidationError("empty proof chain");
  const TwoWayBound bound = tw_upper_bound(n, k);
  return make_report("chain_endpoint_le_closed_form", chain.back().rhs, bound.value,
                     {{"n", n}, {"k", k}, {"vacuous", bound.vacuous ? 1.0 : 0.0}, {"log_base", 2}});
}

}  // namespace xorcomm
