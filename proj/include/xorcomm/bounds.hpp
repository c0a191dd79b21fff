#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xorcomm/game.hpp"
#include "xorcomm/protocol.hpp"

namespace xorcomm {

/// Default slack tolerance for verified inequalities.
inline constexpr double kSlackTolerance = 1e-10;

/// One checked inequality lhs <= rhs.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  std::map<std::string, double> parameters;
  double tolerance = kSlackTolerance;

  bool pass() const { return slack >= -tolerance; }
  bool pass(double tol) const { return slack >= -tol; }
};

BoundReport make_report(std::string name, double lhs, double rhs, std::map<std::string, double> params = {});

/// Equality row: lhs = |a - b|, rhs = tol, zero slack tolerance. Records
/// "a" and "b" alongside `params`.
BoundReport make_equality_report(std::string name, double a, double b, double tol,
                                 std::map<std::string, double> params = {});

/// Upper Khintchine constant: 1 for p <= 2, sqrt(2 e p) above.
double khintchine_b(double p);

/// Hölder conjugate p / (p - 1).
inline double conjugate_exponent(double p) { return p / (p - 1.0); }

/// (2^{-n} sum_y |sum_i alpha_i y_i|^p)^{1/p} <= b_p ||alpha||_2, exhaustive
/// over all 2^n sign vectors. Parameters record "middle" and "l2".
BoundReport khintchine_check(const Eigen::VectorXd& alpha, double p);

/// Double form with products x_i z_j and constant b_p^2; parameters record
/// "middle" and "frobenius".
BoundReport double_khintchine_check(const Eigen::MatrixXd& alpha, double p);

enum class KhintchineMode { Single, Double };

/// Transposed Khintchine:
///   single: (sum_i (sum_y y_i alpha(y))^2)^{1/2} <= b_{p'}^2 2^{n/p'} ||alpha||_p
///   double: (sum_{ij} (sum_{x,z} x_i z_j alpha(x,z))^2)^{1/2} <= b_{p'}^2 2^{2n/p'} ||alpha||_p
/// alpha has 2^n (single) or 2^{2n} (double) entries in the packed sign
/// encoding; p is the conjugate of pPrime.
BoundReport transpose_khintchine_check(const Eigen::VectorXd& alpha, KhintchineMode mode, double p_prime);

/// sum |v_i| <= d^{1/p'} ||v||_p.
template <typename Derived>
BoundReport holder_check(const Eigen::MatrixBase<Derived>& v, double p) {
  const double d = static_cast<double>(v.size());
  const double lhs = v.cwiseAbs().sum();
  const double lp = std::pow(v.cwiseAbs().array().pow(p).sum(), 1.0 / p);
  const double rhs = std::pow(d, 1.0 / conjugate_exponent(p)) * lp;
  return make_report("holder", lhs, rhs, {{"p", p}, {"d", d}});
}

/// Closed-form two-way upper bound 4 sqrt2 e^{5/2} (log2 k)^{3/2} / n.
struct TwoWayBound {
  double value = 0.0;
  /// value > 1, so the bound says nothing.
  bool vacuous = false;
};

TwoWayBound tw_upper_bound(int n, double k);

/// Evaluates every quantity of the two-way upper-bound argument for one
/// concrete protocol on correlation_game(n), n <= 2, and returns one report
/// per consecutive link:
///   raw_value <= l1_over_transcripts <= holder <= cauchy_schwarz
///     <= transposed_khintchine <= message_mass.
/// k = 2^{total bits}; pass `k` to assert a particular message count, which
/// throws InfeasiblePattern on disagreement.
std::vector<BoundReport> proof_chain_audit(int n, const RandomizedStrategyPair& s, const CommPattern& p,
                                           double p_prime, std::optional<double> k = std::nullopt);

/// The audit's final quantity against tw_upper_bound(n, k); meaningful when
/// p' = log2 k.
BoundReport chain_endpoint_check(const std::vector<BoundReport>& chain, int n, double k);

}  // namespace xorcomm
