#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include <Eigen/Dense>

namespace xorcomm {

/// Sign encoding shared by every index space in the library: bit i of an
/// unsigned integer maps to the i-th sign, 0 -> +1 and 1 -> -1.
inline int bit_sign(std::uint64_t bits, int i) { return ((bits >> i) & 1u) ? -1 : 1; }

/// Default cap on materialized correlation-game entries (n <= 3 fits).
inline constexpr std::uint64_t kDefaultMaterializeBudget = std::uint64_t{1} << 20;

/// An XOR game: coefficients T(x, y) with sum |T| = 1. Alice holds the row
/// index, Bob the column index.
class XorGame {
 public:
  /// Normalizes `raw` by its entrywise l1 norm. Throws AllZeroMatrix.
  static XorGame from_raw(const Eigen::MatrixXd& raw);

  const Eigen::MatrixXd& coeffs() const { return coeffs_; }
  Eigen::Index alice_inputs() const { return coeffs_.rows(); }
  Eigen::Index bob_inputs() const { return coeffs_.cols(); }
  double operator()(Eigen::Index x, Eigen::Index y) const { return coeffs_(x, y); }

  /// The l1 norm of the raw matrix this game was built from.
  double scale() const { return scale_; }
  bool was_rescaled() const { return scale_ != 1.0; }

  /// Same game with the players' roles exchanged.
  XorGame transposed() const;

 private:
  XorGame(Eigen::MatrixXd c, double scale) : coeffs_(std::move(c)), scale_(scale) {}
  Eigen::MatrixXd coeffs_;
  double scale_ = 1.0;
};

/// Interval (lower, upper) = (n 2^{n^2+2n} / sqrt 2, n 2^{n^2+2n}).
std::pair<double, double> L_bounds(int n);

/// Exact normalization sum_{x,z,Y} |x^T Y z| of the correlation game.
/// Integer arithmetic; n <= 4, otherwise BudgetExceeded.
std::int64_t exact_L(int n);

/// The correlation game: Alice gets (x, z) in {±1}^n x {±1}^n, Bob gets
/// Y in {±1}^{n x n}, T((x,z), Y) = x^T Y z / L.
///
/// Alice's index packs x in bits [0, n) and z in bits [n, 2n); Bob's index
/// stores Y row-major, entry (i, j) at bit i*n + j.
class CorrelationGame {
 public:
  int n() const { return n_; }
  double L() const { return L_; }
  bool L_is_exact() const { return exact_; }
  int alice_bits() const { return 2 * n_; }
  int bob_bits() const { return n_ * n_; }
  std::uint64_t alice_inputs() const { return std::uint64_t{1} << alice_bits(); }
  /// Only valid for n <= 7.
  std::uint64_t bob_inputs() const;

  /// x^T Y z for the packed indices.
  std::int64_t numerator(std::uint64_t alice, std::uint64_t bob) const;
  double coefficient(std::uint64_t alice, std::uint64_t bob) const {
    return static_cast<double>(numerator(alice, bob)) / L_;
  }

  /// Dense XorGame over all inputs. Throws BudgetExceeded when the entry
  /// count exceeds `budget`, ApproximateL when L is not exact.
  XorGame materialize(std::uint64_t budget = kDefaultMaterializeBudget) const;

  /// The materialized game when constructed with lazy = false.
  const std::optional<XorGame>& materialized() const { return dense_; }

 private:
  friend CorrelationGame correlation_game(int, bool, std::uint64_t);
  int n_ = 1;
  double L_ = 0.0;
  bool exact_ = false;
  std::optional<XorGame> dense_;
};

/// Builds the correlation game. L is exact for n <= 4; beyond that it is the
/// midpoint of L_bounds and L_is_exact() is false.
CorrelationGame correlation_game(int n, bool lazy = true,
                                 std::uint64_t budget = kDefaultMaterializeBudget);

/// Zero-communication classical value max_{a,b} sum T(x,y) a_x b_y, exact by
/// enumerating signs on the smaller side (at most `max_enumerated` entries).
double classical_value(const XorGame& game, int max_enumerated = 25);

}  // namespace xorcomm
