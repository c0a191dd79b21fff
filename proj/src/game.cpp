#include "xorcomm/game.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "xorcomm/errors.hpp"
#include "xorcomm/sign_norm.hpp"

namespace xorcomm {

XorGame XorGame::from_raw(const Eigen::MatrixXd& raw) {
  if (raw.size() == 0) throw ValidationError("game matrix is empty");
  if (!raw.allFinite()) throw ValidationError("game matrix has non-finite entries");
  const double total = raw.cwiseAbs().sum();
  if (total == 0.0) throw AllZeroMatrix();
  if (total == 1.0) return XorGame(raw, 1.0);
  return XorGame(raw / total, total);
}

XorGame XorGame::transposed() const { return XorGame(coeffs_.transpose(), scale_); }

std::pair<double, double> L_bounds(int n) {
  if (n < 1) throw ValidationError("n must be positive");
  const double upper = n * std::ldexp(1.0, n * n + 2 * n);
  return {upper / std::sqrt(2.0), upper};
}

std::int64_t exact_L(int n) {
  if (n < 1) throw ValidationError("n must be positive");
  if (n > 4) {
    throw BudgetExceeded("exact_L needs 2^" + std::to_string(2 * n + n * n) +
                         " summands; only n <= 4 is supported");
  }
  const std::uint64_t xs = std::uint64_t{1} << n;
  const std::uint64_t ys = std::uint64_t{1} << (n * n);
  std::int64_t total = 0;
  std::vector<std::int64_t> col(n);
  for (std::uint64_t y = 0; y < ys; ++y) {
    for (std::uint64_t x = 0; x < xs; ++x) {
      // col[j] = sum_i x_i Y_ij
      for (int j = 0; j < n; ++j) {
        std::int64_t acc = 0;
        for (int i = 0; i < n; ++i) acc += bit_sign(x, i) * bit_sign(y, i * n + j);
        col[j] = acc;
      }
      for (std::uint64_t z = 0; z < xs; ++z) {
        std::int64_t acc = 0;
        for (int j = 0; j < n; ++j) acc += col[j] * bit_sign(z, j);
        total += acc < 0 ? -acc : acc;
      }
    }
  }
  return total;
}

std::uint64_t CorrelationGame::bob_inputs() const {
  if (bob_bits() >= 64) throw BudgetExceeded("Bob input count 2^" + std::to_string(bob_bits()) + " overflows");
  return std::uint64_t{1} << bob_bits();
}

std::int64_t CorrelationGame::numerator(std::uint64_t alice, std::uint64_t bob) const {
  const std::uint64_t x = alice;
  const std::uint64_t z = alice >> n_;
  std::int64_t acc = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      // product of three signs = parity of the three bits
      const auto parity = ((x >> i) ^ (z >> j) ^ (bob >> (i * n_ + j))) & 1u;
      acc += parity ? -1 : 1;
    }
  }
  return acc;
}

XorGame CorrelationGame::materialize(std::uint64_t budget) const {
  if (!exact_) throw ApproximateL("correlation game n=" + std::to_string(n_) + " has no exact L");
  const int bits = alice_bits() + bob_bits();
  if (bits >= 63 || (std::uint64_t{1} << bits) > budget) {
    throw BudgetExceeded("materializing correlation game n=" + std::to_string(n_) + " needs 2^" +
                         std::to_string(bits) + " entries, budget is " + std::to_string(budget));
  }
  const auto rows = static_cast<Eigen::Index>(alice_inputs());
  const auto cols = static_cast<Eigen::Index>(bob_inputs());
  Eigen::MatrixXd t(rows, cols);
  for (Eigen::Index y = 0; y < cols; ++y)
    for (Eigen::Index a = 0; a < rows; ++a) t(a, y) = static_cast<double>(numerator(a, y));
  // Integer entries divided by the exact integer L.
  return XorGame::from_raw(t);
}

CorrelationGame correlation_game(int n, bool lazy, std::uint64_t budget) {
  if (n < 1) throw ValidationError("n must be positive");
  if (n > 8) throw BudgetExceeded("correlation game indices support n <= 8");
  CorrelationGame g;
  g.n_ = n;
  if (n <= 4) {
    g.L_ = static_cast<double>(exact_L(n));
    g.exact_ = true;
  } else {
    const auto [lo, hi] = L_bounds(n);
    g.L_ = 0.5 * (lo + hi);
    g.exact_ = false;
  }
  if (!lazy) g.dense_ = g.materialize(budget);
  return g;
}

double classical_value(const XorGame& game, int max_enumerated) {
  return maximize_sign_bilinear(game.coeffs(), max_enumerated).value;
}

}  // namespace xorcomm
