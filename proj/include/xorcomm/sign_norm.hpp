#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "xorcomm/errors.hpp"

namespace xorcomm {

/// Maximizer of sum_{u,v} M(u,v) r_u c_v over sign vectors r, c.
struct SignOptimum {
  double value = 0.0;
  Eigen::VectorXi row_signs;
  Eigen::VectorXi col_signs;
};

inline int sign_of(double v) { return v < 0.0 ? -1 : 1; }

namespace detail {

// Enumerates column signs with c_0 = +1 fixed (global flip symmetry) in Gray-code
// order; rows take the closed-form optimum sign(M c).
template <typename Derived>
SignOptimum enumerate_column_signs(const Eigen::MatrixBase<Derived>& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  SignOptimum best;
  best.row_signs = Eigen::VectorXi::Ones(rows);
  best.col_signs = Eigen::VectorXi::Ones(cols);
  if (cols == 0 || rows == 0) return best;

  Eigen::VectorXd s = Eigen::VectorXd::Ones(cols);
  Eigen::VectorXd w = m * s;
  Eigen::VectorXd best_w = w;
  best.value = w.cwiseAbs().sum();

  const std::uint64_t steps = std::uint64_t{1} << (cols - 1);
  constexpr std::uint64_t kRefresh = 4096;
  for (std::uint64_t i = 1; i < steps; ++i) {
    const int j = __builtin_ctzll(i) + 1;
    s(j) = -s(j);
    if (i % kRefresh == 0) {
      w.noalias() = m * s;
    } else {
      w += (2.0 * s(j)) * m.col(j);
    }
    const double v = w.cwiseAbs().sum();
    if (v > best.value) {
      best.value = v;
      best.col_signs = s.template cast<int>();
      best_w = w;
    }
  }
  for (Eigen::Index u = 0; u < rows; ++u) best.row_signs(u) = sign_of(best_w(u));
  return best;
}

}  // namespace detail

/// Exact max over r in {±1}^rows, c in {±1}^cols of r^T M c, i.e. the
/// infinity-to-one norm. Enumerates the smaller side.
template <typename Derived>
SignOptimum maximize_sign_bilinear(const Eigen::MatrixBase<Derived>& m, int max_enumerated = 25) {
  const Eigen::Index small = std::min(m.rows(), m.cols());
  if (small > max_enumerated) {
    throw BudgetExceeded("sign enumeration over " + std::to_string(small) +
                         " entries exceeds the limit of " + std::to_string(max_enumerated));
  }
  if (m.cols() <= m.rows()) return detail::enumerate_column_signs(m);
  SignOptimum t = detail::enumerate_column_signs(m.transpose());
  std::swap(t.row_signs, t.col_signs);
  return t;
}

}  // namespace xorcomm
