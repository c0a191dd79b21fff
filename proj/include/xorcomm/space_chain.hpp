#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xorcomm/protocol.hpp"

namespace xorcomm {

enum class NormKind { Sup, Sum };

struct Level {
  NormKind kind = NormKind::Sup;
  std::uint64_t dim = 1;
};

/// A nested space such as l_inf^R(l_1^{C1}(l_inf^{D1}(...))) acting on a
/// flat row-major vector, the outermost level varying slowest.
class SpaceChain {
 public:
  SpaceChain() = default;
  explicit SpaceChain(std::vector<Level> levels);

  /// Chain whose unit ball holds the strategy tensors of `side`, in the
  /// StrategyTensor layout (input, m_1, n_1, ..., m_t, n_t):
  ///   Alice  l_inf^R (l_1^{C1} (l_inf^{D1} ( ... l_1^{Ct} (l_inf^{Dt}))))
  ///   Bob    l_inf^S (l_inf^{C1} (l_1^{D1} ( ... l_inf^{Ct} (l_1^{Dt}))))
  static SpaceChain for_side(Side side, const CommPattern& p, std::uint64_t inputs);

  const std::vector<Level>& levels() const { return levels_; }
  std::uint64_t dimension() const;

  /// Exchanges l_1 and l_inf at every level.
  SpaceChain dual() const;

  /// Drops dimension-one levels and merges neighbours of equal kind, so the
  /// result strictly alternates. Same norm on the same flat vectors.
  SpaceChain canonical() const;

  /// e.g. "l_inf^2(l_1^2(l_inf^2))"; "R" for the scalar chain.
  std::string to_string() const;

  double norm(std::span<const double> v) const;

  /// Number of extreme points of the unit ball: base ±1 gives 2,
  /// l_inf^k(X) gives |ext X|^k, l_1^k(X) gives k |ext X|.
  double extreme_point_count() const;
  /// Exact count, or nullopt if it overflows 64 bits.
  std::optional<std::uint64_t> extreme_point_count_exact() const;

  /// Calls `fn` once per extreme point, in a fixed order. Throws
  /// BudgetExceeded (with the count) if the count exceeds `budget`.
  void for_each_extreme_point(const std::function<void(std::span<const double>)>& fn,
                              double budget) const;

 private:
  std::vector<Level> levels_;
};

}  // namespace xorcomm
