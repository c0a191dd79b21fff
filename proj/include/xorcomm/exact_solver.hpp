#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xorcomm/game.hpp"
#include "xorcomm/protocol.hpp"
#include "xorcomm/space_chain.hpp"

namespace xorcomm {

/// Default cap on the estimated number of elementary operations.
inline constexpr double kDefaultBudget = 2e10;

/// A deterministic protocol for an AliceFirst pattern: message functions
/// and ±1 answers, tables laid out like RandomizedStrategyPair.
///
/// When roles_swapped is set the protocol was solved on the transposed game,
/// i.e. "alice" is the first speaker, which is Bob in the original game.
struct DeterministicProtocolPair {
  CommPattern pattern;
  Eigen::Index alice_inputs = 0;
  Eigen::Index bob_inputs = 0;
  std::vector<std::vector<std::uint64_t>> alice_messages;
  std::vector<std::vector<std::uint64_t>> bob_messages;
  Eigen::VectorXi alice_answers;
  Eigen::VectorXi bob_answers;
  bool roles_swapped = false;

  Transcript transcript(Eigen::Index x, Eigen::Index y) const;
  /// Point-mass tables with the same answers.
  RandomizedStrategyPair to_randomized() const;
  /// sum_{x,y} T(x,y) a(x, n̄) b(y, m̄) along the deterministic transcripts.
  /// Pass the transposed game when roles_swapped is set.
  double value(const XorGame& game) const;
};

/// Value plus what produced it. Ties keep the first certificate found.
struct SolveResult {
  double value = 0.0;
  std::string method;
  std::optional<DeterministicProtocolPair> certificate;
  /// Estimated elementary operations.
  double cost = 0.0;
  double wallclock_seconds = 0.0;
  /// Heuristic only: objective after every half-sweep, restarts concatenated.
  std::vector<std::vector<double>> traces;
};

/// Counts, in log2, of Alice's and Bob's message-function skeletons.
double log2_skeleton_count(const CommPattern& p, Eigen::Index alice_inputs, Eigen::Index bob_inputs);

double exact_tw_cost(const XorGame& game, const CommPattern& p);

/// Exact two-way value: enumerates message-function skeletons, lifts T to
/// indices u = (x, received n̄), v = (y, received m̄) and solves the answer
/// problem exactly by sign enumeration. BobFirst patterns are solved on the
/// transposed game.
SolveResult exact_tw_value(const XorGame& game, const CommPattern& p, double budget = kDefaultBudget);

double epsilon_norm_cost(const XorGame& game, const CommPattern& p);

/// Injective tensor norm of T ⊗ id ⊗ ... ⊗ id between the Alice and Bob
/// strategy-ball chains. Enumerates extreme points of the chain with fewer
/// of them and evaluates the dual norm of the contracted functional on the
/// other side in closed form.
SolveResult epsilon_norm(const XorGame& game, const CommPattern& p, double budget = kDefaultBudget);

/// Same norm by brute force over all pairs of extreme points.
double epsilon_norm_pairwise(const XorGame& game, const CommPattern& p, double budget = kDefaultBudget);

/// Lower bound from alternating ascent over deterministic protocols. The
/// certificate's value equals the returned value; each trace is
/// nondecreasing.
SolveResult heuristic_tw_lower_bound(const XorGame& game, const CommPattern& p, int restarts,
                                     std::uint64_t seed, int max_sweeps = 200);

/// One player's half of a deterministic protocol recovered from a delta-form
/// tensor row block: message functions and answers.
struct DeterministicHalf {
  std::vector<std::vector<std::uint64_t>> messages;
  Eigen::VectorXi answers;
};

/// Decodes an extreme point of SpaceChain::for_side(side, p, inputs) into
/// message functions and signs. Returns nullopt if `point` is not of the
/// delta form (exactly one nonzero ±1 message per history, all else zero).
std::optional<DeterministicHalf> decode_extreme_point(Side side, const CommPattern& p,
                                                      Eigen::Index inputs, std::span<const double> point);

}  // namespace xorcomm
