#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "xorcomm/game.hpp"

namespace xorcomm {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense strategy tensors are refused beyond this many entries.
inline constexpr std::uint64_t kMaxTensorEntries = std::uint64_t{1} << 26;

enum class Starter { Alice, Bob };

/// One round: the first speaker sends `first_bits`, the other replies with
/// `second_bits`. For AliceFirst these are (c_i, d_i).
struct Round {
  int first_bits = 0;
  int second_bits = 0;
};

/// Round/bit structure of a two-way protocol. Zero-bit messages use a
/// singleton alphabet, so every pattern goes through the same code path.
struct CommPattern {
  Starter starter = Starter::Alice;
  std::vector<Round> rounds{Round{}};

  /// Parses "c1,d1[,c2,d2...]".
  static CommPattern parse(const std::string& text, Starter starter = Starter::Alice);
  std::string to_string() const;

  int t() const { return static_cast<int>(rounds.size()); }
  int total_bits() const;
  std::uint64_t first_alphabet(int i) const { return std::uint64_t{1} << rounds[i].first_bits; }
  std::uint64_t second_alphabet(int i) const { return std::uint64_t{1} << rounds[i].second_bits; }

  /// Number of transcripts (m_1, n_1, ..., m_t, n_t) = 2^{total bits}.
  std::uint64_t transcripts() const;
  /// Mixed radices of a transcript index, m_1 most significant:
  /// {C_1, D_1, C_2, D_2, ...}.
  std::vector<std::uint64_t> radices() const;

  /// Throws ValidationError unless t >= 1 and all bit counts lie in [0, 16].
  void validate() const;

  /// Same pattern with the starter's messages as the "Alice" side. Used to
  /// realize BobFirst patterns on the transposed game.
  CommPattern as_alice_first() const;

  /// True when every round of `coarser` has at most as many bits as the
  /// matching round here (missing rounds count as zero).
  bool refines(const CommPattern& coarser) const;
};

/// Decoded transcript: m[i] sent by the first speaker, n[i] by the second.
struct Transcript {
  std::vector<std::uint64_t> m;
  std::vector<std::uint64_t> n;
};

Transcript decode_transcript(const CommPattern& p, std::uint64_t index);
std::uint64_t encode_transcript(const CommPattern& p, const Transcript& tr);

/// Randomized protocol for an AliceFirst pattern.
///
/// alice_messages[i] has one row per (x, n_1..n_{i-1}) and 2^{c_i} columns;
/// bob_messages[i] has one row per (y, m_1..m_i) and 2^{d_i} columns. Rows
/// are mixed-radix with the input most significant. Answers are indexed by
/// (x, n_1..n_t) and (y, m_1..m_t) the same way.
struct RandomizedStrategyPair {
  CommPattern pattern;
  Eigen::Index alice_inputs = 0;
  Eigen::Index bob_inputs = 0;
  std::vector<RowMatrixXd> alice_messages;
  std::vector<RowMatrixXd> bob_messages;
  Eigen::VectorXi alice_answers;
  Eigen::VectorXi bob_answers;

  /// Throws ShapeMismatch on wrong table shapes and ValidationError on
  /// non-stochastic rows or answers outside {±1}; messages name the table
  /// and row.
  void validate(double tol = 1e-12) const;

  /// Row of alice_messages[i] for input x and Bob's replies n_1..n_{i-1}.
  Eigen::Index alice_row(int i, Eigen::Index x, const Transcript& tr) const;
  Eigen::Index bob_row(int i, Eigen::Index y, const Transcript& tr) const;
  Eigen::Index alice_answer_index(Eigen::Index x, const Transcript& tr) const;
  Eigen::Index bob_answer_index(Eigen::Index y, const Transcript& tr) const;
};

/// Row counts of the message tables for round i.
Eigen::Index alice_table_rows(const CommPattern& p, Eigen::Index inputs, int i);
Eigen::Index bob_table_rows(const CommPattern& p, Eigen::Index inputs, int i);

/// Random valid strategy; each row is a point mass with probability
/// `point_mass_fraction`, otherwise uniform on the simplex.
RandomizedStrategyPair random_strategy(const CommPattern& p, Eigen::Index alice_inputs,
                                       Eigen::Index bob_inputs, std::mt19937_64& rng,
                                       double point_mass_fraction = 0.25);

enum class Side { Alice, Bob };

/// The tensors ā, b̄: one row per input, one column per transcript index.
struct StrategyTensor {
  Side side = Side::Alice;
  CommPattern pattern;
  RowMatrixXd entries;
};

StrategyTensor build_alice_tensor(const RandomizedStrategyPair& s, const CommPattern& p,
                                  Eigen::Index alice_inputs);
StrategyTensor build_bob_tensor(const RandomizedStrategyPair& s, const CommPattern& p,
                                Eigen::Index bob_inputs);

/// Alternating sup/sum chain: for Alice sup_x sum_{m1} sup_{n1} ... ,
/// for Bob sup_{y,m1} sum_{n1} sup_{m2} ... .
double nested_norm(const StrategyTensor& tensor, const CommPattern& p);

/// sum over transcripts of |ā(x, .) b̄(y, .)|.
double pair_product_mass(const StrategyTensor& a, const StrategyTensor& b, Eigen::Index x,
                         Eigen::Index y);

/// sum_{x,y,transcript} T(x,y) ā(x,.) b̄(y,.).
double protocol_value(const XorGame& game, const StrategyTensor& a, const StrategyTensor& b);

/// Empirical transcript statistics for a fixed question (x, y).
struct TranscriptSample {
  /// (transcript index, a, b) -> relative frequency.
  std::map<std::tuple<std::uint64_t, int, int>, double> frequencies;
  /// Empirical mean of a*b.
  double correlation = 0.0;
  std::uint64_t samples = 0;
};

TranscriptSample simulate_transcripts(const RandomizedStrategyPair& s, const CommPattern& p,
                                      Eigen::Index x, Eigen::Index y, std::uint64_t samples,
                                      std::uint64_t seed);

}  // namespace xorcomm
