#include "xorcomm/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xorcomm/errors.hpp"

namespace xorcomm {

CommPattern CommPattern::parse(const std::string& text, Starter starter) {
  std::vector<int> bits;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int b = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      bits.push_back(b);
    } catch (const std::exception&) {
      throw ValidationError("pattern entry '" + item + "' is not an integer");
    }
  }
  if (bits.empty() || bits.size() % 2 != 0) {
    throw ValidationError("pattern '" + text + "' must list bit counts in pairs c1,d1[,c2,d2...]");
  }
  CommPattern p;
  p.starter = starter;
  p.rounds.clear();
  for (std::size_t i = 0; i < bits.size(); i += 2) p.rounds.push_back({bits[i], bits[i + 1]});
  p.validate();
  return p;
}

std::string CommPattern::to_string() const {
  std::string out;
  for (const auto& r : rounds) {
    if (!out.empty()) out += ',';
    out += std::to_string(r.first_bits) + ',' + std::to_string(r.second_bits);
  }
  return out;
}

int CommPattern::total_bits() const {
  int total = 0;
  for (const auto& r : rounds) total += r.first_bits + r.second_bits;
  return total;
}

std::uint64_t CommPattern::transcripts() const {
  if (total_bits() >= 63) throw BudgetExceeded("pattern has too many bits");
  return std::uint64_t{1} << total_bits();
}

std::vector<std::uint64_t> CommPattern::radices() const {
  std::vector<std::uint64_t> r;
  for (int i = 0; i < t(); ++i) {
    r.push_back(first_alphabet(i));
    r.push_back(second_alphabet(i));
  }
  return r;
}

void CommPattern::validate() const {
  if (rounds.empty()) throw ValidationError("pattern needs at least one round");
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    for (int b : {rounds[i].first_bits, rounds[i].second_bits}) {
      if (b < 0 || b > 16) {
        throw ValidationError("round " + std::to_string(i + 1) + " has bit count " +
                              std::to_string(b) + " outside [0, 16]");
      }
    }
  }
}

CommPattern CommPattern::as_alice_first() const {
  CommPattern p = *this;
  p.starter = Starter::Alice;
  return p;
}

bool CommPattern::refines(const CommPattern& coarser) const {
  if (coarser.starter != starter && coarser.total_bits() > 0 && total_bits() > 0) return false;
  for (std::size_t i = 0; i < coarser.rounds.size(); ++i) {
    const Round mine = i < rounds.size() ? rounds[i] : Round{};
    if (coarser.rounds[i].first_bits > mine.first_bits) return false;
    if (coarser.rounds[i].second_bits > mine.second_bits) return false;
  }
  return true;
}

Transcript decode_transcript(const CommPattern& p, std::uint64_t index) {
  Transcript tr;
  tr.m.resize(p.t());
  tr.n.resize(p.t());
  for (int i = p.t() - 1; i >= 0; --i) {
    tr.n[i] = index % p.second_alphabet(i);
    index /= p.second_alphabet(i);
    tr.m[i] = index % p.first_alphabet(i);
    index /= p.first_alphabet(i);
  }
  return tr;
}

std::uint64_t encode_transcript(const CommPattern& p, const Transcript& tr) {
  std::uint64_t index = 0;
  for (int i = 0; i < p.t(); ++i) {
    index = index * p.first_alphabet(i) + tr.m[i];
    index = index * p.second_alphabet(i) + tr.n[i];
  }
  return index;
}

Eigen::Index alice_table_rows(const CommPattern& p, Eigen::Index inputs, int i) {
  Eigen::Index rows = inputs;
  for (int j = 0; j < i; ++j) rows *= static_cast<Eigen::Index>(p.second_alphabet(j));
  return rows;
}

Eigen::Index bob_table_rows(const CommPattern& p, Eigen::Index inputs, int i) {
  Eigen::Index rows = inputs;
  for (int j = 0; j <= i; ++j) rows *= static_cast<Eigen::Index>(p.first_alphabet(j));
  return rows;
}

Eigen::Index RandomizedStrategyPair::alice_row(int i, Eigen::Index x, const Transcript& tr) const {
  Eigen::Index row = x;
  for (int j = 0; j < i; ++j) row = row * static_cast<Eigen::Index>(pattern.second_alphabet(j)) + tr.n[j];
  return row;
}

Eigen::Index RandomizedStrategyPair::bob_row(int i, Eigen::Index y, const Transcript& tr) const {
  Eigen::Index row = y;
  for (int j = 0; j <= i; ++j) row = row * static_cast<Eigen::Index>(pattern.first_alphabet(j)) + tr.m[j];
  return row;
}

Eigen::Index RandomizedStrategyPair::alice_answer_index(Eigen::Index x, const Transcript& tr) const {
  return alice_row(pattern.t(), x, tr);
}

Eigen::Index RandomizedStrategyPair::bob_answer_index(Eigen::Index y, const Transcript& tr) const {
  return bob_row(pattern.t() - 1, y, tr);
}

namespace {

void check_stochastic(const RowMatrixXd& table, const std::string& name, double tol) {
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    const auto row = table.row(r);
    if (!row.allFinite() || (row.array() < 0.0).any()) {
      throw ValidationError(name + " row " + std::to_string(r) + " has a negative or non-finite entry");
    }
    if (std::abs(row.sum() - 1.0) > tol) {
      throw ValidationError(name + " row " + std::to_string(r) + " sums to " +
                            std::to_string(row.sum()) + ", not 1");
    }
  }
}

void check_answers(const Eigen::VectorXi& answers, const std::string& name) {
  for (Eigen::Index i = 0; i < answers.size(); ++i) {
    if (answers(i) != 1 && answers(i) != -1) {
      throw ValidationError(name + " entry " + std::to_string(i) + " is not ±1");
    }
  }
}

void check_shape(Eigen::Index rows, Eigen::Index cols, const RowMatrixXd& m, const std::string& name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeMismatch(name + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                        ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

void RandomizedStrategyPair::validate(double tol) const {
  pattern.validate();
  if (pattern.starter != Starter::Alice) {
    throw ValidationError("strategy pairs are stored AliceFirst; swap roles for BobFirst patterns");
  }
  if (alice_inputs < 1 || bob_inputs < 1) throw ShapeMismatch("input counts must be positive");
  const int t = pattern.t();
  if (static_cast<int>(alice_messages.size()) != t || static_cast<int>(bob_messages.size()) != t) {
    throw ShapeMismatch("expected " + std::to_string(t) + " message tables per player");
  }
  for (int i = 0; i < t; ++i) {
    const std::string a = "alice_messages[" + std::to_string(i) + "]";
    const std::string b = "bob_messages[" + std::to_string(i) + "]";
    check_shape(alice_table_rows(pattern, alice_inputs, i),
                static_cast<Eigen::Index>(pattern.first_alphabet(i)), alice_messages[i], a);
    check_shape(bob_table_rows(pattern, bob_inputs, i),
                static_cast<Eigen::Index>(pattern.second_alphabet(i)), bob_messages[i], b);
    check_stochastic(alice_messages[i], a, tol);
    check_stochastic(bob_messages[i], b, tol);
  }
  if (alice_answers.size() != alice_table_rows(pattern, alice_inputs, t)) {
    throw ShapeMismatch("alice_answers has wrong length");
  }
  if (bob_answers.size() != bob_table_rows(pattern, bob_inputs, t - 1)) {
    throw ShapeMismatch("bob_answers has wrong length");
  }
  check_answers(alice_answers, "alice_answers");
  check_answers(bob_answers, "bob_answers");
}

namespace {

RowMatrixXd random_table(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                         double point_mass_fraction) {
  RowMatrixXd m = RowMatrixXd::Zero(rows, cols);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<Eigen::Index> pick(0, cols - 1);
  std::exponential_distribution<double> expo(1.0);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (unit(rng) < point_mass_fraction) {
      m(r, pick(rng)) = 1.0;
    } else {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = expo(rng);
      m.row(r) /= m.row(r).sum();
    }
  }
  return m;
}

Eigen::VectorXi random_signs(Eigen::Index size, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXi v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = coin(rng) ? 1 : -1;
  return v;
}

}  // namespace

RandomizedStrategyPair random_strategy(const CommPattern& p, Eigen::Index alice_inputs,
                                       Eigen::Index bob_inputs, std::mt19937_64& rng,
                                       double point_mass_fraction) {
  p.validate();
  RandomizedStrategyPair s;
  s.pattern = p.as_alice_first();
  s.alice_inputs = alice_inputs;
  s.bob_inputs = bob_inputs;
  for (int i = 0; i < p.t(); ++i) {
    s.alice_messages.push_back(random_table(alice_table_rows(p, alice_inputs, i),
                                            static_cast<Eigen::Index>(p.first_alphabet(i)), rng,
                                            point_mass_fraction));
    s.bob_messages.push_back(random_table(bob_table_rows(p, bob_inputs, i),
                                          static_cast<Eigen::Index>(p.second_alphabet(i)), rng,
                                          point_mass_fraction));
  }
  s.alice_answers = random_signs(alice_table_rows(p, alice_inputs, p.t()), rng);
  s.bob_answers = random_signs(bob_table_rows(p, bob_inputs, p.t() - 1), rng);
  return s;
}

namespace {

void check_tensor_budget(Eigen::Index inputs, const CommPattern& p) {
  const double entries = static_cast<double>(inputs) * std::ldexp(1.0, p.total_bits());
  if (entries > static_cast<double>(kMaxTensorEntries)) {
    throw BudgetExceeded("strategy tensor would have " + std::to_string(entries) +
                         " entries (limit 2^26)");
  }
}

void check_pattern_matches(const RandomizedStrategyPair& s, const CommPattern& p) {
  if (s.pattern.rounds.size() != p.rounds.size()) throw ShapeMismatch("strategy pattern differs from p");
  for (std::size_t i = 0; i < p.rounds.size(); ++i) {
    if (s.pattern.rounds[i].first_bits != p.rounds[i].first_bits ||
        s.pattern.rounds[i].second_bits != p.rounds[i].second_bits) {
      throw ShapeMismatch("strategy pattern differs from p in round " + std::to_string(i + 1));
    }
  }
}

}  // namespace

StrategyTensor build_alice_tensor(const RandomizedStrategyPair& s, const CommPattern& p,
                                  Eigen::Index alice_inputs) {
  check_pattern_matches(s, p);
  if (s.alice_inputs != alice_inputs) throw ShapeMismatch("Alice input count differs from strategy");
  check_tensor_budget(alice_inputs, p);
  s.validate();
  const auto k = static_cast<Eigen::Index>(p.transcripts());
  StrategyTensor out{Side::Alice, p, RowMatrixXd(alice_inputs, k)};
  for (Eigen::Index tau = 0; tau < k; ++tau) {
    const Transcript tr = decode_transcript(p, static_cast<std::uint64_t>(tau));
    for (Eigen::Index x = 0; x < alice_inputs; ++x) {
      double v = s.alice_answers(s.alice_answer_index(x, tr));
      for (int i = 0; i < p.t(); ++i) v *= s.alice_messages[i](s.alice_row(i, x, tr), tr.m[i]);
      out.entries(x, tau) = v;
    }
  }
  return out;
}

StrategyTensor build_bob_tensor(const RandomizedStrategyPair& s, const CommPattern& p,
                                Eigen::Index bob_inputs) {
  check_pattern_matches(s, p);
  if (s.bob_inputs != bob_inputs) throw ShapeMismatch("Bob input count differs from strategy");
  check_tensor_budget(bob_inputs, p);
  s.validate();
  const auto k = static_cast<Eigen::Index>(p.transcripts());
  StrategyTensor out{Side::Bob, p, RowMatrixXd(bob_inputs, k)};
  for (Eigen::Index tau = 0; tau < k; ++tau) {
    const Transcript tr = decode_transcript(p, static_cast<std::uint64_t>(tau));
    for (Eigen::Index y = 0; y < bob_inputs; ++y) {
      double v = s.bob_answers(s.bob_answer_index(y, tr));
      for (int i = 0; i < p.t(); ++i) v *= s.bob_messages[i](s.bob_row(i, y, tr), tr.n[i]);
      out.entries(y, tau) = v;
    }
  }
  return out;
}

namespace {

// Evaluates the chain over transcript digits starting at `level` (0 = m_1,
// 1 = n_1, 2 = m_2, ...). `sum_on_m` selects Alice's ordering (sum over m,
// sup over n) versus Bob's (sup over m, sum over n).
double chain(const double* data, const std::vector<std::uint64_t>& radices, std::size_t level,
             std::uint64_t stride, bool sum_on_m) {
  if (level == radices.size()) return std::abs(*data);
  const std::uint64_t block = stride / radices[level];
  const bool is_m = level % 2 == 0;
  const bool sum = is_m == sum_on_m;
  double acc = 0.0;
  for (std::uint64_t i = 0; i < radices[level]; ++i) {
    const double v = chain(data + i * block, radices, level + 1, block, sum_on_m);
    acc = sum ? acc + v : std::max(acc, v);
  }
  return acc;
}

void check_tensor_shape(const StrategyTensor& t, const CommPattern& p) {
  if (static_cast<std::uint64_t>(t.entries.cols()) != p.transcripts()) {
    throw ShapeMismatch("tensor has " + std::to_string(t.entries.cols()) + " transcript columns, pattern has " +
                        std::to_string(p.transcripts()));
  }
}

}  // namespace

double nested_norm(const StrategyTensor& tensor, const CommPattern& p) {
  check_tensor_shape(tensor, p);
  const auto radices = p.radices();
  const auto k = static_cast<std::uint64_t>(tensor.entries.cols());
  const bool sum_on_m = tensor.side == Side::Alice;
  double best = 0.0;
  for (Eigen::Index r = 0; r < tensor.entries.rows(); ++r) {
    best = std::max(best, chain(tensor.entries.row(r).data(), radices, 0, k, sum_on_m));
  }
  return best;
}

double pair_product_mass(const StrategyTensor& a, const StrategyTensor& b, Eigen::Index x,
                         Eigen::Index y) {
  if (a.entries.cols() != b.entries.cols()) throw ShapeMismatch("tensors have different transcript spaces");
  if (x < 0 || x >= a.entries.rows() || y < 0 || y >= b.entries.rows()) {
    throw ShapeMismatch("input index out of range");
  }
  return a.entries.row(x).cwiseAbs().cwiseProduct(b.entries.row(y).cwiseAbs()).sum();
}

double protocol_value(const XorGame& game, const StrategyTensor& a, const StrategyTensor& b) {
  if (a.entries.cols() != b.entries.cols()) throw ShapeMismatch("tensors have different transcript spaces");
  if (a.entries.rows() != game.alice_inputs() || b.entries.rows() != game.bob_inputs()) {
    throw ShapeMismatch("tensor input counts do not match the game");
  }
  // correlation(x, y) = sum_tau ā(x,tau) b̄(y,tau)
  const Eigen::MatrixXd corr = a.entries * b.entries.transpose();
  return game.coeffs().cwiseProduct(corr).sum();
}

namespace {

std::uint64_t sample_row(const auto& row, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  const Eigen::Index last = row.size() - 1;
  for (Eigen::Index i = 0; i < last; ++i) {
    acc += row(i);
    if (u < acc) return static_cast<std::uint64_t>(i);
  }
  return static_cast<std::uint64_t>(last);
}

}  // namespace

TranscriptSample simulate_transcripts(const RandomizedStrategyPair& s, const CommPattern& p,
                                      Eigen::Index x, Eigen::Index y, std::uint64_t samples,
                                      std::uint64_t seed) {
  if (samples < 1) throw ValidationError("samples must be at least 1");
  check_pattern_matches(s, p);
  s.validate();
  if (x < 0 || x >= s.alice_inputs || y < 0 || y >= s.bob_inputs) throw ShapeMismatch("input index out of range");
  std::mt19937_64 rng(seed);
  std::map<std::tuple<std::uint64_t, int, int>, std::uint64_t> counts;
  std::int64_t sum_ab = 0;
  Transcript tr;
  tr.m.assign(p.t(), 0);
  tr.n.assign(p.t(), 0);
  for (std::uint64_t k = 0; k < samples; ++k) {
    for (int i = 0; i < p.t(); ++i) {
      tr.m[i] = sample_row(s.alice_messages[i].row(s.alice_row(i, x, tr)), rng);
      tr.n[i] = sample_row(s.bob_messages[i].row(s.bob_row(i, y, tr)), rng);
    }
    const int a = s.alice_answers(s.alice_answer_index(x, tr));
    const int b = s.bob_answers(s.bob_answer_index(y, tr));
    ++counts[{encode_transcript(p, tr), a, b}];
    sum_ab += a * b;
  }
  TranscriptSample out;
  out.samples = samples;
  out.correlation = static_cast<double>(sum_ab) / static_cast<double>(samples);
  for (const auto& [key, c] : counts) out.frequencies[key] = static_cast<double>(c) / static_cast<double>(samples);
  return out;
}

}  // namespace xorcomm
