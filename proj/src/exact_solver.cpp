#include "xorcomm/exact_solver.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "xorcomm/errors.hpp"
#include "xorcomm/sign_norm.hpp"

namespace xorcomm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Eigen::Index product_first(const CommPattern& p) {
  Eigen::Index c = 1;
  for (int i = 0; i < p.t(); ++i) c *= static_cast<Eigen::Index>(p.first_alphabet(i));
  return c;
}

Eigen::Index product_second(const CommPattern& p) {
  Eigen::Index d = 1;
  for (int i = 0; i < p.t(); ++i) d *= static_cast<Eigen::Index>(p.second_alphabet(i));
  return d;
}

// Message tables of a deterministic protocol, with an odometer over the
// entries whose alphabet has more than one symbol.
class Skeleton {
 public:
  Skeleton(const CommPattern& p, Eigen::Index alice_inputs, Eigen::Index bob_inputs) : p_(p) {
    for (int i = 0; i < p.t(); ++i) {
      alice.emplace_back(alice_table_rows(p, alice_inputs, i), 0);
      bob.emplace_back(bob_table_rows(p, bob_inputs, i), 0);
    }
    for (int i = 0; i < p.t(); ++i) {
      if (p.first_alphabet(i) > 1)
        for (std::size_t r = 0; r < alice[i].size(); ++r) slots_.push_back({&alice[i][r], p.first_alphabet(i)});
    }
    for (int i = 0; i < p.t(); ++i) {
      if (p.second_alphabet(i) > 1)
        for (std::size_t r = 0; r < bob[i].size(); ++r) slots_.push_back({&bob[i][r], p.second_alphabet(i)});
    }
  }
  Skeleton(const Skeleton&) = delete;
  Skeleton& operator=(const Skeleton&) = delete;

  /// Lexicographic successor (last slot fastest). False after the last one.
  bool next() {
    for (std::size_t k = slots_.size(); k-- > 0;) {
      if (++*slots_[k].value < slots_[k].radix) return true;
      *slots_[k].value = 0;
    }
    return false;
  }

  /// Follows the transcript for (x, y); returns (u, v) = Alice's and Bob's
  /// answer indices (x, n̄) and (y, m̄).
  std::pair<Eigen::Index, Eigen::Index> run(Eigen::Index x, Eigen::Index y) const {
    std::uint64_t arow = static_cast<std::uint64_t>(x);
    std::uint64_t brow = static_cast<std::uint64_t>(y);
    for (int i = 0; i < p_.t(); ++i) {
      const std::uint64_t m = alice[i][arow];
      brow = brow * p_.first_alphabet(i) + m;
      const std::uint64_t n = bob[i][brow];
      arow = arow * p_.second_alphabet(i) + n;
    }
    return {static_cast<Eigen::Index>(arow), static_cast<Eigen::Index>(brow)};
  }

  struct Slot {
    std::uint64_t* value;
    std::uint64_t radix;
  };
  std::vector<Slot>& slots() { return slots_; }

  std::vector<std::vector<std::uint64_t>> alice;
  std::vector<std::vector<std::uint64_t>> bob;

 private:
  CommPattern p_;
  std::vector<Slot> slots_;
};

DeterministicProtocolPair make_certificate(const CommPattern& p, const XorGame& game, const Skeleton& sk,
                                           Eigen::VectorXi alice_answers, Eigen::VectorXi bob_answers) {
  DeterministicProtocolPair c;
  c.pattern = p;
  c.alice_inputs = game.alice_inputs();
  c.bob_inputs = game.bob_inputs();
  c.alice_messages = sk.alice;
  c.bob_messages = sk.bob;
  c.alice_answers = std::move(alice_answers);
  c.bob_answers = std::move(bob_answers);
  return c;
}

struct LiftedSizes {
  double u, v;
};

LiftedSizes lifted_sizes(const XorGame& game, const CommPattern& p) {
  const double pairs = static_cast<double>(game.alice_inputs()) * static_cast<double>(game.bob_inputs());
  const double u = static_cast<double>(game.alice_inputs()) * static_cast<double>(product_second(p));
  const double v = static_cast<double>(game.bob_inputs()) * static_cast<double>(product_first(p));
  return {std::min(u, pairs), std::min(v, pairs)};
}

SolveResult exact_alice_first(const XorGame& game, const CommPattern& p, double budget) {
  const auto start = Clock::now();
  const double cost = exact_tw_cost(game, p);
  const LiftedSizes sizes = lifted_sizes(game, p);
  if (std::min(sizes.u, sizes.v) > 25) {
    throw BudgetExceeded("lifted answer problem has " + std::to_string(std::min(sizes.u, sizes.v)) +
                         " sign variables on its smaller side (limit 25)");
  }
  if (cost > budget) {
    throw BudgetExceeded("exact two-way enumeration needs about " + std::to_string(cost) +
                         " operations, budget is " + std::to_string(budget));
  }

  const Eigen::Index R = game.alice_inputs();
  const Eigen::Index S = game.bob_inputs();
  const Eigen::Index U = R * product_second(p);
  const Eigen::Index V = S * product_first(p);
  const Eigen::MatrixXd& T = game.coeffs();

  Skeleton sk(p, R, S);
  std::vector<Eigen::Index> u_of(R * S), v_of(R * S);
  std::vector<Eigen::Index> u_slot(U, -1), v_slot(V, -1);
  std::vector<Eigen::Index> u_list, v_list;

  double best = -1.0;
  std::optional<DeterministicProtocolPair> cert;
  do {
    u_list.clear();
    v_list.clear();
    for (Eigen::Index x = 0; x < R; ++x) {
      for (Eigen::Index y = 0; y < S; ++y) {
        const auto [u, v] = sk.run(x, y);
        if (u_slot[u] < 0) {
          u_slot[u] = static_cast<Eigen::Index>(u_list.size());
          u_list.push_back(u);
        }
        if (v_slot[v] < 0) {
          v_slot[v] = static_cast<Eigen::Index>(v_list.size());
          v_list.push_back(v);
        }
        u_of[x * S + y] = u_slot[u];
        v_of[x * S + y] = v_slot[v];
      }
    }
    Eigen::MatrixXd lifted = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(u_list.size()),
                                                   static_cast<Eigen::Index>(v_list.size()));
    for (Eigen::Index x = 0; x < R; ++x)
      for (Eigen::Index y = 0; y < S; ++y) lifted(u_of[x * S + y], v_of[x * S + y]) += T(x, y);

    const SignOptimum opt = maximize_sign_bilinear(lifted);
    if (opt.value > best) {
      best = opt.value;
      Eigen::VectorXi a = Eigen::VectorXi::Ones(U);
      Eigen::VectorXi b = Eigen::VectorXi::Ones(V);
      for (std::size_t i = 0; i < u_list.size(); ++i) a(u_list[i]) = opt.row_signs(static_cast<Eigen::Index>(i));
      for (std::size_t i = 0; i < v_list.size(); ++i) b(v_list[i]) = opt.col_signs(static_cast<Eigen::Index>(i));
      cert = make_certificate(p, game, sk, std::move(a), std::move(b));
    }
    for (auto u : u_list) u_slot[u] = -1;
    for (auto v : v_list) v_slot[v] = -1;
  } while (sk.next());

  SolveResult r;
  r.value = best;
  r.method = "exact";
  r.certificate = std::move(cert);
  r.cost = cost;
  r.wallclock_seconds = seconds_since(start);
  return r;
}

}  // namespace

Transcript DeterministicProtocolPair::transcript(Eigen::Index x, Eigen::Index y) const {
  Transcript tr;
  std::uint64_t arow = static_cast<std::uint64_t>(x);
  std::uint64_t brow = static_cast<std::uint64_t>(y);
  for (int i = 0; i < pattern.t(); ++i) {
    const std::uint64_t m = alice_messages[i][arow];
    brow = brow * pattern.first_alphabet(i) + m;
    const std::uint64_t n = bob_messages[i][brow];
    arow = arow * pattern.second_alphabet(i) + n;
    tr.m.push_back(m);
    tr.n.push_back(n);
  }
  return tr;
}

RandomizedStrategyPair DeterministicProtocolPair::to_randomized() const {
  RandomizedStrategyPair s;
  s.pattern = pattern.as_alice_first();
  s.alice_inputs = alice_inputs;
  s.bob_inputs = bob_inputs;
  for (int i = 0; i < pattern.t(); ++i) {
    RowMatrixXd a = RowMatrixXd::Zero(static_cast<Eigen::Index>(alice_messages[i].size()),
                                      static_cast<Eigen::Index>(pattern.first_alphabet(i)));
    for (std::size_t r = 0; r < alice_messages[i].size(); ++r)
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(alice_messages[i][r])) = 1.0;
    RowMatrixXd b = RowMatrixXd::Zero(static_cast<Eigen::Index>(bob_messages[i].size()),
                                      static_cast<Eigen::Index>(pattern.second_alphabet(i)));
    for (std::size_t r = 0; r < bob_messages[i].size(); ++r)
      b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(bob_messages[i][r])) = 1.0;
    s.alice_messages.push_back(std::move(a));
    s.bob_messages.push_back(std::move(b));
  }
  s.alice_answers = alice_answers;
  s.bob_answers = bob_answers;
  return s;
}

double DeterministicProtocolPair::value(const XorGame& game) const {
  if (game.alice_inputs() != alice_inputs || game.bob_inputs() != bob_inputs) {
    throw ShapeMismatch("protocol does not match the game dimensions");
  }
  double v = 0.0;
  for (Eigen::Index x = 0; x < alice_inputs; ++x) {
    for (Eigen::Index y = 0; y < bob_inputs; ++y) {
      std::uint64_t arow = static_cast<std::uint64_t>(x);
      std::uint64_t brow = static_cast<std::uint64_t>(y);
      for (int i = 0; i < pattern.t(); ++i) {
        brow = brow * pattern.first_alphabet(i) + alice_messages[i][arow];
        arow = arow * pattern.second_alphabet(i) + bob_messages[i][brow];
      }
      v += game(x, y) * alice_answers(static_cast<Eigen::Index>(arow)) * bob_answers(static_cast<Eigen::Index>(brow));
    }
  }
  return v;
}

double log2_skeleton_count(const CommPattern& p, Eigen::Index alice_inputs, Eigen::Index bob_inputs) {
  double bits = 0.0;
  for (int i = 0; i < p.t(); ++i) {
    bits += static_cast<double>(alice_table_rows(p, alice_inputs, i)) * p.rounds[i].first_bits;
    bits += static_cast<double>(bob_table_rows(p, bob_inputs, i)) * p.rounds[i].second_bits;
  }
  return bits;
}

double exact_tw_cost(const XorGame& game, const CommPattern& p) {
  const CommPattern q = p.as_alice_first();
  const XorGame& g = game;
  const Eigen::Index R = p.starter == Starter::Alice ? g.alice_inputs() : g.bob_inputs();
  const Eigen::Index S = p.starter == Starter::Alice ? g.bob_inputs() : g.alice_inputs();
  const double skeletons = std::exp2(log2_skeleton_count(q, R, S));
  const double pairs = static_cast<double>(R) * static_cast<double>(S);
  double u = static_cast<double>(R) * static_cast<double>(product_second(q));
  double v = static_cast<double>(S) * static_cast<double>(product_first(q));
  u = std::min(u, pairs);
  v = std::min(v, pairs);
  const double answer_cost = std::exp2(std::min(u, v) - 1.0) * std::max(u, v);
  return skeletons * (pairs * q.t() + answer_cost);
}

SolveResult exact_tw_value(const XorGame& game, const CommPattern& p, double budget) {
  p.validate();
  if (p.starter == Starter::Bob) {
    SolveResult r = exact_alice_first(game.transposed(), p.as_alice_first(), budget);
    if (r.certificate) r.certificate->roles_swapped = true;
    return r;
  }
  return exact_alice_first(game, p, budget);
}

namespace {

struct EpsilonSetup {
  XorGame game;
  CommPattern pattern;
  SpaceChain alice;
  SpaceChain bob;
  Eigen::Index K;
};

EpsilonSetup epsilon_setup(const XorGame& game, const CommPattern& p) {
  p.validate();
  const bool swap = p.starter == Starter::Bob;
  XorGame g = swap ? game.transposed() : game;
  CommPattern q = p.as_alice_first();
  const auto R = static_cast<std::uint64_t>(g.alice_inputs());
  const auto S = static_cast<std::uint64_t>(g.bob_inputs());
  return EpsilonSetup{g, q, SpaceChain::for_side(Side::Alice, q, R), SpaceChain::for_side(Side::Bob, q, S),
                      static_cast<Eigen::Index>(q.transcripts())};
}

}  // namespace

double epsilon_norm_cost(const XorGame& game, const CommPattern& p) {
  const EpsilonSetup e = epsilon_setup(game, p);
  const double R = static_cast<double>(e.game.alice_inputs());
  const double S = static_cast<double>(e.game.bob_inputs());
  const double K = static_cast<double>(e.K);
  return std::min(e.alice.extreme_point_count() * (R * S * K + S * K),
                  e.bob.extreme_point_count() * (R * S * K + R * K));
}

SolveResult epsilon_norm(const XorGame& game, const CommPattern& p, double budget) {
  const auto start = Clock::now();
  const EpsilonSetup e = epsilon_setup(game, p);
  const double cost = epsilon_norm_cost(game, p);
  if (cost > budget) {
    throw BudgetExceeded("epsilon norm needs about " + std::to_string(cost) + " operations, budget is " +
                         std::to_string(budget));
  }
  const Eigen::Index R = e.game.alice_inputs();
  const Eigen::Index S = e.game.bob_inputs();
  const Eigen::MatrixXd& T = e.game.coeffs();
  const bool enumerate_alice = e.alice.extreme_point_count() <= e.bob.extreme_point_count();

  double best = 0.0;
  if (enumerate_alice) {
    const SpaceChain dual = e.bob.dual();
    RowMatrixXd F(S, e.K);
    e.alice.for_each_extreme_point(
        [&](std::span<const double> pt) {
          Eigen::Map<const RowMatrixXd> A(pt.data(), R, e.K);
          F.noalias() = T.transpose() * A;
          best = std::max(best, dual.norm(std::span<const double>(F.data(), static_cast<std::size_t>(F.size()))));
        },
        budget);
  } else {
    const SpaceChain dual = e.alice.dual();
    RowMatrixXd F(R, e.K);
    e.bob.for_each_extreme_point(
        [&](std::span<const double> pt) {
          Eigen::Map<const RowMatrixXd> B(pt.data(), S, e.K);
          F.noalias() = T * B;
          best = std::max(best, dual.norm(std::span<const double>(F.data(), static_cast<std::size_t>(F.size()))));
        },
        budget);
  }
  SolveResult r;
  r.value = best;
  r.method = "epsilon";
  r.cost = cost;
  r.wallclock_seconds = seconds_since(start);
  return r;
}

double epsilon_norm_pairwise(const XorGame& game, const CommPattern& p, double budget) {
  const EpsilonSetup e = epsilon_setup(game, p);
  const double pairs = e.alice.extreme_point_count() * e.bob.extreme_point_count();
  const double cost = pairs * static_cast<double>(e.game.bob_inputs() * e.K);
  if (cost > budget) {
    throw BudgetExceeded("pairwise epsilon norm needs about " + std::to_string(cost) + " operations");
  }
  const Eigen::Index R = e.game.alice_inputs();
  const Eigen::Index S = e.game.bob_inputs();
  const auto bob_count = static_cast<Eigen::Index>(e.bob.extreme_point_count());
  RowMatrixXd bob_points(bob_count, S * e.K);
  Eigen::Index row = 0;
  e.bob.for_each_extreme_point(
      [&](std::span<const double> pt) {
        bob_points.row(row++) = Eigen::Map<const Eigen::RowVectorXd>(pt.data(), S * e.K);
      },
      budget);
  const Eigen::MatrixXd& T = e.game.coeffs();
  double best = 0.0;
  RowMatrixXd F(S, e.K);
  e.alice.for_each_extreme_point(
      [&](std::span<const double> pt) {
        Eigen::Map<const RowMatrixXd> A(pt.data(), R, e.K);
        F.noalias() = T.transpose() * A;
        const Eigen::VectorXd values = bob_points * Eigen::Map<const Eigen::VectorXd>(F.data(), F.size());
        best = std::max(best, values.cwiseAbs().maxCoeff());
      },
      budget);
  return best;
}

namespace {

class AscentState {
 public:
  AscentState(const XorGame& game, const CommPattern& p)
      : game_(game), sk_(p, game.alice_inputs(), game.bob_inputs()) {
    U_ = game.alice_inputs() * product_second(p);
    V_ = game.bob_inputs() * product_first(p);
    b_ = Eigen::VectorXi::Ones(V_);
    r_.resize(U_);
  }

  void randomize(std::mt19937_64& rng) {
    for (auto& s : sk_.slots()) *s.value = std::uniform_int_distribution<std::uint64_t>(0, s.radix - 1)(rng);
    std::bernoulli_distribution coin(0.5);
    for (Eigen::Index v = 0; v < V_; ++v) b_(v) = coin(rng) ? 1 : -1;
  }

  // sum_u |sum_v T'(u,v) b_v| with Alice answering optimally.
  double objective() {
    r_.setZero();
    for (Eigen::Index x = 0; x < game_.alice_inputs(); ++x)
      for (Eigen::Index y = 0; y < game_.bob_inputs(); ++y) {
        const auto [u, v] = sk_.run(x, y);
        r_(u) += game_(x, y) * b_(v);
      }
    return r_.cwiseAbs().sum();
  }

  double bob_best_response() {
    objective();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(V_);
    for (Eigen::Index x = 0; x < game_.alice_inputs(); ++x)
      for (Eigen::Index y = 0; y < game_.bob_inputs(); ++y) {
        const auto [u, v] = sk_.run(x, y);
        c(v) += game_(x, y) * sign_of(r_(u));
      }
    for (Eigen::Index v = 0; v < V_; ++v)
      if (c(v) != 0.0) b_(v) = sign_of(c(v));
    return objective();
  }

  double message_pass(double current) {
    for (auto& s : sk_.slots()) {
      const std::uint64_t keep = *s.value;
      std::uint64_t best_value = keep;
      for (std::uint64_t val = 0; val < s.radix; ++val) {
        if (val == keep) continue;
        *s.value = val;
        const double f = objective();
        if (f > current) {
          current = f;
          best_value = val;
        }
      }
      *s.value = best_value;
    }
    return objective();
  }

  DeterministicProtocolPair certificate(const CommPattern& p) {
    objective();
    Eigen::VectorXi a(U_);
    for (Eigen::Index u = 0; u < U_; ++u) a(u) = sign_of(r_(u));
    return make_certificate(p, game_, sk_, std::move(a), b_);
  }

 private:
  const XorGame& game_;
  Skeleton sk_;
  Eigen::Index U_ = 0, V_ = 0;
  Eigen::VectorXi b_;
  Eigen::VectorXd r_;
};

}  // namespace

SolveResult heuristic_tw_lower_bound(const XorGame& game, const CommPattern& p, int restarts,
                                     std::uint64_t seed, int max_sweeps) {
  if (restarts < 1) throw ValidationError("restarts must be at least 1");
  p.validate();
  const auto start = Clock::now();
  const bool swap = p.starter == Starter::Bob;
  const XorGame g = swap ? game.transposed() : game;
  const CommPattern q = p.as_alice_first();
  double slot_moves = 0.0;
  for (int i = 0; i < q.t(); ++i) {
    slot_moves += static_cast<double>(alice_table_rows(q, g.alice_inputs(), i)) * (q.first_alphabet(i) - 1);
    slot_moves += static_cast<double>(bob_table_rows(q, g.bob_inputs(), i)) * (q.second_alphabet(i) - 1);
  }
  const double eval_cost = static_cast<double>(g.alice_inputs() * g.bob_inputs()) * q.t();

  std::mt19937_64 master(seed);
  SolveResult result;
  result.method = "heuristic";
  result.value = -1.0;
  double cost = 0.0;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(master());
    AscentState state(g, q);
    state.randomize(rng);
    std::vector<double> trace{state.objective()};
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      const double before = trace.back();
      trace.push_back(state.bob_best_response());
      trace.push_back(state.message_pass(trace.back()));
      cost += (slot_moves + 4.0) * eval_cost;
      if (trace.back() <= before) break;
    }
    if (trace.back() > result.value) {
      result.value = trace.back();
      result.certificate = state.certificate(q);
      result.certificate->roles_swapped = swap;
    }
    result.traces.push_back(std::move(trace));
  }
  result.cost = cost;
  result.wallclock_seconds = seconds_since(start);
  return result;
}

namespace {

// Dense tensor of one half, matching build_alice_tensor / build_bob_tensor.
std::vector<double> half_tensor(Side side, const CommPattern& p, Eigen::Index inputs, const DeterministicHalf& h) {
  const std::uint64_t K = p.transcripts();
  std::vector<double> out(static_cast<std::size_t>(inputs) * K, 0.0);
  for (Eigen::Index in = 0; in < inputs; ++in) {
    for (std::uint64_t tau = 0; tau < K; ++tau) {
      const Transcript tr = decode_transcript(p, tau);
      std::uint64_t row = static_cast<std::uint64_t>(in);
      bool hit = true;
      for (int i = 0; i < p.t() && hit; ++i) {
        if (side == Side::Alice) {
          hit = h.messages[i][row] == tr.m[i];
          row = row * p.second_alphabet(i) + tr.n[i];
        } else {
          row = row * p.first_alphabet(i) + tr.m[i];
          hit = h.messages[i][row] == tr.n[i];
        }
      }
      if (hit) out[static_cast<std::size_t>(in) * K + tau] = h.answers(static_cast<Eigen::Index>(row));
    }
  }
  return out;
}

}  // namespace

std::optional<DeterministicHalf> decode_extreme_point(Side side, const CommPattern& p, Eigen::Index inputs,
                                                      std::span<const double> point) {
  const std::uint64_t K = p.transcripts();
  if (point.size() != static_cast<std::size_t>(inputs) * K) throw ShapeMismatch("point has the wrong length");
  DeterministicHalf h;
  for (int i = 0; i < p.t(); ++i) {
    const Eigen::Index rows =
        side == Side::Alice ? alice_table_rows(p, inputs, i) : bob_table_rows(p, inputs, i);
    h.messages.emplace_back(static_cast<std::size_t>(rows), 0);
  }
  h.answers = Eigen::VectorXi::Ones(side == Side::Alice ? alice_table_rows(p, inputs, p.t())
                                                        : bob_table_rows(p, inputs, p.t() - 1));
  // Read off messages and signs from the nonzero entries, then rebuild and
  // compare: anything not of delta form fails the comparison.
  for (Eigen::Index in = 0; in < inputs; ++in) {
    for (std::uint64_t tau = 0; tau < K; ++tau) {
      const double e = point[static_cast<std::size_t>(in) * K + tau];
      if (e == 0.0) continue;
      if (e != 1.0 && e != -1.0) return std::nullopt;
      const Transcript tr = decode_transcript(p, tau);
      std::uint64_t row = static_cast<std::uint64_t>(in);
      for (int i = 0; i < p.t(); ++i) {
        if (side == Side::Alice) {
          h.messages[i][row] = tr.m[i];
          row = row * p.second_alphabet(i) + tr.n[i];
        } else {
          row = row * p.first_alphabet(i) + tr.m[i];
          h.messages[i][row] = tr.n[i];
        }
      }
      h.answers(static_cast<Eigen::Index>(row)) = static_cast<int>(e);
    }
  }
  const std::vector<double> rebuilt = half_tensor(side, p, inputs, h);
  if (!std::equal(rebuilt.begin(), rebuilt.end(), point.begin())) return std::nullopt;
  return h;
}

}  // namespace xorcomm
