#include "xorcomm/space_chain.hpp"

#include <algorithm>
#include <cmath>

#include "xorcomm/errors.hpp"

namespace xorcomm {

SpaceChain::SpaceChain(std::vector<Level> levels) : levels_(std::move(levels)) {
  for (const auto& l : levels_) {
    if (l.dim < 1) throw ValidationError("space chain levels need positive dimension");
  }
}

SpaceChain SpaceChain::for_side(Side side, const CommPattern& p, std::uint64_t inputs) {
  std::vector<Level> levels{{NormKind::Sup, inputs}};
  const NormKind on_m = side == Side::Alice ? NormKind::Sum : NormKind::Sup;
  const NormKind on_n = side == Side::Alice ? NormKind::Sup : NormKind::Sum;
  for (int i = 0; i < p.t(); ++i) {
    levels.push_back({on_m, p.first_alphabet(i)});
    levels.push_back({on_n, p.second_alphabet(i)});
  }
  return SpaceChain(std::move(levels));
}

std::uint64_t SpaceChain::dimension() const {
  std::uint64_t d = 1;
  for (const auto& l : levels_) d *= l.dim;
  return d;
}

SpaceChain SpaceChain::dual() const {
  auto levels = levels_;
  for (auto& l : levels) l.kind = l.kind == NormKind::Sup ? NormKind::Sum : NormKind::Sup;
  return SpaceChain(std::move(levels));
}

SpaceChain SpaceChain::canonical() const {
  std::vector<Level> out;
  for (const auto& l : levels_) {
    if (l.dim == 1) continue;
    if (!out.empty() && out.back().kind == l.kind) {
      out.back().dim *= l.dim;
    } else {
      out.push_back(l);
    }
  }
  return SpaceChain(std::move(out));
}

std::string SpaceChain::to_string() const {
  if (levels_.empty()) return "R";
  std::string s;
  for (const auto& l : levels_) {
    if (!s.empty()) s += '(';
    s += (l.kind == NormKind::Sup ? "l_inf^" : "l_1^") + std::to_string(l.dim);
  }
  s += std::string(levels_.size() - 1, ')');
  return s;
}

namespace {

double norm_rec(const double* v, const std::vector<Level>& levels, std::size_t level, std::uint64_t size) {
  if (level == levels.size()) return std::abs(*v);
  const std::uint64_t block = size / levels[level].dim;
  double acc = 0.0;
  for (std::uint64_t i = 0; i < levels[level].dim; ++i) {
    const double x = norm_rec(v + i * block, levels, level + 1, block);
    acc = levels[level].kind == NormKind::Sum ? acc + x : std::max(acc, x);
  }
  return acc;
}

}  // namespace

double SpaceChain::norm(std::span<const double> v) const {
  if (v.size() != dimension()) {
    throw ShapeMismatch("vector of length " + std::to_string(v.size()) + " does not live in " + to_string());
  }
  return norm_rec(v.data(), levels_, 0, v.size());
}

double SpaceChain::extreme_point_count() const {
  double count = 2.0;
  for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
    const auto d = static_cast<double>(it->dim);
    count = it->kind == NormKind::Sum ? d * count : std::pow(count, d);
  }
  return count;
}

std::optional<std::uint64_t> SpaceChain::extreme_point_count_exact() const {
  std::uint64_t count = 2;
  for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
    if (it->kind == NormKind::Sum) {
      if (__builtin_mul_overflow(count, it->dim, &count)) return std::nullopt;
    } else {
      std::uint64_t p = 1;
      for (std::uint64_t i = 0; i < it->dim; ++i) {
        if (__builtin_mul_overflow(p, count, &p)) return std::nullopt;
      }
      count = p;
    }
  }
  return count;
}

namespace {

// Fills v[offset, offset + size) with every extreme point of the suffix chain
// starting at `level`, invoking `next` after each completed fill.
class ExtremeWalker {
 public:
  ExtremeWalker(const std::vector<Level>& levels, std::vector<double>& v) : levels_(levels), v_(v) {
    sizes_.assign(levels.size() + 1, 1);
    for (std::size_t l = levels.size(); l-- > 0;) sizes_[l] = sizes_[l + 1] * levels[l].dim;
  }

  void walk(std::size_t level, std::uint64_t offset, const std::function<void()>& next) {
    if (level == levels_.size()) {
      v_[offset] = 1.0;
      next();
      v_[offset] = -1.0;
      next();
      return;
    }
    const std::uint64_t block = sizes_[level + 1];
    const std::uint64_t dim = levels_[level].dim;
    if (levels_[level].kind == NormKind::Sum) {
      std::fill(v_.begin() + offset, v_.begin() + offset + dim * block, 0.0);
      for (std::uint64_t i = 0; i < dim; ++i) {
        walk(level + 1, offset + i * block, next);
        std::fill(v_.begin() + offset + i * block, v_.begin() + offset + (i + 1) * block, 0.0);
      }
    } else {
      fill_blocks(level, offset, 0, next);
    }
  }

 private:
  void fill_blocks(std::size_t level, std::uint64_t offset, std::uint64_t i, const std::function<void()>& next) {
    if (i == levels_[level].dim) {
      next();
      return;
    }
    const std::uint64_t block = sizes_[level + 1];
    walk(level + 1, offset + i * block, [&] { fill_blocks(level, offset, i + 1, next); });
  }

  const std::vector<Level>& levels_;
  std::vector<double>& v_;
  std::vector<std::uint64_t> sizes_;
};

}  // namespace

void SpaceChain::for_each_extreme_point(const std::function<void(std::span<const double>)>& fn,
                                        double budget) const {
  const double count = extreme_point_count();
  if (count > budget) {
    throw BudgetExceeded(to_string() + " has " + std::to_string(count) + " extreme points, budget is " +
                         std::to_string(budget));
  }
  std::vector<double> v(dimension(), 0.0);
  ExtremeWalker walker(levels_, v);
  walker.walk(0, 0, [&] { fn(std::span<const double>(v)); });
}

}  // namespace xorcomm
