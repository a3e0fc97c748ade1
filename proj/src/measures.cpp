#include "facet/measures.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace facet {

// ---------------------------------------------------------------------------
// CylinderMeasure

CylinderMeasure::CylinderMeasure(AlphabetStack stack, std::size_t dim, std::size_t depth,
                                 std::map<Pattern, Rational> masses)
    : stack_(std::move(stack)), dim_(dim), depth_(depth), base_(Shape::folner(depth, dim)) {
  if (depth == 0) throw std::invalid_argument("CylinderMeasure: depth must be >= 1");
  if (stack_.depth() < depth) throw std::invalid_argument("CylinderMeasure: alphabet stack shallower than depth");
  stack_ = stack_.truncated(depth);
  const std::size_t len = base_.size() * depth;
  Rational total = 0;
  for (auto it = masses.begin(); it != masses.end();) {
    if (it->first.size() != len) throw std::invalid_argument("CylinderMeasure: pattern of wrong length");
    if (it->second < 0) throw std::invalid_argument("CylinderMeasure: negative mass");
    Block(base_, depth, it->first).validate(stack_);
    total += it->second;
    it = it->second == 0 ? masses.erase(it) : std::next(it);
  }
  if (total != 1) throw std::invalid_argument("CylinderMeasure: masses sum to " + to_string(total) + ", not 1");

  levels_.resize(depth);
  for (std::size_t i = 1; i < depth; ++i) {
    const Shape fi = Shape::folner(i, dim);
    const auto positions = *embedding_indices(base_, fi, GroupPoint::identity(dim));
    auto& level = levels_[i - 1];
    Pattern buffer;
    for (const auto& [pattern, mass] : masses) {
      buffer.clear();
      for (std::size_t r = 0; r < i; ++r) {
        for (std::size_t pos : positions) buffer.push_back(pattern[r * base_.size() + pos]);
      }
      level[buffer] += mass;
    }
  }
  levels_.back() = std::move(masses);
}

const std::map<Pattern, Rational>& CylinderMeasure::marginal(std::size_t level) const {
  if (level == 0 || level > depth_) {
    throw std::out_of_range("CylinderMeasure: level " + std::to_string(level) + " outside 1.." + std::to_string(depth_));
  }
  return levels_[level - 1];
}

Rational CylinderMeasure::value(std::size_t level, const Pattern& pattern) const {
  const auto& m = marginal(level);
  const auto it = m.find(pattern);
  return it == m.end() ? Rational(0) : it->second;
}

Rational CylinderMeasure::value(const Block& d) const {
  const std::size_t level = d.depth();
  if (level == 0 || level > depth_ || d.dim() != dim_ || d.shape() != Shape::folner(level, dim_)) {
    throw std::invalid_argument("CylinderMeasure::value: block must live on F_i x [0, i) with i <= depth");
  }
  return value(level, d.entries());
}

// ---------------------------------------------------------------------------
// Construction of measures

CylinderMeasure block_measure(const Block& b, std::size_t j, const AlphabetStack& stack) {
  if (j == 0 || j > b.depth()) throw std::invalid_argument("block_measure: level outside block depth");
  b.validate(stack);
  const PatternTable table = PatternTable::level(b, j);
  if (table.embeddings() == 0) {
    throw std::invalid_argument("block_measure: F_" + std::to_string(j) + " does not embed in the block's shape");
  }
  std::map<Pattern, Rational> masses;
  for (const auto& [pattern, count] : table.counts()) masses.emplace(pattern, ratio(count, table.embeddings()));
  return CylinderMeasure(stack, b.dim(), j, std::move(masses));
}

CylinderMeasure mix(std::span<const Rational> weights, std::span<const CylinderMeasure> measures) {
  if (weights.size() != measures.size() || measures.empty()) {
    throw std::invalid_argument("mix: need one weight per measure and at least one measure");
  }
  Rational total = 0;
  for (const auto& w : weights) {
    if (w < 0) throw std::invalid_argument("mix: negative weight");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("mix: weights sum to " + to_string(total));
  const auto& first = measures.front();
  std::map<Pattern, Rational> masses;
  for (std::size_t i = 0; i < measures.size(); ++i) {
    const auto& m = measures[i];
    if (m.dim() != first.dim() || m.depth() != first.depth() || !(m.stack() == first.stack())) {
      throw std::invalid_argument("mix: measures on different bases");
    }
    if (weights[i] == 0) continue;
    for (const auto& [pattern, mass] : m.masses()) masses[pattern] += weights[i] * mass;
  }
  return CylinderMeasure(first.stack(), first.dim(), first.depth(), std::move(masses));
}

CylinderMeasure bernoulli_measure(const AlphabetStack& stack, std::size_t dim, std::size_t depth,
                                  const RowProbabilities& probabilities, std::size_t cap) {
  if (probabilities.size() < depth) throw std::invalid_argument("bernoulli_measure: missing row probabilities");
  // Checks sizes and normalisation.
  BernoulliSampler check(stack.truncated(depth),
                         RowProbabilities(probabilities.begin(), probabilities.begin() + static_cast<std::ptrdiff_t>(depth)), 0);
  const Shape base = Shape::folner(depth, dim);
  std::vector<std::uint32_t> radix;
  double total = 1;
  for (std::size_t r = 0; r < depth; ++r) {
    for (std::size_t p = 0; p < base.size(); ++p) {
      radix.push_back(stack.size(r));
      total *= stack.size(r);
    }
  }
  if (total > static_cast<double>(cap)) throw std::length_error("bernoulli_measure: pattern count exceeds cap");
  std::map<Pattern, Rational> masses;
  Pattern p(radix.size(), 0);
  while (true) {
    Rational m = 1;
    for (std::size_t i = 0; i < p.size() && m != 0; ++i) m *= probabilities[i / base.size()][p[i]];
    // Patterns through a zero-probability symbol are left out of the sparse support.
    if (m != 0) masses.emplace(p, m);
    std::size_t i = p.size();
    bool done = true;
    while (i > 0) {
      --i;
      if (p[i] + 1u < radix[i]) {
        ++p[i];
        done = false;
        break;
      }
      p[i] = 0;
    }
    if (done) break;
  }
  return CylinderMeasure(stack, dim, depth, std::move(masses));
}

// ---------------------------------------------------------------------------
// Metrics

namespace {

void check_family(const BlockFamily& family, std::size_t dim, std::size_t depth_a, std::size_t depth_b) {
  if (family.empty()) throw std::invalid_argument("dist_k: empty family");
  if (family.shape().dim() != dim) throw std::invalid_argument("dist_k: family dimension mismatch");
  if (family.level() > depth_a || family.level() > depth_b) {
    throw std::invalid_argument("dist_k: family level exceeds measure depth");
  }
}

void check_ladder(const FamilyLadder& families, std::size_t depth) {
  if (depth == 0) throw std::invalid_argument("dist: truncation depth must be >= 1");
  if (families.depth() < depth) {
    throw std::invalid_argument("dist: missing family at level " + std::to_string(families.depth() + 1));
  }
}

}  // namespace

Rational dist_k(const CylinderMeasure& mu, const CylinderMeasure& nu, const BlockFamily& family) {
  check_family(family, mu.dim(), mu.depth(), nu.depth());
  if (mu.dim() != nu.dim()) throw std::invalid_argument("dist_k: dimension mismatch");
  const std::size_t k = family.level();
  Rational sum = 0;
  for (const auto& p : family.patterns()) sum += abs(mu.value(k, p) - nu.value(k, p));
  return sum / static_cast<unsigned long>(family.size());
}

Rational dist_k(const Block& b, const CylinderMeasure& nu, const BlockFamily& family) {
  check_family(family, nu.dim(), b.depth(), nu.depth());
  if (b.dim() != nu.dim()) throw std::invalid_argument("dist_k: dimension mismatch");
  const std::size_t k = family.level();
  const PatternTable table = PatternTable::level(b, k);
  Rational sum = 0;
  for (const auto& p : family.patterns()) sum += abs(table.freq(p) - nu.value(k, p));
  return sum / static_cast<unsigned long>(family.size());
}

Rational truncation_tail(std::size_t depth) { return pow2(-static_cast<int>(depth)); }

DistanceInterval dist(const CylinderMeasure& mu, const CylinderMeasure& nu, const FamilyLadder& families,
                      std::size_t depth) {
  check_ladder(families, depth);
  DistanceInterval out{0, truncation_tail(depth)};
  for (std::size_t k = 1; k <= depth; ++k) out.lower += pow2(-static_cast<int>(k)) * dist_k(mu, nu, families.level(k));
  return out;
}

DistanceInterval dist_block(const Block& b, const CylinderMeasure& nu, const FamilyLadder& families, std::size_t depth) {
  check_ladder(families, depth);
  if (b.depth() < depth) throw std::invalid_argument("dist_block: block shallower than truncation depth");
  DistanceInterval out{0, truncation_tail(depth)};
  for (std::size_t k = 1; k <= depth; ++k) out.lower += pow2(-static_cast<int>(k)) * dist_k(b, nu, families.level(k));
  return out;
}

std::size_t tail_depth(const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("tail_depth: eps must be positive");
  if (eps > 2) throw std::invalid_argument("tail_depth: eps must be at most 2");
  const Rational half = eps / 2;
  std::size_t j = 1;
  while (pow2(-static_cast<int>(j)) >= half) ++j;
  return j;
}

std::vector<Rational> ladder_values(const Block& x, const FamilyLadder& families, std::size_t depth) {
  check_ladder(families, depth);
  std::vector<Rational> out;
  for (std::size_t k = 1; k <= depth; ++k) {
    const PatternTable table = PatternTable::level(x, k);
    for (const auto& p : families.level(k).patterns()) out.push_back(table.freq(p));
  }
  return out;
}

std::vector<Rational> ladder_values(const CylinderMeasure& x, const FamilyLadder& families, std::size_t depth) {
  check_ladder(families, depth);
  std::vector<Rational> out;
  for (std::size_t k = 1; k <= depth; ++k) {
    for (const auto& p : families.level(k).patterns()) out.push_back(x.value(k, p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// ConvexTarget

ConvexTarget::ConvexTarget(std::vector<CylinderMeasure> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw std::invalid_argument("ConvexTarget: at least one vertex required");
  const auto& first = vertices_.front();
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const auto& v = vertices_[i];
    if (v.dim() != first.dim() || v.depth() != first.depth() || !(v.stack() == first.stack())) {
      throw std::invalid_argument("ConvexTarget: vertices must share dimension, depth and alphabet");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (vertices_[j] == v) throw std::invalid_argument("ConvexTarget: duplicate vertex");
    }
  }
}

}  // namespace facet
