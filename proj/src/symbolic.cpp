#include "facet/symbolic.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace facet {

// ---------------------------------------------------------------------------
// AlphabetStack

AlphabetStack::AlphabetStack(std::vector<std::uint32_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw std::invalid_argument("AlphabetStack: at least one row required");
  for (auto s : sizes_) {
    if (s == 0 || s > std::numeric_limits<Symbol>::max() + 1u) {
      throw std::invalid_argument("AlphabetStack: row size " + std::to_string(s) + " out of range");
    }
  }
}

AlphabetStack AlphabetStack::truncated(std::size_t depth) const {
  if (depth == 0 || depth > sizes_.size()) throw std::invalid_argument("AlphabetStack::truncated: bad depth");
  return AlphabetStack(std::vector<std::uint32_t>(sizes_.begin(), sizes_.begin() + static_cast<std::ptrdiff_t>(depth)));
}

bool AlphabetStack::compatible(const AlphabetStack& other, std::size_t depth) const {
  if (depth > sizes_.size() || depth > other.sizes_.size()) return false;
  return std::equal(sizes_.begin(), sizes_.begin() + static_cast<std::ptrdiff_t>(depth), other.sizes_.begin());
}

// ---------------------------------------------------------------------------
// Block

Block::Block(Shape shape, std::size_t depth, Pattern entries)
    : shape_(std::move(shape)), depth_(depth), entries_(std::move(entries)) {
  if (entries_.size() != shape_.size() * depth_) {
    throw std::invalid_argument("Block: expected " + std::to_string(shape_.size() * depth_) + " entries, got " +
                                std::to_string(entries_.size()));
  }
}

Block Block::filled(Shape shape, std::size_t depth, Symbol symbol) {
  const std::size_t n = shape.size() * depth;
  return Block(std::move(shape), depth, Pattern(n, symbol));
}

Symbol Block::at(const GroupPoint& g, std::size_t row) const {
  const auto idx = shape_.index_of(g);
  if (!idx || row >= depth_) throw std::out_of_range("Block::at: cell outside the block");
  return at(*idx, row);
}

void Block::validate(const AlphabetStack& stack) const {
  if (depth_ > stack.depth()) {
    throw std::invalid_argument("Block: depth " + std::to_string(depth_) + " exceeds alphabet stack depth " +
                                std::to_string(stack.depth()));
  }
  for (std::size_t r = 0; r < depth_; ++r) {
    const auto limit = stack.size(r);
    for (std::size_t p = 0; p < shape_.size(); ++p) {
      if (at(p, r) >= limit) {
        throw std::invalid_argument("Block: symbol " + std::to_string(at(p, r)) + " in row " + std::to_string(r) +
                                    " outside alphabet of size " + std::to_string(limit));
      }
    }
  }
}

bool lexicographic_less(const Block& a, const Block& b) {
  if (a.shape() != b.shape()) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a.shape().points() < b.shape().points();
  }
  if (a.depth() != b.depth()) return a.depth() < b.depth();
  return a.entries() < b.entries();
}

// ---------------------------------------------------------------------------
// Corpus, families

Corpus::Corpus(AlphabetStack stack, std::vector<Block> blocks) : stack_(std::move(stack)), blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (dim_ == 0) dim_ = b.dim();
    if (b.dim() != dim_) throw std::invalid_argument("Corpus: blocks of different dimensions");
    b.validate(stack_);
  }
}

BlockFamily::BlockFamily(std::size_t level, std::size_t dim, std::vector<Pattern> patterns)
    : level_(level), shape_(Shape::folner(level, dim)), patterns_(std::move(patterns)) {
  if (level == 0) throw std::invalid_argument("BlockFamily: level must be >= 1");
  const std::size_t len = shape_.size() * level;
  for (const auto& p : patterns_) {
    if (p.size() != len) throw std::invalid_argument("BlockFamily: pattern of wrong length");
  }
  std::sort(patterns_.begin(), patterns_.end());
  patterns_.erase(std::unique(patterns_.begin(), patterns_.end()), patterns_.end());
}

bool BlockFamily::contains(const Pattern& p) const {
  return std::binary_search(patterns_.begin(), patterns_.end(), p);
}

FamilyLadder::FamilyLadder(std::vector<BlockFamily> levels) : levels_(std::move(levels)) {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i].level() != i + 1) throw std::invalid_argument("FamilyLadder: levels must be 1, 2, ...");
    if (levels_[i].shape().dim() != levels_[0].shape().dim()) {
      throw std::invalid_argument("FamilyLadder: dimension mismatch between levels");
    }
  }
}

const BlockFamily& FamilyLadder::level(std::size_t k) const {
  if (k == 0 || k > levels_.size()) {
    throw std::out_of_range("FamilyLadder: no family at level " + std::to_string(k));
  }
  return levels_[k - 1];
}

// ---------------------------------------------------------------------------
// Restriction and sub-blocks

std::optional<std::vector<std::size_t>> embedding_indices(const Shape& host, const Shape& f, const GroupPoint& g) {
  if (!host.contains_translate(f, g)) return std::nullopt;
  std::vector<std::size_t> idx;
  idx.reserve(f.size());
  for (const auto& p : f) idx.push_back(*host.index_of(p + g));
  return idx;
}

Pattern extract(const Block& b, std::span<const std::size_t> positions, std::size_t depth) {
  Pattern out;
  out.reserve(positions.size() * depth);
  for (std::size_t r = 0; r < depth; ++r) {
    for (std::size_t pos : positions) out.push_back(b.at(pos, r));
  }
  return out;
}

Block restrict(const Block& b, const Shape& e, std::size_t depth) {
  if (depth > b.depth()) throw std::invalid_argument("restrict: depth exceeds block depth");
  if (e.empty()) return Block(e, depth, {});
  if (e.dim() != b.dim()) throw std::invalid_argument("restrict: dimension mismatch");
  auto idx = embedding_indices(b.shape(), e, GroupPoint::identity(e.dim()));
  if (!idx) throw std::invalid_argument("restrict: E is not a subset of the block's shape");
  return Block(e, depth, extract(b, *idx, depth));
}

std::optional<Block> subblock_at(const Block& b, const Shape& f, const GroupPoint& g, std::size_t depth) {
  if (depth > b.depth()) return std::nullopt;
  auto idx = embedding_indices(b.shape(), f, g);
  if (!idx) return std::nullopt;
  return Block(f, depth, extract(b, *idx, depth));
}

Block translate(const Block& b, const GroupPoint& g) {
  // Translation preserves lexicographic point order, so entries carry over unchanged.
  return Block(translate(b.shape(), g), b.depth(), b.entries());
}

BlockFamily enumerate_family(const Corpus& corpus, std::size_t k) {
  if (corpus.empty()) throw std::invalid_argument("enumerate_family: empty corpus");
  if (k == 0 || k > corpus.stack().depth()) throw std::invalid_argument("enumerate_family: level outside stack");
  const Shape fk = Shape::folner(k, corpus.dim());
  std::set<Pattern> seen;
  for (const auto& b : corpus.blocks()) {
    if (b.depth() < k) continue;
    for (const auto& g : b.shape()) {
      auto idx = embedding_indices(b.shape(), fk, g);
      if (idx) seen.insert(extract(b, *idx, k));
    }
  }
  return BlockFamily(k, corpus.dim(), std::vector<Pattern>(seen.begin(), seen.end()));
}

FamilyLadder enumerate_ladder(const Corpus& corpus, std::size_t depth) {
  std::vector<BlockFamily> levels;
  for (std::size_t k = 1; k <= depth; ++k) levels.push_back(enumerate_family(corpus, k));
  return FamilyLadder(std::move(levels));
}

namespace {

bool contains_forbidden(const Block& candidate, const std::vector<Block>& forbidden) {
  for (const auto& f : forbidden) {
    if (f.depth() > candidate.depth()) continue;
    // Anchor the forbidden block's lowest point on every candidate cell.
    const GroupPoint anchor = f.shape().empty() ? GroupPoint::identity(candidate.dim()) : f.shape()[0];
    for (const auto& c : candidate.shape()) {
      const GroupPoint g = c - anchor;
      auto sub = subblock_at(candidate, f.shape(), g, f.depth());
      if (sub && sub->entries() == f.entries()) return true;
    }
  }
  return false;
}

}  // namespace

BlockFamily enumerate_family_exhaustive(const AlphabetStack& stack, std::size_t dim, std::size_t k,
                                        const std::vector<Block>& forbidden, std::size_t cap) {
  if (k == 0 || k > stack.depth()) throw std::invalid_argument("enumerate_family_exhaustive: level outside stack");
  const Shape fk = Shape::folner(k, dim);
  // Radix per entry in pattern layout.
  std::vector<std::uint32_t> radix;
  double total = 1;
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t p = 0; p < fk.size(); ++p) {
      radix.push_back(stack.size(r));
      total *= stack.size(r);
    }
  }
  if (total > static_cast<double>(cap)) {
    throw std::length_error("enumerate_family_exhaustive: " + std::to_string(static_cast<long double>(total)) +
                            " candidates exceed the cap of " + std::to_string(cap));
  }
  std::vector<Pattern> out;
  Pattern p(radix.size(), 0);
  while (true) {
    Block candidate(fk, k, p);
    if (forbidden.empty() || !contains_forbidden(candidate, forbidden)) out.push_back(p);
    std::size_t i = radix.size();
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
  return BlockFamily(k, dim, std::move(out));
}

FamilyLadder exhaustive_ladder(const AlphabetStack& stack, std::size_t dim, std::size_t depth,
                               const std::vector<Block>& forbidden, std::size_t cap) {
  std::vector<BlockFamily> levels;
  for (std::size_t k = 1; k <= depth; ++k) levels.push_back(enumerate_family_exhaustive(stack, dim, k, forbidden, cap));
  return FamilyLadder(std::move(levels));
}

}  // namespace facet
