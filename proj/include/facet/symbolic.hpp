#pragma once

// Array-form blocks over Z^d: a block assigns a symbol to every (point, row)
// of shape x [0, depth). Row r draws from {0, ..., sizes[r] - 1}.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "facet/group.hpp"
#include "facet/rational.hpp"

namespace facet {

using Symbol = std::uint16_t;
// Block entries laid out row by row; inside a row, in the shape's point order.
using Pattern = std::vector<Symbol>;

class AlphabetStack {
 public:
  AlphabetStack() = default;
  explicit AlphabetStack(std::vector<std::uint32_t> sizes);

  std::size_t depth() const { return sizes_.size(); }
  std::uint32_t size(std::size_t row) const { return sizes_.at(row); }
  const std::vector<std::uint32_t>& sizes() const { return sizes_; }
  AlphabetStack truncated(std::size_t depth) const;
  // True when the first `depth` rows agree.
  bool compatible(const AlphabetStack& other, std::size_t depth) const;

  friend bool operator==(const AlphabetStack&, const AlphabetStack&) = default;

 private:
  std::vector<std::uint32_t> sizes_;
};

class Block {
 public:
  Block() = default;
  Block(Shape shape, std::size_t depth, Pattern entries);
  static Block filled(Shape shape, std::size_t depth, Symbol symbol = 0);

  const Shape& shape() const { return shape_; }
  std::size_t depth() const { return depth_; }
  // Cardinality of the shape, not the number of entries.
  std::size_t size() const { return shape_.size(); }
  const Pattern& entries() const { return entries_; }
  std::size_t dim() const { return shape_.dim(); }

  Symbol at(std::size_t point, std::size_t row) const { return entries_[row * shape_.size() + point]; }
  Symbol& at(std::size_t point, std::size_t row) { return entries_[row * shape_.size() + point]; }
  // Throws std::out_of_range when g is outside the shape or row >= depth.
  Symbol at(const GroupPoint& g, std::size_t row) const;

  void validate(const AlphabetStack& stack) const;

  friend bool operator==(const Block&, const Block&) = default;

 private:
  Shape shape_;
  std::size_t depth_ = 0;
  Pattern entries_;
};

// Total order used for tie-breaks: shape first, then depth, then entries.
bool lexicographic_less(const Block& a, const Block& b);

class Corpus {
 public:
  Corpus(AlphabetStack stack, std::vector<Block> blocks);

  const AlphabetStack& stack() const { return stack_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return blocks_.empty(); }

 private:
  AlphabetStack stack_;
  std::vector<Block> blocks_;
  std::size_t dim_ = 0;
};

// Distinct patterns on F_k x [0, k) for a fixed level k, sorted lexicographically.
class BlockFamily {
 public:
  BlockFamily(std::size_t level, std::size_t dim, std::vector<Pattern> patterns);

  std::size_t level() const { return level_; }
  const Shape& shape() const { return shape_; }
  std::size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }
  const std::vector<Pattern>& patterns() const { return patterns_; }
  bool contains(const Pattern& p) const;
  Block block(std::size_t i) const { return Block(shape_, level_, patterns_.at(i)); }

  friend bool operator==(const BlockFamily& a, const BlockFamily& b) {
    return a.level_ == b.level_ && a.shape_ == b.shape_ && a.patterns_ == b.patterns_;
  }

 private:
  std::size_t level_;
  Shape shape_;
  std::vector<Pattern> patterns_;
};

// Families for levels 1..depth; level(k) is 1-based.
class FamilyLadder {
 public:
  FamilyLadder() = default;
  explicit FamilyLadder(std::vector<BlockFamily> levels);

  std::size_t depth() const { return levels_.size(); }
  std::size_t dim() const { return levels_.empty() ? 0 : levels_.front().shape().dim(); }
  const BlockFamily& level(std::size_t k) const;

 private:
  std::vector<BlockFamily> levels_;
};

// Positions (in host's point order) of the points of F + g, or nullopt when
// F + g is not contained in host.
std::optional<std::vector<std::size_t>> embedding_indices(const Shape& host, const Shape& f, const GroupPoint& g);
// Entries of b at the given positions for rows [0, depth).
Pattern extract(const Block& b, std::span<const std::size_t> positions, std::size_t depth);

// B restricted to E x [0, depth). Throws when E is not inside shape(B) or depth > depth(B).
Block restrict(const Block& b, const Shape& e, std::size_t depth);
// The block on F read at F + g (re-based to F), or nullopt when F + g leaves shape(B).
std::optional<Block> subblock_at(const Block& b, const Shape& f, const GroupPoint& g, std::size_t depth);
// Same entries on the translated shape.
Block translate(const Block& b, const GroupPoint& g);

// Distinct level-k blocks (on F_k x [0, k)) over every corpus block and
// admissible translate.
BlockFamily enumerate_family(const Corpus& corpus, std::size_t k);
FamilyLadder enumerate_ladder(const Corpus& corpus, std::size_t depth);

// Every level-k pattern over the stack that avoids all forbidden blocks (none
// of them occurs at any translate). Throws std::length_error when more than
// `cap` candidates would have to be generated.
BlockFamily enumerate_family_exhaustive(const AlphabetStack& stack, std::size_t dim, std::size_t k,
                                        const std::vector<Block>& forbidden = {}, std::size_t cap = 1'000'000);
FamilyLadder exhaustive_ladder(const AlphabetStack& stack, std::size_t dim, std::size_t depth,
                               const std::vector<Block>& forbidden = {}, std::size_t cap = 1'000'000);

// ---------------------------------------------------------------------------
// Seeded generators. The random stream is std::mt19937_64; symbol choice
// compares raw 64-bit draws against exact cumulative thresholds, so output is
// identical on every platform.

using RowProbabilities = std::vector<std::vector<Rational>>;

// Cumulative probabilities scaled by 2^64.
__extension__ typedef unsigned __int128 Threshold;

class BernoulliSampler {
 public:
  BernoulliSampler(AlphabetStack stack, const RowProbabilities& probabilities, std::uint64_t seed);

  const AlphabetStack& stack() const { return stack_; }
  // i.i.d. symbols per cell, rows outermost, cells in the window's point order.
  Block next(const Shape& window);

 private:
  AlphabetStack stack_;
  std::vector<std::vector<Threshold>> thresholds_;
  std::mt19937_64 rng_;
};

Block sample_bernoulli(const Shape& window, const AlphabetStack& stack, const RowProbabilities& probabilities,
                       std::uint64_t seed);

// Per row, a Markov chain along the last axis: a cell whose predecessor
// (g - e_last) lies in the window draws from transition[row][prev], other cells
// from initial[row].
struct MarkovRow {
  std::vector<Rational> initial;
  std::vector<std::vector<Rational>> transition;
};

Block sample_markov(const Shape& window, const AlphabetStack& stack, const std::vector<MarkovRow>& rows,
                    std::uint64_t seed);

}  // namespace facet
