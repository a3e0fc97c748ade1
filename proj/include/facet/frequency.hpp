#pragma once

// Embedding and occurrence counts inside a block, and the frequency map
// fr_B(C) = N_B(C) / N_F(F_j) with fr_B(C) = 0 when F_j does not embed.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "facet/cylinder.hpp"
#include "facet/group.hpp"
#include "facet/rational.hpp"
#include "facet/symbolic.hpp"

namespace facet {

// |{g in F : F_j + g subset of F}|.
std::size_t count_embeddings(const Shape& f, const Shape& fj);
// Translates g in shape(B) with F_j + g inside shape(B) where B reads C,
// F_j = shape(C), rows [0, depth(C)).
std::size_t count_occurrences(const Block& b, const Block& c);
Rational freq(const Block& b, const Block& c);

// Counts of every pattern of (shape, depth) inside a block, from a single scan
// over the admissible translates.
class PatternTable {
 public:
  PatternTable(const Block& b, const Shape& f, std::size_t depth);
  // Patterns on F_k x [0, k).
  static PatternTable level(const Block& b, std::size_t k);

  const Shape& shape() const { return shape_; }
  std::size_t depth() const { return depth_; }
  std::size_t embeddings() const { return embeddings_; }
  std::size_t count(const Pattern& p) const;
  Rational freq(const Pattern& p) const;
  const std::map<Pattern, std::size_t>& counts() const { return counts_; }

 private:
  Shape shape_;
  std::size_t depth_;
  std::size_t embeddings_ = 0;
  std::map<Pattern, std::size_t> counts_;
};

// Where find_typical_block draws candidates: every admissible sub-block of the
// corpus blocks first (corpus order, then translate order), then fresh samples.
struct CandidateSource {
  const Corpus* corpus = nullptr;
  std::optional<BernoulliSampler> sampler;
};

struct TypicalSearch {
  std::optional<Block> block;
  std::size_t candidates_tried = 0;
  // Largest |fr_C(D) - target(D)| of the returned block (or of the best
  // rejected candidate when none qualified).
  Rational worst_deviation;
};

// Largest |fr_C(D) - target(D)| over every pattern D on F_i x [0, i), i = 1..j.
Rational typicality_deviation(const Block& c, const CylinderMeasure& target, std::size_t j);

// First candidate C on F x [0, j) with |fr_C(D) - target(D)| < eps for all D
// on F_i x [0, i), i <= j. Budget exhaustion is reported by an empty block.
TypicalSearch find_typical_block(const CylinderMeasure& target, const Shape& f, std::size_t j, const Rational& eps,
                                 CandidateSource source, std::size_t budget);

}  // namespace facet
