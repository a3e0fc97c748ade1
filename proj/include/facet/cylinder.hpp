#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "facet/group.hpp"
#include "facet/rational.hpp"
#include "facet/symbolic.hpp"

namespace facet {

// A probability distribution over full patterns on F_J x [0, J), J = depth.
// Shallower cylinders (level i < J, patterns on F_i x [0, i)) are answered by
// marginal sums, all precomputed at construction; the object is immutable.
class CylinderMeasure {
 public:
  // Zero masses are dropped. Throws std::invalid_argument on negative mass,
  // a total different from 1, malformed patterns or symbols outside the stack.
  CylinderMeasure(AlphabetStack stack, std::size_t dim, std::size_t depth, std::map<Pattern, Rational> masses);

  const AlphabetStack& stack() const { return stack_; }
  std::size_t dim() const { return dim_; }
  std::size_t depth() const { return depth_; }
  const Shape& base() const { return base_; }
  const std::map<Pattern, Rational>& masses() const { return levels_.back(); }
  // Marginal distribution on level-i patterns, 1 <= level <= depth.
  const std::map<Pattern, Rational>& marginal(std::size_t level) const;

  Rational value(std::size_t level, const Pattern& pattern) const;
  // D must live on F_i x [0, i) for some i <= depth.
  Rational value(const Block& d) const;

  friend bool operator==(const CylinderMeasure& a, const CylinderMeasure& b) {
    return a.dim_ == b.dim_ && a.depth_ == b.depth_ && a.stack_ == b.stack_ && a.masses() == b.masses();
  }

 private:
  AlphabetStack stack_;
  std::size_t dim_;
  std::size_t depth_;
  Shape base_;
  std::vector<std::map<Pattern, Rational>> levels_;
};

}  // namespace facet
