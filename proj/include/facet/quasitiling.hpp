#pragma once

// Static quasitilings of a finite window: tiles S_i + c for shapes S_i and
// centers c in C_i, each tile with a unique representation.

#include <cstddef>
#include <vector>

#include "facet/group.hpp"
#include "facet/rational.hpp"
#include "facet/symbolic.hpp"

namespace facet {

struct Tile {
  std::size_t shape = 0;
  GroupPoint center;
  Shape cells;
};

class Quasitiling {
 public:
  // Throws std::invalid_argument if a tile leaves the window or two
  // (shape, center) pairs produce the same tile.
  Quasitiling(Shape window, std::vector<Shape> shapes, std::vector<std::vector<GroupPoint>> centers);

  const Shape& window() const { return window_; }
  const std::vector<Shape>& shapes() const { return shapes_; }
  const std::vector<GroupPoint>& centers(std::size_t shape) const { return centers_.at(shape); }
  const std::vector<std::vector<GroupPoint>>& all_centers() const { return centers_; }
  std::size_t tile_count() const;
  // Ordered by center, then shape index.
  std::vector<Tile> tiles() const;

 private:
  Shape window_;
  std::vector<Shape> shapes_;
  std::vector<std::vector<GroupPoint>> centers_;
};

struct TilingReport {
  bool disjoint = true;
  std::size_t tiles = 0;
  // |union of tiles| / |window|.
  Rational covered;
  // invariance_ratio(S_i, F) per shape.
  std::vector<Rational> invariance_ratios;
};

TilingReport verify(const Quasitiling& t, const Shape& folner);

// Every tile of t either contains or misses every tile of prev. Throws when
// the windows differ.
bool congruent(const Quasitiling& t, const Quasitiling& prev);

struct GreedyTiling {
  Quasitiling tiling;
  Rational covering;
  // covering >= 1 - eps
  bool reached_target = false;
};

// Largest shape first (stable on ties); for each shape, centers are tried in
// lexicographic order and kept whenever the tile fits inside the window
// without touching an earlier tile.
GreedyTiling greedy_tile(const Shape& window, const std::vector<Shape>& shapes, const Rational& eps);

// One-row block over the window: i + 1 at the centers of shape i, 0 elsewhere.
// Throws if a center lies outside the window or is shared by two shapes.
Block encode_symbolic(const Quasitiling& t);
Quasitiling decode_symbolic(const Block& row, const std::vector<Shape>& shapes);

}  // namespace facet
