#include "facet/quasitiling.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace facet {

Quasitiling::Quasitiling(Shape window, std::vector<Shape> shapes, std::vector<std::vector<GroupPoint>> centers)
    : window_(std::move(window)), shapes_(std::move(shapes)), centers_(std::move(centers)) {
  if (centers_.size() != shapes_.size()) throw std::invalid_argument("Quasitiling: one center list per shape required");
  std::map<std::vector<GroupPoint>, std::size_t> seen;
  for (std::size_t i = 0; i < shapes_.size(); ++i) {
    std::sort(centers_[i].begin(), centers_[i].end());
    centers_[i].erase(std::unique(centers_[i].begin(), centers_[i].end()), centers_[i].end());
    for (const auto& c : centers_[i]) {
      if (!window_.contains_translate(shapes_[i], c)) {
        throw std::invalid_argument("Quasitiling: tile of shape " + std::to_string(i) + " escapes the window");
      }
      const Shape cells = translate(shapes_[i], c);
      if (!seen.emplace(cells.points(), i).second) {
        throw std::invalid_argument("Quasitiling: a tile has two representations S_i + c");
      }
    }
  }
}

std::size_t Quasitiling::tile_count() const {
  std::size_t n = 0;
  for (const auto& c : centers_) n += c.size();
  return n;
}

std::vector<Tile> Quasitiling::tiles() const {
  std::vector<Tile> out;
  for (std::size_t i = 0; i < shapes_.size(); ++i) {
    for (const auto& c : centers_[i]) out.push_back({i, c, translate(shapes_[i], c)});
  }
  std::sort(out.begin(), out.end(), [](const Tile& a, const Tile& b) {
    return a.center < b.center || (a.center == b.center && a.shape < b.shape);
  });
  return out;
}

TilingReport verify(const Quasitiling& t, const Shape& folner) {
  TilingReport r;
  const Shape& window = t.window();
  std::vector<bool> hit(window.size(), false);
  std::size_t covered = 0;
  for (const auto& tile : t.tiles()) {
    ++r.tiles;
    for (const auto& g : tile.cells) {
      const std::size_t idx = *window.index_of(g);
      if (hit[idx]) {
        r.disjoint = false;
      } else {
        hit[idx] = true;
        ++covered;
      }
    }
  }
  r.covered = window.empty() ? Rational(0) : ratio(covered, window.size());
  for (const auto& s : t.shapes()) r.invariance_ratios.push_back(s.empty() ? Rational(0) : invariance_ratio(s, folner));
  return r;
}

bool congruent(const Quasitiling& t, const Quasitiling& prev) {
  if (t.window() != prev.window()) throw std::invalid_argument("congruent: tilings live on different windows");
  const Shape& window = t.window();
  // Tiles of t through each window cell.
  std::vector<std::vector<std::size_t>> through(window.size());
  const auto coarse = t.tiles();
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    for (const auto& g : coarse[i].cells) through[*window.index_of(g)].push_back(i);
  }
  for (const auto& fine : prev.tiles()) {
    std::vector<std::size_t> meets;
    for (const auto& g : fine.cells) {
      const auto& list = through[*window.index_of(g)];
      meets.insert(meets.end(), list.begin(), list.end());
    }
    std::sort(meets.begin(), meets.end());
    meets.erase(std::unique(meets.begin(), meets.end()), meets.end());
    for (std::size_t i : meets) {
      if (!fine.cells.is_subset_of(coarse[i].cells)) return false;
    }
  }
  return true;
}

GreedyTiling greedy_tile(const Shape& window, const std::vector<Shape>& shapes, const Rational& eps) {
  if (shapes.empty()) throw std::invalid_argument("greedy_tile: no shapes");
  std::vector<std::size_t> order(shapes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return shapes[a].size() > shapes[b].size(); });

  std::vector<bool> used(window.size(), false);
  std::vector<std::vector<GroupPoint>> centers(shapes.size());
  std::size_t covered = 0;
  std::vector<std::size_t> cells;
  for (std::size_t i : order) {
    const Shape& s = shapes[i];
    if (s.empty() || window.empty()) continue;
    if (s.dim() != window.dim()) throw std::invalid_argument("greedy_tile: shape dimension mismatch");
    // Candidate centers: the box of translates keeping the shape's bounding box inside the window's.
    GroupPoint lo = window.lower() - s.lower();
    GroupPoint hi = window.upper() - s.upper();
    bool empty_range = false;
    for (std::size_t a = 0; a < window.dim(); ++a) empty_range = empty_range || hi[a] < lo[a];
    if (empty_range) continue;
    GroupPoint c = lo;
    while (true) {
      cells.clear();
      bool fits = true;
      for (const auto& p : s) {
        const auto idx = window.index_of(p + c);
        if (!idx || used[*idx]) {
          fits = false;
          break;
        }
        cells.push_back(*idx);
      }
      if (fits) {
        for (std::size_t idx : cells) used[idx] = true;
        covered += cells.size();
        centers[i].push_back(c);
      }
      // Advance the odometer.
      std::size_t axis = window.dim();
      bool done = true;
      while (axis > 0) {
        --axis;
        if (c[axis] < hi[axis]) {
          ++c[axis];
          done = false;
          break;
        }
        c[axis] = lo[axis];
      }
      if (done) break;
    }
  }
  const Rational covering = window.empty() ? Rational(0) : ratio(covered, window.size());
  return {Quasitiling(window, shapes, std::move(centers)), covering, covering >= 1 - eps};
}

Block encode_symbolic(const Quasitiling& t) {
  const Shape& window = t.window();
  Block row = Block::filled(window, 1, 0);
  for (std::size_t i = 0; i < t.shapes().size(); ++i) {
    for (const auto& c : t.centers(i)) {
      const auto idx = window.index_of(c);
      if (!idx) throw std::invalid_argument("encode_symbolic: center outside the window");
      if (row.at(*idx, 0) != 0) throw std::invalid_argument("encode_symbolic: center shared by two shapes");
      row.at(*idx, 0) = static_cast<Symbol>(i + 1);
    }
  }
  return row;
}

Quasitiling decode_symbolic(const Block& row, const std::vector<Shape>& shapes) {
  if (row.depth() < 1) throw std::invalid_argument("decode_symbolic: empty block");
  std::vector<std::vector<GroupPoint>> centers(shapes.size());
  for (std::size_t p = 0; p < row.size(); ++p) {
    const Symbol v = row.at(p, 0);
    if (v == 0) continue;
    if (v > shapes.size()) throw std::invalid_argument("decode_symbolic: symbol names an unknown shape");
    centers[v - 1].push_back(row.shape()[p]);
  }
  return Quasitiling(row.shape(), shapes, std::move(centers));
}

}  // namespace facet
