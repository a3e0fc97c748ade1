#pragma once

// The group Z^d: points, finite shapes, Folner boxes, invariance and Banach
// densities. All counts and ratios are exact.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "facet/rational.hpp"

namespace facet {

inline constexpr std::size_t kMaxDim = 4;
using Coord = std::int64_t;

class GroupPoint {
 public:
  GroupPoint() = default;
  GroupPoint(std::initializer_list<Coord> coords);
  explicit GroupPoint(std::span<const Coord> coords);

  static GroupPoint identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  Coord operator[](std::size_t axis) const { return coords_[axis]; }
  Coord& operator[](std::size_t axis) { return coords_[axis]; }
  std::span<const Coord> coords() const { return {coords_.data(), dim_}; }
  bool is_identity() const;

  GroupPoint operator+(const GroupPoint& other) const;
  GroupPoint operator-(const GroupPoint& other) const;
  GroupPoint operator-() const;

  friend auto operator<=>(const GroupPoint&, const GroupPoint&) = default;

 private:
  std::size_t dim_ = 0;
  std::array<Coord, kMaxDim> coords_{};
};

struct GroupPointHash {
  std::size_t operator()(const GroupPoint& g) const noexcept;
};

// A finite subset of Z^d. Points are kept sorted lexicographically and
// deduplicated; a Shape never changes after construction.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::size_t dim);
  Shape(std::size_t dim, std::vector<GroupPoint> points);

  // Inclusive box lo..hi.
  static Shape box(const GroupPoint& lo, const GroupPoint& hi);
  // The symmetric box [-n, n]^dim.
  static Shape folner(std::size_t n, std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<GroupPoint>& points() const { return points_; }
  const GroupPoint& operator[](std::size_t i) const { return points_[i]; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  std::optional<std::size_t> index_of(const GroupPoint& g) const;
  bool contains(const GroupPoint& g) const { return index_of(g).has_value(); }
  // F + g is a subset of this shape.
  bool contains_translate(const Shape& f, const GroupPoint& g) const;
  bool is_subset_of(const Shape& other) const;
  bool is_box() const;

  // Bounding box corners; both undefined (identity) for an empty shape.
  const GroupPoint& lower() const { return lo_; }
  const GroupPoint& upper() const { return hi_; }

  friend bool operator==(const Shape& a, const Shape& b) {
    return a.dim_ == b.dim_ && a.points_ == b.points_;
  }

 private:
  void build_index();

  std::size_t dim_ = 0;
  std::vector<GroupPoint> points_;
  GroupPoint lo_;
  GroupPoint hi_;
  // Dense lookup over the bounding box when the shape fills enough of it.
  std::vector<std::int32_t> dense_;
  std::array<Coord, kMaxDim> stride_{};
};

// Which side the group element multiplies from. Z^d is abelian so both sides
// give the same set; the parameter documents intent at call sites.
enum class Side { left, right };

Shape translate(const Shape& s, const GroupPoint& g, Side side = Side::left);
Shape inverse(const Shape& s);
// AF = {a + f}.
Shape product(const Shape& a, const Shape& f);
Shape unite(const Shape& a, const Shape& b);
Shape intersect(const Shape& a, const Shape& b);
Shape subtract(const Shape& a, const Shape& b);
std::size_t symmetric_difference_size(const Shape& a, const Shape& b);

// |F symdiff AF| / |F|. Throws std::invalid_argument on empty F.
Rational invariance_ratio(const Shape& f, const Shape& a);
// F is (A, delta)-invariant: invariance_ratio(F, A) < delta.
bool is_invariant(const Shape& f, const Shape& a, const Rational& delta);
// |AF| < (1 + delta)|F|; only meaningful (and only accepted) when e is in A.
bool is_invariant_simplified(const Shape& f, const Shape& a, const Rational& delta);
// {f in F : A + f leaves F}.
Shape boundary_part(const Shape& f, const Shape& a);

struct FolnerBox {
  std::size_t index = 0;
  std::size_t dim = 1;

  Shape shape() const { return Shape::folner(index, dim); }
};

// |union_{k<=n} F_k^{-1} F_{n+1}| <= C |F_{n+1}| for every n in the list.
bool is_tempered_prefix(std::span<const FolnerBox> boxes, const Rational& c);

// A subset of Z^d invariant under translation by each period along its axis.
class PeriodicSubset {
 public:
  // Residues are reduced into the fundamental cell [0, p_1) x ... x [0, p_d).
  PeriodicSubset(std::vector<Coord> periods, const std::vector<GroupPoint>& residues);

  std::size_t dim() const { return periods_.size(); }
  const std::vector<Coord>& periods() const { return periods_; }
  bool contains(const GroupPoint& g) const;
  Rational density() const;
  // Position of g inside the fundamental cell, row-major.
  std::size_t cell_index(const GroupPoint& g) const;
  std::size_t cell_size() const { return member_.size(); }

 private:
  std::vector<Coord> periods_;
  std::vector<bool> member_;
  std::size_t count_ = 0;
};

struct DensityEstimate {
  Rational lower;
  Rational upper;
  // True when the value equals the inf/sup over all of Z^d.
  bool certified = false;
};

// Min and max over g in the probe window of |S cap (F + g)| / |F|. Exact when
// the probe window meets every residue class of the period lattice.
DensityEstimate banach_density(const PeriodicSubset& s, const Shape& f, const Shape& probe);
// Same scan for a finite set S; never certified.
DensityEstimate banach_density(const Shape& s, const Shape& f, const Shape& probe);

}  // namespace facet
