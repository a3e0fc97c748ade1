#include "facet/group.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace facet {

namespace {

void check_dim(std::size_t dim) {
  if (dim == 0 || dim > kMaxDim) {
    throw std::invalid_argument("dimension must be in 1.." + std::to_string(kMaxDim) + ", got " +
                                std::to_string(dim));
  }
}

void require_same_dim(const Shape& a, const Shape& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()) + ")");
  }
}

Coord floor_mod(Coord value, Coord period) {
  Coord r = value % period;
  return r < 0 ? r + period : r;
}

}  // namespace

GroupPoint::GroupPoint(std::initializer_list<Coord> coords)
    : GroupPoint(std::span<const Coord>(coords.begin(), coords.size())) {}

GroupPoint::GroupPoint(std::span<const Coord> coords) : dim_(coords.size()) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), coords_.begin());
}

GroupPoint GroupPoint::identity(std::size_t dim) {
  check_dim(dim);
  GroupPoint g;
  g.dim_ = dim;
  return g;
}

bool GroupPoint::is_identity() const {
  return std::all_of(coords_.begin(), coords_.begin() + static_cast<std::ptrdiff_t>(dim_),
                     [](Coord c) { return c == 0; });
}

GroupPoint GroupPoint::operator+(const GroupPoint& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("GroupPoint +: dimension mismatch");
  GroupPoint r = *this;
  for (std::size_t i = 0; i < dim_; ++i) r.coords_[i] += other.coords_[i];
  return r;
}

GroupPoint GroupPoint::operator-(const GroupPoint& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("GroupPoint -: dimension mismatch");
  GroupPoint r = *this;
  for (std::size_t i = 0; i < dim_; ++i) r.coords_[i] -= other.coords_[i];
  return r;
}

GroupPoint GroupPoint::operator-() const {
  GroupPoint r = *this;
  for (std::size_t i = 0; i < dim_; ++i) r.coords_[i] = -r.coords_[i];
  return r;
}

std::size_t GroupPointHash::operator()(const GroupPoint& g) const noexcept {
  std::size_t h = 1469598103934665603ull ^ g.dim();
  for (Coord c : g.coords()) {
    h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Shape

Shape::Shape(std::size_t dim) : dim_(dim) { check_dim(dim); }

Shape::Shape(std::size_t dim, std::vector<GroupPoint> points) : dim_(dim), points_(std::move(points)) {
  check_dim(dim);
  for (const auto& p : points_) {
    if (p.dim() != dim) throw std::invalid_argument("Shape: point of dimension " + std::to_string(p.dim()) +
                                                    " in a shape of dimension " + std::to_string(dim));
  }
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  build_index();
}

Shape Shape::box(const GroupPoint& lo, const GroupPoint& hi) {
  if (lo.dim() != hi.dim()) throw std::invalid_argument("Shape::box: dimension mismatch");
  const std::size_t d = lo.dim();
  for (std::size_t i = 0; i < d; ++i) {
    if (hi[i] < lo[i]) return Shape(d);
  }
  std::vector<GroupPoint> pts;
  GroupPoint g = lo;
  // Odometer over the box in lexicographic order (last axis fastest).
  while (true) {
    pts.push_back(g);
    std::size_t axis = d;
    while (axis > 0) {
      --axis;
      if (g[axis] < hi[axis]) {
        ++g[axis];
        break;
      }
      g[axis] = lo[axis];
      if (axis == 0) return Shape(d, std::move(pts));
    }
  }
}

Shape Shape::folner(std::size_t n, std::size_t dim) {
  check_dim(dim);
  GroupPoint lo = GroupPoint::identity(dim);
  GroupPoint hi = GroupPoint::identity(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    lo[i] = -static_cast<Coord>(n);
    hi[i] = static_cast<Coord>(n);
  }
  return box(lo, hi);
}

void Shape::build_index() {
  dense_.clear();
  if (points_.empty()) {
    lo_ = hi_ = GroupPoint::identity(dim_);
    return;
  }
  lo_ = hi_ = points_.front();
  for (const auto& p : points_) {
    for (std::size_t i = 0; i < dim_; ++i) {
      lo_[i] = std::min(lo_[i], p[i]);
      hi_[i] = std::max(hi_[i], p[i]);
    }
  }
  // Row-major strides over the bounding box; dense only if the box is not
  // much larger than the shape itself.
  Coord volume = 1;
  for (std::size_t i = dim_; i-- > 0;) {
    stride_[i] = volume;
    const Coord extent = hi_[i] - lo_[i] + 1;
    if (volume > (Coord{1} << 40) / extent) return;
    volume *= extent;
  }
  if (volume > 4 * static_cast<Coord>(points_.size()) + 64 || volume > (Coord{1} << 26)) return;
  dense_.assign(static_cast<std::size_t>(volume), -1);
  for (std::size_t idx = 0; idx < points_.size(); ++idx) {
    Coord off = 0;
    for (std::size_t i = 0; i < dim_; ++i) off += (points_[idx][i] - lo_[i]) * stride_[i];
    dense_[static_cast<std::size_t>(off)] = static_cast<std::int32_t>(idx);
  }
}

std::optional<std::size_t> Shape::index_of(const GroupPoint& g) const {
  if (g.dim() != dim_ || points_.empty()) return std::nullopt;
  if (!dense_.empty()) {
    Coord off = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (g[i] < lo_[i] || g[i] > hi_[i]) return std::nullopt;
      off += (g[i] - lo_[i]) * stride_[i];
    }
    const std::int32_t idx = dense_[static_cast<std::size_t>(off)];
    if (idx < 0) return std::nullopt;
    return static_cast<std::size_t>(idx);
  }
  auto it = std::lower_bound(points_.begin(), points_.end(), g);
  if (it == points_.end() || *it != g) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin());
}

bool Shape::contains_translate(const Shape& f, const GroupPoint& g) const {
  if (f.dim_ != dim_ && !f.empty()) return false;
  if (f.size() > size()) return false;
  if (f.empty()) return true;
  // Bounding-box rejection first.
  for (std::size_t i = 0; i < dim_; ++i) {
    if (f.lo_[i] + g[i] < lo_[i] || f.hi_[i] + g[i] > hi_[i]) return false;
  }
  for (const auto& p : f.points_) {
    if (!contains(p + g)) return false;
  }
  return true;
}

bool Shape::is_subset_of(const Shape& other) const {
  if (empty()) return true;
  if (dim_ != other.dim_) return false;
  return std::includes(other.points_.begin(), other.points_.end(), points_.begin(), points_.end());
}

bool Shape::is_box() const {
  if (points_.empty()) return true;
  Coord volume = 1;
  for (std::size_t i = 0; i < dim_; ++i) volume *= hi_[i] - lo_[i] + 1;
  return volume == static_cast<Coord>(points_.size());
}

// ---------------------------------------------------------------------------
// Shape algebra

Shape translate(const Shape& s, const GroupPoint& g, Side) {
  if (s.dim() != g.dim()) throw std::invalid_argument("translate: dimension mismatch");
  std::vector<GroupPoint> pts;
  pts.reserve(s.size());
  for (const auto& p : s) pts.push_back(p + g);
  return Shape(s.dim(), std::move(pts));
}

Shape inverse(const Shape& s) {
  std::vector<GroupPoint> pts;
  pts.reserve(s.size());
  for (const auto& p : s) pts.push_back(-p);
  return Shape(s.dim(), std::move(pts));
}

Shape product(const Shape& a, const Shape& f) {
  require_same_dim(a, f, "product");
  std::vector<GroupPoint> pts;
  pts.reserve(a.size() * f.size());
  for (const auto& x : a) {
    for (const auto& y : f) pts.push_back(x + y);
  }
  return Shape(a.dim(), std::move(pts));
}

Shape unite(const Shape& a, const Shape& b) {
  require_same_dim(a, b, "unite");
  std::vector<GroupPoint> pts;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(pts));
  return Shape(a.dim(), std::move(pts));
}

Shape intersect(const Shape& a, const Shape& b) {
  require_same_dim(a, b, "intersect");
  std::vector<GroupPoint> pts;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(pts));
  return Shape(a.dim(), std::move(pts));
}

Shape subtract(const Shape& a, const Shape& b) {
  require_same_dim(a, b, "subtract");
  std::vector<GroupPoint> pts;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(pts));
  return Shape(a.dim(), std::move(pts));
}

std::size_t symmetric_difference_size(const Shape& a, const Shape& b) {
  require_same_dim(a, b, "symmetric_difference_size");
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return a.size() + b.size() - 2 * common;
}

Rational invariance_ratio(const Shape& f, const Shape& a) {
  require_same_dim(f, a, "invariance_ratio");
  if (f.empty()) throw std::invalid_argument("invariance_ratio: empty F");
  const Shape af = product(a, f);
  return ratio(symmetric_difference_size(f, af), f.size());
}

bool is_invariant(const Shape& f, const Shape& a, const Rational& delta) {
  return invariance_ratio(f, a) < delta;
}

bool is_invariant_simplified(const Shape& f, const Shape& a, const Rational& delta) {
  require_same_dim(f, a, "is_invariant_simplified");
  if (!a.contains(GroupPoint::identity(a.dim()))) {
    throw std::invalid_argument("is_invariant_simplified: A must contain the identity");
  }
  const Shape af = product(a, f);
  return Rational(static_cast<unsigned long>(af.size())) < (1 + delta) * static_cast<unsigned long>(f.size());
}

Shape boundary_part(const Shape& f, const Shape& a) {
  require_same_dim(f, a, "boundary_part");
  std::vector<GroupPoint> pts;
  for (const auto& p : f) {
    for (const auto& x : a) {
      if (!f.contains(x + p)) {
        pts.push_back(p);
        break;
      }
    }
  }
  return Shape(f.dim(), std::move(pts));
}

bool is_tempered_prefix(std::span<const FolnerBox> boxes, const Rational& c) {
  if (boxes.empty()) throw std::invalid_argument("is_tempered_prefix: empty list");
  for (std::size_t i = 1; i < boxes.size(); ++i) {
    if (boxes[i].dim != boxes[0].dim || boxes[i].index <= boxes[i - 1].index) {
      throw std::invalid_argument("is_tempered_prefix: boxes must share a dimension and be nested by index");
    }
  }
  Shape prefix_inverse(boxes[0].dim);
  for (std::size_t n = 0; n + 1 < boxes.size(); ++n) {
    prefix_inverse = unite(prefix_inverse, inverse(boxes[n].shape()));
    const Shape next = boxes[n + 1].shape();
    const Shape u = product(prefix_inverse, next);
    if (Rational(static_cast<unsigned long>(u.size())) > c * static_cast<unsigned long>(next.size())) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Periodic subsets and Banach densities

PeriodicSubset::PeriodicSubset(std::vector<Coord> periods, const std::vector<GroupPoint>& residues)
    : periods_(std::move(periods)) {
  check_dim(periods_.size());
  std::size_t cell = 1;
  for (Coord p : periods_) {
    if (p <= 0) throw std::invalid_argument("PeriodicSubset: periods must be positive");
    cell *= static_cast<std::size_t>(p);
  }
  member_.assign(cell, false);
  for (const auto& r : residues) {
    if (r.dim() != periods_.size()) throw std::invalid_argument("PeriodicSubset: residue dimension mismatch");
    const std::size_t idx = cell_index(r);
    if (!member_[idx]) {
      member_[idx] = true;
      ++count_;
    }
  }
}

std::size_t PeriodicSubset::cell_index(const GroupPoint& g) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < periods_.size(); ++i) {
    idx = idx * static_cast<std::size_t>(periods_[i]) + static_cast<std::size_t>(floor_mod(g[i], periods_[i]));
  }
  return idx;
}

bool PeriodicSubset::contains(const GroupPoint& g) const {
  if (g.dim() != periods_.size()) throw std::invalid_argument("PeriodicSubset::contains: dimension mismatch");
  return member_[cell_index(g)];
}

Rational PeriodicSubset::density() const {
  return ratio(count_, member_.size());
}

namespace {

template <typename Membership>
DensityEstimate scan_density(const Membership& in_s, const Shape& f, const Shape& probe) {
  if (f.empty()) throw std::invalid_argument("banach_density: empty F");
  if (probe.empty()) throw std::invalid_argument("banach_density: empty probe window");
  require_same_dim(f, probe, "banach_density");
  std::size_t lo = f.size();
  std::size_t hi = 0;
  for (const auto& g : probe) {
    std::size_t hits = 0;
    for (const auto& x : f) hits += in_s(x + g) ? 1 : 0;
    lo = std::min(lo, hits);
    hi = std::max(hi, hits);
  }
  return {ratio(lo, f.size()), ratio(hi, f.size()), false};
}

}  // namespace

DensityEstimate banach_density(const PeriodicSubset& s, const Shape& f, const Shape& probe) {
  if (s.dim() != f.dim()) throw std::invalid_argument("banach_density: dimension mismatch");
  DensityEstimate est = scan_density([&](const GroupPoint& g) { return s.contains(g); }, f, probe);
  std::vector<bool> seen(s.cell_size(), false);
  std::size_t covered = 0;
  for (const auto& g : probe) {
    const std::size_t idx = s.cell_index(g);
    if (!seen[idx]) {
      seen[idx] = true;
      ++covered;
    }
  }
  est.certified = covered == s.cell_size();
  return est;
}

DensityEstimate banach_density(const Shape& s, const Shape& f, const Shape& probe) {
  if (!s.empty()) require_same_dim(s, f, "banach_density");
  return scan_density([&](const GroupPoint& g) { return s.contains(g); }, f, probe);
}

}  // namespace facet
