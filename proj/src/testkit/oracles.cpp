#include "facet/testkit/oracles.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace facet::testkit {

namespace {

std::map<GroupPoint, std::size_t> position_map(const Shape& s) {
  std::map<GroupPoint, std::size_t> m;
  for (std::size_t i = 0; i < s.points().size(); ++i) m.emplace(s.points()[i], i);
  return m;
}

Rational objective(const std::vector<Rational>& x, const std::vector<std::vector<Rational>>& vertices,
                   const std::vector<Rational>& coeff, const std::vector<Rational>& w) {
  Rational sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Rational mixed = 0;
    for (std::size_t v = 0; v < w.size(); ++v) mixed += w[v] * vertices[v][i];
    Rational diff = x[i] - mixed;
    if (diff < 0) diff = -diff;
    sum += coeff[i] * diff;
  }
  return sum;
}

Rational grid_minimum(const std::vector<Rational>& x, const ConvexTarget& k, const FamilyLadder& families,
                      std::size_t depth, const Rational& step) {
  const std::size_t m = k.size();
  if (m > 3) throw std::invalid_argument("grid_hull_distance: at most 3 vertices");
  if (step <= 0 || step.get_num() != 1) throw std::invalid_argument("grid_hull_distance: step must be 1/n");
  const unsigned long n = step.get_den().get_ui();

  std::vector<std::vector<Rational>> vertices(m);
  std::vector<Rational> coeff;
  for (std::size_t level = 1; level <= depth; ++level) {
    const BlockFamily& family = families.level(level);
    Rational c = 1;
    for (std::size_t i = 0; i < level; ++i) c /= 2;
    c /= static_cast<unsigned long>(family.size());
    for (const auto& p : family.patterns()) {
      coeff.push_back(c);
      for (std::size_t v = 0; v < m; ++v) vertices[v].push_back(k.vertex(v).value(level, p));
    }
  }

  bool first = true;
  Rational best;
  std::vector<Rational> w(m);
  auto consider = [&] {
    const Rational value = objective(x, vertices, coeff, w);
    if (first || value < best) best = value;
    first = false;
  };
  if (m == 1) {
    w[0] = 1;
    consider();
  } else if (m == 2) {
    for (unsigned long a = 0; a <= n; ++a) {
      w[0] = Rational(a) / n;
      w[1] = 1 - w[0];
      consider();
    }
  } else {
    for (unsigned long a = 0; a <= n; ++a) {
      for (unsigned long b = 0; a + b <= n; ++b) {
        w[0] = Rational(a) / n;
        w[1] = Rational(b) / n;
        w[2] = 1 - w[0] - w[1];
        consider();
      }
    }
  }
  return best;
}

}  // namespace

std::size_t oracle_embeddings(const Shape& f, const Shape& fj) {
  const auto where = position_map(f);
  std::size_t n = 0;
  for (const auto& g : f.points()) {
    bool inside = true;
    for (const auto& p : fj.points()) {
      if (where.find(p + g) == where.end()) {
        inside = false;
        break;
      }
    }
    if (inside) ++n;
  }
  return n;
}

std::size_t oracle_occurrences(const Block& b, const Block& c) {
  const auto where = position_map(b.shape());
  const auto& cpts = c.shape().points();
  std::size_t n = 0;
  for (const auto& g : b.shape().points()) {
    bool match = true;
    for (std::size_t i = 0; i < cpts.size() && match; ++i) {
      const auto it = where.find(cpts[i] + g);
      if (it == where.end()) {
        match = false;
        break;
      }
      for (std::size_t r = 0; r < c.depth(); ++r) {
        if (b.entries()[r * b.shape().points().size() + it->second] != c.entries()[r * cpts.size() + i]) {
          match = false;
          break;
        }
      }
    }
    if (match) ++n;
  }
  return n;
}

Rational oracle_freq(const Block& b, const Block& c) {
  const std::size_t total = oracle_embeddings(b.shape(), c.shape());
  if (total == 0) return 0;
  Rational r(static_cast<unsigned long>(oracle_occurrences(b, c)), static_cast<unsigned long>(total));
  r.canonicalize();
  return r;
}

Rational oracle_covering(const Quasitiling& t) {
  std::set<GroupPoint> covered;
  for (std::size_t i = 0; i < t.shapes().size(); ++i) {
    for (const auto& c : t.centers(i)) {
      for (const auto& p : t.shapes()[i].points()) covered.insert(p + c);
    }
  }
  const std::size_t n = t.window().points().size();
  if (n == 0) return 0;
  Rational r(static_cast<unsigned long>(covered.size()), static_cast<unsigned long>(n));
  r.canonicalize();
  return r;
}

Rational lemma24_bound(const Rational& delta, std::size_t fj_size) {
  const Rational x = delta * Rational(static_cast<unsigned long>(fj_size));
  if (x >= 1) throw std::domain_error("lemma24_bound: delta |F_j| >= 1");
  return x + x / (1 - x);
}

Rational lemma27_bound(const Rational& delta, std::size_t fk_size) {
  const Rational s(static_cast<unsigned long>(fk_size));
  const Rational x = delta * s;
  if (delta >= 1 || x >= 1) throw std::domain_error("lemma27_bound: need delta < 1 and delta |F_k| < 1");
  return delta * (s + 1) + delta * (s + 2) / (1 - delta) + x / (1 - x);
}

Rational grid_hull_distance(const CylinderMeasure& x, const ConvexTarget& k, const FamilyLadder& families,
                            std::size_t depth, const Rational& step) {
  std::vector<Rational> values;
  for (std::size_t level = 1; level <= depth; ++level) {
    for (const auto& p : families.level(level).patterns()) values.push_back(x.value(level, p));
  }
  return grid_minimum(values, k, families, depth, step);
}

Rational grid_hull_distance(const Block& x, const ConvexTarget& k, const FamilyLadder& families, std::size_t depth,
                            const Rational& step) {
  std::vector<Rational> values;
  for (std::size_t level = 1; level <= depth; ++level) {
    const BlockFamily& family = families.level(level);
    for (std::size_t i = 0; i < family.size(); ++i) values.push_back(oracle_freq(x, family.block(i)));
  }
  return grid_minimum(values, k, families, depth, step);
}

}  // namespace facet::testkit
