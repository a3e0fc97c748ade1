#include "facet/testkit/suites.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "facet/frequency.hpp"
#include "facet/measures.hpp"
#include "facet/quasitiling.hpp"
#include "facet/testkit/oracles.hpp"

namespace facet::testkit {

void SuiteResult::record(const Rational& observed, const Rational& bound, const std::string& label) {
  ++checked;
  worst_deviation = std::max(worst_deviation, observed);
  const Rational slack = bound - observed;
  if (!worst_slack || slack < *worst_slack) worst_slack = slack;
  if (observed > bound) fail(label + ": observed " + to_string(observed) + " exceeds " + to_string(bound));
}

void SuiteResult::fail(const std::string& label) {
  ++violations;
  if (failures.size() < 10) failures.push_back(label);
}

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

Block random_block(std::mt19937_64& rng, const Shape& shape, const AlphabetStack& stack) {
  Block b = Block::filled(shape, stack.depth());
  for (std::size_t r = 0; r < stack.depth(); ++r) {
    for (std::size_t p = 0; p < shape.size(); ++p) b.at(p, r) = static_cast<Symbol>(below(rng, stack.size(r)));
  }
  return b;
}

namespace {

Shape box1(Coord lo, Coord hi) { return Shape::box(GroupPoint{lo}, GroupPoint{hi}); }
Shape box2(Coord x0, Coord y0, Coord x1, Coord y1) { return Shape::box(GroupPoint{x0, y0}, GroupPoint{x1, y1}); }

Rational bernoulli_parameter(std::mt19937_64& rng, unsigned long den) {
  return make_rational(static_cast<long>(1 + below(rng, den - 1)), den);
}

// max |fr_B(D) - mu(D)| over D at levels 1..j, D observed in B or charged by mu.
Rational frequency_deviation(const Block& b, const CylinderMeasure& mu, std::size_t j) {
  Rational worst = 0;
  for (std::size_t i = 1; i <= j; ++i) {
    const PatternTable table = PatternTable::level(b, i);
    for (const auto& [pattern, count] : table.counts()) {
      worst = std::max<Rational>(worst, abs(table.freq(pattern) - mu.value(i, pattern)));
    }
    for (const auto& [pattern, mass] : mu.marginal(i)) {
      if (table.count(pattern) == 0) worst = std::max(worst, mass);
    }
  }
  return worst;
}

}  // namespace

// ---------------------------------------------------------------------------
// Block-measure marginals

SuiteResult marginal_bound_on_blocks(const std::string& name, const std::vector<Block>& blocks, std::size_t j,
                                     const AlphabetStack& stack) {
  SuiteResult r;
  r.name = name;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    ++r.instances;
    const Shape fj = Shape::folner(j, b.dim());
    if (b.depth() < j || oracle_embeddings(b.shape(), fj) == 0) {
      ++r.vacuous;
      continue;
    }
    const CylinderMeasure mu = block_measure(b, j, stack);
    const Rational deviation = frequency_deviation(b, mu, j);
    const Rational delta = invariance_ratio(b.shape(), fj);
    if (delta * static_cast<unsigned long>(fj.size()) >= 1) {
      ++r.vacuous;
      r.worst_deviation = std::max(r.worst_deviation, deviation);
      continue;
    }
    r.record(deviation, lemma24_bound(delta, fj.size()), name + " block " + std::to_string(i));
  }
  return r;
}

SuiteResult marginal_bound_exhaustive_z() {
  const AlphabetStack stack({2});
  const Shape f = box1(-3, 3);
  std::vector<Block> blocks;
  for (unsigned mask = 0; mask < (1u << f.size()); ++mask) {
    Pattern p;
    for (std::size_t i = 0; i < f.size(); ++i) p.push_back(static_cast<Symbol>((mask >> i) & 1u));
    blocks.emplace_back(f, 1, std::move(p));
  }
  return marginal_bound_on_blocks("marginal bound exhaustive Z [-3,3] j=1", blocks, 1, stack);
}

SuiteResult marginal_bound_random_z2(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  const AlphabetStack stack({2});
  const Shape f = box2(-8, -8, 8, 8);
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < count; ++i) blocks.push_back(random_block(rng, f, stack));
  return marginal_bound_on_blocks("marginal bound random Z^2 [-8,8]^2 j=1", blocks, 1, stack);
}

SuiteResult marginal_bound_random_z(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  const AlphabetStack stack({2, 2});
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < count; ++i) {
    const auto n = static_cast<Coord>(10 + below(rng, 31));
    blocks.push_back(random_block(rng, box1(-n, n), stack));
  }
  return marginal_bound_on_blocks("marginal bound random Z [-n,n] j=2", blocks, 2, stack);
}

// ---------------------------------------------------------------------------
// Tiled windows

SuiteResult concatenation_suite(std::uint64_t seed, std::size_t count) {
  SuiteResult r;
  r.name = "concatenation bound tiled windows k=1";
  std::mt19937_64 rng(seed);
  const AlphabetStack stack({2});
  for (std::size_t i = 0; i < count; ++i) {
    ++r.instances;
    const bool plane = i % 10 >= 7;
    const bool partial = i % 2 == 1;
    const std::size_t dim = plane ? 2 : 1;
    const std::size_t tiles = 2 + below(rng, 5);
    const Coord height = plane ? static_cast<Coord>(40 + below(rng, 21)) : 1;
    std::vector<Shape> shapes;
    std::vector<std::vector<GroupPoint>> centers;
    Coord cursor = 0;
    for (std::size_t t = 0; t < tiles; ++t) {
      cursor += partial ? static_cast<Coord>(below(rng, 3)) : 0;
      const auto len = static_cast<Coord>(40 + below(rng, plane ? 21 : 41));
      shapes.push_back(plane ? box2(0, 0, len - 1, height - 1) : box1(0, len - 1));
      centers.push_back({plane ? GroupPoint{cursor, 0} : GroupPoint{cursor}});
      cursor += len;
    }
    cursor += partial ? static_cast<Coord>(below(rng, 3)) : 0;
    const Coord top = height - 1 + (plane && partial ? 1 : 0);
    const Shape window = plane ? box2(0, 0, cursor - 1, top) : box1(0, cursor - 1);
    const Rational p = bernoulli_parameter(rng, 16);
    const Block c = sample_bernoulli(window, stack, {{p, 1 - p}}, rng());
    const Quasitiling tiling(window, shapes, centers);

    const Shape fk = Shape::folner(1, dim);
    const TilingReport v = verify(tiling, fk);
    Rational delta = 1 - v.covered;
    for (const auto& ratio_i : v.invariance_ratios) delta = std::max(delta, ratio_i);

    // Tile-weighted average of the tile frequencies.
    std::map<Pattern, Rational> mixed;
    std::size_t total = 0;
    for (const auto& tile : tiling.tiles()) total += tile.cells.size();
    for (const auto& tile : tiling.tiles()) {
      const PatternTable table = PatternTable::level(restrict(c, tile.cells, 1), 1);
      for (const auto& [pattern, n] : table.counts()) {
        mixed[pattern] += ratio(tile.cells.size(), total) * table.freq(pattern);
      }
    }
    const PatternTable whole = PatternTable::level(c, 1);
    Rational deviation = 0;
    for (const auto& [pattern, n] : whole.counts()) {
      const auto it = mixed.find(pattern);
      deviation = std::max<Rational>(deviation, abs(whole.freq(pattern) - (it == mixed.end() ? Rational(0) : it->second)));
    }
    for (const auto& [pattern, m] : mixed) {
      if (whole.count(pattern) == 0) deviation = std::max(deviation, m);
    }
    if (delta >= 1 || delta * static_cast<unsigned long>(fk.size()) >= 1) {
      ++r.vacuous;
      r.worst_deviation = std::max(r.worst_deviation, deviation);
      continue;
    }
    r.record(deviation, lemma27_bound(delta, fk.size()), "tiled instance " + std::to_string(i));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Per-pattern premise

SuiteResult premise_suite(std::uint64_t seed, std::size_t count) {
  SuiteResult r;
  r.name = "premise implies dist < eps";
  std::mt19937_64 rng(seed);
  const AlphabetStack stack({2, 1, 1, 1});
  const FamilyLadder families = exhaustive_ladder(stack, 1, 4);
  for (std::size_t i = 0; i < count; ++i) {
    ++r.instances;
    const Rational eps = make_rational(static_cast<long>(5 + below(rng, 16)), 20);
    const std::size_t j = tail_depth(eps);
    const Rational p = bernoulli_parameter(rng, 8);
    const Rational q = below(rng, 4) == 0 ? bernoulli_parameter(rng, 8) : p;
    const CylinderMeasure nu = bernoulli_measure(stack, 1, 4, {{p, 1 - p}, {1}, {1}, {1}});
    const auto length = static_cast<Coord>(500 + below(rng, 2501));
    const Block b = sample_bernoulli(box1(0, length - 1), stack, {{q, 1 - q}, {1}, {1}, {1}}, rng());

    const Rational threshold = eps / (2 * static_cast<unsigned long>(j));
    bool premise = true;
    for (std::size_t k = 1; k <= j && premise; ++k) {
      const PatternTable table = PatternTable::level(b, k);
      for (const auto& d : families.level(k).patterns()) {
        if (abs(table.freq(d) - nu.value(k, d)) >= threshold) {
          premise = false;
          break;
        }
      }
    }
    if (!premise) {
      ++r.vacuous;
      continue;
    }
    const DistanceInterval d = dist_block(b, nu, families, j);
    ++r.checked;
    r.worst_deviation = std::max(r.worst_deviation, d.upper());
    const Rational slack = eps - d.upper();
    if (!r.worst_slack || slack < *r.worst_slack) r.worst_slack = slack;
    if (d.upper() >= eps) r.fail("premise instance " + std::to_string(i) + ": upper " + to_string(d.upper()));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Metric axioms

namespace {

CylinderMeasure random_measure(std::mt19937_64& rng, const AlphabetStack& stack, std::size_t depth) {
  const Shape base = Shape::folner(depth, 1);
  std::map<Pattern, Rational> weights;
  unsigned long total = 0;
  const std::size_t support = 1 + below(rng, 12);
  for (std::size_t s = 0; s < support; ++s) {
    Pattern p;
    for (std::size_t row = 0; row < depth; ++row) {
      for (std::size_t c = 0; c < base.size(); ++c) p.push_back(static_cast<Symbol>(below(rng, stack.size(row))));
    }
    const unsigned long w = 1 + below(rng, 9);
    weights[p] += w;
    total += w;
  }
  for (auto& [p, w] : weights) w /= total;
  return CylinderMeasure(stack, 1, depth, std::move(weights));
}

}  // namespace

SuiteResult metric_axioms_suite(std::uint64_t seed, std::size_t count) {
  SuiteResult r;
  r.name = "metric axioms depth 2";
  std::mt19937_64 rng(seed);
  const AlphabetStack stack({2, 2});
  const FamilyLadder families = exhaustive_ladder(stack, 1, 2);
  for (std::size_t i = 0; i < count; ++i) {
    ++r.instances;
    ++r.checked;
    const CylinderMeasure a = random_measure(rng, stack, 2);
    const CylinderMeasure b = random_measure(rng, stack, 2);
    const CylinderMeasure c = random_measure(rng, stack, 2);
    const std::string label = "triple " + std::to_string(i);
    for (std::size_t k = 1; k <= 2; ++k) {
      const BlockFamily& f = families.level(k);
      const Rational ab = dist_k(a, b, f);
      const Rational ba = dist_k(b, a, f);
      const Rational bc = dist_k(b, c, f);
      const Rational ac = dist_k(a, c, f);
      if (ab != ba) r.fail(label + ": asymmetric d_" + std::to_string(k));
      if (ab < 0 || ab > 1) r.fail(label + ": d_" + std::to_string(k) + " outside [0,1]");
      const Rational slack = ab + bc - ac;
      if (!r.worst_slack || slack < *r.worst_slack) r.worst_slack = slack;
      if (slack < 0) r.fail(label + ": triangle inequality fails for d_" + std::to_string(k));
      if (dist_k(a, a, f) != 0) r.fail(label + ": d_" + std::to_string(k) + "(mu, mu) != 0");
    }
    const Rational ab = dist(a, b, families, 2).lower;
    const Rational bc = dist(b, c, families, 2).lower;
    const Rational ac = dist(a, c, families, 2).lower;
    if (ac > ab + bc) r.fail(label + ": triangle inequality fails for d");
    if (dist(a, a, families, 2).lower != 0) r.fail(label + ": d(mu, mu) lower part != 0");
    if (ab != dist(b, a, families, 2).lower) r.fail(label + ": asymmetric d");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Oracle equivalence

SuiteResult oracle_equivalence_suite(std::uint64_t seed, std::size_t count) {
  SuiteResult r;
  r.name = "oracle equivalence";
  std::mt19937_64 rng(seed);

  auto compare = [&](const Block& b, const Block& c, const std::string& label) {
    const std::size_t n = oracle_occurrences(b, c);
    if (count_occurrences(b, c) != n) r.fail(label + ": occurrence count");
    if (freq(b, c) != oracle_freq(b, c)) r.fail(label + ": frequency");
    if (count_embeddings(b.shape(), c.shape()) != oracle_embeddings(b.shape(), c.shape())) r.fail(label + ": N_F");
    const PatternTable table(b, c.shape(), c.depth());
    if (table.count(c.entries()) != n) r.fail(label + ": pattern table count");
    if (table.freq(c.entries()) != oracle_freq(b, c)) r.fail(label + ": pattern table frequency");
  };

  ++r.instances;
  ++r.checked;
  try {
    const Block b(box1(0, 6), 1, {0, 0, 1, 0, 1, 0, 1});
    const Block c(box1(0, 2), 1, {0, 1, 0});
    if (oracle_freq(b, c) != make_rational(2, 5)) r.fail("aababab/aba oracle");
    compare(b, c, "aababab/aba");
  } catch (const std::exception& e) {
    r.fail(std::string("aababab/aba threw: ") + e.what());
  }

  for (std::size_t i = 0; i < count; ++i) {
    ++r.instances;
    ++r.checked;
    const std::string label = "instance " + std::to_string(i);
    try {
      const std::size_t dim = 1 + i % 2;
      const AlphabetStack stack({static_cast<std::uint32_t>(2 + below(rng, 2)), 2});
      const std::size_t depth = 1 + below(rng, 2);
      Shape host(dim);
      if (dim == 1) {
        host = box1(0, static_cast<Coord>(below(rng, 10000)));
      } else {
        host = box2(0, 0, static_cast<Coord>(below(rng, 100)), static_cast<Coord>(below(rng, 100)));
      }
      if (i % 3 == 2) {
        // Punch holes so non-box hosts are covered too.
        std::vector<GroupPoint> kept;
        for (const auto& g : host) {
          if (below(rng, 10) != 0) kept.push_back(g);
        }
        if (kept.empty()) kept.push_back(host[0]);
        host = Shape(dim, std::move(kept));
      }
      const Block b = random_block(rng, host, stack.truncated(depth));
      std::vector<GroupPoint> pts;
      const Shape small = Shape::folner(1, dim);
      for (const auto& g : small) {
        if (below(rng, 2) == 0) pts.push_back(g);
      }
      if (pts.empty()) pts.push_back(GroupPoint::identity(dim));
      const Shape cshape(dim, std::move(pts));
      const std::size_t cdepth = 1 + below(rng, depth);
      std::optional<Block> c;
      if (below(rng, 2) == 0) c = subblock_at(b, cshape, host[below(rng, host.size())], cdepth);
      if (!c) c = random_block(rng, cshape, stack.truncated(cdepth));
      compare(b, *c, label);

      if (i % 4 == 0) {
        // Block measure masses are the level-j frequencies.
        const std::size_t j = 1;
        if (oracle_embeddings(host, Shape::folner(j, dim)) > 0) {
          const CylinderMeasure mu = block_measure(b, j, stack.truncated(depth));
          for (const auto& [pattern, mass] : mu.masses()) {
            if (mass != oracle_freq(b, Block(Shape::folner(j, dim), j, pattern))) {
              r.fail(label + ": block measure mass");
              break;
            }
          }
        }
        // Greedy covering against set union.
        std::vector<Shape> shapes;
        const std::size_t nshapes = 1 + below(rng, 3);
        for (std::size_t s = 0; s < nshapes; ++s) {
          const auto side = static_cast<Coord>(1 + below(rng, 5));
          shapes.push_back(dim == 1 ? box1(0, side - 1) : box2(0, 0, side - 1, static_cast<Coord>(below(rng, 5))));
        }
        const auto side = static_cast<Coord>(5 + below(rng, 20));
        const Shape window = dim == 1 ? box1(0, side) : box2(0, 0, side, side);
        const GreedyTiling g = greedy_tile(window, shapes, make_rational(1, 2));
        if (g.covering != oracle_covering(g.tiling) || verify(g.tiling, Shape::folner(0, dim)).covered != g.covering) {
          r.fail(label + ": covering");
        }
      }
    } catch (const std::exception& e) {
      r.fail(label + " threw: " + e.what());
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Hull solver against the grid

SuiteResult hull_oracle_suite(std::uint64_t seed, std::size_t count) {
  SuiteResult r;
  r.name = "hull solver vs grid";
  std::mt19937_64 rng(seed);
  const AlphabetStack stack({2, 2});
  const FamilyLadder families = exhaustive_ladder(stack, 1, 2);
  const Rational step = make_rational(1, 20);
  const Rational tol = make_rational(1, 1000);
  for (std::size_t i = 0; i < count; ++i) {
    ++r.instances;
    const std::size_t m = 1 + i % 3;
    std::vector<CylinderMeasure> vertices;
    std::vector<Rational> used;
    while (vertices.size() < m) {
      const Rational p = bernoulli_parameter(rng, 8);
      const Rational q = bernoulli_parameter(rng, 8);
      if (std::find(used.begin(), used.end(), p * 8 + q) != used.end()) continue;
      used.push_back(p * 8 + q);
      vertices.push_back(bernoulli_measure(stack, 1, 2, {{p, 1 - p}, {q, 1 - q}}));
    }
    const ConvexTarget k(vertices);
    const std::string label = "instance " + std::to_string(i);
    HullDistance solved;
    Rational grid;
    if (i % 2 == 0) {
      const CylinderMeasure x = random_measure(rng, stack, 2);
      solved = dist_to_hull(x, k, families, 2, tol);
      grid = grid_hull_distance(x, k, families, 2, step);
    } else {
      const Rational p = bernoulli_parameter(rng, 8);
      const Block x = sample_bernoulli(box1(0, 199), stack, {{p, 1 - p}, {make_rational(1, 2), make_rational(1, 2)}}, rng());
      solved = dist_to_hull(x, k, families, 2, tol);
      grid = grid_hull_distance(x, k, families, 2, step);
    }
    if (solved.certified_lower() > grid) r.fail(label + ": certified lower exceeds a feasible grid value");
    r.record(abs(solved.objective - grid), tol + 2 * step, label);
  }
  return r;
}

}  // namespace facet::testkit
