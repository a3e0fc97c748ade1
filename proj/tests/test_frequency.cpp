#include <doctest.h>

#include <random>

#include "facet/frequency.hpp"
#include "facet/measures.hpp"
#include "facet/testkit/oracles.hpp"
#include "facet/testkit/suites.hpp"

using namespace facet;

namespace {

Shape box1(Coord lo, Coord hi) { return Shape::box(GroupPoint{lo}, GroupPoint{hi}); }
Shape box2(Coord x0, Coord y0, Coord x1, Coord y1) { return Shape::box(GroupPoint{x0, y0}, GroupPoint{x1, y1}); }

Block word() { return Block(box1(-3, 3), 1, {0, 0, 1, 0, 1, 0, 1}); }
Block tri(Symbol a, Symbol b, Symbol c) { return Block(box1(-1, 1), 1, {a, b, c}); }

}  // namespace

TEST_CASE("count_embeddings") {
  CHECK(count_embeddings(box1(-3, 3), box1(-1, 1)) == 5);
  CHECK(count_embeddings(box1(-1, 1), box1(-1, 1)) == 1);
  CHECK(count_embeddings(box2(-2, -2, 2, 2), box2(-1, -1, 1, 1)) == 9);
  CHECK(count_embeddings(box1(0, 1), box1(-1, 1)) == 0);
}

TEST_CASE("count_occurrences and freq on aababab") {
  const Block b = word();
  CHECK(count_occurrences(b, tri(0, 1, 0)) == 2);
  CHECK(count_occurrences(b, b) == 1);
  CHECK(count_occurrences(b, tri(1, 1, 1)) == 0);
  CHECK(freq(b, tri(0, 0, 1)) == make_rational(1, 5));
  CHECK(freq(b, tri(0, 1, 0)) == make_rational(2, 5));
  CHECK(freq(b, tri(1, 0, 1)) == make_rational(2, 5));
  CHECK(freq(b, Block::filled(box1(-5, 5), 1)) == 0);
  CHECK_THROWS_AS(count_occurrences(b, Block::filled(box1(-1, 1), 2)), std::invalid_argument);
}

TEST_CASE("frequencies at a level sum to one") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    const AlphabetStack stack({static_cast<std::uint32_t>(2 + rng() % 2), 2});
    const Block b = testkit::random_block(rng, box2(0, 0, static_cast<Coord>(3 + rng() % 12), static_cast<Coord>(3 + rng() % 12)), stack);
    for (std::size_t k = 1; k <= 2; ++k) {
      const PatternTable table = PatternTable::level(b, k);
      if (table.embeddings() == 0) continue;
      Rational total = 0;
      for (const auto& [p, n] : table.counts()) total += table.freq(p);
      CHECK(total == 1);
    }
  }
}

TEST_CASE("pattern tables agree with the naive oracle") {
  std::mt19937_64 rng(22);
  const AlphabetStack stack({3});
  for (int i = 0; i < 20; ++i) {
    const Block b = testkit::random_block(rng, box2(0, 0, 12, 9), stack);
    const PatternTable table = PatternTable::level(b, 1);
    for (const auto& [p, n] : table.counts()) {
      const Block c(Shape::folner(1, 2), 1, p);
      CHECK(n == testkit::oracle_occurrences(b, c));
      CHECK(table.freq(p) == testkit::oracle_freq(b, c));
    }
  }
}

TEST_CASE("typicality deviation and typical-block search") {
  const AlphabetStack stack({2});
  const Block b = word();
  const CylinderMeasure mu = block_measure(b, 1, stack);
  CHECK(typicality_deviation(b, mu, 1) == 0);

  // B itself qualifies when the corpus holds it and F = shape(B).
  const Corpus corpus(stack, {b});
  const TypicalSearch found = find_typical_block(mu, b.shape(), 1, make_rational(1, 100), {&corpus, std::nullopt}, 10);
  REQUIRE(found.block.has_value());
  CHECK(*found.block == b);
  CHECK(found.candidates_tried == 1);

  // Point mass on a constant pattern; constant blocks have deviation 0.
  const CylinderMeasure point(stack, 1, 1, {{Pattern{1, 1, 1}, Rational(1)}});
  const Corpus constants(stack, {Block::filled(box1(0, 30), 1, 1)});
  const TypicalSearch c = find_typical_block(point, box1(0, 9), 1, make_rational(1, 10), {&constants, std::nullopt}, 5);
  REQUIRE(c.block.has_value());
  CHECK(c.worst_deviation == 0);

  // Nothing in the corpus is typical and there is no sampler: budget runs out.
  const TypicalSearch none = find_typical_block(mu, box1(0, 9), 1, make_rational(1, 10), {&constants, std::nullopt}, 3);
  CHECK_FALSE(none.block.has_value());
  CHECK(none.candidates_tried == 3);
}

TEST_CASE("seeded search finds a Bernoulli(1/2)-typical block on [-200, 200]") {
  const AlphabetStack stack({2});
  const RowProbabilities half{{make_rational(1, 2), make_rational(1, 2)}};
  const CylinderMeasure target = bernoulli_measure(stack, 1, 1, half);
  CandidateSource source{nullptr, BernoulliSampler(stack, half, 20261015)};
  const TypicalSearch s = find_typical_block(target, box1(-200, 200), 1, make_rational(1, 10), source, 20);
  REQUIRE(s.block.has_value());
  CHECK(s.candidates_tried == 1);
  CHECK(s.worst_deviation < make_rational(1, 10));
}
