#include <doctest.h>

#include <cmath>
#include <random>

#include "facet/symbolic.hpp"
#include "facet/testkit/suites.hpp"

using namespace facet;

namespace {

Shape box1(Coord lo, Coord hi) { return Shape::box(GroupPoint{lo}, GroupPoint{hi}); }
Shape box2(Coord x0, Coord y0, Coord x1, Coord y1) { return Shape::box(GroupPoint{x0, y0}, GroupPoint{x1, y1}); }

// "aababab" on [-3, 3] with a = 0, b = 1.
Block word() { return Block(box1(-3, 3), 1, {0, 0, 1, 0, 1, 0, 1}); }

}  // namespace

TEST_CASE("alphabet stacks") {
  const AlphabetStack s({2, 3});
  CHECK(s.depth() == 2);
  CHECK(s.size(1) == 3);
  CHECK(s.truncated(1) == AlphabetStack({2}));
  CHECK_THROWS_AS(AlphabetStack(std::vector<std::uint32_t>{}), std::invalid_argument);
  CHECK_THROWS_AS(AlphabetStack({2, 0}), std::invalid_argument);
}

TEST_CASE("blocks validate against the stack") {
  CHECK_NOTHROW(word().validate(AlphabetStack({2})));
  CHECK_THROWS_AS(word().validate(AlphabetStack({1})), std::invalid_argument);
  CHECK_THROWS_AS(Block(box1(0, 2), 1, {0, 1}), std::invalid_argument);
  const Block b = word();
  CHECK(b.at(GroupPoint{-1}, 0) == 1);
  CHECK_THROWS_AS(static_cast<void>(b.at(GroupPoint{9}, 0)), std::out_of_range);
}

TEST_CASE("restrict") {
  const Block b = word();
  CHECK(restrict(b, b.shape(), 1) == b);
  const Block bab = restrict(b, box1(-1, 1), 1);
  CHECK(bab.entries() == Pattern{1, 0, 1});
  CHECK(restrict(b, Shape(1), 1).size() == 0);
  CHECK_THROWS_AS(restrict(b, box1(2, 5), 1), std::invalid_argument);
  CHECK_THROWS_AS(restrict(b, box1(0, 1), 2), std::invalid_argument);
}

TEST_CASE("subblock_at") {
  const Block b = word();
  const auto sub = subblock_at(b, box1(-1, 1), GroupPoint{2}, 1);
  REQUIRE(sub.has_value());
  CHECK(sub->shape() == box1(-1, 1));
  CHECK(sub->entries() == Pattern{1, 0, 1});
  CHECK_FALSE(subblock_at(b, box1(-1, 1), GroupPoint{3}, 1).has_value());
  CHECK(*subblock_at(b, b.shape(), GroupPoint{0}, 1) == b);
}

TEST_CASE("restrict twice equals one restriction to the intersection") {
  std::mt19937_64 rng(3);
  const AlphabetStack stack({3, 2});
  for (int i = 0; i < 50; ++i) {
    const Block b = testkit::random_block(rng, box2(0, 0, 9, 9), stack);
    const Shape e1 = box2(static_cast<Coord>(rng() % 4), 0, 9, static_cast<Coord>(5 + rng() % 5));
    const Shape e2 = box2(0, static_cast<Coord>(rng() % 4), static_cast<Coord>(5 + rng() % 5), 9);
    const Block twice = restrict(restrict(b, e1, 2), intersect(e1, e2), 1);
    CHECK(twice == restrict(b, intersect(e1, e2), 1));
  }
}

TEST_CASE("subblock_at agrees with restricting a translated block") {
  std::mt19937_64 rng(4);
  const AlphabetStack stack({2});
  for (int i = 0; i < 50; ++i) {
    const Block b = testkit::random_block(rng, box2(0, 0, 7, 7), stack);
    const GroupPoint g{static_cast<Coord>(rng() % 10), static_cast<Coord>(rng() % 10)};
    const Shape f = box2(0, 0, 2, 1);
    const auto sub = subblock_at(b, f, g, 1);
    const Block moved = translate(b, -g);
    if (f.is_subset_of(moved.shape())) {
      REQUIRE(sub.has_value());
      CHECK(*sub == restrict(moved, f, 1));
    } else {
      CHECK_FALSE(sub.has_value());
    }
  }
}

TEST_CASE("enumerate_family") {
  const Corpus corpus(AlphabetStack({2}), {word()});
  const BlockFamily f = enumerate_family(corpus, 1);
  REQUIRE(f.size() == 3);
  CHECK(f.patterns()[0] == Pattern{0, 0, 1});
  CHECK(f.patterns()[1] == Pattern{0, 1, 0});
  CHECK(f.patterns()[2] == Pattern{1, 0, 1});

  const Corpus constant(AlphabetStack({2}), {Block::filled(box1(0, 20), 1, 1)});
  CHECK(enumerate_family(constant, 1).size() == 1);

  const Corpus shifted(AlphabetStack({2}), {translate(word(), GroupPoint{40})});
  CHECK(enumerate_family(shifted, 1) == f);

  CHECK_THROWS_AS(enumerate_family(Corpus(AlphabetStack({2}), {}), 1), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_family(corpus, 2), std::invalid_argument);
}

TEST_CASE("family size is bounded by patterns and translates") {
  std::mt19937_64 rng(8);
  const AlphabetStack stack({2, 2});
  for (int i = 0; i < 20; ++i) {
    const auto n = static_cast<Coord>(3 + rng() % 30);
    const Corpus corpus(stack, {testkit::random_block(rng, box1(0, n), stack)});
    const BlockFamily f = enumerate_family(corpus, 2);
    CHECK(f.size() <= static_cast<std::size_t>(n + 1 - 4));
    CHECK(f.size() <= 1024);
  }
}

TEST_CASE("exhaustive families honour forbidden blocks and the cap") {
  const AlphabetStack stack({2});
  CHECK(enumerate_family_exhaustive(stack, 1, 1, {}).size() == 8);
  const Block forbidden(box1(0, 1), 1, {1, 1});
  CHECK(enumerate_family_exhaustive(stack, 1, 1, {forbidden}).size() == 5);
  CHECK_THROWS_AS(enumerate_family_exhaustive(AlphabetStack({2, 2}), 2, 2, {}, 1000), std::length_error);
  const FamilyLadder ladder = exhaustive_ladder(AlphabetStack({2, 2}), 1, 2);
  CHECK(ladder.depth() == 2);
  CHECK(ladder.level(2).size() == 1024);
  CHECK_THROWS_AS(static_cast<void>(ladder.level(3)), std::out_of_range);
}

TEST_CASE("Bernoulli sampling") {
  const AlphabetStack stack({2});
  const Block one = sample_bernoulli(box1(0, 0), stack, {{1, 0}}, 9);
  CHECK(one.at(0, 0) == 0);
  const Block a = sample_bernoulli(box1(0, 9), stack, {{make_rational(1, 2), make_rational(1, 2)}}, 12345);
  const Block b = sample_bernoulli(box1(0, 9), stack, {{make_rational(1, 2), make_rational(1, 2)}}, 12345);
  CHECK(a == b);
  CHECK_THROWS_AS(sample_bernoulli(box1(0, 9), stack, {{make_rational(1, 2), make_rational(1, 3)}}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_bernoulli(box1(0, 9), stack, {{1}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_bernoulli(box1(0, 9), stack, {{2, -1}}, 1), std::invalid_argument);
}

TEST_CASE("uniform samples on [-50, 50]^2 are balanced") {
  const Shape window = Shape::folner(50, 2);
  const Block b = sample_bernoulli(window, AlphabetStack({2}), {{make_rational(1, 2), make_rational(1, 2)}}, 2024);
  std::size_t zeros = 0;
  for (Symbol s : b.entries()) zeros += s == 0;
  const double f = static_cast<double>(zeros) / static_cast<double>(window.size());
  CHECK(std::abs(f - 0.5) < 3 * std::sqrt(0.25 / static_cast<double>(window.size())));
}

TEST_CASE("Markov sampling follows the last axis") {
  const AlphabetStack stack({2});
  // A chain that never switches keeps the first symbol along each line.
  const MarkovRow row{{make_rational(1, 2), make_rational(1, 2)}, {{1, 0}, {0, 1}}};
  const Block b = sample_markov(box2(0, 0, 5, 9), stack, {row}, 77);
  for (Coord x = 0; x <= 5; ++x) {
    for (Coord y = 1; y <= 9; ++y) CHECK(b.at(GroupPoint{x, y}, 0) == b.at(GroupPoint{x, 0}, 0));
  }
  CHECK(b == sample_markov(box2(0, 0, 5, 9), stack, {row}, 77));
}
