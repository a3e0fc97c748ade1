#pragma once

// Seeded bound suites. Each instance either satisfies the checked inequality,
// violates it, or falls outside the bound's domain (vacuous).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "facet/rational.hpp"
#include "facet/symbolic.hpp"

namespace facet::testkit {

struct SuiteResult {
  std::string name;
  std::size_t instances = 0;
  // Instances where the inequality was actually tested.
  std::size_t checked = 0;
  std::size_t vacuous = 0;
  std::size_t violations = 0;
  // Smallest bound - observed over checked instances.
  std::optional<Rational> worst_slack;
  // Largest observed deviation over all instances.
  Rational worst_deviation;
  std::vector<std::string> failures;

  bool passed() const { return violations == 0; }
  void record(const Rational& observed, const Rational& bound, const std::string& label);
  void fail(const std::string& label);
};

// Deterministic helpers shared by the suites and the tests.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t n);
Block random_block(std::mt19937_64& rng, const Shape& shape, const AlphabetStack& stack);

// |fr_B(D) - mu_B(D)| over D on F_i x [0, i), i <= j, against lemma24_bound
// with delta = invariance_ratio(shape(B), F_j).
SuiteResult marginal_bound_on_blocks(const std::string& name, const std::vector<Block>& blocks, std::size_t j,
                                     const AlphabetStack& stack);
// Every binary block on [-3, 3] with j = 1.
SuiteResult marginal_bound_exhaustive_z();
// Random binary blocks on [-8, 8]^2 with j = 1.
SuiteResult marginal_bound_random_z2(std::uint64_t seed, std::size_t count);
// Random binary blocks on [-n, n], 10 <= n <= 40, with j = 2.
SuiteResult marginal_bound_random_z(std::uint64_t seed, std::size_t count);

// Windows tiled by 2 to 6 boxes in Z and Z^2; tile-weighted frequencies
// against lemma27_bound.
SuiteResult concatenation_suite(std::uint64_t seed, std::size_t count);

// Per-pattern premise |fr_B(D) - nu(D)| < eps / 2j with j = tail_depth(eps)
// implies dist_block upper bound < eps.
SuiteResult premise_suite(std::uint64_t seed, std::size_t count);

// Symmetry, triangle inequality and zero self-distance on random depth-2
// measure triples.
SuiteResult metric_axioms_suite(std::uint64_t seed, std::size_t count);

// Optimized counting, tables, measures and coverings against the oracles.
SuiteResult oracle_equivalence_suite(std::uint64_t seed, std::size_t count);

// Hull solver against the grid oracle (m <= 3).
SuiteResult hull_oracle_suite(std::uint64_t seed, std::size_t count);

}  // namespace facet::testkit
