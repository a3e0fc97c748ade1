#pragma once

// Block measures, convex combinations and the weak* metric
//   d_k(mu, nu) = (1/|B_k|) sum_{B in B_k} |mu(B) - nu(B)|,
//   d(mu, nu)   = sum_k 2^{-k} d_k(mu, nu),
// truncated at a finite depth J with a certified tail.

#include <cstddef>
#include <span>
#include <vector>

#include "facet/cylinder.hpp"
#include "facet/frequency.hpp"
#include "facet/rational.hpp"
#include "facet/symbolic.hpp"

namespace facet {

// mu_B at depth j: mass fr_B(C) on every pattern C of F_j x [0, j).
// Throws when F_j does not embed in shape(B).
CylinderMeasure block_measure(const Block& b, std::size_t j, const AlphabetStack& stack);

// Pointwise convex combination. Weights must be >= 0 and sum to 1.
CylinderMeasure mix(std::span<const Rational> weights, std::span<const CylinderMeasure> measures);

// Exact product measure on F_depth x [0, depth): row r uses probabilities[r].
// Throws std::length_error past `cap` patterns.
CylinderMeasure bernoulli_measure(const AlphabetStack& stack, std::size_t dim, std::size_t depth,
                                  const RowProbabilities& probabilities, std::size_t cap = 1'000'000);

Rational dist_k(const CylinderMeasure& mu, const CylinderMeasure& nu, const BlockFamily& family);
Rational dist_k(const Block& b, const CylinderMeasure& nu, const BlockFamily& family);

// True distance lies in [lower, lower + tail].
struct DistanceInterval {
  Rational lower;
  Rational tail;

  Rational upper() const { return lower + tail; }
};

// Each d_k is at most 1, so the omitted terms sum to at most 2^{-depth}.
Rational truncation_tail(std::size_t depth);

DistanceInterval dist(const CylinderMeasure& mu, const CylinderMeasure& nu, const FamilyLadder& families,
                      std::size_t depth);
DistanceInterval dist_block(const Block& b, const CylinderMeasure& nu, const FamilyLadder& families, std::size_t depth);

// Smallest j with 2^{-j} < eps / 2. Requires 0 < eps <= 2.
std::size_t tail_depth(const Rational& eps);

// conv{nu_1, ..., nu_m}: a finite stand-in for a face of the simplex of
// invariant measures.
class ConvexTarget {
 public:
  explicit ConvexTarget(std::vector<CylinderMeasure> vertices);

  std::size_t size() const { return vertices_.size(); }
  std::size_t depth() const { return vertices_.front().depth(); }
  std::size_t dim() const { return vertices_.front().dim(); }
  const std::vector<CylinderMeasure>& vertices() const { return vertices_; }
  const CylinderMeasure& vertex(std::size_t i) const { return vertices_.at(i); }

 private:
  std::vector<CylinderMeasure> vertices_;
};

struct HullDistance {
  // sum_{k<=J} 2^{-k} d_k(x, mix(weights, K)).
  Rational objective;
  std::vector<Rational> weights;
  // objective - gap is a lower bound for the truncated objective over the whole hull.
  Rational gap;
  Rational tail;
  std::size_t sweeps = 0;

  // Bounds on d(x, conv K) for the full series.
  Rational certified_lower() const;
  Rational certified_upper() const { return objective + tail; }
};

// Projected coordinate descent on the weight simplex: exact line searches along
// e_a - e_b for every pair (a, b) and towards every vertex, in a fixed order,
// until one sweep improves the objective by less than tol / 10.
HullDistance dist_to_hull(const Block& x, const ConvexTarget& k, const FamilyLadder& families, std::size_t depth,
                          const Rational& tol);
HullDistance dist_to_hull(const CylinderMeasure& x, const ConvexTarget& k, const FamilyLadder& families,
                          std::size_t depth, const Rational& tol);

// Flattened form shared by both overloads: target values a, per-vertex values
// n[i], per-entry weights c (2^{-k} / |B_k|). Exposed for testing.
struct HullProblem {
  std::vector<Rational> target;
  std::vector<std::vector<Rational>> vertices;
  std::vector<Rational> weights;
};

HullProblem make_hull_problem(const std::vector<Rational>& target_values, const ConvexTarget& k,
                              const FamilyLadder& families, std::size_t depth);
Rational hull_objective(const HullProblem& problem, std::span<const Rational> w);
HullDistance solve_hull(const HullProblem& problem, const Rational& tol);

// Values of x on the ladder entries, level by level, pattern by pattern.
std::vector<Rational> ladder_values(const Block& x, const FamilyLadder& families, std::size_t depth);
std::vector<Rational> ladder_values(const CylinderMeasure& x, const FamilyLadder& families, std::size_t depth);

}  // namespace facet
