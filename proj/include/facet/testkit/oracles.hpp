#pragma once

// Brute-force twins of the optimized paths. Nothing here calls the counting,
// indexing or solver code it is meant to check.

#include <cstddef>
#include <vector>

#include "facet/measures.hpp"
#include "facet/quasitiling.hpp"
#include "facet/rational.hpp"
#include "facet/symbolic.hpp"

namespace facet::testkit {

// N_F(F_j): translates g in F with F_j + g inside F.
std::size_t oracle_embeddings(const Shape& f, const Shape& fj);
// N_B(C) by the double loop over translates and cells.
std::size_t oracle_occurrences(const Block& b, const Block& c);
Rational oracle_freq(const Block& b, const Block& c);

// |union of tiles| / |window| by set insertion.
Rational oracle_covering(const Quasitiling& t);

// delta|F_j| + delta|F_j| / (1 - delta|F_j|). Throws std::domain_error when
// delta|F_j| >= 1.
Rational lemma24_bound(const Rational& delta, std::size_t fj_size);

// delta(|F_k| + 1) + delta(|F_k| + 2)/(1 - delta) + delta|F_k|/(1 - delta|F_k|).
// Throws std::domain_error when delta >= 1 or delta|F_k| >= 1.
Rational lemma27_bound(const Rational& delta, std::size_t fk_size);

// Minimum of the truncated hull objective over weights on the grid
// step * Z^m in the simplex. Needs m <= 3 and 1/step a positive integer.
Rational grid_hull_distance(const CylinderMeasure& x, const ConvexTarget& k, const FamilyLadder& families,
                            std::size_t depth, const Rational& step);
Rational grid_hull_distance(const Block& x, const ConvexTarget& k, const FamilyLadder& families, std::size_t depth,
                            const Rational& step);

}  // namespace facet::testkit
