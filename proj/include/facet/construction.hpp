#pragma once

// Staged replacement of far tile-blocks by representatives, with change logs
// and far-mass accounting.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "facet/measures.hpp"
#include "facet/quasitiling.hpp"
#include "facet/rational.hpp"
#include "facet/symbolic.hpp"

namespace facet {

// delta * s + delta * s / (1 - delta * s), the error of mu_B against the
// frequencies in B for (F_j, delta)-invariant B with s = |F_j|.
// Throws std::domain_error when delta * s >= 1.
Rational block_measure_error_bound(const Rational& delta, std::size_t folner_size);

// delta(s + 1) + delta(s + 2)/(1 - delta) + delta s/(1 - delta s) with s = |F_k|:
// frequencies in a (1 - delta)-tiled window against the tile-weighted mix.
// Throws std::domain_error when delta >= 1 or delta * s >= 1.
Rational concatenation_error_bound(const Rational& delta, std::size_t folner_size);

// Largest m / 10000 with block_measure_error_bound(m / 10000, folner_size) < eps.
// Throws std::domain_error when no positive value qualifies.
Rational derive_delta(const Rational& eps, std::size_t folner_size);

struct Stage {
  Rational eps;
  Rational delta;
  std::size_t depth = 1;          // k_t
  std::size_t folner_index = 1;   // n_t
  Coord tile_side = 1;            // tiles are [0, side)^d boxes
};

class StageSchedule {
 public:
  // Throws std::invalid_argument unless eps is positive and strictly
  // decreasing, delta meets the block-measure relation for F_{n_t}, depths
  // are >= 1 and every tile side is a multiple of the previous one.
  StageSchedule(std::size_t dim, std::vector<Stage> stages);

  // eps_t = eps1 * 2^{1 - t}, delta_t from derive_delta.
  static StageSchedule geometric(std::size_t dim, const Rational& eps1, const std::vector<std::size_t>& depths,
                                 const std::vector<std::size_t>& folner_indices, const std::vector<Coord>& tile_sides);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return stages_.size(); }
  const std::vector<Stage>& stages() const { return stages_; }
  const Stage& stage(std::size_t t) const { return stages_.at(t); }
  Rational eps_sum() const;
  std::size_t max_depth() const;

 private:
  std::size_t dim_;
  std::vector<Stage> stages_;
};

struct Representative {
  Block block;
  HullDistance distance;
};

// Minimises dist_to_hull(block_measure(B, depth), K); ties go to the
// lexicographically smaller block.
Representative select_representative(const Shape& s, const ConvexTarget& k, const std::vector<Block>& candidates,
                                     const FamilyLadder& families, std::size_t depth, const AlphabetStack& stack,
                                     const Rational& tol);

struct TileRecord {
  std::size_t shape = 0;
  GroupPoint center;
  std::size_t cells = 0;
  HullDistance before;
  bool far = false;
  // Distance of the tile after the stage (the representative's when replaced).
  HullDistance after;
};

struct ChangeEntry {
  std::size_t shape = 0;
  GroupPoint center;
  // On the tile's cells, rows [0, depth).
  Block before;
  Block after;
};

struct StageReport {
  std::size_t stage = 0;
  Rational eps;
  Rational delta;
  std::size_t depth = 0;
  Rational covering;
  Rational far_mass_before;
  Rational far_mass_after;
  Rational replaced_fraction;
  std::vector<TileRecord> tiles;  // ordered by center
  std::vector<ChangeEntry> changes;
  HullDistance window_before;
  HullDistance window_after;
  // Largest |fr_C(D) - sum |T_i| mu_{B_i}(D) / sum |T_i|| over D up to the
  // stage depth, with its bound when the tiling is invariant enough.
  Rational mix_deviation;
  std::optional<Rational> mix_bound;
};

// Sum of |T| over tiles whose certified lower distance to K exceeds delta,
// divided by |window|.
Rational far_mass(const Block& config, const Quasitiling& t, const ConvexTarget& k, const Rational& delta,
                  const FamilyLadder& families, std::size_t depth, const Rational& tol);

struct StageInput {
  std::size_t stage = 1;
  Rational eps;
  Rational delta;
  std::size_t depth = 1;
  Rational tol;
};

// Far tiles get rows [0, depth) overwritten by reps.at(shape index); every
// other cell is left alone. Throws std::invalid_argument when a shape in use
// has no representative or a representative has the wrong shape or depth.
std::pair<Block, StageReport> stage_transform(const Block& config, const Quasitiling& t, const ConvexTarget& k,
                                              const std::map<std::size_t, Block>& reps, const FamilyLadder& families,
                                              const StageInput& input);

Block apply_changes(const Block& config, const std::vector<ChangeEntry>& log);
Block revert_changes(const Block& config, const std::vector<ChangeEntry>& log);

struct RunOptions {
  AlphabetStack stack;
  Rational tol;
  // Representative candidates: subblocks of these blocks, or samples from
  // the given row probabilities when no blocks are supplied.
  std::vector<Block> candidate_blocks;
  std::optional<RowProbabilities> candidate_probabilities;
  std::uint64_t seed = 0;
  std::size_t candidate_budget = 64;
};

struct RunResult {
  Block final_config;
  std::vector<StageReport> stages;
  std::vector<Quasitiling> tilings;
  Rational eps_sum;
};

// phi_t = phi~_t o phi_{t-1} over the schedule. Throws std::logic_error if
// consecutive tilings are not congruent or a stage replaces more than its
// far mass.
RunResult run(const Block& config, const StageSchedule& schedule, const ConvexTarget& k, const FamilyLadder& families,
              const RunOptions& options);

}  // namespace facet
