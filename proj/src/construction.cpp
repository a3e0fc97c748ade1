#include "facet/construction.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace facet {

Rational block_measure_error_bound(const Rational& delta, std::size_t folner_size) {
  const Rational ds = delta * static_cast<unsigned long>(folner_size);
  if (ds >= 1) throw std::domain_error("block_measure_error_bound: delta * |F_j| must be below 1");
  return ds + ds / (1 - ds);
}

Rational concatenation_error_bound(const Rational& delta, std::size_t folner_size) {
  const Rational ds = delta * static_cast<unsigned long>(folner_size);
  if (delta >= 1 || ds >= 1) throw std::domain_error("concatenation_error_bound: need delta < 1 and delta * |F_k| < 1");
  const auto s = static_cast<unsigned long>(folner_size);
  return delta * (s + 1) + delta * (s + 2) / (1 - delta) + ds / (1 - ds);
}

Rational derive_delta(const Rational& eps, std::size_t folner_size) {
  constexpr long kDenominator = 10000;
  // Largest admissible m satisfies m * |F| < kDenominator; the bound increases with m.
  long lo = 0;
  long hi = (kDenominator - 1) / static_cast<long>(folner_size);
  while (lo < hi) {
    const long mid = (lo + hi + 1) / 2;
    if (block_measure_error_bound(make_rational(mid, kDenominator), folner_size) < eps) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  if (lo == 0) throw std::domain_error("derive_delta: eps " + to_string(eps) + " too small for a positive delta");
  return make_rational(lo, kDenominator);
}

// ---------------------------------------------------------------------------
// StageSchedule

StageSchedule::StageSchedule(std::size_t dim, std::vector<Stage> stages) : dim_(dim), stages_(std::move(stages)) {
  if (dim == 0 || dim > kMaxDim) throw std::invalid_argument("StageSchedule: unsupported dimension");
  if (stages_.empty()) throw std::invalid_argument("StageSchedule: no stages");
  for (std::size_t t = 0; t < stages_.size(); ++t) {
    const Stage& s = stages_[t];
    const std::string where = "StageSchedule stage " + std::to_string(t + 1) + ": ";
    if (s.eps <= 0) throw std::invalid_argument(where + "eps must be positive");
    if (t > 0 && s.eps >= stages_[t - 1].eps) throw std::invalid_argument(where + "eps must strictly decrease");
    if (s.depth == 0) throw std::invalid_argument(where + "depth must be >= 1");
    if (s.delta <= 0) throw std::invalid_argument(where + "delta must be positive");
    const std::size_t fsize = Shape::folner(s.folner_index, dim).size();
    if (s.delta * static_cast<unsigned long>(fsize) >= 1 || block_measure_error_bound(s.delta, fsize) >= s.eps) {
      throw std::invalid_argument(where + "delta violates the block-measure relation with eps");
    }
    if (s.tile_side < 2 * static_cast<Coord>(s.depth) + 1) {
      throw std::invalid_argument(where + "tile side too small for F_depth");
    }
    if (t > 0 && s.tile_side % stages_[t - 1].tile_side != 0) {
      throw std::invalid_argument(where + "tile side must be a multiple of the previous one");
    }
  }
}

StageSchedule StageSchedule::geometric(std::size_t dim, const Rational& eps1, const std::vector<std::size_t>& depths,
                                       const std::vector<std::size_t>& folner_indices,
                                       const std::vector<Coord>& tile_sides) {
  if (depths.size() != folner_indices.size() || depths.size() != tile_sides.size()) {
    throw std::invalid_argument("StageSchedule: depths, Folner indices and tile sides differ in length");
  }
  std::vector<Stage> stages;
  for (std::size_t t = 0; t < depths.size(); ++t) {
    Stage s;
    s.eps = eps1 * pow2(-static_cast<int>(t));
    s.depth = depths[t];
    s.folner_index = folner_indices[t];
    s.tile_side = tile_sides[t];
    s.delta = derive_delta(s.eps, Shape::folner(s.folner_index, dim).size());
    stages.push_back(std::move(s));
  }
  return StageSchedule(dim, std::move(stages));
}

Rational StageSchedule::eps_sum() const {
  Rational sum = 0;
  for (const auto& s : stages_) sum += s.eps;
  return sum;
}

std::size_t StageSchedule::max_depth() const {
  std::size_t d = 0;
  for (const auto& s : stages_) d = std::max(d, s.depth);
  return d;
}

// ---------------------------------------------------------------------------
// Representatives and far mass

Representative select_representative(const Shape& s, const ConvexTarget& k, const std::vector<Block>& candidates,
                                     const FamilyLadder& families, std::size_t depth, const AlphabetStack& stack,
                                     const Rational& tol) {
  if (candidates.empty()) throw std::invalid_argument("select_representative: empty candidate list");
  std::optional<Representative> best;
  for (const auto& c : candidates) {
    if (c.shape() != s) throw std::invalid_argument("select_representative: candidate on the wrong shape");
    if (c.depth() < depth) throw std::invalid_argument("select_representative: candidate shallower than depth");
    const Block b = c.depth() == depth ? c : restrict(c, s, depth);
    HullDistance d = dist_to_hull(block_measure(b, depth, stack), k, families, depth, tol);
    if (!best || d.objective < best->distance.objective ||
        (d.objective == best->distance.objective && lexicographic_less(b, best->block))) {
      best = Representative{b, std::move(d)};
    }
  }
  return *best;
}

namespace {

Block tile_block(const Block& config, const Shape& cells, std::size_t depth) { return restrict(config, cells, depth); }

void check_tiling(const Block& config, const Quasitiling& t) {
  if (!t.window().is_subset_of(config.shape())) {
    throw std::invalid_argument("tiling window is not inside the configuration's shape");
  }
}

}  // namespace

Rational far_mass(const Block& config, const Quasitiling& t, const ConvexTarget& k, const Rational& delta,
                  const FamilyLadder& families, std::size_t depth, const Rational& tol) {
  check_tiling(config, t);
  if (t.window().empty()) return 0;
  std::size_t far = 0;
  for (const auto& tile : t.tiles()) {
    const HullDistance d = dist_to_hull(tile_block(config, tile.cells, depth), k, families, depth, tol);
    if (d.certified_lower() > delta) far += tile.cells.size();
  }
  return ratio(far, t.window().size());
}

// ---------------------------------------------------------------------------
// Stage transform

namespace {

void write_block(Block& target, const Block& source, const Shape& cells) {
  const auto idx = *embedding_indices(target.shape(), cells, GroupPoint::identity(cells.dim()));
  for (std::size_t r = 0; r < source.depth(); ++r) {
    for (std::size_t p = 0; p < idx.size(); ++p) target.at(idx[p], r) = source.at(p, r);
  }
}

// Deviation of the window frequencies from the tile-weighted mix of the tile
// block measures, and the matching bound when it applies.
void mix_echo(const Block& out, const Quasitiling& t, std::size_t depth, const AlphabetStack& stack,
              StageReport& report) {
  const Shape& window = t.window();
  const Shape fdepth = Shape::folner(depth, window.dim());
  const auto tiles = t.tiles();
  report.mix_deviation = 0;
  report.mix_bound.reset();
  if (tiles.empty()) return;
  std::size_t total = 0;
  std::vector<std::pair<std::size_t, CylinderMeasure>> measures;
  for (const auto& tile : tiles) {
    if (count_embeddings(tile.cells, fdepth) == 0) return;
    measures.emplace_back(tile.cells.size(), block_measure(tile_block(out, tile.cells, depth), depth, stack));
    total += tile.cells.size();
  }
  const Block window_block = restrict(out, window, depth);
  for (std::size_t level = 1; level <= depth; ++level) {
    std::map<Pattern, Rational> mixed;
    for (const auto& [cells, mu] : measures) {
      for (const auto& [pattern, mass] : mu.marginal(level)) mixed[pattern] += ratio(cells, total) * mass;
    }
    const PatternTable table = PatternTable::level(window_block, level);
    for (const auto& [pattern, count] : table.counts()) {
      const auto it = mixed.find(pattern);
      const Rational m = it == mixed.end() ? Rational(0) : it->second;
      report.mix_deviation = std::max<Rational>(report.mix_deviation, abs(table.freq(pattern) - m));
    }
    for (const auto& [pattern, m] : mixed) {
      if (table.count(pattern) == 0) report.mix_deviation = std::max(report.mix_deviation, m);
    }
  }
  // One delta serves every level: invariance ratios only grow with the Folner box.
  const TilingReport v = verify(t, fdepth);
  Rational delta = 1 - v.covered;
  for (std::size_t i = 0; i < t.shapes().size(); ++i) {
    if (!t.centers(i).empty()) delta = std::max(delta, v.invariance_ratios[i]);
  }
  const std::size_t fsize = fdepth.size();
  if (delta < 1 && delta * static_cast<unsigned long>(fsize) < 1) {
    report.mix_bound = concatenation_error_bound(delta, fsize) + block_measure_error_bound(delta, fsize);
  }
}

}  // namespace

std::pair<Block, StageReport> stage_transform(const Block& config, const Quasitiling& t, const ConvexTarget& k,
                                              const std::map<std::size_t, Block>& reps, const FamilyLadder& families,
                                              const StageInput& input) {
  check_tiling(config, t);
  const std::size_t depth = input.depth;
  if (depth == 0 || depth > config.depth()) throw std::invalid_argument("stage_transform: depth outside configuration");

  // Representatives and their own tile distances.
  std::map<std::size_t, HullDistance> rep_distance;
  for (std::size_t i = 0; i < t.shapes().size(); ++i) {
    if (t.centers(i).empty()) continue;
    const auto it = reps.find(i);
    if (it == reps.end()) {
      throw std::invalid_argument("stage_transform: missing representative for shape " + std::to_string(i));
    }
    if (it->second.shape() != t.shapes()[i] || it->second.depth() < depth) {
      throw std::invalid_argument("stage_transform: representative for shape " + std::to_string(i) +
                                  " has the wrong shape or depth");
    }
    rep_distance.emplace(i, dist_to_hull(restrict(it->second, it->second.shape(), depth), k, families, depth, input.tol));
  }

  StageReport report;
  report.stage = input.stage;
  report.eps = input.eps;
  report.delta = input.delta;
  report.depth = depth;
  const Shape& window = t.window();
  report.covering = verify(t, Shape::folner(0, window.dim())).covered;
  report.window_before = dist_to_hull(restrict(config, window, depth), k, families, depth, input.tol);

  Block out = config;
  std::size_t far_cells = 0;
  std::size_t far_after = 0;
  for (const auto& tile : t.tiles()) {
    TileRecord rec;
    rec.shape = tile.shape;
    rec.center = tile.center;
    rec.cells = tile.cells.size();
    const Block before = tile_block(config, tile.cells, depth);
    rec.before = dist_to_hull(before, k, families, depth, input.tol);
    rec.far = rec.before.certified_lower() > input.delta;
    if (rec.far) {
      far_cells += rec.cells;
      const Block& rep = reps.at(tile.shape);
      const Block after(tile.cells, depth, restrict(rep, rep.shape(), depth).entries());
      write_block(out, after, tile.cells);
      rec.after = rep_distance.at(tile.shape);
      if (rec.after.certified_lower() > input.delta) far_after += rec.cells;
      if (!(before == after)) report.changes.push_back({tile.shape, tile.center, before, after});
    } else {
      rec.after = rec.before;
    }
    report.tiles.push_back(std::move(rec));
  }
  const std::size_t n = window.size();
  report.far_mass_before = n == 0 ? Rational(0) : ratio(far_cells, n);
  report.far_mass_after = n == 0 ? Rational(0) : ratio(far_after, n);
  report.replaced_fraction = report.far_mass_before;
  report.window_after = dist_to_hull(restrict(out, window, depth), k, families, depth, input.tol);
  mix_echo(out, t, depth, k.vertex(0).stack(), report);
  return {std::move(out), std::move(report)};
}

Block apply_changes(const Block& config, const std::vector<ChangeEntry>& log) {
  Block out = config;
  for (const auto& c : log) write_block(out, c.after, c.after.shape());
  return out;
}

Block revert_changes(const Block& config, const std::vector<ChangeEntry>& log) {
  Block out = config;
  for (auto it = log.rbegin(); it != log.rend(); ++it) write_block(out, it->before, it->before.shape());
  return out;
}

// ---------------------------------------------------------------------------
// Staged run

namespace {

std::vector<Block> gather_candidates(const Shape& s, std::size_t depth, const RunOptions& options, std::size_t stage) {
  std::vector<Block> out;
  std::set<Pattern> seen;
  for (const auto& b : options.candidate_blocks) {
    if (b.depth() < depth) continue;
    for (const auto& g : b.shape()) {
      if (out.size() >= options.candidate_budget) return out;
      auto sub = subblock_at(b, s, g, depth);
      if (sub && seen.insert(sub->entries()).second) out.push_back(std::move(*sub));
    }
  }
  if (options.candidate_blocks.empty() && options.candidate_probabilities) {
    const auto& probs = *options.candidate_probabilities;
    if (probs.size() < depth) throw std::invalid_argument("run: candidate probabilities shallower than stage depth");
    BernoulliSampler sampler(options.stack.truncated(depth),
                             RowProbabilities(probs.begin(), probs.begin() + static_cast<std::ptrdiff_t>(depth)),
                             options.seed + stage);
    for (std::size_t i = 0; i < options.candidate_budget; ++i) {
      Block b = sampler.next(s);
      if (seen.insert(b.entries()).second) out.push_back(std::move(b));
    }
  }
  return out;
}

}  // namespace

RunResult run(const Block& config, const StageSchedule& schedule, const ConvexTarget& k, const FamilyLadder& families,
              const RunOptions& options) {
  if (config.dim() != schedule.dim()) throw std::invalid_argument("run: schedule dimension differs from configuration");
  if (config.depth() < schedule.max_depth()) throw std::invalid_argument("run: configuration shallower than schedule");
  config.validate(options.stack);
  RunResult result{config, {}, {}, schedule.eps_sum()};
  const Shape& window = config.shape();
  const std::size_t dim = schedule.dim();
  for (std::size_t t = 0; t < schedule.size(); ++t) {
    const Stage& stage = schedule.stage(t);
    std::vector<Coord> upper(dim, stage.tile_side - 1);
    const Shape tile = Shape::box(GroupPoint::identity(dim), GroupPoint(std::span<const Coord>(upper)));
    GreedyTiling tiling = greedy_tile(window, {tile}, stage.eps);
    if (!result.tilings.empty() && !congruent(tiling.tiling, result.tilings.back())) {
      throw std::logic_error("run: stage " + std::to_string(t + 1) + " tiling is not congruent with the previous one");
    }
    std::map<std::size_t, Block> reps;
    if (tiling.tiling.tile_count() > 0) {
      const auto candidates = gather_candidates(tile, stage.depth, options, t + 1);
      if (candidates.empty()) throw std::invalid_argument("run: no representative candidates for stage " + std::to_string(t + 1));
      reps.emplace(0, select_representative(tile, k, candidates, families, stage.depth, options.stack, options.tol).block);
    }
    StageInput input{t + 1, stage.eps, stage.delta, stage.depth, options.tol};
    auto [next, report] = stage_transform(result.final_config, tiling.tiling, k, reps, families, input);
    if (report.replaced_fraction > report.far_mass_before) {
      throw std::logic_error("run: stage " + std::to_string(t + 1) + " replaced more than its far mass");
    }
    result.final_config = std::move(next);
    result.stages.push_back(std::move(report));
    result.tilings.push_back(std::move(tiling.tiling));
  }
  return result;
}

}  // namespace facet
