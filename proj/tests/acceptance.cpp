// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "facet/construction.hpp"
#include "facet/frequency.hpp"
#include "facet/io.hpp"
#include "facet/measures.hpp"
#include "facet/quasitiling.hpp"
#include "facet/testkit/suites.hpp"

namespace fs = std::filesystem;
using namespace facet;
using namespace facet::testkit;

namespace {

constexpr std::uint64_t kSeed = 20261015;

// Window size and certified distance found for criterion 5 on the first run.
constexpr Coord kTypicalHalfWidth = 512;
const char* const kTypicalUpper = "25481600736042689/378333825076297728";

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string summary(const SuiteResult& r) {
  std::ostringstream out;
  out << r.name << " " << r.checked << "/" << r.instances << " checked, " << r.violations << " violations";
  if (r.worst_slack) out << ", worst slack " << to_decimal(*r.worst_slack);
  for (const auto& f : r.failures) out << "; " << f;
  return out.str();
}

Outcome suites(const std::vector<SuiteResult>& results, double limit, double elapsed) {
  Outcome o;
  for (const auto& r : results) {
    o.pass = o.pass && r.passed();
    o.detail += (o.detail.empty() ? "" : " | ") + summary(r);
  }
  std::ostringstream t;
  t << " | " << elapsed << " s";
  if (limit > 0) {
    t << " (limit " << limit << " s)";
    o.pass = o.pass && elapsed < limit;
  }
  o.detail += t.str();
  return o;
}

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<SuiteResult> r{marginal_bound_exhaustive_z(), marginal_bound_random_z2(kSeed, 200)};
  return suites(r, 60, seconds_since(start));
}

Outcome criterion2() {
  const auto start = std::chrono::steady_clock::now();
  const SuiteResult r = concatenation_suite(kSeed + 2, 100);
  return suites({r}, 60, seconds_since(start));
}

Outcome criterion3() {
  const auto start = std::chrono::steady_clock::now();
  const SuiteResult r = premise_suite(kSeed + 3, 100);
  return suites({r}, 0, seconds_since(start));
}

Outcome criterion4() {
  const auto start = std::chrono::steady_clock::now();
  const SuiteResult r = metric_axioms_suite(kSeed + 4, 50);
  return suites({r}, 0, seconds_since(start));
}

Outcome criterion5() {
  const Rational eps = make_rational(1, 5);
  const std::size_t j = tail_depth(eps);
  std::vector<std::uint32_t> sizes(j, 1);
  sizes[0] = 2;
  const AlphabetStack binary(sizes);
  RowProbabilities half{{make_rational(1, 2), make_rational(1, 2)}};
  for (std::size_t i = 1; i < j; ++i) half.push_back({Rational(1)});
  const CylinderMeasure target = bernoulli_measure(binary, 1, j, half);
  const FamilyLadder ladder = exhaustive_ladder(binary, 1, j);
  const Rational search_eps = eps / (4 * static_cast<long>(j));

  Outcome o;
  for (Coord n = 64; n <= 1 << 16; n *= 2) {
    const Shape f = Shape::box(GroupPoint{-n}, GroupPoint{n});
    CandidateSource source{nullptr, BernoulliSampler(binary, half, kSeed)};
    const TypicalSearch s = find_typical_block(target, f, j, search_eps, source, 8);
    if (!s.block) continue;
    const DistanceInterval d = dist_block(*s.block, target, ladder, j);
    std::ostringstream out;
    out << "j = " << j << ", C on [-" << n << ", " << n << "], d in [" << to_decimal(d.lower) << ", "
        << to_decimal(d.upper()) << "], upper = " << to_string(d.upper());
    o.detail = out.str();
    o.pass = d.upper() < eps;
    if (kTypicalHalfWidth != 0) {
      o.pass = o.pass && n == kTypicalHalfWidth && to_string(d.upper()) == kTypicalUpper;
      o.detail += o.pass ? ", matches recorded values" : ", differs from recorded values";
    }
    return o;
  }
  o.pass = false;
  o.detail = "no typical block found up to n = 65536";
  return o;
}

Shape cube(std::size_t d, Coord side) {
  std::vector<Coord> hi(d, side - 1);
  return Shape::box(GroupPoint::identity(d), GroupPoint(std::span<const Coord>(hi)));
}

Outcome criterion6() {
  Outcome o;
  const std::vector<std::pair<Coord, Coord>> cases{{10, 2}, {10, 3}, {12, 4}};
  std::size_t count = 0;
  for (std::size_t d = 1; d <= 2; ++d) {
    for (const auto& [l, s] : cases) {
      const GreedyTiling g = greedy_tile(cube(d, l), {cube(d, s)}, 0);
      Rational expected = 1;
      for (std::size_t a = 0; a < d; ++a) expected *= make_rational(s * (l / s), static_cast<unsigned long>(l));
      const TilingReport v = verify(g.tiling, Shape::folner(1, d));
      const bool ok = g.covering == expected && v.covered == expected && v.disjoint;
      if (!ok) o.detail += "(L, s) = (" + std::to_string(l) + ", " + std::to_string(s) + ") failed; ";
      o.pass = o.pass && ok;
      ++count;
    }
    const GreedyTiling coarse = greedy_tile(cube(d, 12), {cube(d, 4)}, 0);
    const GreedyTiling fine = greedy_tile(cube(d, 12), {cube(d, 2)}, 0);
    if (!congruent(coarse.tiling, fine.tiling)) {
      o.pass = false;
      o.detail += "s = 4 not congruent to s = 2 in d = " + std::to_string(d) + "; ";
    }
  }
  o.detail += std::to_string(count) + " coverings exact and disjoint, s = 4 over s = 2 congruent on [0,11]^d";
  return o;
}

Outcome criterion7() {
  const auto start = std::chrono::steady_clock::now();
  const AlphabetStack stack({2, 2});
  const RowProbabilities v0{{make_rational(1, 4), make_rational(3, 4)}, {make_rational(1, 2), make_rational(1, 2)}};
  const RowProbabilities v1{{make_rational(7, 8), make_rational(1, 8)}, {make_rational(1, 8), make_rational(7, 8)}};
  const ConvexTarget k({bernoulli_measure(stack, 1, 2, v0), bernoulli_measure(stack, 1, 2, v1)});
  const FamilyLadder ladder = exhaustive_ladder(stack, 1, 2);
  const Shape window = Shape::box(GroupPoint{0}, GroupPoint{511});

  // Left half typical for a vertex, right half alternating and far from K.
  const Block typical = sample_bernoulli(Shape::box(GroupPoint{0}, GroupPoint{255}), stack, v0, kSeed);
  Block input = Block::filled(window, 2);
  for (std::size_t p = 0; p < window.size(); ++p) {
    for (std::size_t r = 0; r < 2; ++r) {
      input.at(p, r) = p < 256 ? typical.at(p, r) : static_cast<Symbol>((p + r) % 2);
    }
  }

  const StageSchedule schedule = StageSchedule::geometric(1, make_rational(1, 2), {1, 2, 2}, {1, 1, 1}, {16, 32, 64});
  const Rational tol = make_rational(1, 1000);
  RunOptions options{stack, tol, {}, v0, kSeed, 16};
  const RunResult result = run(input, schedule, k, ladder, options);

  Outcome o;
  auto fail = [&](const std::string& why) {
    o.pass = false;
    o.detail += why + "; ";
  };
  if (result.stages.size() != 3) fail("expected 3 stages");
  for (std::size_t t = 1; t < result.tilings.size(); ++t) {
    if (!congruent(result.tilings[t], result.tilings[t - 1])) fail("tilings not congruent at stage " + std::to_string(t + 1));
  }

  Block before = input;
  std::ostringstream stats;
  for (std::size_t t = 0; t < result.stages.size(); ++t) {
    const StageReport& r = result.stages[t];
    const std::string tag = "stage " + std::to_string(t + 1) + ": ";
    const Block after = apply_changes(before, r.changes);

    // (a) differences only inside logged tiles
    std::vector<bool> logged(window.size(), false);
    for (const auto& c : r.changes) {
      for (const auto& g : c.before.shape().points()) logged[*window.index_of(g)] = true;
    }
    for (std::size_t p = 0; p < window.size(); ++p) {
      for (std::size_t row = 0; row < 2; ++row) {
        if (before.at(p, row) != after.at(p, row) && !logged[p]) fail(tag + "change outside a logged tile");
      }
    }

    // (c) every tile within delta_t (certified) or equal to its representative
    std::map<GroupPoint, const ChangeEntry*> by_center;
    for (const auto& c : r.changes) by_center[c.center] = &c;
    const std::size_t depth = r.depth;
    std::size_t near = 0, replaced = 0;
    for (const Tile& tile : result.tilings[t].tiles()) {
      const Block block = restrict(after, tile.cells, depth);
      const HullDistance h = dist_to_hull(block, k, ladder, depth, tol);
      if (h.certified_lower() <= r.delta) {
        ++near;
        continue;
      }
      const auto it = by_center.find(tile.center);
      if (it != by_center.end() && restrict(it->second->after, tile.cells, depth) == block) {
        ++replaced;
      } else {
        fail(tag + "tile far from K and not a representative");
      }
    }

    // (d) replaced fraction within far mass
    if (r.replaced_fraction > r.far_mass_before) fail(tag + "replaced more than far mass");
    const Rational recomputed = far_mass(before, result.tilings[t], k, r.delta, ladder, depth, tol);
    if (recomputed != r.far_mass_before) fail(tag + "far mass differs from recomputation");

    stats << "t" << (t + 1) << " far " << to_decimal(r.far_mass_before) << " replaced "
          << to_decimal(r.replaced_fraction) << " (" << near << " near, " << replaced << " representative); ";
    before = after;
  }
  if (!(before == result.final_config)) fail("applying the change logs does not give the final configuration");

  // (b) replay restores the input
  Block replay = result.final_config;
  for (std::size_t t = result.stages.size(); t-- > 0;) replay = revert_changes(replay, result.stages[t].changes);
  if (!(replay == input)) fail("replay does not restore the input");
  if (io::format_corpus(Corpus(stack, {replay})) != io::format_corpus(Corpus(stack, {input}))) {
    fail("replayed input differs byte-wise");
  }

  const double elapsed = seconds_since(start);
  if (elapsed >= 120) fail("took longer than 120 s");
  std::ostringstream t;
  t << elapsed << " s";
  o.detail += stats.str() + t.str();
  return o;
}

Outcome criterion8() {
  const auto start = std::chrono::steady_clock::now();
  const SuiteResult r = oracle_equivalence_suite(kSeed + 5, 100);
  return suites({r}, 0, seconds_since(start));
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(FACET_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = io::read_file(e.path());
  }
  return files;
}

Outcome criterion9() {
  const fs::path base = fs::temp_directory_path() / "facet_acceptance";
  fs::remove_all(base);
  const std::string corpus = (fs::path(FACET_DATA_DIR) / "micro_corpus.json").string();
  const std::string config = (fs::path(FACET_DATA_DIR) / "example_config.json").string();
  Outcome o;
  std::size_t files = 0;
  for (const std::string run : {"a", "b"}) {
    const fs::path out = base / run;
    fs::create_directories(out);
    const int v = run_cli("verify --seed " + std::to_string(kSeed) + " --corpus " + corpus + " --out-dir " +
                              (out / "runs").string(),
                          out / "verify.log");
    const int c = run_cli("construct --config " + config + " --out-dir " + (out / "runs").string(), out / "construct.log");
    if (v != 0 || c != 0) {
      o.pass = false;
      o.detail += "run " + run + " exit codes " + std::to_string(v) + ", " + std::to_string(c) + "; ";
    }
  }
  const auto a = tree(base / "a" / "runs");
  const auto b = tree(base / "b" / "runs");
  files = a.size();
  if (a != b) {
    o.pass = false;
    o.detail += "output trees differ; ";
  }
  // Console output names the run directory; compare it with the roots aligned.
  for (const std::string log : {"verify.log", "construct.log"}) {
    std::string la = io::read_file(base / "a" / log);
    const std::string lb = io::read_file(base / "b" / log);
    const std::string ra = (base / "a").string(), rb = (base / "b").string();
    for (std::size_t at = la.find(ra); at != std::string::npos; at = la.find(ra, at + rb.size())) la.replace(at, ra.size(), rb);
    if (la != lb) {
      o.pass = false;
      o.detail += log + " differs; ";
    }
  }
  o.detail += std::to_string(files) + " files compared";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 block-measure bound", criterion1},
      {"2 concatenation bound", criterion2},
      {"3 per-pattern premise implies distance below eps", criterion3},
      {"4 metric axioms", criterion4},
      {"5 typical block for Bernoulli(1/2)", criterion5},
      {"6 quasitiler coverings and congruence", criterion6},
      {"7 stage transform", criterion7},
      {"8 oracle equivalence", criterion8},
      {"9 determinism", criterion9},
  };
  bool all = true;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
