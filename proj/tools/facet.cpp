// facet: command-line front end. Every subcommand writes into
// <out-dir>/<hash>, where the hash covers the command, the configuration and
// the flags, so identical invocations land in (and reproduce) the same tree.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
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
using nlohmann::ordered_json;

namespace {

constexpr int kParseError = 2;
constexpr int kPrecondition = 3;
constexpr int kVerificationFailed = 4;

struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "runs";
  std::string corpus_path;
  std::size_t level = 0;
  std::string a_path;
  std::string b_path;
  std::optional<std::size_t> block_index;
  bool hull = false;
  std::size_t depth = 0;
  std::string min_text;
  std::string max_text;
  std::vector<Coord> sides;
  std::string eps_text = "0";
  std::size_t folner = 1;
};

std::optional<io::ExperimentConfig> load_optional_config(const Options& o) {
  if (o.config_path.empty()) return std::nullopt;
  io::ExperimentConfig c = io::load_config(o.config_path);
  if (o.seed) c.seed = o.seed;
  return c;
}

io::ExperimentConfig require_config(const Options& o, const std::string& command) {
  auto c = load_optional_config(o);
  if (!c) throw std::invalid_argument(command + " needs --config");
  return *c;
}

class RunDir {
 public:
  RunDir(const std::string& command, const Options& o, const std::optional<io::ExperimentConfig>& config,
         ordered_json flags) {
    ordered_json key;
    key["command"] = command;
    key["config"] = config ? config->raw : ordered_json(nullptr);
    std::optional<std::uint64_t> seed = o.seed;
    if (!seed && config) seed = config->seed;
    key["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
    key["flags"] = std::move(flags);
    canonical_ = key.dump();
    path_ = fs::path(o.out_dir) / io::fnv1a_hex(canonical_);
    fs::create_directories(path_);
    write("manifest.json", key.dump(2) + "\n");
  }

  const fs::path& path() const { return path_; }
  void write(const std::string& name, const std::string& text) const { io::write_file(path_ / name, text); }

 private:
  std::string canonical_;
  fs::path path_;
};

Corpus corpus_for(const Options& o, const std::optional<io::ExperimentConfig>& config) {
  if (!o.corpus_path.empty()) return io::load_corpus(o.corpus_path);
  if (config && !config->corpus_paths.empty()) return io::load_corpus(config->corpus_paths.front());
  throw std::invalid_argument("no corpus: pass --corpus or list one in the config");
}

std::string pattern_text(const Pattern& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + std::to_string(p[i]);
  return s;
}

GroupPoint parse_point(const std::string& text) {
  std::vector<Coord> c;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      c.push_back(std::stol(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw io::ParseError("bad coordinate list: " + text);
    }
  }
  if (c.empty() || c.size() > kMaxDim) throw io::ParseError("bad coordinate list: " + text);
  return GroupPoint(std::span<const Coord>(c));
}

// ---------------------------------------------------------------------------

int cmd_gen(const Options& o) {
  const auto config = require_config(o, "gen");
  if (!config.generator) throw std::invalid_argument("gen: the config has no generator");
  const std::uint64_t seed = config.require_seed("gen");
  const RunDir dir("gen", o, config, ordered_json::object());
  const auto& g = *config.generator;
  std::vector<Block> blocks;
  if (g.kind == "bernoulli") {
    BernoulliSampler sampler(config.stack, g.probabilities, seed);
    for (std::size_t i = 0; i < g.count; ++i) blocks.push_back(sampler.next(config.window()));
  } else {
    for (std::size_t i = 0; i < g.count; ++i) {
      blocks.push_back(sample_markov(config.window(), config.stack, g.markov, seed + i));
    }
  }
  dir.write("corpus.json", io::format_corpus(Corpus(config.stack, std::move(blocks))));
  std::cout << (dir.path() / "corpus.json").string() << "\n";
  return 0;
}

int cmd_blocks(const Options& o) {
  const auto config = load_optional_config(o);
  const Corpus corpus = corpus_for(o, config);
  std::size_t level = o.level;
  if (level == 0) level = config ? *std::max_element(config->folner.begin(), config->folner.end()) : 1;
  const RunDir dir("blocks", o, config, {{"corpus", o.corpus_path}, {"level", level}});
  for (std::size_t k = 1; k <= level; ++k) {
    const BlockFamily family = enumerate_family(corpus, k);
    io::Csv csv({"k", "index", "B_k_pattern"});
    for (std::size_t i = 0; i < family.size(); ++i) {
      csv.row({std::to_string(k), std::to_string(i), pattern_text(family.patterns()[i])});
    }
    dir.write("B_" + std::to_string(k) + ".csv", csv.str());
    std::cout << "|B_" << k << "| = " << family.size() << "\n";
  }
  return 0;
}

int cmd_freq(const Options& o) {
  const auto config = load_optional_config(o);
  const Corpus corpus = corpus_for(o, config);
  const std::size_t level = o.level == 0 ? 1 : o.level;
  const RunDir dir("freq", o, config, {{"corpus", o.corpus_path}, {"level", level}});
  io::Csv csv({"block", "k", "pattern", "N_B", "N_F", "fr_B"});
  for (std::size_t b = 0; b < corpus.blocks().size(); ++b) {
    const Block& block = corpus.blocks()[b];
    if (block.depth() < level) continue;
    const PatternTable table = PatternTable::level(block, level);
    for (const auto& [pattern, n] : table.counts()) {
      csv.row({std::to_string(b), std::to_string(level), pattern_text(pattern), std::to_string(n),
               std::to_string(table.embeddings()), to_string(table.freq(pattern))});
    }
  }
  dir.write("fr_B.csv", csv.str());
  std::cout << (dir.path() / "fr_B.csv").string() << "\n";
  return 0;
}

int cmd_measure(const Options& o) {
  const auto config = load_optional_config(o);
  const Corpus corpus = corpus_for(o, config);
  const std::size_t level = o.level == 0 ? 1 : o.level;
  const RunDir dir("measure", o, config, {{"corpus", o.corpus_path}, {"level", level}});
  for (std::size_t b = 0; b < corpus.blocks().size(); ++b) {
    const CylinderMeasure mu = block_measure(corpus.blocks()[b], level, corpus.stack());
    const std::string name = "mu_B_" + std::to_string(b) + ".json";
    dir.write(name, io::format_measure(mu));
    std::cout << (dir.path() / name).string() << "\n";
  }
  return 0;
}

int cmd_dist(const Options& o) {
  const auto config = load_optional_config(o);
  std::optional<CylinderMeasure> a;
  std::optional<Block> block;
  std::optional<AlphabetStack> stack;
  std::size_t dim = 0;
  std::size_t depth = o.depth;
  if (!o.a_path.empty()) {
    a = io::load_measure(o.a_path);
    stack = a->stack();
    dim = a->dim();
    if (depth == 0) depth = a->depth();
  } else if (o.block_index) {
    const Corpus corpus = corpus_for(o, config);
    block = corpus.blocks().at(*o.block_index);
    stack = corpus.stack();
    dim = corpus.dim();
    if (depth == 0) depth = block->depth();
  } else {
    throw std::invalid_argument("dist: pass --a <measure> or --block <index>");
  }

  ordered_json flags{{"a", o.a_path}, {"b", o.b_path}, {"corpus", o.corpus_path}, {"hull", o.hull}, {"depth", depth}};
  flags["block"] = o.block_index ? ordered_json(*o.block_index) : ordered_json(nullptr);
  const RunDir dir("dist", o, config, flags);

  if (o.hull) {
    if (!config || config->vertices.empty()) throw std::invalid_argument("dist --hull needs config vertices");
    std::vector<CylinderMeasure> vertices;
    for (std::size_t i = 0; i < config->vertices.size(); ++i) vertices.push_back(io::vertex_measure(*config, i, depth));
    const ConvexTarget k(std::move(vertices));
    const FamilyLadder families = exhaustive_ladder(stack->truncated(depth), dim, depth);
    const HullDistance d = a ? dist_to_hull(*a, k, families, depth, config->tolerance)
                             : dist_to_hull(*block, k, families, depth, config->tolerance);
    io::Csv csv({"objective", "gap", "lower", "tail", "upper", "sweeps"});
    csv.row({to_string(d.objective), to_string(d.gap), to_string(d.certified_lower()), to_string(d.tail),
             to_string(d.certified_upper()), std::to_string(d.sweeps)});
    dir.write("hull.csv", csv.str());
    io::Csv weights({"vertex", "weight"});
    for (std::size_t i = 0; i < d.weights.size(); ++i) weights.row({std::to_string(i), to_string(d.weights[i])});
    dir.write("hull_weights.csv", weights.str());
    std::cout << "d(x, conv K) in [" << to_decimal(d.certified_lower()) << ", " << to_decimal(d.certified_upper())
              << "]\n";
    return 0;
  }

  if (o.b_path.empty()) throw std::invalid_argument("dist: pass --b <measure> or --hull");
  const CylinderMeasure b = io::load_measure(o.b_path);
  if (!(b.stack().truncated(std::min(depth, b.depth())) == stack->truncated(std::min(depth, b.depth())))) {
    throw std::invalid_argument("dist: inputs use different alphabets");
  }
  const FamilyLadder families = exhaustive_ladder(stack->truncated(depth), dim, depth);
  io::Csv dk({"k", "d_k"});
  for (std::size_t k = 1; k <= depth; ++k) {
    const Rational v = a ? dist_k(*a, b, families.level(k)) : dist_k(*block, b, families.level(k));
    dk.row({std::to_string(k), to_string(v)});
  }
  dir.write("d_k.csv", dk.str());
  const DistanceInterval d = a ? dist(*a, b, families, depth) : dist_block(*block, b, families, depth);
  io::Csv csv({"lower", "tail", "upper"});
  csv.row({to_string(d.lower), to_string(d.tail), to_string(d.upper())});
  dir.write("dist.csv", csv.str());
  std::cout << "d in [" << to_decimal(d.lower) << ", " << to_decimal(d.upper()) << "]\n";
  return 0;
}

int cmd_tile(const Options& o) {
  const auto config = load_optional_config(o);
  Shape window(1);
  if (!o.min_text.empty() || !o.max_text.empty()) {
    window = Shape::box(parse_point(o.min_text), parse_point(o.max_text));
  } else if (config) {
    window = config->window();
  } else {
    throw std::invalid_argument("tile: pass --min/--max or --config");
  }
  if (o.sides.empty()) throw std::invalid_argument("tile: pass at least one --side");
  const Rational eps = parse_rational(o.eps_text);
  std::vector<Shape> shapes;
  for (Coord s : o.sides) {
    if (s < 1) throw std::invalid_argument("tile: sides must be positive");
    std::vector<Coord> hi(window.dim(), s - 1);
    shapes.push_back(Shape::box(GroupPoint::identity(window.dim()), GroupPoint(std::span<const Coord>(hi))));
  }
  const RunDir dir("tile", o, config,
                   {{"min", o.min_text}, {"max", o.max_text}, {"sides", o.sides}, {"eps", o.eps_text},
                    {"folner", o.folner}});
  const GreedyTiling g = greedy_tile(window, shapes, eps);
  const TilingReport v = verify(g.tiling, Shape::folner(o.folner, window.dim()));
  dir.write("tiling.json", io::format_tiling(g.tiling));
  io::Csv report({"tiles", "disjoint", "covered", "covered_decimal", "reached_1_minus_eps"});
  report.row({std::to_string(v.tiles), v.disjoint ? "true" : "false", to_string(v.covered), to_decimal(v.covered),
              g.reached_target ? "true" : "false"});
  dir.write("tiling_report.csv", report.str());
  io::Csv inv({"shape", "side", "invariance_ratio_F_n"});
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    inv.row({std::to_string(i), std::to_string(o.sides[i]), to_string(v.invariance_ratios[i])});
  }
  dir.write("invariance.csv", inv.str());
  std::cout << "tiles " << v.tiles << ", disjoint " << (v.disjoint ? "yes" : "no") << ", covering "
            << to_decimal(v.covered) << "\n";
  return 0;
}

int cmd_construct(const Options& o) {
  const auto config = require_config(o, "construct");
  if (!config.schedule) throw std::invalid_argument("construct: the config has no schedule");
  if (config.vertices.empty()) throw std::invalid_argument("construct: the config lists no vertices");
  const std::uint64_t seed = config.require_seed("construct");
  const auto& s = *config.schedule;
  const StageSchedule schedule =
      StageSchedule::geometric(config.dim, s.eps1, s.depths, s.folner_indices, s.tile_sides);
  const std::size_t depth = schedule.max_depth();
  std::vector<CylinderMeasure> vertices;
  for (std::size_t i = 0; i < config.vertices.size(); ++i) vertices.push_back(io::vertex_measure(config, i, depth));
  const ConvexTarget k(std::move(vertices));
  const FamilyLadder families = exhaustive_ladder(config.stack.truncated(depth), config.dim, depth);

  Block input = [&] {
    if (config.generator) {
      const auto& g = *config.generator;
      if (g.kind == "bernoulli") return sample_bernoulli(config.window(), config.stack, g.probabilities, seed);
      return sample_markov(config.window(), config.stack, g.markov, seed);
    }
    if (config.corpus_paths.empty()) throw std::invalid_argument("construct: needs a generator or a corpus");
    return io::load_corpus(config.corpus_paths.front()).blocks().at(0);
  }();

  RunOptions options{config.stack, config.tolerance, {}, std::nullopt, seed, config.candidates.budget};
  if (config.candidates.vertex) {
    const auto& v = config.vertices.at(*config.candidates.vertex);
    if (!v.bernoulli) throw std::invalid_argument("construct: candidate vertex must be given by Bernoulli parameters");
    options.candidate_probabilities = *v.bernoulli;
  } else {
    for (const auto& p : config.corpus_paths) {
      for (const auto& b : io::load_corpus(p).blocks()) options.candidate_blocks.push_back(b);
    }
  }

  const RunDir dir("construct", o, config, ordered_json::object());
  const RunResult result = run(input, schedule, k, families, options);

  dir.write("input_config.json", io::format_corpus(Corpus(config.stack, {input})));
  dir.write("final_config.json", io::format_corpus(Corpus(config.stack, {result.final_config})));
  io::Csv csv({"stage", "eps_t", "delta_t", "k_t", "covering", "far_mass_before", "far_mass_after",
               "replaced_fraction", "window_lower_before", "window_upper_before", "window_lower_after",
               "window_upper_after", "mix_deviation", "mix_bound"});
  Block replay = result.final_config;
  for (std::size_t t = result.stages.size(); t-- > 0;) replay = revert_changes(replay, result.stages[t].changes);
  for (std::size_t t = 0; t < result.stages.size(); ++t) {
    const StageReport& r = result.stages[t];
    dir.write("stage_" + std::to_string(t + 1) + ".json", io::stage_report_json(r).dump(1) + "\n");
    dir.write("tiling_" + std::to_string(t + 1) + ".json", io::format_tiling(result.tilings[t]));
    csv.row({std::to_string(r.stage), to_string(r.eps), to_string(r.delta), std::to_string(r.depth),
             to_string(r.covering), to_string(r.far_mass_before), to_string(r.far_mass_after),
             to_string(r.replaced_fraction), to_string(r.window_before.certified_lower()),
             to_string(r.window_before.certified_upper()), to_string(r.window_after.certified_lower()),
             to_string(r.window_after.certified_upper()), to_string(r.mix_deviation),
             r.mix_bound ? to_string(*r.mix_bound) : "vacuous"});
    std::cout << "stage " << r.stage << ": far " << to_decimal(r.far_mass_before) << " -> "
              << to_decimal(r.far_mass_after) << ", replaced " << to_decimal(r.replaced_fraction) << "\n";
  }
  dir.write("stages.csv", csv.str());
  io::Csv sum({"stages", "sum_eps_t", "sum_replaced_fraction"});
  Rational replaced = 0;
  for (const auto& r : result.stages) replaced += r.replaced_fraction;
  sum.row({std::to_string(result.stages.size()), to_string(result.eps_sum), to_string(replaced)});
  dir.write("summary.csv", sum.str());
  if (!(replay == input)) throw VerificationFailure("construct: change-log replay does not restore the input");
  std::cout << dir.path().string() << "\n";
  return 0;
}

int cmd_verify(const Options& o) {
  const auto config = load_optional_config(o);
  std::optional<std::uint64_t> seed = o.seed;
  if (!seed && config) seed = config->seed;
  if (!seed) throw std::invalid_argument("verify samples at random and needs a seed (config \"seed\" or --seed)");
  std::optional<Corpus> corpus;
  if (!o.corpus_path.empty() || (config && !config->corpus_paths.empty())) corpus = corpus_for(o, config);
  const RunDir dir("verify", o, config, {{"corpus", o.corpus_path}});

  using namespace facet::testkit;
  std::vector<SuiteResult> results;
  results.push_back(marginal_bound_exhaustive_z());
  results.push_back(marginal_bound_random_z2(*seed, 200));
  results.push_back(marginal_bound_random_z(*seed + 1, 100));
  if (corpus) {
    for (std::size_t j = 1; j <= std::min<std::size_t>(2, corpus->stack().depth()); ++j) {
      results.push_back(marginal_bound_on_blocks("marginal bound corpus j=" + std::to_string(j), corpus->blocks(), j,
                                          corpus->stack()));
    }
  }
  results.push_back(concatenation_suite(*seed + 2, 100));
  results.push_back(premise_suite(*seed + 3, 100));
  results.push_back(metric_axioms_suite(*seed + 4, 50));
  results.push_back(oracle_equivalence_suite(*seed + 5, 60));
  results.push_back(hull_oracle_suite(*seed + 6, 24));

  io::Csv csv({"suite", "instances", "checked", "vacuous", "violations", "worst_slack", "worst_deviation"});
  bool ok = true;
  for (const auto& r : results) {
    const std::string slack = r.worst_slack ? to_string(*r.worst_slack) : "none";
    csv.row({r.name, std::to_string(r.instances), std::to_string(r.checked), std::to_string(r.vacuous),
             std::to_string(r.violations), slack, to_string(r.worst_deviation)});
    std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.checked << "/" << r.instances
              << " checked, " << r.vacuous << " vacuous, " << r.violations << " violations, worst slack "
              << (r.worst_slack ? to_decimal(*r.worst_slack) : std::string("none")) << "\n";
    for (const auto& f : r.failures) std::cout << "  " << f << "\n";
    ok = ok && r.passed();
  }
  dir.write("verify.csv", csv.str());
  if (!ok) throw VerificationFailure("verify: bound violations found");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-window experiments with block frequencies, measures and quasitilings"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Experiment configuration (JSON)");
    sub->add_option("--seed", seed, "Seed; overrides the config");
    sub->add_option("--out-dir", o.out_dir, "Root for run directories")->capture_default_str();
  };
  auto corpus_opt = [&](CLI::App* sub) { sub->add_option("--corpus", o.corpus_path, "Corpus file"); };

  auto* gen = app.add_subcommand("gen", "Sample configurations to a corpus file");
  common(gen);
  auto* blocks = app.add_subcommand("blocks", "Enumerate the families B_k of a corpus");
  common(blocks);
  corpus_opt(blocks);
  blocks->add_option("--level", o.level, "Largest k");
  auto* freq_cmd = app.add_subcommand("freq", "Frequency tables fr_B(C)");
  common(freq_cmd);
  corpus_opt(freq_cmd);
  freq_cmd->add_option("--level", o.level, "Pattern level j");
  auto* measure = app.add_subcommand("measure", "Block measures mu_B");
  common(measure);
  corpus_opt(measure);
  measure->add_option("--level", o.level, "Depth j");
  auto* dist_cmd = app.add_subcommand("dist", "Distances with certified intervals");
  common(dist_cmd);
  corpus_opt(dist_cmd);
  dist_cmd->add_option("--a", o.a_path, "First measure");
  dist_cmd->add_option("--b", o.b_path, "Second measure");
  std::size_t block_index = 0;
  auto* block_opt = dist_cmd->add_option("--block", block_index, "Corpus block used as the first argument");
  dist_cmd->add_flag("--hull", o.hull, "Distance to the hull of the config vertices");
  dist_cmd->add_option("--depth", o.depth, "Truncation depth J");
  auto* tile = app.add_subcommand("tile", "Greedy quasitiling and verification");
  common(tile);
  tile->add_option("--min", o.min_text, "Window lower corner, comma separated");
  tile->add_option("--max", o.max_text, "Window upper corner, comma separated");
  tile->add_option("--side", o.sides, "Box tile side (repeatable)");
  tile->add_option("--eps", o.eps_text, "Target covering 1 - eps");
  tile->add_option("--folner", o.folner, "Folner index for invariance ratios");
  auto* construct = app.add_subcommand("construct", "Staged replacement runs");
  common(construct);
  auto* verify_cmd = app.add_subcommand("verify", "Run the bound suites");
  common(verify_cmd);
  corpus_opt(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParseError;
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed") > 0) o.seed = seed;
  }
  if (block_opt->count() > 0) o.block_index = block_index;

  try {
    if (gen->parsed()) return cmd_gen(o);
    if (blocks->parsed()) return cmd_blocks(o);
    if (freq_cmd->parsed()) return cmd_freq(o);
    if (measure->parsed()) return cmd_measure(o);
    if (dist_cmd->parsed()) return cmd_dist(o);
    if (tile->parsed()) return cmd_tile(o);
    if (construct->parsed()) return cmd_construct(o);
    if (verify_cmd->parsed()) return cmd_verify(o);
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const VerificationFailure& e) {
    std::cerr << e.what() << "\n";
    return kVerificationFailed;
  } catch (const std::logic_error& e) {
    // invalid_argument, domain_error, out_of_range, length_error
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
