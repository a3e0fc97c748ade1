#include "facet/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace facet::io {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

namespace {

std::string point_json(const GroupPoint& g) {
  std::string s = "[";
  for (std::size_t a = 0; a < g.dim(); ++a) s += (a ? "," : "") + std::to_string(g[a]);
  return s + "]";
}

std::string points_json(const Shape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + point_json(s[i]);
  return out + "]";
}

std::string sizes_json(const AlphabetStack& stack) {
  std::string s = "[";
  for (std::size_t r = 0; r < stack.depth(); ++r) s += (r ? "," : "") + std::to_string(stack.size(r));
  return s + "]";
}

std::string row_json(const Block& b, std::size_t r) {
  std::string s = "[";
  for (std::size_t p = 0; p < b.size(); ++p) s += (p ? "," : "") + std::to_string(b.at(p, r));
  return s + "]";
}

std::string shape_fields(const Shape& s) {
  if (s.is_box()) return "\"min\":" + point_json(s.lower()) + ",\"max\":" + point_json(s.upper());
  return "\"points\":" + points_json(s);
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

template <class T>
T get(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(what + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(what + ": bad \"" + key + "\": " + e.what());
  }
}

void expect_format(const json& j, const std::string& format) {
  if (get<std::string>(j, "format", format) != format) throw ParseError("expected format " + format);
}

GroupPoint point_from(const json& j, std::size_t dim, const std::string& what) {
  if (!j.is_array() || j.size() != dim) throw ParseError(what + ": point of wrong dimension");
  std::vector<Coord> c;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ParseError(what + ": non-integer coordinate");
    c.push_back(x.get<Coord>());
  }
  return GroupPoint(std::span<const Coord>(c));
}

Shape shape_from(const json& j, std::size_t dim, const std::string& what) {
  if (j.contains("points")) {
    std::vector<GroupPoint> pts;
    for (const auto& p : j.at("points")) pts.push_back(point_from(p, dim, what));
    return Shape(dim, std::move(pts));
  }
  if (!j.contains("min") || !j.contains("max")) throw ParseError(what + ": shape needs min/max or points");
  return Shape::box(point_from(j.at("min"), dim, what), point_from(j.at("max"), dim, what));
}

Rational rational_from(const json& j, const std::string& what) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(what + ": " + e.what());
  }
  throw ParseError(what + ": rationals are written as \"p/q\" strings");
}

RowProbabilities probabilities_from(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected a list of rows");
  RowProbabilities out;
  for (const auto& row : j) {
    if (!row.is_array()) throw ParseError(what + ": expected a list of probabilities");
    std::vector<Rational> r;
    for (const auto& x : row) r.push_back(rational_from(x, what));
    out.push_back(std::move(r));
  }
  return out;
}

AlphabetStack stack_from(const json& j, const std::string& what) {
  try {
    return AlphabetStack(get<std::vector<std::uint32_t>>(j, "alphabet", what));
  } catch (const std::invalid_argument& e) {
    throw ParseError(what + ": " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Corpus

std::string format_corpus(const Corpus& corpus) {
  std::string out = "{\"format\":\"facet-corpus\",\"d\":" + std::to_string(corpus.dim()) +
                    ",\"depth\":" + std::to_string(corpus.stack().depth()) +
                    ",\"alphabet\":" + sizes_json(corpus.stack()) + ",\"blocks\":[\n";
  const auto& blocks = corpus.blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    out += "{" + shape_fields(b.shape()) + ",\"depth\":" + std::to_string(b.depth()) + ",\"rows\":[\n";
    for (std::size_t r = 0; r < b.depth(); ++r) out += row_json(b, r) + (r + 1 < b.depth() ? ",\n" : "\n");
    out += std::string("]}") + (i + 1 < blocks.size() ? ",\n" : "\n");
  }
  return out + "]}\n";
}

Corpus parse_corpus(const std::string& text) {
  const std::string what = "corpus";
  const json j = parse_json(text, what);
  expect_format(j, "facet-corpus");
  const auto dim = get<std::size_t>(j, "d", what);
  if (dim == 0 || dim > kMaxDim) throw ParseError("corpus: unsupported dimension");
  AlphabetStack stack = stack_from(j, what);
  std::vector<Block> blocks;
  if (!j.contains("blocks") || !j.at("blocks").is_array()) throw ParseError("corpus: missing block list");
  for (const auto& jb : j.at("blocks")) {
    Shape shape = shape_from(jb, dim, what);
    const auto depth = get<std::size_t>(jb, "depth", what);
    const auto rows = get<std::vector<std::vector<long>>>(jb, "rows", what);
    if (rows.size() != depth) throw ParseError("corpus: row count differs from depth");
    Pattern entries;
    for (const auto& row : rows) {
      if (row.size() != shape.size()) throw ParseError("corpus: row length differs from window size");
      for (long v : row) {
        if (v < 0 || v > 0xffff) throw ParseError("corpus: symbol out of range");
        entries.push_back(static_cast<Symbol>(v));
      }
    }
    blocks.emplace_back(std::move(shape), depth, std::move(entries));
  }
  try {
    return Corpus(std::move(stack), std::move(blocks));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("corpus: ") + e.what());
  }
}

Corpus load_corpus(const std::filesystem::path& path) { return parse_corpus(read_file(path)); }

// ---------------------------------------------------------------------------
// Measure

std::string format_measure(const CylinderMeasure& measure) {
  const Shape& base = measure.base();
  std::string out = "{\"format\":\"facet-measure\",\"d\":" + std::to_string(measure.dim()) +
                    ",\"depth\":" + std::to_string(measure.depth()) +
                    ",\"alphabet\":" + sizes_json(measure.stack()) + ",\"min\":" + point_json(base.lower()) +
                    ",\"max\":" + point_json(base.upper()) + ",\"masses\":[\n";
  std::size_t i = 0;
  for (const auto& [pattern, mass] : measure.masses()) {
    out += "[[";
    for (std::size_t p = 0; p < pattern.size(); ++p) out += (p ? "," : "") + std::to_string(pattern[p]);
    out += "],\"" + to_string(mass) + "\"]" + (++i < measure.masses().size() ? ",\n" : "\n");
  }
  return out + "]}\n";
}

CylinderMeasure parse_measure(const std::string& text) {
  const std::string what = "measure";
  const json j = parse_json(text, what);
  expect_format(j, "facet-measure");
  const auto dim = get<std::size_t>(j, "d", what);
  if (dim == 0 || dim > kMaxDim) throw ParseError("measure: unsupported dimension");
  const auto depth = get<std::size_t>(j, "depth", what);
  AlphabetStack stack = stack_from(j, what);
  std::map<Pattern, Rational> masses;
  if (!j.contains("masses") || !j.at("masses").is_array()) throw ParseError("measure: missing mass list");
  for (const auto& entry : j.at("masses")) {
    if (!entry.is_array() || entry.size() != 2) throw ParseError("measure: entries are [pattern, \"p/q\"] pairs");
    Pattern p;
    for (const auto& v : entry[0]) {
      if (!v.is_number_unsigned() || v.get<unsigned long>() > 0xffff) throw ParseError("measure: bad symbol");
      p.push_back(static_cast<Symbol>(v.get<unsigned long>()));
    }
    if (!masses.emplace(std::move(p), rational_from(entry[1], what)).second) {
      throw ParseError("measure: repeated pattern");
    }
  }
  try {
    return CylinderMeasure(std::move(stack), dim, depth, std::move(masses));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("measure: ") + e.what());
  }
}

CylinderMeasure load_measure(const std::filesystem::path& path) { return parse_measure(read_file(path)); }

// ---------------------------------------------------------------------------
// Tiling

std::string format_tiling(const Quasitiling& tiling) {
  const Shape& w = tiling.window();
  std::string out = "{\"format\":\"facet-tiling\",\"d\":" + std::to_string(w.dim()) + ",\"window\":{" +
                    shape_fields(w) + "},\n\"shapes\":[\n";
  const auto& shapes = tiling.shapes();
  for (std::size_t i = 0; i < shapes.size(); ++i) out += points_json(shapes[i]) + (i + 1 < shapes.size() ? ",\n" : "\n");
  out += "],\n\"centers\":[\n";
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    out += "[";
    const auto& cs = tiling.centers(i);
    for (std::size_t c = 0; c < cs.size(); ++c) out += (c ? "," : "") + point_json(cs[c]);
    out += std::string("]") + (i + 1 < shapes.size() ? ",\n" : "\n");
  }
  return out + "]}\n";
}

Quasitiling parse_tiling(const std::string& text) {
  const std::string what = "tiling";
  const json j = parse_json(text, what);
  expect_format(j, "facet-tiling");
  const auto dim = get<std::size_t>(j, "d", what);
  if (dim == 0 || dim > kMaxDim) throw ParseError("tiling: unsupported dimension");
  if (!j.contains("window")) throw ParseError("tiling: missing window");
  Shape window = shape_from(j.at("window"), dim, what);
  std::vector<Shape> shapes;
  std::vector<std::vector<GroupPoint>> centers;
  for (const auto& js : j.value("shapes", json::array())) {
    std::vector<GroupPoint> pts;
    for (const auto& p : js) pts.push_back(point_from(p, dim, what));
    shapes.emplace_back(dim, std::move(pts));
  }
  for (const auto& jc : j.value("centers", json::array())) {
    std::vector<GroupPoint> cs;
    for (const auto& p : jc) cs.push_back(point_from(p, dim, what));
    centers.push_back(std::move(cs));
  }
  try {
    return Quasitiling(std::move(window), std::move(shapes), std::move(centers));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("tiling: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Stage reports

ordered_json stage_report_json(const StageReport& report) {
  auto distance = [](const HullDistance& d) {
    ordered_json j;
    j["objective"] = to_string(d.objective);
    j["gap"] = to_string(d.gap);
    j["lower"] = to_string(d.certified_lower());
    j["upper"] = to_string(d.certified_upper());
    ordered_json w = ordered_json::array();
    for (const auto& x : d.weights) w.push_back(to_string(x));
    j["weights"] = w;
    return j;
  };
  auto rows = [](const Block& b) {
    ordered_json j = ordered_json::array();
    for (std::size_t r = 0; r < b.depth(); ++r) {
      std::vector<unsigned> row;
      for (std::size_t p = 0; p < b.size(); ++p) row.push_back(b.at(p, r));
      j.push_back(row);
    }
    return j;
  };
  auto coords = [](const GroupPoint& g) { return std::vector<Coord>(g.coords().begin(), g.coords().end()); };

  ordered_json j;
  j["stage"] = report.stage;
  j["eps"] = to_string(report.eps);
  j["delta"] = to_string(report.delta);
  j["depth"] = report.depth;
  j["covering"] = to_string(report.covering);
  j["far_mass_before"] = to_string(report.far_mass_before);
  j["far_mass_after"] = to_string(report.far_mass_after);
  j["replaced_fraction"] = to_string(report.replaced_fraction);
  j["window_before"] = distance(report.window_before);
  j["window_after"] = distance(report.window_after);
  j["mix_deviation"] = to_string(report.mix_deviation);
  j["mix_bound"] = report.mix_bound ? ordered_json(to_string(*report.mix_bound)) : ordered_json(nullptr);
  ordered_json tiles = ordered_json::array();
  for (const auto& t : report.tiles) {
    ordered_json jt;
    jt["shape"] = t.shape;
    jt["center"] = coords(t.center);
    jt["cells"] = t.cells;
    jt["far"] = t.far;
    jt["before_lower"] = to_string(t.before.certified_lower());
    jt["before_upper"] = to_string(t.before.certified_upper());
    jt["after_lower"] = to_string(t.after.certified_lower());
    jt["after_upper"] = to_string(t.after.certified_upper());
    tiles.push_back(std::move(jt));
  }
  j["tiles"] = std::move(tiles);
  ordered_json changes = ordered_json::array();
  for (const auto& c : report.changes) {
    ordered_json jc;
    jc["shape"] = c.shape;
    jc["center"] = coords(c.center);
    jc["before"] = rows(c.before);
    jc["after"] = rows(c.after);
    changes.push_back(std::move(jc));
  }
  j["changes"] = std::move(changes);
  return j;
}

// ---------------------------------------------------------------------------
// CSV

Csv::Csv(std::vector<std::string> header) : width_(header.size()) { row(header); }

void Csv::row(const std::vector<std::string>& cells) {
  if (text_.size() > 0 && cells.size() != width_) throw std::invalid_argument("Csv: row width differs from header");
  for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
  text_ += "\n";
}

// ---------------------------------------------------------------------------
// Configuration

std::uint64_t ExperimentConfig::require_seed(const std::string& step) const {
  if (!seed) throw std::invalid_argument(step + " samples at random and needs a seed (config \"seed\" or --seed)");
  return *seed;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  const std::string what = "config";
  ExperimentConfig c;
  c.raw = [&] {
    try {
      return ordered_json::parse(text);
    } catch (const json::exception& e) {
      throw ParseError(what + ": " + e.what());
    }
  }();
  const json j = parse_json(text, what);
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative()) path = base_dir / path;
    if (!std::filesystem::exists(path)) throw ParseError("config: referenced file " + p + " does not exist");
    return path;
  };

  c.dim = get<std::size_t>(j, "d", what);
  if (c.dim == 0 || c.dim > kMaxDim) throw ParseError("config: d must be in 1..4");
  c.stack = stack_from(j, what);
  if (!j.contains("window")) throw ParseError("config: missing window");
  c.window_min = point_from(j.at("window").value("min", json()), c.dim, "config window");
  c.window_max = point_from(j.at("window").value("max", json()), c.dim, "config window");
  for (std::size_t a = 0; a < c.dim; ++a) {
    if (c.window_max[a] < c.window_min[a]) throw ParseError("config: window max below min");
  }
  c.folner = j.contains("folner") ? get<std::vector<std::size_t>>(j, "folner", what) : std::vector<std::size_t>{1};
  if (c.folner.empty()) throw ParseError("config: empty Folner index list");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ParseError("config: seed must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("tolerance")) c.tolerance = rational_from(j.at("tolerance"), "config tolerance");
  if (c.tolerance <= 0) throw ParseError("config: tolerance must be positive");

  for (const auto& p : j.value("corpus", std::vector<std::string>{})) {
    c.corpus_paths.push_back(resolve(p));
    const Corpus corpus = load_corpus(c.corpus_paths.back());
    if (corpus.dim() != c.dim) throw ParseError("config: corpus " + p + " has the wrong dimension");
  }
  for (const auto& v : j.value("vertices", json::array())) {
    VertexSpec spec;
    if (v.contains("bernoulli")) {
      spec.bernoulli = probabilities_from(v.at("bernoulli"), "config vertex");
    } else if (v.contains("file")) {
      spec.file = resolve(get<std::string>(v, "file", what));
      if (load_measure(spec.file).dim() != c.dim) throw ParseError("config: vertex measure of the wrong dimension");
    } else {
      throw ParseError("config: a vertex needs \"bernoulli\" or \"file\"");
    }
    c.vertices.push_back(std::move(spec));
  }
  if (j.contains("generator")) {
    const json& g = j.at("generator");
    GeneratorSpec spec;
    spec.kind = get<std::string>(g, "kind", what);
    spec.count = g.value("count", std::size_t{1});
    if (spec.kind == "bernoulli") {
      spec.probabilities = probabilities_from(g.value("probabilities", json()), "config generator");
    } else if (spec.kind == "markov") {
      for (const auto& row : g.value("rows", json::array())) {
        MarkovRow m;
        const auto initial = probabilities_from(json::array({row.value("initial", json())}), "config generator");
        m.initial = initial.front();
        m.transition = probabilities_from(row.value("transition", json()), "config generator");
        spec.markov.push_back(std::move(m));
      }
    } else {
      throw ParseError("config: generator kind must be bernoulli or markov");
    }
    c.generator = std::move(spec);
  }
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    ScheduleSpec spec;
    spec.eps1 = rational_from(s.value("eps1", json()), "config schedule eps1");
    spec.depths = get<std::vector<std::size_t>>(s, "depths", what);
    spec.folner_indices = get<std::vector<std::size_t>>(s, "folner_indices", what);
    spec.tile_sides = get<std::vector<Coord>>(s, "tile_sides", what);
    c.schedule = std::move(spec);
  }
  if (j.contains("candidates")) {
    const json& s = j.at("candidates");
    if (s.contains("vertex")) c.candidates.vertex = get<std::size_t>(s, "vertex", what);
    c.candidates.budget = s.value("budget", std::size_t{64});
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

CylinderMeasure vertex_measure(const ExperimentConfig& config, std::size_t i, std::size_t depth) {
  const VertexSpec& v = config.vertices.at(i);
  if (v.bernoulli) return bernoulli_measure(config.stack, config.dim, depth, *v.bernoulli);
  const CylinderMeasure m = load_measure(v.file);
  if (m.depth() != depth) {
    throw std::invalid_argument("vertex " + std::to_string(i) + " has depth " + std::to_string(m.depth()) +
                                ", expected " + std::to_string(depth));
  }
  return m;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace facet::io
