#pragma once

// Line-oriented JSON formats for corpora, measures and tilings, experiment
// configuration, stage reports and CSV output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "facet/construction.hpp"
#include "facet/cylinder.hpp"
#include "facet/quasitiling.hpp"
#include "facet/symbolic.hpp"

namespace facet::io {

// Malformed input text or configuration.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);
// Creates parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);

std::string format_corpus(const Corpus& corpus);
Corpus parse_corpus(const std::string& text);
Corpus load_corpus(const std::filesystem::path& path);

std::string format_measure(const CylinderMeasure& measure);
CylinderMeasure parse_measure(const std::string& text);
CylinderMeasure load_measure(const std::filesystem::path& path);

std::string format_tiling(const Quasitiling& tiling);
Quasitiling parse_tiling(const std::string& text);

nlohmann::ordered_json stage_report_json(const StageReport& report);

// CSV with a header row; cells are written verbatim.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return text_; }

 private:
  std::size_t width_;
  std::string text_;
};

struct VertexSpec {
  std::optional<RowProbabilities> bernoulli;
  std::filesystem::path file;
};

struct GeneratorSpec {
  std::string kind = "bernoulli";  // or "markov"
  RowProbabilities probabilities;
  std::vector<MarkovRow> markov;
  std::size_t count = 1;
};

struct ScheduleSpec {
  Rational eps1;
  std::vector<std::size_t> depths;
  std::vector<std::size_t> folner_indices;
  std::vector<Coord> tile_sides;
};

struct CandidateSpec {
  std::optional<std::size_t> vertex;
  std::size_t budget = 64;
};

struct ExperimentConfig {
  std::size_t dim = 1;
  AlphabetStack stack{std::vector<std::uint32_t>{2}};
  GroupPoint window_min;
  GroupPoint window_max;
  std::vector<std::size_t> folner;
  std::vector<std::filesystem::path> corpus_paths;
  std::vector<VertexSpec> vertices;
  std::optional<GeneratorSpec> generator;
  std::optional<ScheduleSpec> schedule;
  CandidateSpec candidates;
  Rational tolerance = make_rational(1, 1000);
  std::optional<std::uint64_t> seed;
  // The document as read, with paths left relative; used for hashing.
  nlohmann::ordered_json raw;

  Shape window() const { return Shape::box(window_min, window_max); }
  // Throws std::invalid_argument when no seed was given.
  std::uint64_t require_seed(const std::string& step) const;
};

// Relative paths resolve against the config file's directory; every
// referenced file must exist and parse.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

CylinderMeasure vertex_measure(const ExperimentConfig& config, std::size_t i, std::size_t depth);

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace facet::io
