#include <doctest.h>

#include <filesystem>

#include "facet/io.hpp"

using namespace facet;

namespace {

Shape box1(Coord lo, Coord hi) { return Shape::box(GroupPoint{lo}, GroupPoint{hi}); }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "facet_io_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("corpus round trip") {
  const AlphabetStack stack({2, 3});
  Block a = Block::filled(Shape::box(GroupPoint{0, 0}, GroupPoint{2, 1}), 2, 1);
  a.at(3, 1) = 2;
  const Block b(Shape(2, {GroupPoint{0, 0}, GroupPoint{5, -1}}), 1, {1, 0});
  const Corpus corpus(stack, {a, b});
  const std::string text = io::format_corpus(corpus);
  const Corpus back = io::parse_corpus(text);
  CHECK(back.blocks() == corpus.blocks());
  CHECK(back.stack() == stack);
  CHECK(io::format_corpus(back) == text);
}

TEST_CASE("measure round trip") {
  const AlphabetStack stack({2});
  const CylinderMeasure mu = bernoulli_measure(stack, 1, 1, {{make_rational(1, 3), make_rational(2, 3)}});
  const std::string text = io::format_measure(mu);
  CHECK(io::parse_measure(text) == mu);
  CHECK(text.find("\"1/27\"") != std::string::npos);
}

TEST_CASE("tiling round trip") {
  const Quasitiling t(box1(0, 9), {box1(0, 1), box1(0, 2)}, {{GroupPoint{0}}, {GroupPoint{4}}});
  const Quasitiling back = io::parse_tiling(io::format_tiling(t));
  CHECK(back.window() == t.window());
  CHECK(back.all_centers() == t.all_centers());
}

TEST_CASE("malformed input raises ParseError") {
  CHECK_THROWS_AS(io::parse_corpus("{"), io::ParseError);
  CHECK_THROWS_AS(io::parse_corpus(R"({"format":"facet-measure"})"), io::ParseError);
  CHECK_THROWS_AS(io::parse_corpus(
                      R"({"format":"facet-corpus","d":1,"depth":1,"alphabet":[2],"blocks":[{"min":[0],"max":[2],"depth":1,"rows":[[0,1]]}]})"),
                  io::ParseError);
  CHECK_THROWS_AS(io::parse_measure(
                      R"({"format":"facet-measure","d":1,"depth":1,"alphabet":[2],"min":[-1],"max":[1],"masses":[[[0,0,0],"1/2"]]})"),
                  io::ParseError);
  CHECK_THROWS_AS(io::parse_measure(
                      R"({"format":"facet-measure","d":1,"depth":1,"alphabet":[2],"min":[-1],"max":[1],"masses":[[[0,0,0],0.5]]})"),
                  io::ParseError);
  CHECK_THROWS_AS(io::read_file("/nonexistent/facet/file.json"), std::exception);
}

TEST_CASE("config parsing") {
  const auto dir = scratch("config");
  const Corpus corpus(AlphabetStack({2}), {Block::filled(box1(0, 9), 1)});
  io::write_file(dir / "c.json", io::format_corpus(corpus));
  const std::string text = R"({
    "d": 1, "alphabet": [2], "window": {"min": [0], "max": [63]}, "seed": 5,
    "corpus": ["c.json"],
    "vertices": [{"bernoulli": [["1/2", "1/2"]]}],
    "generator": {"kind": "bernoulli", "probabilities": [["1/4", "3/4"]], "count": 3},
    "schedule": {"eps1": "1/2", "depths": [1], "folner_indices": [1], "tile_sides": [16]},
    "candidates": {"vertex": 0, "budget": 4}
  })";
  const io::ExperimentConfig c = io::parse_config(text, dir);
  CHECK(c.dim == 1);
  CHECK(c.window().size() == 64);
  CHECK(c.seed == std::optional<std::uint64_t>(5));
  CHECK(c.corpus_paths.size() == 1);
  CHECK(c.generator->count == 3);
  CHECK(c.generator->probabilities[0][1] == make_rational(3, 4));
  CHECK(c.schedule->tile_sides == std::vector<Coord>{16});
  CHECK(c.candidates.budget == 4);
  CHECK(c.raw["corpus"][0] == "c.json");
  CHECK(io::vertex_measure(c, 0, 1).value(1, {0, 0, 0}) == make_rational(1, 8));

  CHECK_THROWS_AS(io::parse_config(R"({"d": 1, "alphabet": [2], "window": {"min": [0], "max": [9]}, "corpus": ["missing.json"]})", dir),
                  io::ParseError);
  CHECK_THROWS_AS(io::parse_config(R"({"d": 5, "alphabet": [2], "window": {"min": [0], "max": [9]}})", dir),
                  io::ParseError);
  CHECK_THROWS_AS(io::parse_config(R"({"d": 1, "alphabet": [2], "window": {"min": [0], "max": [9]}, "seed": -1})", dir),
                  io::ParseError);
  const io::ExperimentConfig unseeded =
      io::parse_config(R"({"d": 1, "alphabet": [2], "window": {"min": [0], "max": [9]}})", dir);
  CHECK_THROWS_AS(unseeded.require_seed("gen"), std::invalid_argument);
}

TEST_CASE("csv and hashing") {
  io::Csv csv({"a", "b"});
  csv.row({"1", "2/3"});
  CHECK(csv.str() == "a,b\n1,2/3\n");
  CHECK_THROWS_AS(csv.row({"1"}), std::invalid_argument);
  CHECK(io::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
}
