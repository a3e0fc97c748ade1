#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "facet/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = FACET_DATA_DIR;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "facet_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_facet(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(FACET_CLI) + " " + args + " --out-dir " + out.string() + " > " +
                          (out / "stdout.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// The single run directory created under out.
fs::path run_dir(const fs::path& out) {
  fs::path found;
  for (const auto& e : fs::directory_iterator(out)) {
    if (e.is_directory()) {
      REQUIRE(found.empty());
      found = e.path();
    }
  }
  REQUIRE_FALSE(found.empty());
  return found;
}

}  // namespace

TEST_CASE("exit codes") {
  const fs::path out = scratch("codes");
  CHECK(run_facet("frobnicate", out) == 2);
  CHECK(run_facet("tile --min 0 --max x --side 2", out) == 2);
  CHECK(run_facet("tile --min 0 --max 9", out) == 3);
  CHECK(run_facet("gen --config " + (kData / "micro_corpus.json").string(), out) == 2);
  CHECK(run_facet("verify", out) == 3);
  CHECK(run_facet("construct", out) == 3);
}

TEST_CASE("tile writes a full covering of [0,9]^2") {
  const fs::path out = scratch("tile");
  REQUIRE(run_facet("tile --min 0,0 --max 9,9 --side 5", out) == 0);
  const fs::path dir = run_dir(out);
  CHECK(facet::io::read_file(dir / "tiling_report.csv") == "tiles,disjoint,covered,covered_decimal,reached_1_minus_eps\n4,true,1/1,1.000000,true\n");
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "invariance.csv"));
}

TEST_CASE("a measure is at lower distance 0 from itself") {
  const fs::path out = scratch("dist");
  REQUIRE(run_facet("measure --corpus " + (kData / "micro_corpus.json").string(), out) == 0);
  const fs::path m = run_dir(out) / "mu_B_0.json";
  REQUIRE(fs::exists(m));
  const fs::path out2 = scratch("dist2");
  REQUIRE(run_facet("dist --a " + m.string() + " --b " + m.string(), out2) == 0);
  CHECK(facet::io::read_file(run_dir(out2) / "dist.csv") == "lower,tail,upper\n0/1,1/2,1/2\n");
}

TEST_CASE("verify passes on the micro corpus") {
  const fs::path out = scratch("verify");
  CHECK(run_facet("verify --seed 11 --corpus " + (kData / "micro_corpus.json").string(), out) == 0);
  const std::string csv = facet::io::read_file(run_dir(out) / "verify.csv");
  CHECK(csv.find("marginal bound corpus j=1") != std::string::npos);
}

TEST_CASE("blocks and freq on the example config") {
  const fs::path out = scratch("blocks");
  const std::string config = (kData / "example_config.json").string();
  REQUIRE(run_facet("blocks --config " + config + " --level 1", out) == 0);
  CHECK(facet::io::read_file(run_dir(out) / "B_1.csv").rfind("k,index,B_k_pattern\n", 0) == 0);
  const fs::path out2 = scratch("freq");
  REQUIRE(run_facet("freq --config " + config, out2) == 0);
  CHECK(fs::exists(run_dir(out2) / "fr_B.csv"));
  const fs::path out3 = scratch("gen");
  REQUIRE(run_facet("gen --config " + config, out3) == 0);
  CHECK(facet::io::load_corpus(run_dir(out3) / "corpus.json").blocks().size() == 2);
}
