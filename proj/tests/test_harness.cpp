#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "hcolor/harness.hpp"
#include "support.hpp"

using namespace hcolor;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hcolor_harness_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<nlohmann::json> run(const ExperimentConfig& c, int* status = nullptr) {
  std::ostringstream out;
  int s = run_command(c, out);
  if (status) *status = s;
  std::vector<nlohmann::json> records;
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line)) records.push_back(nlohmann::json::parse(line));
  return records;
}

std::string run_text(const ExperimentConfig& c) {
  std::ostringstream out;
  run_command(c, out);
  return out.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config hash ignores workers and tracks every other field") {
  ExperimentConfig a;
  a.command = "cone";
  ExperimentConfig b = a;
  b.workers = 8;
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  b.samples = 7;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("validation rejects bad fields before any work") {
  ExperimentConfig c;
  c.command = "fly";
  CHECK(ERROR_CODE(c.validate()) == "invalid_config");
  c.command = "gen";
  CHECK(ERROR_CODE(c.validate()) == "invalid_config");  // no --out
  c.out_path = "x";
  c.kind = "strong:2";
  CHECK(ERROR_CODE(c.validate()) == "invalid_promise");
  c.kind = "strong:4";
  CHECK(ERROR_CODE(c.validate()).empty());
  c.trials = 0;
  CHECK(ERROR_CODE(c.validate()) == "invalid_config");
  ExperimentConfig r;
  r.command = "reduce";
  r.instance_path = "x";
  CHECK(ERROR_CODE(r.validate()) == "invalid_config");  // t = 0
  r.t = 2;
  r.algo = "zz";
  CHECK(ERROR_CODE(r.validate()) == "invalid_config");
}

TEST_CASE("environment overrides") {
  ExperimentConfig c;
  ::setenv("HCOLOR_SEED", "42", 1);
  ::setenv("HCOLOR_WORKERS", "3", 1);
  apply_env_overrides(c);
  CHECK(c.seed == 42);
  CHECK(c.workers == 3);
  ::setenv("HCOLOR_WORKERS", "zero", 1);
  CHECK(ERROR_CODE(apply_env_overrides(c)) == "invalid_config");
  ::unsetenv("HCOLOR_SEED");
  ::unsetenv("HCOLOR_WORKERS");
}

TEST_CASE("records carry the hash and module versions") {
  ExperimentConfig c;
  c.command = "cone";
  c.k = 3;
  c.cone = "strong";
  c.samples = 100000;
  auto records = run(c);
  REQUIRE(records.size() == 1);
  const auto& r = records[0];
  CHECK(r["record"] == "cone");
  CHECK(r["config_hash"] == c.hash());
  CHECK(r["modules"].size() == 7);
  CHECK(r["mc_le_bound"] == true);
  CHECK(r["bound"].get<double>() == doctest::Approx(0.07113968355062796));
}

TEST_CASE("module errors become an error record and exit 1") {
  ExperimentConfig c;
  c.command = "solve";
  c.instance_path = "/nonexistent/instance.txt";
  int status = 0;
  auto records = run(c, &status);
  CHECK(status == 1);
  REQUIRE(records.size() == 1);
  CHECK(records[0]["record"] == "error");
  CHECK(records[0]["code"] == "io_error");
}

TEST_CASE("gen, round, mincolor and reduce are byte-identical on rerun") {
  TempDir dir;
  ExperimentConfig gen;
  gen.command = "gen";
  gen.n = 100;
  gen.m = 500;
  gen.seed = 3;
  gen.out_path = dir.file("h.txt");
  gen.witness_path = dir.file("w.txt");
  const std::string g1 = run_text(gen);
  const std::string file1 = slurp(gen.out_path);
  CHECK(run_text(gen) == g1);
  CHECK(slurp(gen.out_path) == file1);

  ExperimentConfig round;
  round.command = "round";
  round.instance_path = gen.out_path;
  round.witness_path = gen.witness_path;
  round.trials = 500;
  auto rec = run(round);
  CHECK(rec[0]["mean_fraction"].get<double>() < 0.25);
  CHECK(run_text(round) == run_text(round));
  round.workers = 4;
  CHECK(run(round)[0] == rec[0]);

  ExperimentConfig mc;
  mc.command = "mincolor";
  mc.instance_path = gen.out_path;
  mc.eps = 1e-4;
  const std::string m1 = run_text(mc);
  CHECK(m1 == run_text(mc));
  CHECK(m1.find("\"proper\":true") != std::string::npos);

  ExperimentConfig red;
  red.command = "reduce";
  red.instance_path = gen.out_path;
  red.t = 4;
  CHECK(run_text(red) == run_text(red));
}

TEST_CASE("experiment: empty grid, resume and table") {
  TempDir dir;
  ExperimentConfig e;
  e.command = "experiment";
  e.kinds = {};
  e.table_path = dir.file("empty.tsv");
  int status = -1;
  run(e, &status);
  CHECK(status == 0);
  const std::string header = slurp(e.table_path);
  CHECK(std::count(header.begin(), header.end(), '\n') == 1);

  e.kinds = {"strong"};
  e.ks = {3};
  e.ls = {1, 2};
  e.n = 60;
  e.m = 200;
  e.trials = 100;
  e.table_path = dir.file("t.tsv");
  const std::string first = run_text(e);
  const std::string table = slurp(e.table_path);
  CHECK(std::count(table.begin(), table.end(), '\n') == 3);
  // drop one finished cell and resume
  std::ifstream in(e.table_path + ".cells.jsonl");
  std::string line;
  std::getline(in, line);
  in.close();
  std::ofstream(e.table_path + ".cells.jsonl") << line << '\n';
  e.workers = 2;
  CHECK(run_text(e) == first);
  CHECK(slurp(e.table_path) == table);
}
