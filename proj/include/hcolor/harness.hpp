#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace hcolor {

/// Every knob of every command. Fields a command does not use are ignored
/// but still enter the config hash.
struct ExperimentConfig {
  std::string command;  // gen | solve | round | cone | mincolor | reduce | gadget | experiment

  // instance
  std::string kind = "strong:4";
  int k = 3;
  int n = 60;
  int m = 120;

  // solver
  int dim = 0;
  double eps = 1e-6;
  int max_iters = 20000;

  // rounding
  int trials = 100;
  double tau = 0;

  // degree reduction / min-coloring
  std::string algo = "sc";  // sc | ld | ld-warmup | rc
  int t = 0;
  int c = 2;

  // cone
  std::string cone = "symmetric";  // symmetric | strong | file
  double cone_l = 1;
  long long samples = 1000000;

  // gadgets
  std::string gadget = "maxcut";  // maxcut | compose
  double graph_p = 0.2;
  int compose_s = 2;
  long long compose_count = 0;  // 0: exact composition

  // experiment grid
  std::vector<std::string> kinds = {"strong"};
  std::vector<int> ks;
  std::vector<int> ls;

  std::uint64_t seed = 0;
  int workers = 1;  // never changes results; excluded from the hash

  // files
  std::string instance_path;
  std::string witness_path;
  std::string solution_path;
  std::string coloring_path;
  std::string graph_path;
  std::string gram_path;
  std::string out_path;
  std::string table_path;

  nlohmann::json to_json() const;
  /// FNV-1a of the canonical JSON form, as 16 hex digits.
  std::string hash() const;
  /// Throws Error("invalid_config") on the first bad field.
  void validate() const;
};

/// HCOLOR_SEED and HCOLOR_WORKERS override the matching fields when set.
void apply_env_overrides(ExperimentConfig& config);

/// Runs one command, writing one JSON record per line to `records`. Returns
/// the process exit status; module errors become an error record and exit 1.
int run_command(const ExperimentConfig& config, std::ostream& records);

}  // namespace hcolor
