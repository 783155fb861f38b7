#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hcolor/common.hpp"
#include "hcolor/harness.hpp"

namespace {

void add_flags(CLI::App* sub, hcolor::ExperimentConfig& c) {
  sub->add_option("--kind", c.kind, "promise: strong:CHI, rainbow:CHI or discrepancy:L");
  sub->add_option("-k,--k", c.k, "edge size");
  sub->add_option("-n,--n", c.n, "vertices");
  sub->add_option("-m,--m", c.m, "edges");
  sub->add_option("--dim", c.dim, "solver dimension (0: default)");
  sub->add_option("--eps", c.eps, "solver feasibility tolerance");
  sub->add_option("--max-iters", c.max_iters, "solver iteration budget");
  sub->add_option("--trials", c.trials, "hyperplane rounding trials");
  sub->add_option("--tau", c.tau, "threshold for the independent-set variant");
  sub->add_option("--algo", c.algo, "sc | ld | ld-warmup | rc");
  sub->add_option("-t,--t", c.t, "degree threshold (mincolor: 0 means max degree)");
  sub->add_option("-c,--c", c.c, "reduction constant");
  sub->add_option("--cone", c.cone, "symmetric | strong | file");
  sub->add_option("--cone-l", c.cone_l, "slack of the strong cone");
  sub->add_option("--samples", c.samples, "Monte Carlo samples");
  sub->add_option("--gadget", c.gadget, "maxcut | compose");
  sub->add_option("--graph-p", c.graph_p, "edge probability of the random graph");
  sub->add_option("--compose-s", c.compose_s, "cloud half size s");
  sub->add_option("--compose-count", c.compose_count, "sampled edges per source edge (0: exact)");
  sub->add_option("--kinds", c.kinds, "experiment promise families")->delimiter(',');
  sub->add_option("--ks", c.ks, "experiment edge sizes")->delimiter(',');
  sub->add_option("--ls", c.ls, "experiment slacks")->delimiter(',');
  sub->add_option("--seed", c.seed, "master seed");
  sub->add_option("--workers", c.workers, "worker threads");
  sub->add_option("--instance", c.instance_path, "hypergraph file");
  sub->add_option("--witness", c.witness_path, "coloring file of the planted witness");
  sub->add_option("--solution", c.solution_path, "vector solution file");
  sub->add_option("--coloring", c.coloring_path, "output coloring file");
  sub->add_option("--graph", c.graph_path, "graph file");
  sub->add_option("--gram", c.gram_path, "gram matrix file");
  sub->add_option("--out", c.out_path, "output file");
  sub->add_option("--table", c.table_path, "experiment table (TSV)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hypergraph coloring with promises"};
  app.require_subcommand(1);
  hcolor::ExperimentConfig config;
  std::string records_path;
  app.add_option("--records", records_path, "write records here instead of stdout");

  const char* commands[][2] = {
      {"gen", "generate a planted instance"},
      {"solve", "solve the vector relaxation"},
      {"round", "hyperplane rounding of a vector solution"},
      {"cone", "Gaussian measure of an edge cone"},
      {"mincolor", "full minimum-coloring pipeline"},
      {"reduce", "degree reduction only"},
      {"gadget", "hardness gadgets"},
      {"experiment", "sweep over (kind, k, l)"},
  };
  for (auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_flags(sub, config);
    sub->callback([&config, name = std::string(name)] { config.command = name; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    hcolor::apply_env_overrides(config);
  } catch (const hcolor::Error& e) {
    std::cerr << e.code() << ": " << e.what() << '\n';
    return 1;
  }
  if (records_path.empty()) return hcolor::run_command(config, std::cout);
  std::ofstream out(records_path);
  if (!out) {
    std::cerr << "io_error: cannot write " << records_path << '\n';
    return 1;
  }
  return hcolor::run_command(config, out);
}
