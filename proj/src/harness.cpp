#include "hcolor/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hcolor/cone_measure.hpp"
#include "hcolor/instance_forge.hpp"
#include "hcolor/mincolor.hpp"
#include "hcolor/rounding.hpp"
#include "hcolor/sdp_relax.hpp"

namespace hcolor {

using nlohmann::json;

nlohmann::json ExperimentConfig::to_json() const {
  return json{{"command", command},
              {"kind", kind},
              {"k", k},
              {"n", n},
              {"m", m},
              {"dim", dim},
              {"eps", eps},
              {"max_iters", max_iters},
              {"trials", trials},
              {"tau", tau},
              {"algo", algo},
              {"t", t},
              {"c", c},
              {"cone", cone},
              {"cone_l", cone_l},
              {"samples", samples},
              {"gadget", gadget},
              {"graph_p", graph_p},
              {"compose_s", compose_s},
              {"compose_count", compose_count},
              {"kinds", kinds},
              {"ks", ks},
              {"ls", ls},
              {"seed", seed},
              {"instance", instance_path},
              {"witness", witness_path},
              {"solution", solution_path},
              {"coloring", coloring_path},
              {"graph", graph_path},
              {"gram", gram_path},
              {"out", out_path},
              {"table", table_path}};
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_json().dump())));
  return buf;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error("invalid_config", what); }

void need(bool ok, const std::string& what) {
  if (!ok) bad(what);
}

void need_path(const std::string& path, const std::string& flag) {
  need(!path.empty(), flag + " is required");
}

}  // namespace

void ExperimentConfig::validate() const {
  static const std::vector<std::string> commands = {"gen",    "solve",  "round",
                                                    "cone",   "mincolor", "reduce",
                                                    "gadget", "experiment"};
  need(std::find(commands.begin(), commands.end(), command) != commands.end(),
       "unknown command '" + command + "'");
  need(k >= 2 && k <= 64, "k must be in [2, 64]");
  need(n >= 1, "n must be >= 1");
  need(m >= 0, "m must be >= 0");
  need(dim >= 0, "dim must be >= 0");
  need(eps > 0, "eps must be > 0");
  need(max_iters >= 0, "max_iters must be >= 0");
  need(trials >= 1, "trials must be >= 1");
  need(tau >= 0, "tau must be >= 0");
  need(t >= 0, "t must be >= 0");
  need(c >= 1, "c must be >= 1");
  need(samples >= 1, "samples must be >= 1");
  need(workers >= 1, "workers must be >= 1");
  need(graph_p >= 0 && graph_p <= 1, "graph_p must be in [0, 1]");
  need(compose_s >= 1, "compose_s must be >= 1");
  need(compose_count >= 0, "compose_count must be >= 0");

  if (command == "gen") {
    PromiseKind::parse(kind).validate(k, true);
    need_path(out_path, "--out");
  } else if (command == "solve") {
    PromiseKind::parse(kind);
    need_path(instance_path, "--instance");
  } else if (command == "round") {
    need_path(instance_path, "--instance");
    need(!solution_path.empty() || !witness_path.empty(), "--solution or --witness is required");
    if (solution_path.empty()) PromiseKind::parse(kind);
  } else if (command == "cone") {
    need(cone == "symmetric" || cone == "strong" || cone == "file",
         "cone must be symmetric, strong or file");
    if (cone == "file") need_path(gram_path, "--gram");
    if (cone == "strong") need(cone_l > 0, "cone_l must be > 0");
  } else if (command == "mincolor") {
    PromiseKind::parse(kind);
    need_path(instance_path, "--instance");
  } else if (command == "reduce") {
    need(algo == "sc" || algo == "ld" || algo == "ld-warmup" || algo == "rc",
         "algo must be sc, ld, ld-warmup or rc");
    need(t >= 1, "reduce needs t >= 1");
    need_path(instance_path, "--instance");
  } else if (command == "gadget") {
    need(gadget == "maxcut" || gadget == "compose", "gadget must be maxcut or compose");
    if (gadget == "compose") need_path(instance_path, "--instance");
    need_path(out_path, "--out");
  } else if (command == "experiment") {
    for (const auto& kd : kinds)
      need(kd == "strong" || kd == "rainbow" || kd == "discrepancy",
           "kinds must be strong, rainbow or discrepancy");
    for (int kk : ks) need(kk >= 2 && kk <= 64, "grid k must be in [2, 64]");
    for (int l : ls) need(l >= 1, "grid l must be >= 1");
  }
}

void apply_env_overrides(ExperimentConfig& config) {
  if (const char* s = std::getenv("HCOLOR_SEED"); s && *s) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (*end != '\0') bad("HCOLOR_SEED must be an unsigned integer");
    config.seed = v;
  }
  if (const char* s = std::getenv("HCOLOR_WORKERS"); s && *s) {
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v < 1) bad("HCOLOR_WORKERS must be a positive integer");
    config.workers = static_cast<int>(v);
  }
}

// ---------------------------------------------------------------------------

namespace {

class Emitter {
 public:
  Emitter(const ExperimentConfig& config, std::ostream& out)
      : command_(config.command), hash_(config.hash()), out_(out) {}

  void emit(const std::string& type, json body) {
    body["record"] = type;
    body["command"] = command_;
    body["config_hash"] = hash_;
    body["version"] = kVersion;
    body["modules"] = modules();
    out_ << body.dump() << '\n';
  }

 private:
  static json modules() {
    return json{{"hypergraph-core", kVersion}, {"instance-forge", kVersion},
                {"sdp-relax", kVersion},       {"cone-measure", kVersion},
                {"rounding", kVersion},        {"mincolor-pipeline", kVersion},
                {"cli-harness", kVersion}};
  }

  std::string command_;
  std::string hash_;
  std::ostream& out_;
};

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json phase_json(const PhaseRecord& p, int index) {
  json j{{"phase", index},           {"step", p.step},
         {"colors", p.colors},       {"colored", p.colored},
         {"residual_n", p.residual_n}, {"residual_degree", p.residual_degree}};
  if (p.picked_degree >= 0) {
    j["picked_degree"] = p.picked_degree;
    j["picked_neighbors"] = p.picked_neighbors;
  }
  return j;
}

SolveParams solver_params(const ExperimentConfig& config, std::uint64_t seed) {
  SolveParams p;
  p.dim = config.dim;
  p.eps = config.eps;
  p.max_iters = config.max_iters;
  p.seed = seed;
  return p;
}

Eigen::MatrixXd read_gram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path);
  int k = 0;
  if (!(in >> k) || k < 1) throw Error("parse_error", "bad gram header, expected k");
  Eigen::MatrixXd a(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (!(in >> a(i, j))) throw Error("parse_error", "gram matrix is truncated");
  return a;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(std::ceil(q * v.size())) - (q > 0 ? 1 : 0);
  return v[std::min(idx, v.size() - 1)];
}

int cmd_gen(const ExperimentConfig& config, Emitter& out) {
  const PromiseKind kind = PromiseKind::parse(config.kind);
  PlantedInstance inst = gen_planted(kind, config.n, config.m, config.k, config.seed);
  save_hypergraph(config.out_path, inst.hypergraph);
  if (!config.witness_path.empty()) save_coloring(config.witness_path, inst.witness);
  out.emit("instance", {{"kind", kind.to_string()},
                        {"k", inst.hypergraph.k()},
                        {"n", inst.hypergraph.n()},
                        {"m", inst.hypergraph.num_edges()},
                        {"max_degree", max_degree(inst.hypergraph)},
                        {"witness_holds", verify_promise(inst.hypergraph, inst.witness, kind).holds}});
  return 0;
}

int cmd_solve(const ExperimentConfig& config, Emitter& out) {
  const PromiseKind kind = PromiseKind::parse(config.kind);
  const Hypergraph h = load_hypergraph(config.instance_path);
  SolveResult r = solve(h, kind, solver_params(config, config.seed));
  if (!config.out_path.empty()) save_solution(config.out_path, r.solution);
  out.emit("solve", {{"kind", kind.to_string()},
                     {"n", h.n()},
                     {"m", h.num_edges()},
                     {"dim", r.solution.dim()},
                     {"converged", r.converged},
                     {"iterations", r.iterations},
                     {"max_violation", r.report.max_violation()},
                     {"sum_norm_violation", r.report.sum_norm_violation},
                     {"inner_violation", r.report.inner_violation},
                     {"unit_violation", r.report.unit_violation}});
  return r.converged ? 0 : 2;
}

int cmd_round(const ExperimentConfig& config, Emitter& out) {
  const Hypergraph h = load_hypergraph(config.instance_path);
  VectorSolution v;
  std::string source;
  if (!config.solution_path.empty()) {
    v = load_solution(config.solution_path);
    source = "solution";
  } else {
    const PromiseKind kind = PromiseKind::parse(config.kind);
    v = planted_solution(h, kind, load_coloring(config.witness_path), config.dim);
    source = "planted";
  }
  RoundingParams p;
  p.trials = config.trials;
  p.seed = config.seed;
  p.workers = config.workers;
  RoundingResult r = best_of_rounds(h, v, p);
  if (!config.coloring_path.empty()) save_coloring(config.coloring_path, r.best);
  double var = 0;
  for (double f : r.fractions) var += (f - r.mean_fraction) * (f - r.mean_fraction);
  var /= std::max(1, config.trials - 1);
  json body{{"source", source},
            {"trials", config.trials},
            {"best_fraction", r.best_fraction},
            {"best_trial", r.best_trial},
            {"mean_fraction", r.mean_fraction},
            {"mean_std_error", std::sqrt(var / config.trials)},
            {"p10", quantile(r.fractions, 0.1)},
            {"p50", quantile(r.fractions, 0.5)},
            {"p90", quantile(r.fractions, 0.9)},
            {"baseline", std::ldexp(1.0, 1 - h.k())}};
  if (config.tau > 0) {
    Rng rng = make_rng(config.seed, "threshold");
    body["tau"] = config.tau;
    body["threshold_set_size"] = threshold_independent_set(h, v, config.tau, rng).size();
  }
  out.emit("round", body);
  return 0;
}

int cmd_cone(const ExperimentConfig& config, Emitter& out) {
  Eigen::MatrixXd gram;
  if (config.cone == "symmetric") gram = symmetric_cone_gram(config.k);
  else if (config.cone == "strong") gram = strong_cone_gram(config.k, config.cone_l);
  else gram = read_gram(config.gram_path);
  GramCone cone(gram);
  MeasureEstimate mc = gaussian_measure_mc(gram, config.samples, config.seed, config.workers);
  json body{{"cone", config.cone},
            {"k", cone.k()},
            {"sum_norm", cone.sum_norm()},
            {"samples", mc.samples},
            {"hits", mc.hits},
            {"mc", mc.estimate},
            {"std_error", mc.std_error},
            {"jitter", mc.jitter},
            {"mono_probability", 2 * mc.estimate},
            {"baseline", std::ldexp(1.0, 1 - cone.k())}};
  double bound = NAN;
  if (cone.min_eigenvalue() > 0) {
    bound = measure_upper_bound(cone);
    body["bound"] = num(bound);
    body["mc_le_bound"] = mc.estimate <= bound + 4 * mc.std_error;
  } else {
    body["bound"] = nullptr;
  }
  if (config.cone == "symmetric" && cone.k() >= 2) {
    body["daniels"] = symmetric_cone_asymptotic(cone.k());
  }
  out.emit("cone", body);
  return 0;
}

int cmd_mincolor(const ExperimentConfig& config, Emitter& out) {
  const PromiseKind kind = PromiseKind::parse(config.kind);
  const Hypergraph h = load_hypergraph(config.instance_path);
  MinColorParams p;
  p.t = config.t;
  p.c = config.c;
  p.seed = config.seed;
  p.solver = solver_params(config, 0);
  MinColorResult r = min_color(h, kind, p);
  if (!config.coloring_path.empty()) save_coloring(config.coloring_path, r.coloring);
  for (std::size_t i = 0; i < r.log.size(); ++i)
    out.emit("phase", phase_json(r.log[i], static_cast<int>(i)));
  const int greedy = greedy_color(h).distinct_colors_used();
  const double ln_n = std::log(std::max(2, h.n()));
  const double kk = static_cast<double>(h.k()) * h.k();
  const double mn = h.n() > 0 ? static_cast<double>(h.num_edges()) / h.n() : 0;
  const int l = kind.slack(h.k());
  out.emit("mincolor", {{"kind", kind.to_string()},
                        {"n", h.n()},
                        {"m", h.num_edges()},
                        {"colors", r.colors_used},
                        {"reduction_colors", r.reduction_colors},
                        {"rounding_colors", r.rounding_colors},
                        {"greedy_colors", greedy},
                        {"proper", is_proper(h, r.coloring)},
                        {"solver_converged", r.solver_converged},
                        {"solver_violation", r.solver_violation},
                        {"rounding_phases", r.rounding.phases},
                        {"phase_cap", r.rounding.phase_cap},
                        {"degree_bound_colors", std::pow(std::max(mn, 1.0), 1.0 / kk) * ln_n},
                        {"slack_scale", slack_color_scale(h.n(), h.k(), l)},
                        {"slack_ratio", r.colors_used / slack_color_scale(h.n(), h.k(), l)}});
  return 0;
}

int cmd_reduce(const ExperimentConfig& config, Emitter& out) {
  const Hypergraph h = load_hypergraph(config.instance_path);
  ReduceParams p;
  p.t = config.t;
  p.c = config.c;
  p.seed = config.seed;
  PartialColoringResult r;
  if (config.algo == "sc") r = sc_degree_reduce(h, p);
  else if (config.algo == "ld") r = ld_degree_reduce(h, p, LdMode::kFull);
  else if (config.algo == "ld-warmup") r = ld_degree_reduce(h, p, LdMode::kWarmup);
  else r = rc_degree_reduce(h, p);
  if (!config.coloring_path.empty()) save_coloring(config.coloring_path, r.coloring);
  for (std::size_t i = 0; i < r.phases.size(); ++i)
    out.emit("phase", phase_json(r.phases[i], static_cast<int>(i)));
  out.emit("reduce", {{"algo", config.algo},
                      {"colors", r.colors_used},
                      {"color_bound", r.color_bound},
                      {"residual_n", r.uncolored.size()},
                      {"residual_max_degree", max_degree(r.residual)},
                      {"degree_bound", r.degree_bound},
                      {"marked", r.marked.size()},
                      {"rounds", r.rounds},
                      {"proper", is_proper(h, r.coloring)}});
  return 0;
}

int cmd_gadget(const ExperimentConfig& config, Emitter& out) {
  if (config.gadget == "maxcut") {
    Graph g;
    if (!config.graph_path.empty()) {
      std::ifstream in(config.graph_path);
      if (!in) throw Error("io_error", "cannot open " + config.graph_path);
      g = read_graph(in);
    } else {
      g = random_graph(config.n, config.graph_p, config.seed);
    }
    MaxCutGadget gadget = maxcut_to_disc1(g, config.k);
    save_hypergraph(config.out_path, gadget.hypergraph);
    out.emit("gadget", {{"gadget", "maxcut"},
                        {"graph_n", g.n()},
                        {"graph_m", g.num_edges()},
                        {"k", config.k},
                        {"per_edge", gadget.per_edge},
                        {"cloud_size", gadget.clouds.cloud_size},
                        {"n", gadget.hypergraph.n()},
                        {"m", gadget.hypergraph.num_edges()},
                        {"total_weight", gadget.hypergraph.total_weight()}});
    return 0;
  }
  const Hypergraph source = load_hypergraph(config.instance_path);
  const ComposeMode mode = config.compose_count > 0
                               ? ComposeMode::sampled(config.compose_count, config.seed)
                               : ComposeMode::exact();
  ComposedInstance composed = cloud_compose(source, config.compose_s, mode);
  save_hypergraph(config.out_path, composed.hypergraph);
  out.emit("gadget", {{"gadget", "compose"},
                      {"s", config.compose_s},
                      {"mode", config.compose_count > 0 ? "sampled" : "exact"},
                      {"per_edge", composed.per_edge},
                      {"cloud_size", composed.clouds.cloud_size},
                      {"k", composed.hypergraph.k()},
                      {"n", composed.hypergraph.n()},
                      {"m", composed.hypergraph.num_edges()}});
  return 0;
}

// ---------------------------------------------------------------------------
// Experiment sweep

struct Cell {
  std::string kind;
  int k = 0;
  int l = 0;
  std::string key() const { return kind + "/" + std::to_string(k) + "/" + std::to_string(l); }
};

PromiseKind cell_kind(const Cell& cell) {
  if (cell.kind == "strong") return PromiseKind::strong(cell.k + cell.l);
  if (cell.kind == "rainbow") return PromiseKind::rainbow(cell.k - cell.l);
  return PromiseKind::discrepancy(cell.l);
}

// Parameters that change a cell's numbers; stored results are reused only
// when these match.
std::string cell_fingerprint(const ExperimentConfig& config) {
  json j{{"n", config.n},     {"m", config.m},       {"trials", config.trials},
         {"seed", config.seed}, {"c", config.c},     {"t", config.t},
         {"eps", config.eps}, {"max_iters", config.max_iters}, {"dim", config.dim}};
  return j.dump();
}

json run_cell(const ExperimentConfig& config, const Cell& cell) {
  const PromiseKind kind = cell_kind(cell);
  const std::uint64_t seed = derive_seed(config.seed, cell.key());
  json row{{"kind", cell.kind}, {"k", cell.k}, {"l", cell.l}, {"promise", kind.to_string()}};
  try {
    kind.validate(cell.k, true);
  } catch (const Error& e) {
    row["skipped"] = e.what();
    return row;
  }
  PlantedInstance inst = gen_planted(kind, config.n, config.m, cell.k, seed);
  const VectorSolution v = planted_solution(inst.hypergraph, kind, inst.witness);
  RoundingParams rp;
  rp.trials = config.trials;
  rp.seed = derive_seed(seed, "round");
  RoundingResult rr = best_of_rounds(inst.hypergraph, v, rp);
  double var = 0;
  for (double f : rr.fractions) var += (f - rr.mean_fraction) * (f - rr.mean_fraction);
  var /= std::max(1, config.trials - 1);
  const double baseline = std::ldexp(1.0, 1 - cell.k);
  double bound = NAN;
  if (cell.kind == "strong") {
    bound = std::min(1.0, 2 * measure_upper_bound(GramCone(strong_cone_gram(cell.k, cell.l))));
  }
  MinColorParams mp;
  mp.t = config.t;
  mp.c = config.c;
  mp.seed = derive_seed(seed, "mincolor");
  mp.solver = solver_params(config, 0);
  MinColorResult mc = min_color(inst.hypergraph, kind, mp);
  const double kk = static_cast<double>(cell.k) * cell.k;
  row["n"] = config.n;
  row["m"] = inst.hypergraph.num_edges();
  row["baseline"] = baseline;
  row["mono_mean"] = rr.mean_fraction;
  row["mono_std_error"] = std::sqrt(var / config.trials);
  row["analytic_bound"] = num(bound);
  row["beats_baseline"] = rr.mean_fraction < baseline;
  row["colors"] = mc.colors_used;
  row["greedy_colors"] = greedy_color(inst.hypergraph).distinct_colors_used();
  row["color_bound"] =
      std::pow(std::max(1.0, static_cast<double>(config.m) / config.n), 1.0 / kk) *
      std::log(std::max(2, config.n));
  return row;
}

std::string fmt(const json& v) {
  if (v.is_null()) return "NA";
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

int cmd_experiment(const ExperimentConfig& config, Emitter& out) {
  std::vector<Cell> cells;
  for (const auto& kind : config.kinds)
    for (int k : config.ks)
      for (int l : config.ls) cells.push_back({kind, k, l});

  const std::string fingerprint = cell_fingerprint(config);
  const std::string state_path = config.table_path.empty() ? "" : config.table_path + ".cells.jsonl";
  std::map<std::string, json> done;
  if (!state_path.empty()) {
    std::ifstream in(state_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("key") || j.value("fingerprint", "") != fingerprint)
        continue;  // torn write or stale parameters
      done[j["key"].get<std::string>()] = j["row"];
    }
  }

  std::vector<json> rows(cells.size());
  std::vector<char> have(cells.size(), 0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto it = done.find(cells[i].key());
    if (it != done.end()) {
      rows[i] = it->second;
      have[i] = 1;
    }
  }
  std::mutex state_mutex;
  std::ofstream state;
  if (!state_path.empty()) state.open(state_path, std::ios::app);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < cells.size(); i += stride) {
      if (have[i]) continue;
      rows[i] = run_cell(config, cells[i]);
      if (state.is_open()) {
        std::lock_guard<std::mutex> lock(state_mutex);
        state << json{{"key", cells[i].key()}, {"fingerprint", fingerprint}, {"row", rows[i]}}.dump()
              << '\n';
        state.flush();
      }
    }
  };
  const auto workers = static_cast<std::size_t>(
      std::max<int>(1, std::min<int>(config.workers, static_cast<int>(cells.size()))));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }

  static const std::vector<std::string> columns = {
      "kind",           "k",      "l",             "promise",     "n",
      "m",              "baseline", "mono_mean",   "mono_std_error", "analytic_bound",
      "beats_baseline", "colors", "greedy_colors", "color_bound"};
  std::ostringstream table;
  for (std::size_t i = 0; i < columns.size(); ++i) table << (i ? "\t" : "") << columns[i];
  table << '\n';
  for (const auto& row : rows) {
    out.emit("cell", row);
    if (row.contains("skipped")) continue;
    for (std::size_t i = 0; i < columns.size(); ++i)
      table << (i ? "\t" : "") << fmt(row.value(columns[i], json(nullptr)));
    table << '\n';
  }
  if (!config.table_path.empty()) {
    std::ofstream t(config.table_path);
    if (!t) throw Error("io_error", "cannot write " + config.table_path);
    t << table.str();
  }
  out.emit("experiment", {{"cells", cells.size()}});
  return 0;
}

}  // namespace

int run_command(const ExperimentConfig& config, std::ostream& records) {
  Emitter out(config, records);
  try {
    config.validate();
    if (config.command == "gen") return cmd_gen(config, out);
    if (config.command == "solve") return cmd_solve(config, out);
    if (config.command == "round") return cmd_round(config, out);
    if (config.command == "cone") return cmd_cone(config, out);
    if (config.command == "mincolor") return cmd_mincolor(config, out);
    if (config.command == "reduce") return cmd_reduce(config, out);
    if (config.command == "gadget") return cmd_gadget(config, out);
    return cmd_experiment(config, out);
  } catch (const Error& e) {
    out.emit("error", {{"code", e.code()}, {"message", e.what()}});
    return 1;
  } catch (const std::exception& e) {
    out.emit("error", {{"code", "internal"}, {"message", e.what()}});
    return 1;
  }
}

}  // namespace hcolor
