#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcolor/hypergraph.hpp"
#include "hcolor/sdp_relax.hpp"

namespace hcolor {

struct TwoColorResult {
  bool success = false;
  Coloring coloring;  // palette 2; vertices outside the colored set stay unset
  long long flips = 0;
  long long max_flips = 0;
  std::size_t remaining_mono = 0;  // monochromatic constraints at failure
};

/// Random recoloring walk: start uniform, then repeatedly flip a random vertex
/// of a random monochromatic edge. max_flips < 0 selects 64 n^3.
TwoColorResult two_color_balanced(const Hypergraph& h, std::uint64_t seed,
                                  long long max_flips = -1);

/// Same walk over an arbitrary family of vertex sets (sizes may differ).
/// Only `vertices` get colored; sets reaching outside them are ignored.
/// max_flips < 0 selects 64 |vertices|^3.
TwoColorResult two_color_sets(int n, const VertexSet& vertices,
                              const std::vector<VertexSet>& sets, Rng& rng,
                              long long max_flips = -1);

struct PhaseRecord {
  std::string step;      // "sc", "ld_warmup", "mark", "bias", "final", "threshold", ...
  int colors = 0;        // fresh colors used by this phase
  int colored = 0;       // vertices colored by this phase
  int residual_n = 0;    // uncolored vertices afterwards
  int residual_degree = 0;
  int picked_degree = -1;     // sc: degree of each picked vertex ...
  int picked_neighbors = -1;  // ... and its distinct neighbor count
};

struct PartialColoringResult {
  Coloring coloring;    // unset = uncolored; palette = colors_used
  Hypergraph residual;  // H induced on the uncolored vertices
  VertexSet uncolored;
  int colors_used = 0;
  std::vector<PhaseRecord> phases;
  std::vector<VertexSet> marked;  // ld/rc: sets found to have a non-biased witness
  long long degree_bound = 0;     // declared bound on the residual max degree
  double color_bound = 0;         // theorem bound on colors_used
  int rounds = 0;
  int flagged_neighbor_counts = 0;  // sc picks with fewer than (k-1)t^{1/(k-1)} neighbors
};

struct ReduceParams {
  int t = 1;
  int c = 2;
  std::uint64_t seed = 0;
  long long assignment_cap = 1 << 20;  // per enumeration
  long long walk_flip_cap = 200000;    // a walk stops at min(64 |X|^3, cap) flips
};

double sc_color_bound(int n, int k, int t, int c);
double ld_color_bound(int n, int t, int c);
double rc_color_bound(int n, int k, int t, int c);
/// C(n - 1, k - 2) t, saturating at LLONG_MAX.
long long set_degree_bound(int n, int k, int t);
/// Batch size max(1, floor(c ln n / ln k)).
int sc_batch_size(int n, int k, int c);

PartialColoringResult sc_degree_reduce(const Hypergraph& h, const ReduceParams& params);

enum class LdMode { kWarmup, kFull };
PartialColoringResult ld_degree_reduce(const Hypergraph& h, const ReduceParams& params,
                                       LdMode mode);
PartialColoringResult rc_degree_reduce(const Hypergraph& h, const ReduceParams& params);

struct BoundedDegreeResult {
  Coloring coloring;  // colors 0..colors_used-1 on the given vertices
  int colors_used = 0;
  int phases = 0;
  double phase_cap = 0;  // 32 ln n / gamma
  double tau = 0, gamma = 0;
  long long total_retries = 0;
  std::vector<PhaseRecord> log;
};

/// Repeated threshold rounding: each accepted independent set gets a fresh
/// color. Colors only `vertices` (all of [0, n) when empty).
BoundedDegreeResult bounded_degree_color(const Hypergraph& h, const VectorSolution& v,
                                         int t, std::uint64_t seed,
                                         const VertexSet& vertices = {});

struct MinColorParams {
  int t = 0;  // 0: use the instance's max degree
  int c = 2;
  std::uint64_t seed = 0;
  SolveParams solver;
};

struct MinColorResult {
  Coloring coloring;
  int colors_used = 0;
  int reduction_colors = 0;
  int rounding_colors = 0;
  bool solver_converged = false;
  double solver_violation = 0;
  PartialColoringResult reduction;
  BoundedDegreeResult rounding;
  std::vector<PhaseRecord> log;
};

MinColorResult min_color(const Hypergraph& h, const PromiseKind& kind,
                         const MinColorParams& params);

/// First-fit coloring in vertex order 0..n-1.
Coloring greedy_color(const Hypergraph& h);

/// n^{l^2/k}, the rough guarantee of the relaxation-based coloring.
double slack_color_scale(int n, int k, int l);

}  // namespace hcolor
