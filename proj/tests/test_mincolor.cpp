#include <doctest.h>

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <set>

#include "hcolor/instance_forge.hpp"
#include "hcolor/mincolor.hpp"
#include "support.hpp"

using namespace hcolor;

namespace {

// Independent recount: no edge with all vertices colored the same.
bool proper_recount(const Hypergraph& h, const Coloring& c) {
  for (const auto& edge : h.edge_list()) {
    if (!c.is_set(edge[0])) continue;
    bool same = true;
    for (Vertex u : edge) same = same && c.is_set(u) && c[u] == c[edge[0]];
    if (same) return false;
  }
  return true;
}

int residual_degree_recount(const Hypergraph& h, const Coloring& c) {
  std::vector<int> deg(static_cast<std::size_t>(h.n()));
  for (const auto& edge : h.edge_list()) {
    if (std::any_of(edge.begin(), edge.end(), [&](Vertex u) { return c.is_set(u); })) continue;
    for (Vertex u : edge) ++deg[u];
  }
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

// Largest |N(S)| over (k-1)-sets S inside the uncolored part.
int residual_set_degree(const Hypergraph& h, const Coloring& c) {
  std::map<std::vector<Vertex>, std::set<Vertex>> count;
  for (const auto& edge : h.edge_list()) {
    if (std::any_of(edge.begin(), edge.end(), [&](Vertex u) { return c.is_set(u); })) continue;
    for (std::size_t skip = 0; skip < edge.size(); ++skip) {
      std::vector<Vertex> s;
      for (std::size_t i = 0; i < edge.size(); ++i)
        if (i != skip) s.push_back(edge[i]);
      count[s].insert(edge[skip]);
    }
  }
  int best = 0;
  for (const auto& [s, n] : count) best = std::max(best, static_cast<int>(n.size()));
  return best;
}

}  // namespace

TEST_CASE("bounds") {
  CHECK(sc_batch_size(120, 3, 2) == static_cast<int>(std::floor(2 * std::log(120.0) / std::log(3.0))));
  CHECK(sc_batch_size(1, 3, 2) == 1);
  CHECK(set_degree_bound(10, 3, 4) == 36);
  CHECK(set_degree_bound(10, 4, 1) == 36);
  CHECK(set_degree_bound(100000, 30, 5) == LLONG_MAX);
  CHECK(ld_color_bound(60, 3, 2) == doctest::Approx(20.0));
  CHECK(rc_color_bound(120, 4, 1, 2) == doctest::Approx(180.0));
  CHECK(slack_color_scale(100, 4, 2) == doctest::Approx(100.0));
}

TEST_CASE("two-coloring walk") {
  PlantedInstance inst = gen_planted(PromiseKind::discrepancy(1), 40, 60, 3, 2);
  TwoColorResult r = two_color_balanced(inst.hypergraph, 4);
  CHECK(r.success);
  CHECK(is_proper(inst.hypergraph, r.coloring));
  Hypergraph fano(3, 7, {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}});
  TwoColorResult f = two_color_balanced(fano, 1, 500);
  CHECK_FALSE(f.success);
  CHECK(f.flips == 500);
  CHECK(f.remaining_mono > 0);
}

TEST_CASE("two-coloring sets restricts to the given vertices") {
  Rng rng = make_rng(3, "sets");
  std::vector<VertexSet> sets = {{0, 1}, {1, 2}, {2, 5}};
  TwoColorResult r = two_color_sets(6, VertexSet{0, 1, 2}, sets, rng);
  CHECK(r.success);
  CHECK_FALSE(r.coloring.is_set(5));
  CHECK(r.coloring[0] != r.coloring[1]);
  CHECK(r.coloring[1] != r.coloring[2]);
}

TEST_CASE("sc degree reduction contract") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    PlantedInstance inst = gen_planted(PromiseKind::strong(4), 120, 1200, 3, seed);
    ReduceParams p;
    p.t = 4;
    p.seed = seed;
    PartialColoringResult r = sc_degree_reduce(inst.hypergraph, p);
    CHECK(proper_recount(inst.hypergraph, r.coloring));
    CHECK(residual_degree_recount(inst.hypergraph, r.coloring) <= p.t);
    CHECK(r.degree_bound == p.t);
    CHECK(r.colors_used <= r.color_bound);
    CHECK(static_cast<int>(r.uncolored.size()) + static_cast<int>(std::count_if(
        r.coloring.colors().begin(), r.coloring.colors().end(), [](int c) { return c >= 0; })) == 120);
    CHECK(r.flagged_neighbor_counts == 0);
  }
}

TEST_CASE("sc is a no-op when the degree is already small") {
  PlantedInstance inst = gen_planted(PromiseKind::strong(4), 60, 40, 3, 1);
  ReduceParams p;
  p.t = max_degree(inst.hypergraph);
  PartialColoringResult r = sc_degree_reduce(inst.hypergraph, p);
  CHECK(r.colors_used == 0);
  CHECK(r.uncolored.size() == 60);
  CHECK(r.residual == inst.hypergraph);
}

TEST_CASE("ld degree reduction contract") {
  PlantedInstance inst = gen_planted(PromiseKind::discrepancy(1), 60, 1500, 3, 3);
  ReduceParams p;
  p.t = 3;
  for (LdMode mode : {LdMode::kWarmup, LdMode::kFull}) {
    PartialColoringResult r = ld_degree_reduce(inst.hypergraph, p, mode);
    CHECK(proper_recount(inst.hypergraph, r.coloring));
    CHECK(residual_degree_recount(inst.hypergraph, r.coloring) <= r.degree_bound);
    CHECK(r.degree_bound == set_degree_bound(60, 3, 3));
    if (mode == LdMode::kFull) {
      CHECK(residual_set_degree(inst.hypergraph, r.coloring) <= p.t);
      CHECK(r.colors_used <= r.color_bound);
    }
  }
  CHECK(ERROR_CODE(ld_degree_reduce(Hypergraph(4, 8, {{0, 1, 2, 3}}), p, LdMode::kFull)) ==
        "invalid_parameters");
}

TEST_CASE("rc degree reduction contract") {
  PlantedInstance inst = gen_planted(PromiseKind::rainbow(3), 120, 1200, 4, 5);
  ReduceParams p;
  p.t = 1;
  PartialColoringResult r = rc_degree_reduce(inst.hypergraph, p);
  CHECK(proper_recount(inst.hypergraph, r.coloring));
  CHECK(residual_set_degree(inst.hypergraph, r.coloring) <= p.t);
  CHECK(residual_degree_recount(inst.hypergraph, r.coloring) <= r.degree_bound);
  CHECK(r.colors_used <= r.color_bound);
}

TEST_CASE("bounded degree coloring obeys its phase cap") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    PlantedInstance inst = gen_planted(PromiseKind::strong(4), 100, 300, 3, seed);
    VectorSolution v = planted_solution(inst.hypergraph, inst.kind, inst.witness);
    const int t = max_degree(inst.hypergraph);
    BoundedDegreeResult r = bounded_degree_color(inst.hypergraph, v, t, seed);
    CHECK(proper_recount(inst.hypergraph, r.coloring));
    CHECK(r.coloring.is_total());
    CHECK(r.phases <= r.phase_cap);
    CHECK(r.gamma == doctest::Approx(std::pow(t, -1.0 / 8)));
    CHECK(r.tau == doctest::Approx(std::sqrt(2 * std::log(double(t)) / 8)));
  }
  PlantedInstance inst = gen_planted(PromiseKind::strong(4), 50, 300, 3, 1);
  VectorSolution v = planted_solution(inst.hypergraph, inst.kind, inst.witness);
  CHECK(ERROR_CODE(bounded_degree_color(inst.hypergraph, v, 1, 0)) == "invalid_parameters");
}

TEST_CASE("bounded degree coloring on a vertex subset") {
  PlantedInstance inst = gen_planted(PromiseKind::strong(4), 60, 100, 3, 4);
  VectorSolution v = planted_solution(inst.hypergraph, inst.kind, inst.witness);
  VertexSet half;
  for (Vertex u = 0; u < 60; u += 2) half.push_back(u);
  BoundedDegreeResult r = bounded_degree_color(inst.hypergraph, v, max_degree(inst.hypergraph), 2, half);
  for (Vertex u = 0; u < 60; ++u) CHECK(r.coloring.is_set(u) == (u % 2 == 0));
}

TEST_CASE("greedy coloring is proper") {
  PlantedInstance inst = gen_planted(PromiseKind::rainbow(2), 80, 800, 3, 1);
  Coloring g = greedy_color(inst.hypergraph);
  CHECK(g.is_total());
  CHECK(proper_recount(inst.hypergraph, g));
}

TEST_CASE("min_color end to end") {
  const PromiseKind kinds[] = {PromiseKind::strong(4), PromiseKind::rainbow(2), PromiseKind::discrepancy(1)};
  for (const auto& kind : kinds) {
    PlantedInstance inst = gen_planted(kind, 100, 600, 3, 6);
    MinColorParams p;
    p.seed = 1;
    p.solver.eps = 1e-4;
    MinColorResult r = min_color(inst.hypergraph, kind, p);
    CHECK(r.coloring.is_total());
    CHECK(proper_recount(inst.hypergraph, r.coloring));
    CHECK(r.colors_used == r.reduction_colors + r.rounding_colors);
    CHECK(r.coloring.distinct_colors_used() <= r.colors_used);
    CHECK(r.rounding.phases <= r.rounding.phase_cap);

    MinColorResult again = min_color(inst.hypergraph, kind, p);
    CHECK(again.coloring == r.coloring);
  }
}

TEST_CASE("min_color with an explicit degree threshold") {
  PlantedInstance inst = gen_planted(PromiseKind::strong(4), 100, 800, 3, 2);
  MinColorParams p;
  p.t = 6;
  p.solver.eps = 1e-4;
  MinColorResult r = min_color(inst.hypergraph, inst.kind, p);
  CHECK(proper_recount(inst.hypergraph, r.coloring));
  CHECK(r.reduction_colors > 0);
  CHECK(max_degree(r.reduction.residual) <= 6);
}
