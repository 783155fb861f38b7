#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "hcolor/hypergraph.hpp"
#include "hcolor/instance_forge.hpp"
#include "support.hpp"

using namespace hcolor;

namespace {

// Fano plane: 7 points, 7 lines, not 2-colorable.
Hypergraph fano() {
  return Hypergraph(3, 7, {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}});
}

}  // namespace

TEST_CASE("construction sorts edges and builds incidence") {
  Hypergraph h(3, 5, {{2, 0, 1}, {4, 3, 1}});
  CHECK(h.num_edges() == 2);
  CHECK(std::vector<Vertex>(h.edge(0).begin(), h.edge(0).end()) == std::vector<Vertex>{0, 1, 2});
  CHECK(std::vector<Vertex>(h.edge(1).begin(), h.edge(1).end()) == std::vector<Vertex>{1, 3, 4});
  CHECK(h.degree(1) == 2);
  CHECK(h.degree(0) == 1);
  CHECK(max_degree(h) == 2);
  CHECK(h.total_weight() == doctest::Approx(2.0));
  CHECK(isolated_vertices(h).empty());
}

TEST_CASE("construction rejects malformed input") {
  CHECK(ERROR_CODE(Hypergraph(3, 4, {{0, 1}})) == "invalid_hypergraph");
  CHECK(ERROR_CODE(Hypergraph(3, 4, {{0, 1, 1}})) == "invalid_hypergraph");
  CHECK(ERROR_CODE(Hypergraph(3, 4, {{0, 1, 4}})) == "vertex_out_of_range");
  CHECK(ERROR_CODE(Hypergraph(3, 4, {{0, 1, 2}}, {-1.0})) == "invalid_hypergraph");
  CHECK(ERROR_CODE(Hypergraph(3, 4, {{0, 1, 2}}, {1.0, 2.0})) == "invalid_hypergraph");
  CHECK(ERROR_CODE(Hypergraph(3, 4, {{0, 1, 2}}, {}, 0.0)) == "invalid_hypergraph");
}

TEST_CASE("duplicate edges stay distinct") {
  Hypergraph h(2, 3, {{0, 1}, {1, 0}});
  CHECK(h.num_edges() == 2);
  CHECK(h.degree(0) == 2);
}

TEST_CASE("weights use the shared denominator") {
  Hypergraph h(2, 3, {{0, 1}, {1, 2}}, {1.0, 2.0}, 18.0);
  CHECK(h.weight(1) == doctest::Approx(2.0 / 18));
  CHECK(h.total_weight() == doctest::Approx(3.0 / 18));
  Coloring c(2, std::vector<int>{0, 0, 1});
  CHECK(mono_fraction(h, c) == doctest::Approx(1.0 / 3));
}

TEST_CASE("promise kinds parse, print and report slack") {
  for (const char* text : {"strong:4", "rainbow:2", "discrepancy:1"})
    CHECK(PromiseKind::parse(text).to_string() == text);
  CHECK(PromiseKind::parse("disc:3") == PromiseKind::discrepancy(3));
  CHECK(PromiseKind::strong(5).slack(3) == 2);
  CHECK(PromiseKind::rainbow(3).slack(5) == 2);
  CHECK(PromiseKind::discrepancy(1).slack(7) == 1);
  CHECK(PromiseKind::discrepancy(1).palette() == 2);
  CHECK(ERROR_CODE(PromiseKind::parse("strong")) == "invalid_promise");
  CHECK(ERROR_CODE(PromiseKind::parse("strong:x")) == "invalid_promise");
  CHECK(ERROR_CODE(PromiseKind::parse("purple:3")) == "invalid_promise");
  CHECK(ERROR_CODE(PromiseKind::strong(2).validate(3)) == "invalid_promise");
  CHECK(ERROR_CODE(PromiseKind::rainbow(4).validate(3)) == "invalid_promise");
  CHECK(ERROR_CODE(PromiseKind::discrepancy(2).validate(3, true)) == "invalid_promise");
  CHECK(ERROR_CODE(PromiseKind::discrepancy(1).validate(3, true)).empty());
}

TEST_CASE("verifiers on small examples") {
  Hypergraph h(3, 6, {{0, 1, 2}, {3, 4, 5}, {0, 2, 4}});
  Coloring rainbow(3, std::vector<int>{0, 1, 2, 0, 1, 2});
  CHECK(verify_promise(h, rainbow, PromiseKind::rainbow(3)).holds);
  CHECK(verify_promise(h, rainbow, PromiseKind::strong(3)).holds);
  Coloring two(2, std::vector<int>{0, 1, 0, 0, 0, 0});
  CHECK(discrepancy_of(h, two) == 3);
  auto check = verify_promise(h, two, PromiseKind::discrepancy(1));
  CHECK_FALSE(check.holds);
  CHECK(check.violations == std::vector<std::size_t>{1, 2});
  CHECK(mono_fraction(h, two) == doctest::Approx(2.0 / 3));
  CHECK(monochromatic_edges(h, two) == std::vector<std::size_t>{1, 2});
  CHECK_FALSE(is_proper(h, two));
  CHECK(ERROR_CODE(verify_promise(h, two, PromiseKind::strong(3))) == "palette_mismatch");
  CHECK(ERROR_CODE(mono_fraction(h, Coloring(2, 6))) == "incomplete_coloring");
  CHECK(ERROR_CODE(mono_fraction(Hypergraph(3, 6, {}), rainbow)) == "empty_instance");
}

TEST_CASE("partial colorings: only fully colored edges count") {
  Hypergraph h(3, 4, {{0, 1, 2}, {1, 2, 3}});
  Coloring c(1, 4);
  c.set(0, 0);
  c.set(1, 0);
  c.set(2, 0);
  CHECK(monochromatic_edges(h, c) == std::vector<std::size_t>{0});
  c.unset(0);
  CHECK(is_proper(h, c));
}

TEST_CASE("the Fano plane has no proper 2-coloring") {
  Hypergraph h = fano();
  for (int mask = 0; mask < 128; ++mask) {
    std::vector<int> colors(7);
    for (int i = 0; i < 7; ++i) colors[i] = (mask >> i) & 1;
    CHECK_FALSE(is_proper(h, Coloring(2, colors)));
  }
}

TEST_CASE("neighborhoods and induced subhypergraphs") {
  Hypergraph h(3, 6, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}, {2, 3, 5}});
  const Vertex s01[] = {0, 1};
  CHECK(completion_neighborhood(h, s01) == VertexSet{2, 3, 4});
  const Vertex s23[] = {2, 3};
  CHECK(completion_neighborhood(h, s23) == VertexSet{5});
  const Vertex bad[] = {1, 1};
  CHECK(ERROR_CODE(completion_neighborhood(h, bad)) == "invalid_subset");
  CHECK(neighbors(h, 0) == VertexSet{1, 2, 3, 4});
  const VertexSet w = {0, 1, 2, 3};
  Hypergraph sub = induced(h, w);
  CHECK(sub.num_edges() == 2);
  CHECK(sub.n() == 6);
  CHECK(remove_vertices(h, VertexSet{0}).num_edges() == 1);
  CHECK(complement(6, w) == VertexSet{4, 5});
  auto subsets = edge_supported_subsets(h);
  CHECK(std::is_sorted(subsets.begin(), subsets.end()));
  CHECK(subsets.size() == 10);
}

TEST_CASE("text formats round-trip") {
  PlantedInstance inst = gen_planted(PromiseKind::strong(4), 30, 50, 3, 7);
  std::stringstream buf;
  write_hypergraph(buf, inst.hypergraph);
  CHECK(read_hypergraph(buf) == inst.hypergraph);

  Hypergraph weighted(2, 3, {{0, 1}, {1, 2}}, {1.0, 0.25});
  std::stringstream wbuf;
  write_hypergraph(wbuf, weighted);
  Hypergraph back = read_hypergraph(wbuf);
  CHECK(back.weight(1) == doctest::Approx(0.25));

  Coloring c(3, std::vector<int>{0, Coloring::kUnset, 2});
  std::stringstream cbuf;
  write_coloring(cbuf, c);
  CHECK(read_coloring(cbuf) == c);
}

TEST_CASE("readers reject corrupt files") {
  std::istringstream bad_header("3 x 1\n0 1 2\n");
  CHECK(ERROR_CODE(read_hypergraph(bad_header)) == "parse_error");
  std::istringstream truncated("3 5 2\n0 1 2\n");
  CHECK(ERROR_CODE(read_hypergraph(truncated)) == "parse_error");
  std::istringstream unsorted("3 5 1\n2 1 0\n");
  CHECK(ERROR_CODE(read_hypergraph(unsorted)) == "parse_error");
  std::istringstream twice("2 2\n0 1\n0 1\n");
  CHECK(ERROR_CODE(read_coloring(twice)) == "parse_error");
  CHECK(ERROR_CODE(load_hypergraph("/nonexistent/h.txt")) == "io_error");
}
