#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "hcolor/hypergraph.hpp"

namespace hcolor {

/// Generated instance together with the witness certifying its promise.
struct PlantedInstance {
  Hypergraph hypergraph;
  Coloring witness;
  PromiseKind kind;
  std::uint64_t seed = 0;
};

/// m edges sampled i.i.d. consistently with a uniformly random witness whose
/// color classes partition [n] into near-equal parts.
PlantedInstance gen_planted(const PromiseKind& kind, int n, int m, int k,
                            std::uint64_t seed);

/// Simple undirected unit-weight graph.
class Graph {
 public:
  Graph() = default;
  Graph(int n, std::vector<std::pair<int, int>> edges);

  int n() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
};

Graph read_graph(std::istream& in);
void write_graph(std::ostream& out, const Graph& g);
/// Erdos-Renyi G(n, p) sample; deterministic in seed.
Graph random_graph(int n, double p, std::uint64_t seed);
/// Number of edges whose endpoints get different colors.
int cut_weight(const Graph& g, const Coloring& side);

/// Vertex (u, i) of the blown-up instance is u * cloud_size + i.
struct CloudMap {
  int original_n = 0;
  int cloud_size = 1;

  Vertex vertex(int original, int index) const {
    return original * cloud_size + index;
  }
  int owner(Vertex v) const { return v / cloud_size; }
  int blown_up_n() const { return original_n * cloud_size; }
};

struct MaxCutGadget {
  Hypergraph hypergraph;  // weights 1/N via denominator N
  CloudMap clouds;
  long long per_edge = 0;  // N, hyperedges created by each graph edge
};

/// Each graph edge (u, v) creates all k-sets U + W with U, W inside the clouds
/// of u and v and sizes differing by one.
MaxCutGadget maxcut_to_disc1(const Graph& g, int k);
/// N = 2 * C(k, half_k) * C(k, half_k + 1) for odd k = 2 * half_k + 1.
long long maxcut_gadget_size(int k);

/// Every cloud vertex takes its owner's color.
Coloring lift_cloud_constant(const Coloring& original, const CloudMap& clouds);
/// Majority color per cloud; the cloud size must be odd.
Coloring majority_decode(const Coloring& blown_up, const CloudMap& clouds);

struct ComposeMode {
  enum class Type { kExact, kSampled };
  Type type = Type::kExact;
  long long count = 0;  // hyperedges per source edge in sampled mode
  std::uint64_t seed = 0;
  double cap = 1e6;     // bound on d = C(2s-1, s)^r in exact mode

  static ComposeMode exact(double cap = 1e6) { return {Type::kExact, 0, 0, cap}; }
  static ComposeMode sampled(long long count, std::uint64_t seed) {
    return {Type::kSampled, count, seed, 0};
  }
};

struct ComposedInstance {
  Hypergraph hypergraph;
  CloudMap clouds;        // cloud size 2s - 1
  long long per_edge = 0; // d in exact mode, `count` in sampled mode
};

/// Replaces each vertex of an r-uniform hypergraph with a cloud of 2s - 1
/// vertices and each edge with unions of s-subsets of its vertices' clouds.
ComposedInstance cloud_compose(const Hypergraph& source, int s,
                               const ComposeMode& mode);

using Rational = boost::rational<long long>;

/// Draws a string in [chi]^k, chi = k - sqrt(k), from the balanced pairwise
/// independent distribution supported on rainbow strings. Colors are 0-based.
std::vector<int> sample_mu(int k, Rng& rng);
/// Exact Pr[x_i = a, x_j = b] under sample_mu by enumerating every outcome.
Rational mu_exact_marginal(int k, int i, int j, int a, int b);
/// Palette size chi = k - sqrt(k); throws unless k is a perfect square with
/// chi >= 2.
int mu_palette(int k);

/// One block of 2Q points in {1,2}^d: point (q, i) is points[2 * q + i].
struct BlockSample {
  int special = 0;  // the cloud q' whose two strings are independent
  std::vector<std::vector<std::uint8_t>> points;
};

BlockSample sample_mu_bar_prime(int clouds, int d, Rng& rng);

}  // namespace hcolor
