#include "hcolor/instance_forge.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

namespace hcolor {

namespace {

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// `count` distinct members of `pool`, chosen uniformly.
std::vector<Vertex> sample_distinct(const std::vector<Vertex>& pool, int count,
                                    Rng& rng) {
  std::vector<Vertex> scratch = pool;
  for (int i = 0; i < count; ++i) {
    int j = uniform_int(rng, i, static_cast<int>(scratch.size()) - 1);
    std::swap(scratch[static_cast<std::size_t>(i)],
              scratch[static_cast<std::size_t>(j)]);
  }
  scratch.resize(static_cast<std::size_t>(count));
  return scratch;
}

// Calls f with every r-subset of [0, n) in lexicographic order.
void for_each_combination(int n, int r,
                          const std::function<void(const std::vector<int>&)>& f) {
  if (r < 0 || r > n) return;
  std::vector<int> idx(static_cast<std::size_t>(r));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    int i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::vector<std::vector<int>> all_combinations(int n, int r) {
  std::vector<std::vector<int>> out;
  for_each_combination(n, r, [&](const std::vector<int>& c) { out.push_back(c); });
  return out;
}

double binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(r + 1.0) -
                             std::lgamma(n - r + 1.0)));
}

}  // namespace

// ---------------------------------------------------------------------------
// Planted instances

PlantedInstance gen_planted(const PromiseKind& kind, int n, int m, int k,
                            std::uint64_t seed) {
  if (k < 2) throw Error("invalid_parameters", "k must be >= 2");
  if (n < k) throw Error("invalid_parameters", "need k <= n");
  if (m < 0) throw Error("invalid_parameters", "negative edge count");
  kind.validate(k, /*require_parity=*/kind.type ==
                       PromiseKind::Type::kDiscrepancy);

  const int palette = kind.palette();
  Rng rng = make_rng(seed, "planted");

  // Near-equal color classes over a random vertex order.
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<Vertex>> classes(static_cast<std::size_t>(palette));
  std::vector<int> colors(static_cast<std::size_t>(n));
  {
    std::size_t pos = 0;
    for (int c = 0; c < palette; ++c) {
      int size = n / palette + (c < n % palette ? 1 : 0);
      for (int i = 0; i < size; ++i, ++pos) {
        classes[static_cast<std::size_t>(c)].push_back(order[pos]);
        colors[static_cast<std::size_t>(order[pos])] = c;
      }
      std::sort(classes[static_cast<std::size_t>(c)].begin(),
                classes[static_cast<std::size_t>(c)].end());
    }
  }
  const int smallest = n / palette;

  // Largest number of vertices any edge takes from a single class.
  int per_class = 1;
  std::vector<int> balanced_counts;  // discrepancy: allowed color-0 counts
  switch (kind.type) {
    case PromiseKind::Type::kStrong:
      per_class = 1;
      break;
    case PromiseKind::Type::kRainbow:
      per_class = k - palette + 1;
      break;
    case PromiseKind::Type::kDiscrepancy:
      for (int a = 0; a <= k; ++a)
        if (std::abs(2 * a - k) <= kind.param) balanced_counts.push_back(a);
      per_class = std::max(balanced_counts.back(), k - balanced_counts.front());
      break;
  }
  if (smallest < per_class) {
    throw Error("infeasible_parameters",
                "color classes of size " + std::to_string(smallest) +
                    " cannot supply " + std::to_string(per_class) +
                    " distinct vertices per edge");
  }

  std::vector<std::vector<Vertex>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::vector<int> counts(static_cast<std::size_t>(palette));
  std::vector<int> palette_ids(static_cast<std::size_t>(palette));
  std::iota(palette_ids.begin(), palette_ids.end(), 0);
  for (int e = 0; e < m; ++e) {
    std::fill(counts.begin(), counts.end(), 0);
    switch (kind.type) {
      case PromiseKind::Type::kStrong:
        for (int c : sample_distinct(palette_ids, k, rng))
          counts[static_cast<std::size_t>(c)] = 1;
        break;
      case PromiseKind::Type::kRainbow: {
        // Uniform composition of k into `palette` positive parts.
        std::vector<int> slots(static_cast<std::size_t>(k - 1));
        std::iota(slots.begin(), slots.end(), 1);
        auto cuts = sample_distinct(slots, palette - 1, rng);
        std::sort(cuts.begin(), cuts.end());
        int prev = 0;
        for (int c = 0; c < palette - 1; ++c) {
          counts[static_cast<std::size_t>(c)] = cuts[static_cast<std::size_t>(c)] - prev;
          prev = cuts[static_cast<std::size_t>(c)];
        }
        counts[static_cast<std::size_t>(palette - 1)] = k - prev;
        break;
      }
      case PromiseKind::Type::kDiscrepancy: {
        int a = balanced_counts[static_cast<std::size_t>(
            uniform_int(rng, 0, static_cast<int>(balanced_counts.size()) - 1))];
        counts[0] = a;
        counts[1] = k - a;
        break;
      }
    }
    std::vector<Vertex> edge;
    edge.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < palette; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) continue;
      for (Vertex v : sample_distinct(classes[static_cast<std::size_t>(c)],
                                      counts[static_cast<std::size_t>(c)], rng))
        edge.push_back(v);
    }
    edges.push_back(std::move(edge));
  }

  return PlantedInstance{Hypergraph(k, n, std::move(edges)),
                         Coloring(palette, std::move(colors)), kind, seed};
}

// ---------------------------------------------------------------------------
// Graphs

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
  if (n < 0) throw Error("invalid_graph", "negative vertex count");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw Error("vertex_out_of_range", "graph vertex out of range");
    }
    if (u == v) throw Error("invalid_graph", "self-loop at " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw Error("invalid_graph", "duplicate graph edge");
  }
  edges_ = std::move(edges);
}

Graph read_graph(std::istream& in) {
  std::string line;
  long long n = -1, m = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream row(line);
    if (n < 0) {
      if (!(row >> n)) continue;
      if (!(row >> m) || n < 0 || m < 0) {
        throw Error("parse_error", "bad graph header, expected `n m`");
      }
      continue;
    }
    int u = 0, v = 0;
    if (!(row >> u)) continue;
    if (!(row >> v)) throw Error("parse_error", "graph edge line needs two ids");
    edges.emplace_back(u, v);
  }
  if (n < 0) throw Error("parse_error", "missing graph header");
  if (static_cast<long long>(edges.size()) != m) {
    throw Error("parse_error", "expected " + std::to_string(m) +
                                   " graph edges, got " +
                                   std::to_string(edges.size()));
  }
  return Graph(static_cast<int>(n), std::move(edges));
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.n() << ' ' << g.num_edges() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph random_graph(int n, double p, std::uint64_t seed) {
  Rng rng = make_rng(seed, "graph");
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) edges.emplace_back(u, v);
  return Graph(n, std::move(edges));
}

int cut_weight(const Graph& g, const Coloring& side) {
  if (side.size() != g.n()) {
    throw Error("size_mismatch", "coloring size does not match graph");
  }
  int cut = 0;
  for (auto [u, v] : g.edges()) cut += side[u] != side[v];
  return cut;
}

// ---------------------------------------------------------------------------
// Max-Cut gadget

long long maxcut_gadget_size(int k) {
  if (k < 3 || k % 2 == 0) {
    throw Error("invalid_parameters", "gadget needs odd k >= 3");
  }
  int half_k = (k - 1) / 2;
  return 2 * static_cast<long long>(binomial(k, half_k)) *
         static_cast<long long>(binomial(k, half_k + 1));
}

MaxCutGadget maxcut_to_disc1(const Graph& g, int k) {
  const long long per_edge = maxcut_gadget_size(k);
  const int half_k = (k - 1) / 2;
  CloudMap clouds{g.n(), k};
  const auto small = all_combinations(k, half_k);
  const auto large = all_combinations(k, half_k + 1);

  std::vector<std::vector<Vertex>> edges;
  edges.reserve(g.num_edges() * static_cast<std::size_t>(per_edge));
  for (auto [u, v] : g.edges()) {
    for (int flip = 0; flip < 2; ++flip) {
      const auto& from_u = flip == 0 ? small : large;
      const auto& from_v = flip == 0 ? large : small;
      for (const auto& a : from_u) {
        for (const auto& b : from_v) {
          std::vector<Vertex> edge;
          edge.reserve(static_cast<std::size_t>(k));
          for (int i : a) edge.push_back(clouds.vertex(u, i));
          for (int i : b) edge.push_back(clouds.vertex(v, i));
          edges.push_back(std::move(edge));
        }
      }
    }
  }
  std::vector<double> weights(edges.size(), 1.0);
  return MaxCutGadget{
      Hypergraph(k, clouds.blown_up_n(), std::move(edges), std::move(weights),
                 static_cast<double>(per_edge)),
      clouds, per_edge};
}

Coloring lift_cloud_constant(const Coloring& original, const CloudMap& clouds) {
  if (original.size() != clouds.original_n) {
    throw Error("size_mismatch", "coloring does not match the cloud map");
  }
  std::vector<int> colors(static_cast<std::size_t>(clouds.blown_up_n()));
  for (int u = 0; u < clouds.original_n; ++u)
    for (int i = 0; i < clouds.cloud_size; ++i)
      colors[static_cast<std::size_t>(clouds.vertex(u, i))] = original[u];
  return Coloring(original.palette(), std::move(colors));
}

Coloring majority_decode(const Coloring& blown_up, const CloudMap& clouds) {
  if (clouds.cloud_size % 2 == 0) {
    throw Error("invalid_parameters", "majority decoding needs odd clouds");
  }
  if (blown_up.size() != clouds.blown_up_n()) {
    throw Error("size_mismatch", "coloring does not match the cloud map");
  }
  if (blown_up.palette() != 2 || !blown_up.is_total()) {
    throw Error("invalid_coloring", "majority decoding needs a total 2-coloring");
  }
  std::vector<int> colors(static_cast<std::size_t>(clouds.original_n));
  for (int u = 0; u < clouds.original_n; ++u) {
    int ones = 0;
    for (int i = 0; i < clouds.cloud_size; ++i) ones += blown_up[clouds.vertex(u, i)];
    colors[static_cast<std::size_t>(u)] = 2 * ones > clouds.cloud_size ? 1 : 0;
  }
  return Coloring(2, std::move(colors));
}

// ---------------------------------------------------------------------------
// Cloud composition

ComposedInstance cloud_compose(const Hypergraph& source, int s,
                               const ComposeMode& mode) {
  if (s < 1) throw Error("invalid_parameters", "s must be >= 1");
  const int r = source.k();
  const int cloud = 2 * s - 1;
  const CloudMap clouds{source.n(), cloud};
  const auto subsets = all_combinations(cloud, s);
  const double per_vertex = static_cast<double>(subsets.size());
  const double d = std::pow(per_vertex, r);

  std::vector<std::vector<Vertex>> edges;
  std::vector<double> weights;
  long long per_edge = 0;

  if (mode.type == ComposeMode::Type::kExact) {
    if (d > mode.cap) {
      throw Error("cap_exceeded", "exact composition needs " +
                                      std::to_string(d) +
                                      " hyperedges per edge, cap is " +
                                      std::to_string(mode.cap));
    }
    per_edge = static_cast<long long>(d);
    edges.reserve(source.num_edges() * static_cast<std::size_t>(per_edge));
    std::vector<std::size_t> pick(static_cast<std::size_t>(r));
    for (std::size_t e = 0; e < source.num_edges(); ++e) {
      auto src = source.edge(e);
      std::fill(pick.begin(), pick.end(), 0);
      while (true) {
        std::vector<Vertex> edge;
        edge.reserve(static_cast<std::size_t>(r * s));
        for (int i = 0; i < r; ++i)
          for (int j : subsets[pick[static_cast<std::size_t>(i)]])
            edge.push_back(clouds.vertex(src[static_cast<std::size_t>(i)], j));
        edges.push_back(std::move(edge));
        weights.push_back(source.raw_weight(e));
        int i = r - 1;
        while (i >= 0 && ++pick[static_cast<std::size_t>(i)] == subsets.size()) {
          pick[static_cast<std::size_t>(i)] = 0;
          --i;
        }
        if (i < 0) break;
      }
    }
  } else {
    if (mode.count < 1) throw Error("invalid_parameters", "sample count must be >= 1");
    per_edge = mode.count;
    Rng rng = make_rng(mode.seed, "compose");
    std::uniform_int_distribution<std::size_t> pick(0, subsets.size() - 1);
    for (std::size_t e = 0; e < source.num_edges(); ++e) {
      auto src = source.edge(e);
      for (long long c = 0; c < mode.count; ++c) {
        std::vector<Vertex> edge;
        edge.reserve(static_cast<std::size_t>(r * s));
        for (int i = 0; i < r; ++i)
          for (int j : subsets[pick(rng)])
            edge.push_back(clouds.vertex(src[static_cast<std::size_t>(i)], j));
        edges.push_back(std::move(edge));
        weights.push_back(source.raw_weight(e));
      }
    }
  }
  return ComposedInstance{
      Hypergraph(r * s, clouds.blown_up_n(), std::move(edges), std::move(weights),
                 source.denominator()),
      clouds, per_edge};
}

// ---------------------------------------------------------------------------
// Balanced pairwise independent distribution

int mu_palette(int k) {
  int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(k))));
  if (k < 1 || root * root != k) {
    throw Error("invalid_parameters", "k = " + std::to_string(k) +
                                          " is not a perfect square");
  }
  int chi = k - root;
  if (chi < 2) throw Error("invalid_parameters", "palette k - sqrt(k) must be >= 2");
  return chi;
}

std::vector<int> sample_mu(int k, Rng& rng) {
  const int chi = mu_palette(k);
  std::vector<int> positions(static_cast<std::size_t>(k));
  std::iota(positions.begin(), positions.end(), 0);
  auto chosen = sample_distinct(positions, chi, rng);
  std::sort(chosen.begin(), chosen.end());
  std::vector<int> perm(static_cast<std::size_t>(chi));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const int filler = uniform_int(rng, 0, chi - 1);

  std::vector<int> x(static_cast<std::size_t>(k), filler);
  for (int j = 0; j < chi; ++j)
    x[static_cast<std::size_t>(chosen[static_cast<std::size_t>(j)])] =
        perm[static_cast<std::size_t>(j)];
  return x;
}

Rational mu_exact_marginal(int k, int i, int j, int a, int b) {
  const int chi = mu_palette(k);
  if (i < 0 || j < 0 || i >= k || j >= k || a < 0 || b < 0 || a >= chi || b >= chi) {
    throw Error("invalid_parameters", "coordinate or color out of range");
  }
  const double outcomes = binomial(k, chi) * std::tgamma(chi + 1.0) * chi;
  if (outcomes > 1e7) {
    throw Error("cap_exceeded", "enumeration of " + std::to_string(outcomes) +
                                    " outcomes exceeds the cap");
  }

  long long hits = 0, total = 0;
  std::vector<int> perm(static_cast<std::size_t>(chi));
  std::vector<int> x(static_cast<std::size_t>(k));
  for_each_combination(k, chi, [&](const std::vector<int>& chosen) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int y = 0; y < chi; ++y) {
        std::fill(x.begin(), x.end(), y);
        for (int p = 0; p < chi; ++p)
          x[static_cast<std::size_t>(chosen[static_cast<std::size_t>(p)])] =
              perm[static_cast<std::size_t>(p)];
        ++total;
        if (x[static_cast<std::size_t>(i)] == a && x[static_cast<std::size_t>(j)] == b)
          ++hits;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  });
  return Rational(hits, total);
}

BlockSample sample_mu_bar_prime(int clouds, int d, Rng& rng) {
  if (clouds < 2) throw Error("invalid_parameters", "need Q >= 2 clouds");
  if (d < 1) throw Error("invalid_parameters", "need d >= 1");
  BlockSample out;
  out.special = uniform_int(rng, 0, clouds - 1);
  out.points.assign(static_cast<std::size_t>(2 * clouds),
                    std::vector<std::uint8_t>(static_cast<std::size_t>(d)));
  std::bernoulli_distribution coin(0.5);
  for (int q = 0; q < clouds; ++q) {
    auto& first = out.points[static_cast<std::size_t>(2 * q)];
    auto& second = out.points[static_cast<std::size_t>(2 * q + 1)];
    for (int j = 0; j < d; ++j) {
      if (q == out.special) {
        first[static_cast<std::size_t>(j)] = coin(rng) ? 2 : 1;
        second[static_cast<std::size_t>(j)] = coin(rng) ? 2 : 1;
      } else {
        bool swap = coin(rng);
        first[static_cast<std::size_t>(j)] = swap ? 2 : 1;
        second[static_cast<std::size_t>(j)] = swap ? 1 : 2;
      }
    }
  }
  return out;
}

}  // namespace hcolor
