#include "hcolor/rounding.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace hcolor {

Eigen::VectorXd gaussian_direction(int d, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd r(d);
  for (int i = 0; i < d; ++i) r(i) = normal(rng);
  return r;
}

Coloring hyperplane_round(const VectorSolution& v, const Eigen::VectorXd& r) {
  if (r.size() != v.dim()) throw Error("size_mismatch", "direction has the wrong dimension");
  const Eigen::VectorXd proj = v.vectors * r;
  std::vector<int> colors(static_cast<std::size_t>(v.n()));
  for (int i = 0; i < v.n(); ++i) colors[i] = proj(i) >= 0 ? 0 : 1;
  return Coloring(2, std::move(colors));
}

Coloring hyperplane_round(const VectorSolution& v, Rng& rng) {
  return hyperplane_round(v, gaussian_direction(v.dim(), rng));
}

RoundingResult best_of_rounds(const Hypergraph& h, const VectorSolution& v,
                              const RoundingParams& params) {
  if (params.trials < 1) throw Error("invalid_parameters", "need at least one trial");
  if (v.n() != h.n()) throw Error("size_mismatch", "solution does not match instance");
  RoundingResult out;
  out.fractions.assign(static_cast<std::size_t>(params.trials), 0.0);
  auto run = [&](int first, int stride) {
    for (int t = first; t < params.trials; t += stride) {
      Rng rng = make_rng(params.seed, "round", static_cast<std::uint64_t>(t));
      out.fractions[t] = mono_fraction(h, hyperplane_round(v, rng));
    }
  };
  const int workers = std::clamp(params.workers, 1, params.trials);
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
    for (auto& t : pool) t.join();
  }
  auto best = std::min_element(out.fractions.begin(), out.fractions.end());
  out.best_trial = static_cast<int>(best - out.fractions.begin());
  out.best_fraction = *best;
  out.mean_fraction =
      std::accumulate(out.fractions.begin(), out.fractions.end(), 0.0) / params.trials;
  Rng rng = make_rng(params.seed, "round", static_cast<std::uint64_t>(out.best_trial));
  out.best = hyperplane_round(v, rng);
  return out;
}

MeasureEstimate edge_mono_probability_mc(const VectorSolution& v,
                                         std::span<const Vertex> edge,
                                         long long samples, std::uint64_t seed,
                                         int workers) {
  MeasureEstimate m = gaussian_measure_mc(v.gram(edge), samples, seed, workers);
  m.estimate *= 2;
  m.std_error *= 2;
  return m;
}

VertexSet threshold_independent_set(const Hypergraph& h, const VectorSolution& v,
                                    double tau, const Eigen::VectorXd& r) {
  if (tau < 0) throw Error("invalid_parameters", "threshold must be nonnegative");
  if (r.size() != v.dim()) throw Error("size_mismatch", "direction has the wrong dimension");
  const Eigen::VectorXd proj = v.vectors * r;
  std::vector<char> in(static_cast<std::size_t>(h.n()), 0);
  for (int i = 0; i < h.n(); ++i) in[i] = proj(i) >= tau;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto edge = h.edge(e);
    if (std::all_of(edge.begin(), edge.end(), [&](Vertex u) { return in[u] != 0; }))
      in[edge[0]] = 0;  // edges are sorted, so edge[0] is the lowest id
  }
  VertexSet out;
  for (int i = 0; i < h.n(); ++i)
    if (in[i]) out.push_back(i);
  return out;
}

VertexSet threshold_independent_set(const Hypergraph& h, const VectorSolution& v,
                                    double tau, Rng& rng) {
  return threshold_independent_set(h, v, tau, gaussian_direction(v.dim(), rng));
}

}  // namespace hcolor
