#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "hcolor/cone_measure.hpp"
#include "hcolor/hypergraph.hpp"
#include "hcolor/sdp_relax.hpp"

namespace hcolor {

struct RoundingParams {
  int trials = 1;
  double tau = 0;  // threshold; 0 is plain sign rounding
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Standard Gaussian vector in R^d.
Eigen::VectorXd gaussian_direction(int d, Rng& rng);

/// Color 0 when <u_i, r> >= 0, else 1.
Coloring hyperplane_round(const VectorSolution& v, const Eigen::VectorXd& r);
Coloring hyperplane_round(const VectorSolution& v, Rng& rng);

struct RoundingResult {
  Coloring best;
  double best_fraction = 0;
  double mean_fraction = 0;
  int best_trial = 0;             // lowest trial index attaining the minimum
  std::vector<double> fractions;  // per trial
};

/// T independent roundings; trial t draws r from sub-stream ("round", t).
RoundingResult best_of_rounds(const Hypergraph& h, const VectorSolution& v,
                              const RoundingParams& params);

/// Probability that one hyperplane leaves the edge monochromatic, i.e. twice
/// the Gaussian measure of the edge's cone.
MeasureEstimate edge_mono_probability_mc(const VectorSolution& v,
                                         std::span<const Vertex> edge,
                                         long long samples, std::uint64_t seed,
                                         int workers = 1);

/// {i : <u_i, r> >= tau}, then for every edge left fully inside (in edge
/// order) the lowest vertex id is dropped. The result is independent in h.
VertexSet threshold_independent_set(const Hypergraph& h, const VectorSolution& v,
                                    double tau, const Eigen::VectorXd& r);
VertexSet threshold_independent_set(const Hypergraph& h, const VectorSolution& v,
                                    double tau, Rng& rng);

}  // namespace hcolor
