#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "hcolor/hypergraph.hpp"

namespace hcolor {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One unit vector per vertex, stored as the rows of an n x d matrix.
struct VectorSolution {
  RowMatrix vectors;

  int n() const { return static_cast<int>(vectors.rows()); }
  int dim() const { return static_cast<int>(vectors.cols()); }
  auto row(Vertex v) const { return vectors.row(v); }

  void normalize();
  double max_norm_error() const;
  /// Gram matrix of the vectors of the given vertices.
  Eigen::MatrixXd gram(std::span<const Vertex> vertices) const;
};

/// Worst violation of each constraint family of a relaxation.
struct FeasibilityReport {
  double sum_norm_violation = 0;  // max over edges of ||sum u|| - l
  double inner_violation = 0;     // max over in-edge pairs
  double unit_violation = 0;      // max over vertices of | ||u|| - 1 |
  long worst_sum_edge = -1;
  long worst_inner_edge = -1;
  Vertex worst_pair_a = -1;
  Vertex worst_pair_b = -1;
  double tolerance = 0;
  bool passes = true;

  double max_violation() const {
    return std::max({sum_norm_violation, inner_violation, unit_violation});
  }
};

/// Dimension used when the caller passes 0: min(n, 2k + 2), raised to the
/// palette's simplex dimension when needed.
int default_dimension(const Hypergraph& h, const PromiseKind& kind);

/// chi x d matrix whose rows are the vertices of a centered regular simplex.
RowMatrix simplex_vectors(int chi, int d);

/// Exact relaxation solution built from a witness: Discrepancy maps the two
/// colors to +w and -w, Rainbow/Strong map color i to simplex vertex i.
VectorSolution planted_solution(const Hypergraph& h, const PromiseKind& kind,
                                const Coloring& witness, int d = 0);

FeasibilityReport check_feasible(const Hypergraph& h, const PromiseKind& kind,
                                 const VectorSolution& v, double tol);

struct SolveParams {
  int dim = 0;  // 0 selects default_dimension
  double eps = 1e-6;
  int max_iters = 20000;
  std::uint64_t seed = 0;
  int reweight_every = 50;      // iterations between multiplier steps
  double penalty_growth = 2.0;  // factor applied to still-violated constraints
  double max_penalty = 1e6;
  std::optional<VectorSolution> warm_start;
};

/// Result of the penalty solver. Non-convergence is reported here, not thrown.
struct SolveResult {
  bool converged = false;
  int iterations = 0;
  VectorSolution solution;  // best iterate by max violation
  FeasibilityReport report;
};

/// Low-rank augmented Lagrangian: gradient descent over unit-row matrices,
/// a multiplier step every `reweight_every` iterations, and per-constraint
/// penalty weights that grow geometrically while the constraint stays violated.
SolveResult solve(const Hypergraph& h, const PromiseKind& kind,
                  const SolveParams& params);

/// Text format: `n d` header, then n rows of d values (17 significant digits).
void write_solution(std::ostream& out, const VectorSolution& v);
VectorSolution read_solution(std::istream& in);
void save_solution(const std::string& path, const VectorSolution& v);
VectorSolution load_solution(const std::string& path);

}  // namespace hcolor
