#include "hcolor/sdp_relax.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace hcolor {

// ---------------------------------------------------------------------------
// VectorSolution

void VectorSolution::normalize() {
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    double norm = vectors.row(i).norm();
    if (norm > 0) vectors.row(i) /= norm;
  }
}

double VectorSolution::max_norm_error() const {
  double worst = 0;
  for (Eigen::Index i = 0; i < vectors.rows(); ++i)
    worst = std::max(worst, std::fabs(vectors.row(i).norm() - 1.0));
  return worst;
}

Eigen::MatrixXd VectorSolution::gram(std::span<const Vertex> vertices) const {
  const auto size = static_cast<Eigen::Index>(vertices.size());
  Eigen::MatrixXd rows(size, vectors.cols());
  for (Eigen::Index i = 0; i < size; ++i) rows.row(i) = vectors.row(vertices[i]);
  return rows * rows.transpose();
}

// ---------------------------------------------------------------------------
// Relaxation constants

namespace {

struct Constraints {
  bool sum_norm = false;        // ||sum u|| <= bound
  double sum_bound = 0;
  enum class Inner { kNone, kAtLeast, kEqual } inner = Inner::kNone;
  double inner_target = 0;      // -1 / (chi - 1)
};

Constraints constraints_for(const PromiseKind& kind, int k) {
  kind.validate(k);
  Constraints c;
  const int l = kind.slack(k);
  switch (kind.type) {
    case PromiseKind::Type::kDiscrepancy:
      c.sum_norm = true;
      c.sum_bound = l;
      break;
    case PromiseKind::Type::kRainbow:
      c.sum_norm = true;
      c.sum_bound = l;
      c.inner = Constraints::Inner::kAtLeast;
      c.inner_target = -1.0 / (kind.param - 1);
      break;
    case PromiseKind::Type::kStrong:
      c.inner = Constraints::Inner::kEqual;
      c.inner_target = -1.0 / (kind.param - 1);
      break;
  }
  return c;
}

double inner_violation(const Constraints& c, double ip) {
  switch (c.inner) {
    case Constraints::Inner::kNone: return 0;
    case Constraints::Inner::kAtLeast: return std::max(0.0, c.inner_target - ip);
    case Constraints::Inner::kEqual: return std::fabs(ip - c.inner_target);
  }
  return 0;
}

}  // namespace

int default_dimension(const Hypergraph& h, const PromiseKind& kind) {
  int d = std::min(h.n(), 2 * h.k() + 2);
  return std::max({d, kind.palette() - 1, 1});
}

RowMatrix simplex_vectors(int chi, int d) {
  if (chi < 2) throw Error("invalid_parameters", "simplex needs chi >= 2");
  if (d < chi - 1) {
    throw Error("dimension_too_small", "a " + std::to_string(chi) +
                                           "-simplex needs d >= " +
                                           std::to_string(chi - 1));
  }
  // Rows of sqrt(chi/(chi-1)) (I - 11^T/chi) expressed in the Helmert basis
  // of the hyperplane orthogonal to the all-ones vector.
  const double scale = std::sqrt(static_cast<double>(chi) / (chi - 1));
  RowMatrix out = RowMatrix::Zero(chi, d);
  for (int i = 0; i < chi; ++i) {
    for (int j = 1; j < chi; ++j) {
      // Basis vector j: ones on [0, j), -j at index j, over sqrt(j(j+1)).
      double coord;
      if (i < j) coord = 1.0;
      else if (i == j) coord = -static_cast<double>(j);
      else coord = 0.0;
      // (e_i - 1/chi) . h_j = h_j[i] since h_j is orthogonal to ones.
      out(i, j - 1) = scale * coord / std::sqrt(static_cast<double>(j) * (j + 1));
    }
  }
  return out;
}

VectorSolution planted_solution(const Hypergraph& h, const PromiseKind& kind,
                                const Coloring& witness, int d) {
  kind.validate(h.k());
  auto check = verify_promise(h, witness, kind);
  if (!check.holds) {
    throw Error("witness_invalid",
                "witness violates " + kind.to_string() + " on " +
                    std::to_string(check.violations.size()) + " edges");
  }
  if (d == 0) d = default_dimension(h, kind);
  RowMatrix palette_vectors;
  if (kind.type == PromiseKind::Type::kDiscrepancy) {
    if (d < 1) throw Error("dimension_too_small", "need d >= 1");
    palette_vectors = RowMatrix::Zero(2, d);
    palette_vectors(0, 0) = 1.0;
    palette_vectors(1, 0) = -1.0;
  } else {
    palette_vectors = simplex_vectors(kind.param, d);
  }
  VectorSolution out{RowMatrix(h.n(), d)};
  for (Vertex v = 0; v < h.n(); ++v) out.vectors.row(v) = palette_vectors.row(witness[v]);
  return out;
}

FeasibilityReport check_feasible(const Hypergraph& h, const PromiseKind& kind,
                                 const VectorSolution& v, double tol) {
  if (v.n() != h.n()) {
    throw Error("size_mismatch", "solution has " + std::to_string(v.n()) +
                                     " rows for " + std::to_string(h.n()) +
                                     " vertices");
  }
  const Constraints c = constraints_for(kind, h.k());
  FeasibilityReport report;
  report.tolerance = tol;
  report.unit_violation = v.max_norm_error();
  Eigen::RowVectorXd sum(v.dim());
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto edge = h.edge(e);
    if (c.sum_norm) {
      sum.setZero();
      for (Vertex u : edge) sum += v.row(u);
      double viol = std::max(0.0, sum.norm() - c.sum_bound);
      if (viol > report.sum_norm_violation || report.worst_sum_edge < 0) {
        if (viol >= report.sum_norm_violation) {
          report.sum_norm_violation = viol;
          report.worst_sum_edge = static_cast<long>(e);
        }
      }
    }
    if (c.inner != Constraints::Inner::kNone) {
      for (std::size_t a = 0; a < edge.size(); ++a) {
        for (std::size_t b = a + 1; b < edge.size(); ++b) {
          double viol = inner_violation(c, v.row(edge[a]).dot(v.row(edge[b])));
          if (viol > report.inner_violation || report.worst_inner_edge < 0) {
            if (viol >= report.inner_violation) {
              report.inner_violation = viol;
              report.worst_inner_edge = static_cast<long>(e);
              report.worst_pair_a = edge[a];
              report.worst_pair_b = edge[b];
            }
          }
        }
      }
    }
  }
  report.passes = report.max_violation() <= tol;
  return report;
}

// ---------------------------------------------------------------------------
// Penalty solver

namespace {

// Augmented Lagrangian of the relaxation over unit-row matrices. Each
// constraint keeps a multiplier and its own penalty weight.
class PenaltyObjective {
 public:
  PenaltyObjective(const Hypergraph& h, const Constraints& c)
      : h_(h), c_(c), k_(static_cast<std::size_t>(h.k())),
        pairs_per_edge_(k_ * (k_ - 1) / 2) {
    const std::size_t sums = c.sum_norm ? h.num_edges() : 0;
    const std::size_t pairs =
        c.inner != Constraints::Inner::kNone ? h.num_edges() * pairs_per_edge_ : 0;
    sum_.assign(sums, Slot{});
    pair_.assign(pairs, Slot{});
  }

  // Lagrangian value; fills `grad` (Euclidean gradient) when non-null and
  // reports the max constraint violation.
  double evaluate(const RowMatrix& x, RowMatrix* grad, double* max_violation) const {
    double value = 0, worst = 0;
    if (grad) grad->setZero(x.rows(), x.cols());
    Eigen::RowVectorXd sum(x.cols());
    for (std::size_t e = 0; e < h_.num_edges(); ++e) {
      auto edge = h_.edge(e);
      if (c_.sum_norm) {
        sum.setZero();
        for (Vertex u : edge) sum += x.row(u);
        const double norm = sum.norm();
        const double g = norm - c_.sum_bound;  // <= 0
        worst = std::max(worst, g);
        double slope = 0;
        value += sum_[e].inequality(g, &slope);
        if (grad && slope != 0 && norm > 0) {
          Eigen::RowVectorXd dir = (slope / norm) * sum;
          for (Vertex u : edge) grad->row(u) += dir;
        }
      }
      if (c_.inner != Constraints::Inner::kNone) {
        std::size_t p = e * pairs_per_edge_;
        for (std::size_t a = 0; a < k_; ++a) {
          for (std::size_t b = a + 1; b < k_; ++b, ++p) {
            const Vertex ua = edge[a], ub = edge[b];
            const double ip = x.row(ua).dot(x.row(ub));
            double slope = 0;  // d(term)/d(ip)
            if (c_.inner == Constraints::Inner::kEqual) {
              const double g = ip - c_.inner_target;
              worst = std::max(worst, std::fabs(g));
              value += pair_[p].equality(g, &slope);
            } else {
              const double g = c_.inner_target - ip;  // <= 0
              worst = std::max(worst, g);
              value += pair_[p].inequality(g, &slope);
              slope = -slope;
            }
            if (grad && slope != 0) {
              grad->row(ua) += slope * x.row(ub);
              grad->row(ub) += slope * x.row(ua);
            }
          }
        }
      }
    }
    if (max_violation) *max_violation = std::max(0.0, worst);
    return value;
  }

  // First-order multiplier step; constraints still violated beyond eps get
  // their weight multiplied by `factor`.
  void update(const RowMatrix& x, double eps, double factor, double cap) {
    Eigen::RowVectorXd sum(x.cols());
    for (std::size_t e = 0; e < h_.num_edges(); ++e) {
      auto edge = h_.edge(e);
      if (c_.sum_norm) {
        sum.setZero();
        for (Vertex u : edge) sum += x.row(u);
        const double g = sum.norm() - c_.sum_bound;
        sum_[e].step_inequality(g, g > eps, factor, cap);
      }
      if (c_.inner != Constraints::Inner::kNone) {
        std::size_t p = e * pairs_per_edge_;
        for (std::size_t a = 0; a < k_; ++a) {
          for (std::size_t b = a + 1; b < k_; ++b, ++p) {
            const double ip = x.row(edge[a]).dot(x.row(edge[b]));
            if (c_.inner == Constraints::Inner::kEqual) {
              const double g = ip - c_.inner_target;
              pair_[p].step_equality(g, std::fabs(g) > eps, factor, cap);
            } else {
              const double g = c_.inner_target - ip;
              pair_[p].step_inequality(g, g > eps, factor, cap);
            }
          }
        }
      }
    }
  }

 private:
  struct Slot {
    double lambda = 0;
    double rho = 1;

    double equality(double g, double* slope) const {
      *slope = lambda + rho * g;
      return lambda * g + 0.5 * rho * g * g;
    }
    double inequality(double g, double* slope) const {
      const double z = lambda + rho * g;
      *slope = z > 0 ? z : 0;
      return ((z > 0 ? z * z : 0) - lambda * lambda) / (2 * rho);
    }
    void step_equality(double g, bool grow, double factor, double cap) {
      lambda += rho * g;
      if (grow) rho = std::min(cap, rho * factor);
    }
    void step_inequality(double g, bool grow, double factor, double cap) {
      lambda = std::max(0.0, lambda + rho * g);
      if (grow) rho = std::min(cap, rho * factor);
    }
  };

  const Hypergraph& h_;
  Constraints c_;
  std::size_t k_;
  std::size_t pairs_per_edge_;
  std::vector<Slot> sum_;
  std::vector<Slot> pair_;
};

void normalize_rows(RowMatrix& x) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double norm = x.row(i).norm();
    if (norm > 0) x.row(i) /= norm;
  }
}

// Removes the radial component of each gradient row (tangent space of the
// product of spheres).
void project_tangent(const RowMatrix& x, RowMatrix& g) {
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    g.row(i) -= g.row(i).dot(x.row(i)) * x.row(i);
}

}  // namespace

SolveResult solve(const Hypergraph& h, const PromiseKind& kind,
                  const SolveParams& params) {
  const Constraints c = constraints_for(kind, h.k());
  const int d = params.dim == 0 ? default_dimension(h, kind) : params.dim;
  if (d < 2 && h.n() > 1) throw Error("invalid_parameters", "solver needs d >= 2");

  RowMatrix x;
  if (params.warm_start) {
    if (params.warm_start->n() != h.n()) {
      throw Error("size_mismatch", "warm start has the wrong vertex count");
    }
    x = params.warm_start->vectors;
  } else {
    Rng rng = make_rng(params.seed, "solve");
    std::normal_distribution<double> normal;
    x.resize(h.n(), d);
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = normal(rng);
  }
  normalize_rows(x);

  PenaltyObjective objective(h, c);
  RowMatrix grad, prev_x, prev_grad, trial;
  double violation = 0;
  double value = objective.evaluate(x, &grad, &violation);
  project_tangent(x, grad);

  SolveResult result;
  RowMatrix best = x;
  double best_violation = violation;
  double step = 1.0;
  int iter = 0;
  for (; iter < params.max_iters && violation > params.eps; ++iter) {
    if (iter > 0 && iter % params.reweight_every == 0) {
      objective.update(x, params.eps, params.penalty_growth,
                               params.max_penalty);
      value = objective.evaluate(x, &grad, &violation);
      project_tangent(x, grad);
      prev_x.resize(0, 0);
    }
    // Barzilai-Borwein initial step, then Armijo backtracking.
    if (prev_x.size() > 0) {
      const RowMatrix s = x - prev_x;
      const RowMatrix y = grad - prev_grad;
      const double sy = (s.array() * y.array()).sum();
      if (sy > 0) step = std::clamp((s.array() * s.array()).sum() / sy, 1e-8, 1e3);
    }
    const double grad_sq = (grad.array() * grad.array()).sum();
    if (grad_sq == 0) break;
    double trial_value = 0, trial_violation = 0;
    bool accepted = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      trial = x - step * grad;
      normalize_rows(trial);
      trial_value = objective.evaluate(trial, nullptr, &trial_violation);
      if (trial_value <= value - 1e-4 * step * grad_sq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Stationary for the current multipliers: take a multiplier step.
      objective.update(x, params.eps, params.penalty_growth,
                               params.max_penalty);
      value = objective.evaluate(x, &grad, &violation);
      project_tangent(x, grad);
      prev_x.resize(0, 0);
      step = 1.0;
      continue;
    }
    prev_x = x;
    prev_grad = grad;
    x = trial;
    value = objective.evaluate(x, &grad, &violation);
    project_tangent(x, grad);
    if (violation < best_violation) {
      best_violation = violation;
      best = x;
    }
  }

  result.iterations = iter;
  result.solution = VectorSolution{violation <= best_violation ? x : best};
  result.report = check_feasible(h, kind, result.solution, params.eps);
  result.converged = result.report.passes;
  return result;
}

// ---------------------------------------------------------------------------
// Text I/O

void write_solution(std::ostream& out, const VectorSolution& v) {
  out << v.n() << ' ' << v.dim() << '\n';
  char buf[40];
  for (int i = 0; i < v.n(); ++i) {
    for (int j = 0; j < v.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", v.vectors(i, j));
      if (j) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

VectorSolution read_solution(std::istream& in) {
  long long n = -1, d = -1;
  if (!(in >> n >> d) || n < 0 || d < 1) {
    throw Error("parse_error", "bad solution header, expected `n d`");
  }
  VectorSolution v{RowMatrix(n, d)};
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < d; ++j)
      if (!(in >> v.vectors(i, j))) throw Error("parse_error", "solution file is truncated");
  return v;
}

void save_solution(const std::string& path, const VectorSolution& v) {
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write " + path);
  write_solution(out, v);
}

VectorSolution load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path);
  return read_solution(in);
}

}  // namespace hcolor
