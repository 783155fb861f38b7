#include "hcolor/cone_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <thread>

#include "hcolor/common.hpp"

namespace hcolor {

GramCone::GramCone(Eigen::MatrixXd gram, double tol) : gram_(std::move(gram)) {
  if (gram_.rows() == 0 || gram_.rows() != gram_.cols()) {
    throw Error("invalid_gram", "gram matrix must be square and nonempty");
  }
  if ((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw Error("invalid_gram", "gram matrix is not symmetric");
  }
  if ((gram_.diagonal().array() - 1.0).abs().maxCoeff() > tol) {
    throw Error("invalid_gram", "gram matrix needs a unit diagonal");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_, Eigen::EigenvaluesOnly);
  min_eig_ = eig.eigenvalues()(0);
  if (min_eig_ < -tol) {
    throw Error("invalid_gram", "gram matrix has eigenvalue " + std::to_string(min_eig_));
  }
  const double total = gram_.sum();
  if (total < -tol) throw Error("invalid_gram", "gram matrix has negative total");
  sum_norm_ = std::sqrt(std::max(0.0, total));
}

Eigen::MatrixXd equicorrelated_gram(int k, double rho) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(k, k, rho);
  a.diagonal().setOnes();
  return a;
}

Eigen::MatrixXd strong_cone_gram(int k, double l) {
  if (k < 1 || l <= 0) throw Error("invalid_parameters", "strong cone needs k >= 1, l > 0");
  return equicorrelated_gram(k, -1.0 / (k + l - 1.0));
}

Eigen::MatrixXd symmetric_cone_gram(int k) {
  if (k < 1) throw Error("invalid_parameters", "symmetric cone needs k >= 1");
  return equicorrelated_gram(k, -1.0 / k);
}

SimplicialForm normals_to_simplicial(const Eigen::MatrixXd& U) {
  if (U.rows() != U.cols() || U.rows() == 0) {
    throw Error("invalid_parameters", "normal matrix must be square");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(U);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1)
                                            : std::numeric_limits<double>::infinity();
  if (!(cond < 1e12)) {
    throw Error("singular", "normal matrix is singular (condition estimate " +
                                std::to_string(cond) + ")");
  }
  const int k = static_cast<int>(U.rows());
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(U);
  Eigen::MatrixXd inv_t = lu.inverse().transpose();
  SimplicialForm out;
  out.D.resize(k);
  for (int i = 0; i < k; ++i) out.D(i) = 1.0 / inv_t.col(i).norm();
  out.V = inv_t * out.D.asDiagonal();

  Eigen::MatrixXd vu = out.V.transpose() * U;
  vu.diagonal() -= out.D;
  out.residual = vu.cwiseAbs().maxCoeff();

  // Cofactors of A_U are det(A_U) times its inverse.
  const Eigen::MatrixXd au = U.transpose() * U;
  const Eigen::MatrixXd cof = au.inverse() * au.determinant();
  const Eigen::MatrixXd av = out.V.transpose() * out.V;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      out.cofactor_error =
          std::max(out.cofactor_error,
                   std::fabs(av(i, j) - cof(i, j) / std::sqrt(cof(i, i) * cof(j, j))));
  return out;
}

Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& gram, double* jitter) {
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  double shift = 0;
  while (llt.info() != Eigen::Success) {
    shift = shift == 0 ? 1e-10 : shift * 10;
    if (shift > 1e-6) throw Error("not_psd", "gram matrix is not positive semidefinite");
    Eigen::MatrixXd shifted = gram;
    shifted.diagonal().array() += shift;
    llt.compute(shifted);
  }
  if (jitter) *jitter = shift;
  return llt.matrixL();
}

namespace {

constexpr long long kChunk = 1 << 16;

long long count_chunk(const Eigen::MatrixXd& L, long long samples, Rng rng) {
  const int k = static_cast<int>(L.rows());
  std::normal_distribution<double> normal;
  std::vector<double> z(k);
  long long hits = 0;
  for (long long s = 0; s < samples; ++s) {
    // Coordinates are generated in order; the first negative one ends the draw.
    bool inside = true;
    for (int i = 0; i < k; ++i) {
      z[i] = normal(rng);
      double g = 0;
      for (int j = 0; j <= i; ++j) g += L(i, j) * z[j];
      if (g < 0) {
        inside = false;
        break;
      }
    }
    hits += inside;
  }
  return hits;
}

}  // namespace

MeasureEstimate gaussian_measure_mc(const Eigen::MatrixXd& gram, long long samples,
                                    std::uint64_t seed, int workers) {
  if (samples < 1) throw Error("invalid_parameters", "need at least one sample");
  MeasureEstimate out;
  const Eigen::MatrixXd L = cholesky_with_jitter(gram, &out.jitter);
  const long long chunks = (samples + kChunk - 1) / kChunk;
  std::vector<long long> hits(static_cast<std::size_t>(chunks), 0);
  auto run = [&](long long first, long long stride) {
    for (long long c = first; c < chunks; c += stride) {
      const long long n = std::min(kChunk, samples - c * kChunk);
      hits[c] = count_chunk(L, n, make_rng(seed, "cone_mc", static_cast<std::uint64_t>(c)));
    }
  };
  workers = std::max(1, std::min<int>(workers, static_cast<int>(chunks)));
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
    for (auto& t : pool) t.join();
  }
  out.samples = samples;
  out.hits = std::accumulate(hits.begin(), hits.end(), 0LL);
  const double p = static_cast<double>(out.hits) / samples;
  out.estimate = p;
  out.std_error = std::sqrt(p * (1 - p) / samples);
  return out;
}

double log_measure_upper_bound(const GramCone& cone) {
  Eigen::LLT<Eigen::MatrixXd> llt(cone.gram());
  if (llt.info() != Eigen::Success) {
    throw Error("singular", "gram matrix is not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  const double log_det = 2.0 * L.diagonal().array().log().sum();
  const double k = cone.k();
  if (cone.sum_norm() == 0) return -std::numeric_limits<double>::infinity();
  return 0.5 * k * (1.0 - std::log(2.0 * std::numbers::pi * k)) +
         k * std::log(cone.sum_norm()) - 0.5 * log_det;
}

double measure_upper_bound(const GramCone& cone) {
  return std::exp(log_measure_upper_bound(cone));
}

L1Check l1_bound_check(const Eigen::MatrixXd& A, const Eigen::VectorXd& x) {
  if (A.rows() != A.cols() || A.rows() != x.size()) {
    throw Error("invalid_parameters", "dimension mismatch");
  }
  const double total = A.sum();
  if (!(total > 0)) throw Error("invalid_parameters", "sum(A) must be positive");
  if (x.minCoeff() < 0) throw Error("invalid_parameters", "x must be nonnegative");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  const auto& lambda = eig.eigenvalues();
  const auto& Q = eig.eigenvectors();
  const double cutoff = 1e-10 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  Eigen::VectorXd coords = Q.transpose() * x;
  L1Check out;
  double outside = 0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > cutoff) {
      out.lhs += coords(i) * coords(i) / lambda(i);
    } else {
      outside += coords(i) * coords(i);
    }
  }
  if (std::sqrt(outside) > 1e-8 * std::max(1.0, x.norm())) {
    throw Error("not_in_colspace", "x is not in the column space of A (residual " +
                                       std::to_string(std::sqrt(outside)) + ")");
  }
  const double l1 = x.sum();
  out.rhs = l1 * l1 / total;
  out.holds = out.lhs >= out.rhs - 1e-9;
  return out;
}

double default_delta(int k, double l, double c) {
  double delta = 0.5;
  if (l > 0 && k > 1) delta = 0.5 + std::log(l / c) / (2.0 * std::log(static_cast<double>(k)));
  return std::clamp(delta, 0.5, std::nextafter(1.0, 0.0));
}

SubsetSelection select_well_behaved(const Eigen::MatrixXd& A, double l, double c,
                                    double delta) {
  GramCone cone(A);
  const int k = cone.k();
  if (!(l >= 0 && l < k - 1)) throw Error("invalid_parameters", "need 0 <= l < k - 1");
  if (!(c > 0)) throw Error("invalid_parameters", "need c > 0");
  if (delta < 0) delta = default_delta(k, l, c);

  SubsetSelection out;
  out.c = c;
  out.delta = delta;
  out.beta = 1.0 / (k - l - 1.0);
  Eigen::MatrixXd B = Eigen::MatrixXd::Constant(k, k, -out.beta);
  B.diagonal().setOnes();
  const Eigen::MatrixXd E = A - B;
  if (E.minCoeff() < -1e-9) {
    throw Error("infeasible_input", "residue matrix has entry " +
                                        std::to_string(E.minCoeff()) +
                                        " below zero; vectors violate the rainbow constraint");
  }
  const double budget = c * std::pow(static_cast<double>(k), delta);
  out.removed = static_cast<int>(std::ceil(budget - 1e-12));
  if (out.removed >= k) {
    throw Error("invalid_parameters", "c k^delta leaves no column to keep");
  }
  out.residue = E.sum();
  out.column_cap = out.residue / budget;

  const Eigen::VectorXd colsum = E.colwise().sum().transpose();
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return colsum(a) < colsum(b); });
  out.selected.assign(order.begin(), order.begin() + (k - out.removed));
  std::sort(out.selected.begin(), out.selected.end());
  out.k_tilde = static_cast<int>(out.selected.size());
  for (int i : out.selected) out.max_selected_column = std::max(out.max_selected_column, colsum(i));

  out.A_S.resize(out.k_tilde, out.k_tilde);
  for (int i = 0; i < out.k_tilde; ++i)
    for (int j = 0; j < out.k_tilde; ++j) out.A_S(i, j) = A(out.selected[i], out.selected[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.A_S, Eigen::EigenvaluesOnly);
  out.lambda_min = eig.eigenvalues()(0);
  out.lambda_bound = 1.0 + out.beta - out.k_tilde * out.beta - out.column_cap;
  out.sum_A_S = out.A_S.sum();
  out.sum_bound = out.removed + out.residue;
  return out;
}

double log_symmetric_cone_asymptotic(int k) {
  if (k < 2) throw Error("invalid_parameters", "need k >= 2");
  const double kk = k;
  return (kk / 2 - 1) - 0.5 * (kk + 1) * std::log(2.0) - 0.5 * (kk - 1) * std::log(kk) -
         0.5 * kk * std::log(std::numbers::pi);
}

double symmetric_cone_asymptotic(int k) { return std::exp(log_symmetric_cone_asymptotic(k)); }

}  // namespace hcolor
