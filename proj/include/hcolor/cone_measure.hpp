#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace hcolor {

/// Cone {x : U^T x >= 0} described only by the gram matrix A_U = U^T U of its
/// unit normals.
class GramCone {
 public:
  GramCone() = default;
  /// Validates symmetry, unit diagonal and positive semidefiniteness (within
  /// `tol`). Throws Error("invalid_gram").
  explicit GramCone(Eigen::MatrixXd gram, double tol = 1e-9);

  int k() const { return static_cast<int>(gram_.rows()); }
  const Eigen::MatrixXd& gram() const { return gram_; }
  /// ||sum u_i|| = sqrt(sum of all entries).
  double sum_norm() const { return sum_norm_; }
  double min_eigenvalue() const { return min_eig_; }

 private:
  Eigen::MatrixXd gram_;
  double sum_norm_ = 0;
  double min_eig_ = 0;
};

/// Gram matrix with unit diagonal and every off-diagonal entry equal to rho.
Eigen::MatrixXd equicorrelated_gram(int k, double rho);
/// Edge cone of a symmetric strong solution with real slack l: off-diagonal
/// -1/(k + l - 1), sum norm sqrt(k l / (k + l - 1)).
Eigen::MatrixXd strong_cone_gram(int k, double l);
/// (1 + 1/k) I - 11^T / k, the symmetric cone with angle arccos(1/2) between
/// its generators.
Eigen::MatrixXd symmetric_cone_gram(int k);

struct SimplicialForm {
  Eigen::MatrixXd V;  // unit columns, V^T U = D
  Eigen::VectorXd D;  // positive diagonal
  double residual = 0;        // max |V^T U - D|
  double cofactor_error = 0;  // max |(A_V)_ij - C_ij / sqrt(C_ii C_jj)|
};

/// V = U^{-T} D with D normalizing the columns. Throws Error("singular")
/// reporting the condition number when U is numerically singular.
SimplicialForm normals_to_simplicial(const Eigen::MatrixXd& U);

struct MeasureEstimate {
  double estimate = 0;
  double std_error = 0;
  long long samples = 0;
  long long hits = 0;
  double jitter = 0;  // diagonal shift needed for the Cholesky factor
};

/// Lower Cholesky factor of `gram`, adding jitter 1e-10 (then 10x up to 1e-6)
/// when the plain factorization fails. Throws Error("not_psd") past that.
Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& gram, double* jitter);

/// Fraction of g ~ N(0, gram) with all coordinates >= 0. Samples are split in
/// fixed seeded chunks, so the result does not depend on `workers`.
MeasureEstimate gaussian_measure_mc(const Eigen::MatrixXd& gram, long long samples,
                                    std::uint64_t seed, int workers = 1);

/// (e / (2 pi k))^{k/2} l^k / sqrt(det A_U), evaluated in log space. Returns 0
/// when l = 0; throws Error("singular") when A_U is not positive definite.
double measure_upper_bound(const GramCone& cone);
double log_measure_upper_bound(const GramCone& cone);

struct L1Check {
  double lhs = 0;  // x^T A^+ x
  double rhs = 0;  // ||x||_1^2 / sum(A)
  bool holds = false;
};

L1Check l1_bound_check(const Eigen::MatrixXd& A, const Eigen::VectorXd& x);

struct SubsetSelection {
  std::vector<int> selected;  // ascending
  int k_tilde = 0;
  int removed = 0;            // ceil(c k^delta)
  Eigen::MatrixXd A_S;
  double c = 0, delta = 0, beta = 0;
  double residue = 0;             // s = sum(E_U)
  double column_cap = 0;          // s / (c k^delta)
  double max_selected_column = 0; // largest E_U column sum kept
  double lambda_min = 0;          // of A_S
  double lambda_bound = 0;        // 1 + beta - k_tilde beta - s / (c k^delta)
  double sum_A_S = 0;
  double sum_bound = 0;           // removed + s
};

/// delta = 1/2 + log(l / c) / (2 log k), clamped to [1/2, 1).
double default_delta(int k, double l, double c);

/// Splits A_U = B_U + E_U with B_U = (1 + beta) I - beta 11^T, beta =
/// 1/(k - l - 1), and keeps the k - ceil(c k^delta) columns with the smallest
/// E_U column sums (ties by lower index). Pass delta < 0 for the default.
SubsetSelection select_well_behaved(const Eigen::MatrixXd& A, double l,
                                    double c = 0.05, double delta = -1);

/// Leading-order Gaussian measure of the symmetric cone (no 1 + o(1) factor).
double symmetric_cone_asymptotic(int k);
double log_symmetric_cone_asymptotic(int k);

}  // namespace hcolor
