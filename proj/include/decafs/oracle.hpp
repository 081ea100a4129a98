#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "decafs/params.hpp"

namespace decafs::oracle {

/// Dense covariance of the AR(1) noise: sigma_nu^2/(1-phi^2) phi^|i-j|.
Eigen::MatrixXd ar_covariance(std::size_t n, const ModelParams& params);
/// Dense covariance of the random walk: sigma_eta^2 min(i, j), 1-based.
Eigen::MatrixXd rw_covariance(std::size_t n, const ModelParams& params);
/// Tridiagonal inverse of ar_covariance in closed form.
Eigen::MatrixXd ar_precision(std::size_t n, const ModelParams& params);
/// Tridiagonal inverse of rw_covariance in closed form; needs sigma_eta^2 > 0.
Eigen::MatrixXd rw_precision(std::size_t n, const ModelParams& params);
/// n x (m+1) design: a column of ones, then for each tau a column that is 0
/// up to index tau and 1 afterwards.
Eigen::MatrixXd design_matrix(std::size_t n, std::span<const std::size_t> tau);

struct GlsFit {
  double cost = 0.0;
  Eigen::VectorXd delta;
};

/// Covariance Sigma_AR + Sigma_RW for a fixed length, factorised once.
class GlsModel {
 public:
  GlsModel(std::size_t n, const ModelParams& params);

  std::size_t n() const { return n_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }

  /// min over Delta of (y - X Delta)' Sigma^{-1} (y - X Delta).
  /// Throws InvalidParameter for a malformed tau or a length mismatch.
  GlsFit fit(std::span<const double> y, std::span<const std::size_t> tau) const;

  /// Sigma^{-1} x.
  Eigen::VectorXd solve(const Eigen::VectorXd& x) const;
  /// L^{-1} x where Sigma = L L'.
  Eigen::VectorXd whiten(const Eigen::VectorXd& x) const;

 private:
  std::size_t n_;
  Eigen::MatrixXd covariance_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

GlsFit gls_cost(std::span<const double> y, std::span<const std::size_t> tau,
                const ModelParams& params);

/// The same cost minimised jointly over the segment levels and the random
/// walk path, using the tridiagonal precisions instead of Sigma^{-1}.
double gls_cost_two_block(std::span<const double> y, std::span<const std::size_t> tau,
                          const ModelParams& params);

struct ExhaustiveResult {
  std::vector<std::size_t> tau;
  double cost = 0.0;
};

/// Best penalised cost over every changepoint set with at most m_max
/// changes. Ties go to fewer changes, then the lexicographically smallest set.
ExhaustiveResult exhaustive_segment(std::span<const double> y, const ModelParams& params,
                                    double beta, std::size_t m_max);

/// Recursion for the cost functions with both the previous and the current
/// mean restricted to `grid`. Row t holds Q_t on the grid.
std::vector<std::vector<double>> grid_dp(std::span<const double> y, const ModelParams& params,
                                         double beta, std::span<const double> grid);

/// Projection whose square gives the cost reduction from a single change
/// after index tau1 (1-based). Sums to zero with unit Sigma-norm.
Eigen::VectorXd projection_vector(std::size_t tau1, std::size_t n, const ModelParams& params);

/// Largest eigenvalue of (Sigma_AR + Sigma_RW)^{-1} sigma_true.
double penalty_alpha(const Eigen::MatrixXd& sigma_true, const ModelParams& params);

}  // namespace decafs::oracle
