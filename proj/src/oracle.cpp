#include "decafs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "decafs/error.hpp"

namespace decafs::oracle {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_tau(std::size_t n, std::span<const std::size_t> tau) {
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] == 0 || tau[i] >= n || (i > 0 && tau[i] <= tau[i - 1])) {
      throw InvalidParameter("changepoints must be strictly increasing within [1, n-1]");
    }
  }
}

Eigen::VectorXd as_vector(std::span<const double> y) {
  return Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
}

Eigen::VectorXd step_column(std::size_t n, std::size_t tau) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  c.tail(static_cast<Eigen::Index>(n - tau)).setOnes();
  return c;
}

// Least-squares residual norm^2 of b on the columns of a; throws if a is
// rank deficient.
GlsFit least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < a.cols()) throw InvalidParameter("design matrix is rank deficient");
  GlsFit out;
  out.delta = qr.solve(b);
  out.cost = (b - a * out.delta).squaredNorm();
  return out;
}

}  // namespace

Eigen::MatrixXd ar_covariance(std::size_t n, const ModelParams& params) {
  const double phi = params.phi();
  const double var = params.sigma_nu_sq() / (1.0 - phi * phi);
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd s(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      s(i, j) = var * std::pow(phi, static_cast<double>(std::abs(i - j)));
    }
  }
  return s;
}

Eigen::MatrixXd rw_covariance(std::size_t n, const ModelParams& params) {
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd s(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      s(i, j) = params.sigma_eta_sq() * static_cast<double>(std::min(i, j) + 1);
    }
  }
  return s;
}

Eigen::MatrixXd ar_precision(std::size_t n, const ModelParams& params) {
  const double phi = params.phi();
  const double g = params.gamma();
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    p(i, i) = (i == 0 || i == m - 1) ? g : (1.0 + phi * phi) * g;
    if (i + 1 < m) p(i, i + 1) = p(i + 1, i) = -phi * g;
  }
  if (m == 1) p(0, 0) = (1.0 - phi * phi) * g;
  return p;
}

Eigen::MatrixXd rw_precision(std::size_t n, const ModelParams& params) {
  if (!params.has_random_walk()) {
    throw InvalidParameter("the random walk covariance is singular when sigma_eta^2 = 0");
  }
  const double l = params.lambda();
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    p(i, i) = i == m - 1 ? l : 2.0 * l;
    if (i + 1 < m) p(i, i + 1) = p(i + 1, i) = -l;
  }
  return p;
}

Eigen::MatrixXd design_matrix(std::size_t n, std::span<const std::size_t> tau) {
  check_tau(n, tau);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(tau.size() + 1));
  x.col(0).setOnes();
  for (std::size_t i = 0; i < tau.size(); ++i) {
    x.col(static_cast<Eigen::Index>(i + 1)) = step_column(n, tau[i]);
  }
  return x;
}

GlsModel::GlsModel(std::size_t n, const ModelParams& params)
    : n_(n), covariance_(ar_covariance(n, params) + rw_covariance(n, params)) {
  if (n == 0) throw EmptyInput("GLS model needs n >= 1");
  llt_.compute(covariance_);
  if (llt_.info() != Eigen::Success) throw StructuralError("covariance is not positive definite");
}

Eigen::VectorXd GlsModel::solve(const Eigen::VectorXd& x) const { return llt_.solve(x); }

Eigen::VectorXd GlsModel::whiten(const Eigen::VectorXd& x) const {
  return llt_.matrixL().solve(x);
}

GlsFit GlsModel::fit(std::span<const double> y, std::span<const std::size_t> tau) const {
  if (y.size() != n_) throw InvalidParameter("series length does not match the model");
  const Eigen::MatrixXd x = design_matrix(n_, tau);
  const Eigen::MatrixXd wx = llt_.matrixL().solve(x);
  return least_squares(wx, whiten(as_vector(y)));
}

GlsFit gls_cost(std::span<const double> y, std::span<const std::size_t> tau,
                const ModelParams& params) {
  return GlsModel(y.size(), params).fit(y, tau);
}

double gls_cost_two_block(std::span<const double> y, std::span<const std::size_t> tau,
                          const ModelParams& params) {
  const std::size_t n = y.size();
  const Eigen::MatrixXd x = design_matrix(n, tau);
  const Eigen::MatrixXd p = ar_precision(n, params);
  const Eigen::VectorXd yv = as_vector(y);
  const Eigen::Index k = x.cols();
  const auto m = static_cast<Eigen::Index>(n);

  if (!params.has_random_walk()) {
    const Eigen::VectorXd delta = (x.transpose() * p * x).ldlt().solve(x.transpose() * p * yv);
    const Eigen::VectorXd r = yv - x * delta;
    return r.dot(p * r);
  }

  // Unknowns (Delta, w): residual y - X Delta - w, penalty w' Sigma_RW^{-1} w.
  Eigen::MatrixXd a(m, k + m);
  a << x, Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd normal = a.transpose() * p * a;
  normal.bottomRightCorner(m, m) += rw_precision(n, params);
  const Eigen::VectorXd theta = normal.ldlt().solve(a.transpose() * p * yv);
  const Eigen::VectorXd w = theta.tail(m);
  const Eigen::VectorXd r = yv - a * theta;
  return r.dot(p * r) + w.dot(rw_precision(n, params) * w);
}

ExhaustiveResult exhaustive_segment(std::span<const double> y, const ModelParams& params,
                                    double beta, std::size_t m_max) {
  const std::size_t n = y.size();
  if (n == 0) throw EmptyInput("cannot segment an empty series");
  if (std::isnan(beta) || beta <= 0.0) throw InvalidParameter("penalty beta must be > 0");
  m_max = std::min(m_max, n - 1);
  if (std::isinf(beta)) m_max = 0;

  const GlsModel model(n, params);
  const Eigen::VectorXd wy = model.whiten(as_vector(y));
  // Whitened candidate columns: 0 is the intercept, t the step after t.
  Eigen::MatrixXd columns(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  columns.col(0) = model.whiten(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
  for (std::size_t t = 1; t < n; ++t) {
    columns.col(static_cast<Eigen::Index>(t)) = model.whiten(step_column(n, t));
  }

  ExhaustiveResult best{{}, kInf};
  std::vector<std::size_t> tau;
  for (std::size_t m = 0; m <= m_max; ++m) {
    // Combinations of {1..n-1} of size m in lexicographic order.
    tau.resize(m);
    for (std::size_t i = 0; i < m; ++i) tau[i] = i + 1;
    while (true) {
      Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m + 1));
      a.col(0) = columns.col(0);
      for (std::size_t i = 0; i < m; ++i) {
        a.col(static_cast<Eigen::Index>(i + 1)) = columns.col(static_cast<Eigen::Index>(tau[i]));
      }
      const double cost =
          least_squares(a, wy).cost + (m == 0 ? 0.0 : static_cast<double>(m) * beta);
      if (std::isinf(best.cost) || cost < best.cost - 1e-12 * (1.0 + std::abs(best.cost))) {
        best = {tau, cost};
      }

      std::size_t i = m;
      while (i > 0 && tau[i - 1] == n - 1 - (m - i)) --i;
      if (i == 0) break;
      ++tau[i - 1];
      for (std::size_t j = i; j < m; ++j) tau[j] = tau[j - 1] + 1;
    }
  }
  return best;
}

std::vector<std::vector<double>> grid_dp(std::span<const double> y, const ModelParams& params,
                                         double beta, std::span<const double> grid) {
  if (y.empty()) throw EmptyInput("cannot run the grid recursion on an empty series");
  if (grid.empty()) throw InvalidParameter("grid must be nonempty");
  const double phi = params.phi();
  const double gamma = params.gamma();
  const double lambda = params.lambda();
  const std::size_t g = grid.size();

  std::vector<std::vector<double>> rows(y.size(), std::vector<double>(g));
  for (std::size_t j = 0; j < g; ++j) {
    const double r = y[0] - grid[j];
    rows[0][j] = (1.0 - phi * phi) * gamma * r * r;
  }
  for (std::size_t t = 1; t < y.size(); ++t) {
    for (std::size_t j = 0; j < g; ++j) {
      const double mu = grid[j];
      double best = kInf;
      for (std::size_t i = 0; i < g; ++i) {
        const double u = grid[i];
        double jump = 0.0;
        if (std::isinf(lambda)) {
          jump = i == j ? 0.0 : beta;
        } else {
          jump = std::min(lambda * (mu - u) * (mu - u), beta);
        }
        const double r = (y[t] - mu) - phi * (y[t - 1] - u);
        best = std::min(best, rows[t - 1][i] + jump + gamma * r * r);
      }
      rows[t][j] = best;
    }
  }
  return rows;
}

Eigen::VectorXd projection_vector(std::size_t tau1, std::size_t n, const ModelParams& params) {
  if (tau1 == 0 || tau1 >= n) throw InvalidParameter("tau1 must lie in [1, n-1]");
  const GlsModel model(n, params);
  const Eigen::VectorXd u0 = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  const Eigen::VectorXd a0 = model.solve(u0);
  const Eigen::VectorXd a1 = model.solve(step_column(n, tau1));
  const double c0 = u0.dot(a0);
  const double c01 = u0.dot(a1);
  const double c1 = step_column(n, tau1).dot(a1);
  return (a1 - (c01 / c0) * a0) / std::sqrt(c1 - c01 * c01 / c0);
}

double penalty_alpha(const Eigen::MatrixXd& sigma_true, const ModelParams& params) {
  const auto n = sigma_true.rows();
  if (n == 0 || sigma_true.cols() != n) {
    throw InvalidParameter("true covariance must be a nonempty square matrix");
  }
  const auto size = static_cast<std::size_t>(n);
  const Eigen::MatrixXd model = ar_covariance(size, params) + rw_covariance(size, params);
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma_true, model);
  if (eig.info() != Eigen::Success) throw StructuralError("generalised eigensolve failed");
  return eig.eigenvalues().maxCoeff();
}

}  // namespace decafs::oracle
