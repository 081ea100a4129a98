#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "decafs/params.hpp"

namespace decafs {

/// Robust variances v_1..v_K of the k-lag differences y_{t+k} - y_t.
struct LagVarianceProfile {
  std::vector<double> v;

  std::size_t max_lag() const { return v.size(); }
};

/// Evenly spaced phi values start, start + step, ..., up to stop.
struct PhiGrid {
  double start = 0.0;
  double stop = 0.99;
  double step = 0.01;

  /// Throws InvalidParameter unless 0 <= start <= stop < 1 and step > 0.
  std::vector<double> values() const;
};

struct EstimatedParams {
  ModelParams params;
  /// Least-squares misfit of the lag-variance curve at the chosen parameters.
  double residual = 0.0;
  double phi_grid_step = 0.0;
  /// No random walk component was fitted; the ar-only solver applies.
  bool random_walk_absent = false;
};

std::vector<double> lag_differences(std::span<const double> y, std::size_t k);

/// (1.4826 * median |x - median x|)^2.
double mad_variance(std::span<const double> x);

/// v_k = mad_variance(lag_differences(y, k)) for k = 1..max_lag.
LagVarianceProfile lag_variance_profile(std::span<const double> y, std::size_t max_lag);

/// Theoretical variance of a k-lag difference.
double lag_variance(std::size_t k, double sigma_eta_sq, double sigma_nu_sq, double phi);

/// Sum over lags of (lag_variance(k, ...) - v_k)^2.
double lag_misfit(const LagVarianceProfile& profile, double sigma_eta_sq, double sigma_nu_sq,
                  double phi);

/// Nonnegative least-squares fit of (sigma_eta^2, sigma_nu^2) at fixed phi.
struct LagFit {
  double sigma_eta_sq = 0.0;
  double sigma_nu_sq = 0.0;
  double residual = 0.0;
};
LagFit fit_at_phi(const LagVarianceProfile& profile, double phi, bool allow_random_walk = true);

/// Scans the phi grid and keeps the best fit (ties go to the smaller phi).
/// Variants restrict the search: ar-only drops the random walk, rw-only
/// fixes phi = 0, iid does both. Throws DegenerateData when every v_k is 0.
EstimatedParams fit_parameters(const LagVarianceProfile& profile,
                               ModelVariant variant = ModelVariant::kRwAr,
                               const PhiGrid& grid = {});

/// Throws InvalidParameter unless 2 <= max_lag < y.size().
EstimatedParams estimate(std::span<const double> y, std::size_t max_lag = 15,
                         ModelVariant variant = ModelVariant::kRwAr, const PhiGrid& grid = {});

}  // namespace decafs
