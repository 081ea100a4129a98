#include "decafs/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "decafs/error.hpp"

namespace decafs {
namespace {

constexpr double kMadConsistency = 1.4826;

// Lower bound on sigma_nu^2, relative to the largest lag variance, used when
// the fit attributes all variability to the random walk.
constexpr double kNoiseFloor = 1e-9;

double median_in_place(std::vector<double>& x) {
  const std::size_t mid = x.size() / 2;
  std::nth_element(x.begin(), x.begin() + mid, x.end());
  const double upper = x[mid];
  if (x.size() % 2 == 1) return upper;
  const double lower = *std::max_element(x.begin(), x.begin() + mid);
  return 0.5 * (lower + upper);
}

double ar_column(std::size_t k, double phi) {
  return 2.0 * (1.0 - std::pow(phi, static_cast<double>(k))) / (1.0 - phi * phi);
}

}  // namespace

std::vector<double> PhiGrid::values() const {
  if (!(std::isfinite(start) && std::isfinite(stop) && std::isfinite(step)) || start < 0.0 ||
      stop < start || stop >= 1.0 || step <= 0.0) {
    throw InvalidParameter("phi grid must satisfy 0 <= start <= stop < 1 and step > 0");
  }
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  std::vector<double> out;
  out.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::vector<double> lag_differences(std::span<const double> y, std::size_t k) {
  if (k == 0 || k >= y.size()) {
    throw InvalidParameter("lag must satisfy 1 <= k < n (k = " + std::to_string(k) +
                           ", n = " + std::to_string(y.size()) + ")");
  }
  std::vector<double> out(y.size() - k);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = y[t + k] - y[t];
  return out;
}

double mad_variance(std::span<const double> x) {
  if (x.empty()) throw InvalidParameter("MAD of an empty sample");
  std::vector<double> work(x.begin(), x.end());
  const double centre = median_in_place(work);
  for (std::size_t i = 0; i < x.size(); ++i) work[i] = std::abs(x[i] - centre);
  const double mad = kMadConsistency * median_in_place(work);
  return mad * mad;
}

LagVarianceProfile lag_variance_profile(std::span<const double> y, std::size_t max_lag) {
  LagVarianceProfile profile;
  profile.v.reserve(max_lag);
  for (std::size_t k = 1; k <= max_lag; ++k) {
    profile.v.push_back(mad_variance(lag_differences(y, k)));
  }
  return profile;
}

double lag_variance(std::size_t k, double sigma_eta_sq, double sigma_nu_sq, double phi) {
  return static_cast<double>(k) * sigma_eta_sq + ar_column(k, phi) * sigma_nu_sq;
}

double lag_misfit(const LagVarianceProfile& profile, double sigma_eta_sq, double sigma_nu_sq,
                  double phi) {
  double s = 0.0;
  for (std::size_t k = 1; k <= profile.max_lag(); ++k) {
    const double r = lag_variance(k, sigma_eta_sq, sigma_nu_sq, phi) - profile.v[k - 1];
    s += r * r;
  }
  return s;
}

LagFit fit_at_phi(const LagVarianceProfile& profile, double phi, bool allow_random_walk) {
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, r1 = 0.0, r2 = 0.0;
  for (std::size_t k = 1; k <= profile.max_lag(); ++k) {
    const double x1 = static_cast<double>(k);
    const double x2 = ar_column(k, phi);
    const double v = profile.v[k - 1];
    s11 += x1 * x1;
    s12 += x1 * x2;
    s22 += x2 * x2;
    r1 += x1 * v;
    r2 += x2 * v;
  }
  auto scored = [&](double eta, double nu) {
    return LagFit{eta, nu, lag_misfit(profile, eta, nu, phi)};
  };

  if (allow_random_walk) {
    const double det = s11 * s22 - s12 * s12;
    if (det > 1e-12 * s11 * s22) {
      const double eta = (s22 * r1 - s12 * r2) / det;
      const double nu = (s11 * r2 - s12 * r1) / det;
      if (eta >= 0.0 && nu >= 0.0) return scored(eta, nu);
    }
  }
  // The constrained optimum lies on a face of the nonnegative quadrant.
  LagFit best = scored(0.0, std::max(0.0, r2 / s22));
  if (allow_random_walk) {
    const LagFit walk_only = scored(std::max(0.0, r1 / s11), 0.0);
    if (walk_only.residual < best.residual) best = walk_only;
  }
  return best;
}

EstimatedParams fit_parameters(const LagVarianceProfile& profile, ModelVariant variant,
                               const PhiGrid& grid) {
  if (profile.max_lag() < 2) throw InvalidParameter("need at least two lags");
  const double v_max = *std::max_element(profile.v.begin(), profile.v.end());
  if (std::any_of(profile.v.begin(), profile.v.end(), [](double v) { return !(v >= 0.0); })) {
    throw InvalidParameter("lag variances must be nonnegative");
  }
  if (v_max == 0.0) throw DegenerateData("all lag-difference variances are zero");

  const bool fixed_phi = variant == ModelVariant::kRwOnly || variant == ModelVariant::kIid;
  const bool allow_rw = variant == ModelVariant::kRwAr || variant == ModelVariant::kRwOnly;
  const std::vector<double> phis = fixed_phi ? std::vector<double>{0.0} : grid.values();

  double best_phi = phis.front();
  LagFit best = fit_at_phi(profile, best_phi, allow_rw);
  for (std::size_t i = 1; i < phis.size(); ++i) {
    const LagFit f = fit_at_phi(profile, phis[i], allow_rw);
    if (f.residual < best.residual) {
      best = f;
      best_phi = phis[i];
    }
  }

  const double nu = std::max(best.sigma_nu_sq, kNoiseFloor * v_max);
  return EstimatedParams{
      ModelParams::make(best.sigma_eta_sq, nu, best_phi),
      lag_misfit(profile, best.sigma_eta_sq, nu, best_phi),
      fixed_phi ? 0.0 : grid.step,
      best.sigma_eta_sq == 0.0,
  };
}

EstimatedParams estimate(std::span<const double> y, std::size_t max_lag, ModelVariant variant,
                         const PhiGrid& grid) {
  if (max_lag < 2 || max_lag >= y.size()) {
    throw InvalidParameter("number of lags K must satisfy 2 <= K < n (K = " +
                           std::to_string(max_lag) + ", n = " + std::to_string(y.size()) + ")");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw InvalidData("non-finite observation");
  }
  return fit_parameters(lag_variance_profile(y, max_lag), variant, grid);
}

}  // namespace decafs
