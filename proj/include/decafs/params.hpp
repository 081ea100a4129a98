#pragma once

#include <limits>
#include <string>
#include <string_view>

namespace decafs {

/// Which parts of the random-walk-plus-AR(1) model are active.
enum class ModelVariant {
  kRwAr,    // random walk drift and AR(1) noise
  kArOnly,  // constant mean between changes (no random walk)
  kRwOnly,  // independent noise (phi = 0)
  kIid,     // constant mean and independent noise
};

std::string_view to_string(ModelVariant variant);
/// Accepts "rw-ar", "ar-only", "rw-only", "iid"; throws InvalidParameter otherwise.
ModelVariant parse_variant(std::string_view name);

/// Variances of the random walk increments and AR innovations plus the
/// autocorrelation of the noise. Construct through `make` to get validation.
class ModelParams {
 public:
  /// Throws InvalidParameter unless sigma_eta_sq >= 0, sigma_nu_sq > 0 and
  /// 0 <= phi < 1 (all finite).
  static ModelParams make(double sigma_eta_sq, double sigma_nu_sq, double phi);

  double sigma_eta_sq() const { return sigma_eta_sq_; }
  double sigma_nu_sq() const { return sigma_nu_sq_; }
  double phi() const { return phi_; }

  /// Random walk precision; +inf when the mean is constant between changes.
  double lambda() const {
    return sigma_eta_sq_ == 0.0 ? std::numeric_limits<double>::infinity()
                                : 1.0 / sigma_eta_sq_;
  }
  double gamma() const { return 1.0 / sigma_nu_sq_; }
  bool has_random_walk() const { return sigma_eta_sq_ > 0.0; }

  /// True when the parameters respect the restrictions `variant` imposes.
  bool consistent_with(ModelVariant variant) const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  ModelParams(double sigma_eta_sq, double sigma_nu_sq, double phi)
      : sigma_eta_sq_(sigma_eta_sq), sigma_nu_sq_(sigma_nu_sq), phi_(phi) {}

  double sigma_eta_sq_;
  double sigma_nu_sq_;
  double phi_;
};

}  // namespace decafs
