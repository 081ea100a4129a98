#include "decafs/params.hpp"

#include <cmath>

#include "decafs/error.hpp"

namespace decafs {

std::string_view to_string(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::kRwAr:
      return "rw-ar";
    case ModelVariant::kArOnly:
      return "ar-only";
    case ModelVariant::kRwOnly:
      return "rw-only";
    case ModelVariant::kIid:
      return "iid";
  }
  return "rw-ar";
}

ModelVariant parse_variant(std::string_view name) {
  if (name == "rw-ar") return ModelVariant::kRwAr;
  if (name == "ar-only") return ModelVariant::kArOnly;
  if (name == "rw-only") return ModelVariant::kRwOnly;
  if (name == "iid") return ModelVariant::kIid;
  throw InvalidParameter("unknown model variant '" + std::string(name) +
                         "' (expected rw-ar, ar-only, rw-only or iid)");
}

ModelParams ModelParams::make(double sigma_eta_sq, double sigma_nu_sq,
                              double phi) {
  if (!std::isfinite(sigma_eta_sq) || sigma_eta_sq < 0.0) {
    throw InvalidParameter("sigma_eta_sq must be finite and >= 0");
  }
  if (!std::isfinite(sigma_nu_sq) || sigma_nu_sq <= 0.0) {
    throw InvalidParameter("sigma_nu_sq must be finite and > 0");
  }
  if (!std::isfinite(phi) || phi < 0.0 || phi >= 1.0) {
    throw InvalidParameter("phi must lie in [0, 1)");
  }
  return ModelParams(sigma_eta_sq, sigma_nu_sq, phi);
}

bool ModelParams::consistent_with(ModelVariant variant) const {
  switch (variant) {
    case ModelVariant::kRwAr:
      return true;
    case ModelVariant::kArOnly:
      return sigma_eta_sq_ == 0.0;
    case ModelVariant::kRwOnly:
      return phi_ == 0.0;
    case ModelVariant::kIid:
      return sigma_eta_sq_ == 0.0 && phi_ == 0.0;
  }
  return false;
}

}  // namespace decafs
