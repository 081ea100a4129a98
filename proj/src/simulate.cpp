#include "decafs/simulate.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "decafs/error.hpp"

namespace decafs::sim {
namespace {

enum Stream : std::uint64_t { kSizeStream = 0, kDriftStream = 1, kNoiseStream = 2 };

constexpr std::size_t kAr2BurnIn = 1000;

std::size_t min_length(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kNone:
      return 1;
    case ScenarioKind::kUp:
      return 2;
    case ScenarioKind::kUpDown:
      return 4;
    case ScenarioKind::kRand1:
      return 20;
  }
  return 1;
}

bool ar2_stationary(double phi1, double phi2) {
  return std::abs(phi2) < 1.0 && phi1 + phi2 < 1.0 && phi2 - phi1 < 1.0;
}

void require(bool ok, const char* message) {
  if (!ok) throw InvalidParameter(message);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

// Standard normals scaled afterwards so that a zero scale is exact.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return dist_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

std::vector<double> ar1_noise(std::size_t n, double phi, double sigma_nu, std::uint64_t seed) {
  NormalStream z(seed);
  std::vector<double> e(n);
  e[0] = sigma_nu / std::sqrt(1.0 - phi * phi) * z();
  for (std::size_t t = 1; t < n; ++t) e[t] = phi * e[t - 1] + sigma_nu * z();
  return e;
}

std::vector<double> iid_noise(std::size_t n, double sigma, std::uint64_t seed) {
  NormalStream z(seed);
  std::vector<double> e(n);
  for (auto& v : e) v = sigma * z();
  return e;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kNone:
      return "none";
    case ScenarioKind::kUp:
      return "up";
    case ScenarioKind::kUpDown:
      return "updown";
    case ScenarioKind::kRand1:
      return "rand1";
  }
  return "none";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  if (name == "none") return ScenarioKind::kNone;
  if (name == "up") return ScenarioKind::kUp;
  if (name == "updown") return ScenarioKind::kUpDown;
  if (name == "rand1") return ScenarioKind::kRand1;
  throw InvalidParameter("unknown scenario kind '" + std::string(name) +
                         "' (expected none, up, updown or rand1)");
}

void ScenarioSpec::validate() const {
  require(n >= 1, "scenario length must be >= 1");
  if (n < min_length(kind)) {
    throw InvalidParameter("scenario " + std::string(to_string(kind)) + " needs n >= " +
                           std::to_string(min_length(kind)));
  }
  require(std::isfinite(change_size), "change size must be finite");
  if (const auto* ar1 = std::get_if<Ar1Noise>(&noise)) {
    require(std::isfinite(ar1->phi) && ar1->phi >= 0.0 && ar1->phi < 1.0,
            "AR(1) phi must lie in [0, 1)");
    require(finite_nonneg(ar1->sigma_nu), "AR(1) sigma_nu must be finite and >= 0");
  } else if (const auto* ar2 = std::get_if<Ar2Noise>(&noise)) {
    require(std::isfinite(ar2->phi1) && std::isfinite(ar2->phi2) &&
                ar2_stationary(ar2->phi1, ar2->phi2),
            "AR(2) coefficients are not stationary");
    require(finite_nonneg(ar2->sigma_nu), "AR(2) sigma_nu must be finite and >= 0");
  } else {
    require(finite_nonneg(std::get<IidNoise>(noise).sigma), "noise sigma must be finite and >= 0");
  }
  if (const auto* rw = std::get_if<RandomWalkDrift>(&drift)) {
    require(finite_nonneg(rw->sigma_eta), "sigma_eta must be finite and >= 0");
  } else if (const auto* sine = std::get_if<SinusoidalDrift>(&drift)) {
    require(std::isfinite(sine->amplitude), "amplitude must be finite");
    require(finite_nonneg(sine->frequency), "frequency must be finite and >= 0");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

ChangePattern change_pattern(ScenarioKind kind, std::size_t n, double change_size,
                             std::uint64_t seed) {
  ChangePattern p;
  switch (kind) {
    case ScenarioKind::kNone:
      break;
    case ScenarioKind::kUp:
      p.changepoints = {n / 2};
      p.jumps = {change_size};
      break;
    case ScenarioKind::kUpDown:
      for (std::size_t i = 1; i <= 3; ++i) {
        p.changepoints.push_back(i * n / 4);
        p.jumps.push_back(i % 2 == 1 ? change_size : -change_size);
      }
      break;
    case ScenarioKind::kRand1: {
      std::mt19937_64 engine(derive_seed(seed, kSizeStream));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (std::size_t i = 1; i <= 19; ++i) {
        p.changepoints.push_back(i * n / 20);
        p.jumps.push_back(change_size * (4.0 * unit(engine) - 2.0));
      }
      break;
    }
  }
  return p;
}

std::vector<double> step_function(std::size_t n, std::span<const std::size_t> changepoints,
                                  std::span<const double> jumps) {
  if (changepoints.size() != jumps.size()) {
    throw InvalidParameter("one jump size is needed per changepoint");
  }
  std::vector<double> mu(n, 0.0);
  std::size_t next = 0;
  double level = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    // Index t (0-based) is time t + 1; a change at tau acts from tau + 1.
    while (next < changepoints.size() && changepoints[next] <= t) level += jumps[next++];
    mu[t] = level;
  }
  return mu;
}

std::vector<double> generate_sinusoidal_mean(std::size_t n, double amplitude, double frequency,
                                             std::span<const std::size_t> changepoints,
                                             std::span<const double> jumps) {
  if (!(std::isfinite(frequency) && frequency >= 0.0)) {
    throw InvalidParameter("frequency must be finite and >= 0");
  }
  std::vector<double> mu = step_function(n, changepoints, jumps);
  if (amplitude == 0.0) return mu;
  for (std::size_t t = 0; t < n; ++t) {
    mu[t] += amplitude * std::sin(2.0 * std::numbers::pi * frequency * static_cast<double>(t + 1));
  }
  return mu;
}

std::vector<double> generate_ar2_noise(std::size_t n, double phi1, double phi2, double sigma_nu,
                                       std::uint64_t seed) {
  if (!(std::isfinite(phi1) && std::isfinite(phi2) && ar2_stationary(phi1, phi2))) {
    throw InvalidParameter("AR(2) coefficients are not stationary");
  }
  if (!finite_nonneg(sigma_nu)) throw InvalidParameter("sigma_nu must be finite and >= 0");
  NormalStream z(seed);
  double prev2 = 0.0;
  double prev1 = 0.0;
  std::vector<double> e(n);
  for (std::size_t t = 0; t < kAr2BurnIn + n; ++t) {
    const double cur = phi1 * prev1 + phi2 * prev2 + sigma_nu * z();
    prev2 = prev1;
    prev1 = cur;
    if (t >= kAr2BurnIn) e[t - kAr2BurnIn] = cur;
  }
  return e;
}

SimulatedSeries generate(const ScenarioSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n;
  const ChangePattern pattern = change_pattern(spec.kind, n, spec.change_size, spec.seed);

  SimulatedSeries out;
  out.changepoints_true = pattern.changepoints;
  if (const auto* sine = std::get_if<SinusoidalDrift>(&spec.drift)) {
    out.mu_true = generate_sinusoidal_mean(n, sine->amplitude, sine->frequency,
                                           pattern.changepoints, pattern.jumps);
  } else {
    out.mu_true = step_function(n, pattern.changepoints, pattern.jumps);
    if (const auto* rw = std::get_if<RandomWalkDrift>(&spec.drift)) {
      NormalStream z(derive_seed(spec.seed, kDriftStream));
      double walk = 0.0;
      for (std::size_t t = 1; t < n; ++t) {
        walk += rw->sigma_eta * z();
        out.mu_true[t] += walk;
      }
    }
  }

  const std::uint64_t noise_seed = derive_seed(spec.seed, kNoiseStream);
  std::vector<double> eps;
  if (const auto* ar1 = std::get_if<Ar1Noise>(&spec.noise)) {
    eps = ar1_noise(n, ar1->phi, ar1->sigma_nu, noise_seed);
  } else if (const auto* ar2 = std::get_if<Ar2Noise>(&spec.noise)) {
    eps = generate_ar2_noise(n, ar2->phi1, ar2->phi2, ar2->sigma_nu, noise_seed);
  } else {
    eps = iid_noise(n, std::get<IidNoise>(spec.noise).sigma, noise_seed);
  }

  out.y.resize(n);
  for (std::size_t t = 0; t < n; ++t) out.y[t] = out.mu_true[t] + eps[t];
  return out;
}

}  // namespace decafs::sim
