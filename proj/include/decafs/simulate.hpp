#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace decafs::sim {

enum class ScenarioKind { kNone, kUp, kUpDown, kRand1 };

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view name);

struct Ar1Noise {
  double phi = 0.0;
  double sigma_nu = 1.0;
};
struct Ar2Noise {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double sigma_nu = 1.0;
};
struct IidNoise {
  double sigma = 1.0;
};
using NoiseSpec = std::variant<Ar1Noise, Ar2Noise, IidNoise>;

struct NoDrift {};
struct RandomWalkDrift {
  double sigma_eta = 0.0;
};
struct SinusoidalDrift {
  double amplitude = 0.0;
  double frequency = 0.0;
};
using DriftSpec = std::variant<NoDrift, RandomWalkDrift, SinusoidalDrift>;

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kNone;
  std::size_t n = 5000;
  double change_size = 10.0;
  NoiseSpec noise = Ar1Noise{};
  DriftSpec drift = NoDrift{};
  std::uint64_t seed = 0;

  /// Throws InvalidParameter on n = 0, negative scales, phi outside [0, 1)
  /// or non-stationary AR(2) coefficients.
  void validate() const;
};

struct SimulatedSeries {
  std::vector<double> y;
  std::vector<double> mu_true;
  /// Last index (1-based) before each true change.
  std::vector<std::size_t> changepoints_true;
};

/// Positions and signed sizes of the abrupt changes of a scenario.
struct ChangePattern {
  std::vector<std::size_t> changepoints;
  std::vector<double> jumps;
};

/// up: one change at n/2. updown: changes at in/4, i = 1..3, signs +,-,+.
/// rand1: changes at in/20, i = 1..19, sizes uniform on [-2 size, 2 size].
ChangePattern change_pattern(ScenarioKind kind, std::size_t n, double change_size,
                             std::uint64_t seed);

/// Child seed for stream `index` of `seed`. Distinct indices give
/// independent streams; the mapping is fixed across platforms.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

SimulatedSeries generate(const ScenarioSpec& spec);

/// Stationary AR(2) noise after a burn-in of 1000 steps from zero.
std::vector<double> generate_ar2_noise(std::size_t n, double phi1, double phi2, double sigma_nu,
                                       std::uint64_t seed);

/// amplitude * sin(2 pi frequency t) plus the step function of `jumps`
/// applied after each changepoint (t is 1-based).
std::vector<double> generate_sinusoidal_mean(std::size_t n, double amplitude, double frequency,
                                             std::span<const std::size_t> changepoints,
                                             std::span<const double> jumps);

/// Cumulative step function: 0 up to the first changepoint, then the running
/// sum of `jumps`.
std::vector<double> step_function(std::size_t n, std::span<const std::size_t> changepoints,
                                  std::span<const double> jumps);

}  // namespace decafs::sim
