#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "decafs/params.hpp"
#include "decafs/serialize.hpp"
#include "decafs/simulate.hpp"
#include "decafs/solver.hpp"

namespace decafs::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUnreadableInput = 2,  // input missing or unreadable, or output not writable
  kBadRow = 3,           // a row is not a finite number, or there is no data
  kInvalidArgument = 4,  // bad override, flag combination or scenario spec
  kDegenerate = 5,       // parameters cannot be estimated from the data
};

struct ParamOverrides {
  std::optional<double> sigma_eta_sq;
  std::optional<double> sigma_nu_sq;
  std::optional<double> phi;

  bool complete() const { return sigma_eta_sq && sigma_nu_sq && phi; }
};

struct DetectOptions {
  ParamOverrides overrides;
  std::optional<double> beta;
  /// Multiplies the default penalty; cannot be combined with `beta`.
  std::optional<double> penalty_scale;
  std::optional<ModelVariant> variant;
  /// Lags used for estimation; lowered to n - 1 for short series.
  std::size_t lags = 15;
};

struct Detection {
  ModelParams params;
  bool estimated = false;
  ModelVariant variant = ModelVariant::kRwAr;
  double beta = 0.0;
  Segmentation segmentation;
};

/// 2 log(max(n, 2)) times `scale`.
double default_beta(std::size_t n, double scale = 1.0);

/// The most restrictive variant the parameters satisfy.
ModelVariant variant_of(const ModelParams& params);

/// Parameters for a series: overrides where given, estimates for the rest.
/// Series with fewer than three points fall back to sigma_eta^2 = 0,
/// sigma_nu^2 = 1, phi = 0. Returns whether anything was estimated.
std::pair<ModelParams, bool> resolve_params(std::span<const double> y, const DetectOptions& opt);

/// Resolves parameters, variant and penalty, then segments `y`.
/// Throws InvalidParameter for bad or conflicting options and DegenerateData
/// when estimation is impossible.
Detection detect(std::span<const double> y, const DetectOptions& opt);

Json detection_document(const Detection& d, std::size_t n, bool emit_signal);

struct AnalysisRequest {
  std::string input;
  std::string column;
  DetectOptions options;
  bool emit_signal = false;
  /// Written when nonempty; otherwise the caller prints the document.
  std::string output;
};

struct Outcome {
  int exit_code = kSuccess;
  Json document;
  std::string error;
};

Outcome run_detect(const AnalysisRequest& request);
Outcome run_estimate(const AnalysisRequest& request);
/// Exhaustive search for tiny series (n <= 20); needs every parameter and beta.
Outcome run_oracle(const AnalysisRequest& request);

struct BenchmarkOptions {
  std::size_t replicates = 100;
  /// Replaces the seed stored in the scenario spec.
  std::optional<std::uint64_t> seed;
  std::optional<double> beta;
  std::optional<double> penalty_scale;
  /// Restricts estimation in the estimated-parameter mode.
  std::optional<ModelVariant> variant;
  std::size_t lags = 15;
  std::size_t tolerance = 2;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// The parameters that generated a scenario, when they lie inside the model
/// family (AR(1) or IID noise with no drift or a random walk drift).
std::optional<ModelParams> true_params(const sim::ScenarioSpec& spec);

/// Simulates, segments (true and estimated parameters) and scores every
/// replicate. Records are ordered by replicate whatever the thread count.
Json benchmark(const sim::ScenarioSpec& spec, const BenchmarkOptions& opt);

/// Flat per-replicate table of a benchmark document.
std::string benchmark_csv(const Json& report);

struct BenchmarkRequest {
  std::string spec_path;
  BenchmarkOptions options;
  /// JSON report path; a sibling .csv is written next to it.
  std::string output;
};

Outcome run_benchmark(const BenchmarkRequest& request);

/// Writes `doc` followed by a newline; throws io::UnreadableInput on failure.
void write_text(const std::string& path, const std::string& text);
std::string render(const Json& doc);

}  // namespace decafs::cli
