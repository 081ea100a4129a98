// Command-line front end: detect, estimate, benchmark.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "decafs/cli.hpp"
#include "decafs/error.hpp"

namespace {

using decafs::cli::Outcome;

struct Flags {
  std::string input;
  std::string column;
  std::optional<double> beta;
  std::optional<double> penalty_scale;
  std::optional<double> phi;
  std::optional<double> sigma_eta_sq;
  std::optional<double> sigma_nu_sq;
  std::string model;
  std::size_t lags = 15;
  bool emit_signal = false;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::size_t replicates = 100;
  std::size_t tolerance = 2;
  unsigned threads = 0;
};

void add_model_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--beta", f.beta, "Penalty per changepoint (default 2 log n)");
  cmd->add_option("--penalty-scale", f.penalty_scale, "Multiplier for the default penalty");
  cmd->add_option("--phi", f.phi, "AR(1) coefficient in [0, 1)");
  cmd->add_option("--sigma-eta-sq", f.sigma_eta_sq, "Random walk variance (>= 0)");
  cmd->add_option("--sigma-nu-sq", f.sigma_nu_sq, "AR innovation variance (> 0)");
  cmd->add_option("--model", f.model, "Model variant: rw-ar, ar-only, rw-only or iid");
  cmd->add_option("--lags", f.lags, "Number of lags K used for estimation")->capture_default_str();
  cmd->add_option("--output", f.output, "Write the JSON document here instead of stdout");
}

void add_input_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--input", f.input, "Text or CSV file, one observation per row")->required();
  cmd->add_option("--column", f.column, "Column name or 1-based index (default: first)");
}

decafs::cli::DetectOptions detect_options(const Flags& f) {
  decafs::cli::DetectOptions opt;
  opt.overrides = {f.sigma_eta_sq, f.sigma_nu_sq, f.phi};
  opt.beta = f.beta;
  opt.penalty_scale = f.penalty_scale;
  if (!f.model.empty()) opt.variant = decafs::parse_variant(f.model);
  opt.lags = f.lags;
  return opt;
}

int finish(const Outcome& out, const std::string& output_path) {
  if (out.exit_code != decafs::cli::kSuccess) {
    std::cerr << "error: " << out.error << '\n';
    return out.exit_code;
  }
  if (output_path.empty()) std::cout << decafs::cli::render(out.document);
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Changepoint detection under a random walk plus AR(1) noise model"};
  app.require_subcommand(1);
  Flags f;

  auto* detect = app.add_subcommand("detect", "Segment a series and print changepoints");
  add_input_flags(detect, f);
  add_model_flags(detect, f);
  detect->add_flag("--emit-signal", f.emit_signal, "Include the fitted mean in the output");

  auto* estimate = app.add_subcommand("estimate", "Estimate model parameters only");
  add_input_flags(estimate, f);
  add_model_flags(estimate, f);

  auto* bench = app.add_subcommand("benchmark", "Run a simulation study from a scenario spec");
  bench->add_option("--input", f.input, "Scenario spec (JSON)")->required();
  add_model_flags(bench, f);
  bench->add_option("--seed", f.seed, "Override the scenario seed");
  bench->add_option("--replicates", f.replicates, "Number of replicates")->capture_default_str();
  bench->add_option("--tolerance", f.tolerance, "Matching window for scoring")
      ->capture_default_str();
  bench->add_option("--threads", f.threads, "Worker threads (0: all cores)");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive search for tiny series");
  oracle->group("");
  add_input_flags(oracle, f);
  add_model_flags(oracle, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : decafs::cli::kInvalidArgument;
  }

  try {
    if (*detect || *estimate || *oracle) {
      decafs::cli::AnalysisRequest req;
      req.input = f.input;
      req.column = f.column;
      req.options = detect_options(f);
      req.emit_signal = f.emit_signal;
      req.output = f.output;
      if (*detect) return finish(decafs::cli::run_detect(req), f.output);
      if (*estimate) return finish(decafs::cli::run_estimate(req), f.output);
      return finish(decafs::cli::run_oracle(req), f.output);
    }
    decafs::cli::BenchmarkRequest req;
    req.spec_path = f.input;
    req.output = f.output;
    auto& o = req.options;
    o.replicates = f.replicates;
    o.seed = f.seed;
    o.beta = f.beta;
    o.penalty_scale = f.penalty_scale;
    if (!f.model.empty()) o.variant = decafs::parse_variant(f.model);
    o.lags = f.lags;
    o.tolerance = f.tolerance;
    o.threads = f.threads;
    if (f.phi || f.sigma_eta_sq || f.sigma_nu_sq) {
      std::cerr << "error: benchmark takes parameters from the scenario spec\n";
      return decafs::cli::kInvalidArgument;
    }
    return finish(decafs::cli::run_benchmark(req), f.output);
  } catch (const decafs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return decafs::cli::kInvalidArgument;
  }
}
