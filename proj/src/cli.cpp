#include "decafs/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "decafs/error.hpp"
#include "decafs/estimation.hpp"
#include "decafs/evaluate.hpp"
#include "decafs/oracle.hpp"
#include "decafs/series_io.hpp"

namespace decafs::cli {
namespace {

constexpr std::size_t kOracleMaxLength = 20;

void check_override(const std::optional<double>& v, const char* name, bool strictly_positive) {
  if (!v) return;
  const bool ok = std::isfinite(*v) && (strictly_positive ? *v > 0.0 : *v >= 0.0);
  if (!ok) {
    throw InvalidParameter(std::string(name) +
                           (strictly_positive ? " must be finite and > 0" : " must be finite and >= 0"));
  }
}

void check_options(const DetectOptions& opt) {
  check_override(opt.overrides.sigma_eta_sq, "sigma_eta_sq", false);
  check_override(opt.overrides.sigma_nu_sq, "sigma_nu_sq", true);
  check_override(opt.overrides.phi, "phi", false);
  if (opt.overrides.phi && *opt.overrides.phi >= 1.0) {
    throw InvalidParameter("phi must lie in [0, 1)");
  }
  if (opt.beta && !(*opt.beta > 0.0)) throw InvalidParameter("beta must be > 0");
  if (opt.penalty_scale && !(std::isfinite(*opt.penalty_scale) && *opt.penalty_scale > 0.0)) {
    throw InvalidParameter("penalty scale must be finite and > 0");
  }
  if (opt.beta && opt.penalty_scale) {
    throw InvalidParameter("give either an explicit beta or a penalty scale, not both");
  }
  if (opt.lags < 2) throw InvalidParameter("the number of lags must be >= 2");
  if (opt.variant) {
    const ModelVariant v = *opt.variant;
    const bool no_walk = v == ModelVariant::kArOnly || v == ModelVariant::kIid;
    const bool no_ar = v == ModelVariant::kRwOnly || v == ModelVariant::kIid;
    if (no_walk && opt.overrides.sigma_eta_sq && *opt.overrides.sigma_eta_sq != 0.0) {
      throw InvalidParameter("model " + std::string(to_string(v)) + " requires sigma_eta_sq = 0");
    }
    if (no_ar && opt.overrides.phi && *opt.overrides.phi != 0.0) {
      throw InvalidParameter("model " + std::string(to_string(v)) + " requires phi = 0");
    }
  }
}

std::size_t effective_lags(std::size_t n, std::size_t lags) { return std::min(lags, n - 1); }

Outcome failure(int code, const std::string& message) { return {code, Json(), message}; }

template <class F>
Outcome guarded(F&& body) {
  try {
    return body();
  } catch (const io::UnreadableInput& e) {
    return failure(kUnreadableInput, e.what());
  } catch (const io::ParseError& e) {
    return failure(kBadRow, e.what());
  } catch (const EmptyInput& e) {
    return failure(kBadRow, e.what());
  } catch (const DegenerateData& e) {
    return failure(kDegenerate, e.what());
  } catch (const Error& e) {
    return failure(kInvalidArgument, e.what());
  }
}

double quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Json summary(std::vector<double> x) {
  if (x.empty()) return nullptr;
  std::sort(x.begin(), x.end());
  const double q1 = quantile(x, 0.25);
  const double q3 = quantile(x, 0.75);
  return {{"median", quantile(x, 0.5)}, {"q1", q1}, {"q3", q3}, {"iqr", q3 - q1}};
}

Json params_document(const ModelParams& p, bool estimated) {
  Json j = to_json(p);
  j["estimated"] = estimated;
  return j;
}

Json run_replicate(const sim::SimulatedSeries& series, const ModelParams* fixed,
                   const BenchmarkOptions& opt) {
  DetectOptions d;
  d.beta = opt.beta;
  d.penalty_scale = opt.penalty_scale;
  d.lags = opt.lags;
  if (fixed) {
    d.overrides = {fixed->sigma_eta_sq(), fixed->sigma_nu_sq(), fixed->phi()};
  } else {
    d.variant = opt.variant;
  }
  try {
    const Detection det = detect(series.y, d);
    const EvalReport eval = match_changepoints(det.segmentation.changepoints,
                                               series.changepoints_true, opt.tolerance);
    return {{"params", params_document(det.params, det.estimated)},
            {"model", to_string(det.variant)},
            {"changepoints", det.segmentation.changepoints},
            {"evaluation", to_json(eval)}};
  } catch (const Error& e) {
    return {{"error", e.what()}};
  }
}

Json aggregate(const std::vector<Json>& records, const std::string& mode) {
  std::vector<double> f1, precision, recall;
  std::size_t zero = 0;
  std::size_t failed = 0;
  double detected = 0.0;
  for (const auto& r : records) {
    if (r.at("mode") != mode) continue;
    if (r.contains("error")) {
      ++failed;
      continue;
    }
    const Json& e = r.at("evaluation");
    f1.push_back(e.at("f1").get<double>());
    precision.push_back(e.at("precision").get<double>());
    recall.push_back(e.at("recall").get<double>());
    const std::size_t m = r.at("changepoints").size();
    if (m == 0) ++zero;
    detected += static_cast<double>(m);
  }
  const double done = static_cast<double>(f1.size());
  return {{"completed", f1.size()},
          {"failed", failed},
          {"f1", summary(f1)},
          {"precision", summary(precision)},
          {"recall", summary(recall)},
          {"zero_detection_fraction", f1.empty() ? Json(nullptr) : Json(zero / done)},
          {"mean_changepoints", f1.empty() ? Json(nullptr) : Json(detected / done)}};
}

std::string csv_path_for(const std::string& json_path) {
  std::filesystem::path p(json_path);
  p.replace_extension(".csv");
  if (p.string() == json_path) p += ".csv";
  return p.string();
}

}  // namespace

double default_beta(std::size_t n, double scale) {
  return 2.0 * std::log(static_cast<double>(std::max<std::size_t>(n, 2))) * scale;
}

ModelVariant variant_of(const ModelParams& p) {
  if (!p.has_random_walk()) return p.phi() == 0.0 ? ModelVariant::kIid : ModelVariant::kArOnly;
  return p.phi() == 0.0 ? ModelVariant::kRwOnly : ModelVariant::kRwAr;
}

std::pair<ModelParams, bool> resolve_params(std::span<const double> y, const DetectOptions& opt) {
  check_options(opt);
  const ParamOverrides& o = opt.overrides;
  if (o.complete()) return {ModelParams::make(*o.sigma_eta_sq, *o.sigma_nu_sq, *o.phi), false};

  double eta = 0.0;
  double nu = 1.0;
  double phi = 0.0;
  if (y.size() >= 3) {
    const EstimatedParams est = estimate(y, effective_lags(y.size(), opt.lags),
                                         opt.variant.value_or(ModelVariant::kRwAr));
    eta = est.params.sigma_eta_sq();
    nu = est.params.sigma_nu_sq();
    phi = est.params.phi();
  }
  return {ModelParams::make(o.sigma_eta_sq.value_or(eta), o.sigma_nu_sq.value_or(nu),
                            o.phi.value_or(phi)),
          true};
}

Detection detect(std::span<const double> y, const DetectOptions& opt) {
  if (y.empty()) throw EmptyInput("no observations");
  const auto [params, estimated] = resolve_params(y, opt);
  const ModelVariant variant = opt.variant.value_or(variant_of(params));
  if (!params.consistent_with(variant)) {
    throw InvalidParameter("parameters conflict with model " + std::string(to_string(variant)));
  }
  const double beta = opt.beta.value_or(default_beta(y.size(), opt.penalty_scale.value_or(1.0)));
  SolverConfig config;
  config.beta = beta;
  config.variant = variant;
  return Detection{params, estimated, variant, beta, solve(y, params, config)};
}

Json detection_document(const Detection& d, std::size_t n, bool emit_signal) {
  Json doc = {{"schema_version", kSchemaVersion},
              {"n", n},
              {"params", params_document(d.params, d.estimated)},
              {"model", to_string(d.variant)},
              {"beta", d.beta}};
  const Json seg = to_json(d.segmentation, emit_signal);
  for (const auto& [key, value] : seg.items()) doc[key] = value;
  return doc;
}

std::string render(const Json& doc) { return doc.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io::UnreadableInput("cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw io::UnreadableInput("error while writing '" + path + "'");
}

Outcome run_detect(const AnalysisRequest& request) {
  return guarded([&] {
    check_options(request.options);
    const std::vector<double> y = io::read_series(request.input, request.column);
    const Detection d = detect(y, request.options);
    Outcome out{kSuccess, detection_document(d, y.size(), request.emit_signal), {}};
    if (!request.output.empty()) write_text(request.output, render(out.document));
    return out;
  });
}

Outcome run_estimate(const AnalysisRequest& request) {
  return guarded([&] {
    check_options(request.options);
    const std::vector<double> y = io::read_series(request.input, request.column);
    if (y.size() < 3) throw DegenerateData("estimation needs at least three observations");
    const std::size_t lags = effective_lags(y.size(), request.options.lags);
    const ModelVariant variant = request.options.variant.value_or(ModelVariant::kRwAr);
    const EstimatedParams est = estimate(y, lags, variant);
    Outcome out{kSuccess,
                {{"schema_version", kSchemaVersion},
                 {"n", y.size()},
                 {"lags", lags},
                 {"model", to_string(variant)},
                 {"params", to_json(est.params)},
                 {"residual", est.residual},
                 {"phi_grid_step", est.phi_grid_step},
                 {"random_walk_absent", est.random_walk_absent}},
                {}};
    if (!request.output.empty()) write_text(request.output, render(out.document));
    return out;
  });
}

Outcome run_oracle(const AnalysisRequest& request) {
  return guarded([&] {
    const DetectOptions& opt = request.options;
    check_options(opt);
    if (!opt.overrides.complete() || !opt.beta) {
      throw InvalidParameter("the oracle needs --sigma-eta-sq, --sigma-nu-sq, --phi and --beta");
    }
    const std::vector<double> y = io::read_series(request.input, request.column);
    if (y.size() > kOracleMaxLength) {
      throw InvalidParameter("the exhaustive oracle is limited to n <= " +
                             std::to_string(kOracleMaxLength));
    }
    const ModelParams p = ModelParams::make(*opt.overrides.sigma_eta_sq,
                                            *opt.overrides.sigma_nu_sq, *opt.overrides.phi);
    const oracle::ExhaustiveResult r = oracle::exhaustive_segment(y, p, *opt.beta, y.size() - 1);
    Outcome out{kSuccess,
                {{"schema_version", kSchemaVersion},
                 {"n", y.size()},
                 {"params", to_json(p)},
                 {"beta", *opt.beta},
                 {"changepoints", r.tau},
                 {"cost", r.cost}},
                {}};
    if (!request.output.empty()) write_text(request.output, render(out.document));
    return out;
  });
}

std::optional<ModelParams> true_params(const sim::ScenarioSpec& spec) {
  double eta = 0.0;
  if (const auto* rw = std::get_if<sim::RandomWalkDrift>(&spec.drift)) {
    eta = rw->sigma_eta * rw->sigma_eta;
  } else if (!std::holds_alternative<sim::NoDrift>(spec.drift)) {
    return std::nullopt;
  }
  double nu = 0.0;
  double phi = 0.0;
  if (const auto* a = std::get_if<sim::Ar1Noise>(&spec.noise)) {
    nu = a->sigma_nu * a->sigma_nu;
    phi = a->phi;
  } else if (const auto* i = std::get_if<sim::IidNoise>(&spec.noise)) {
    nu = i->sigma * i->sigma;
  } else {
    return std::nullopt;
  }
  if (!(nu > 0.0)) return std::nullopt;
  return ModelParams::make(eta, nu, phi);
}

Json benchmark(const sim::ScenarioSpec& base, const BenchmarkOptions& opt) {
  sim::ScenarioSpec spec = base;
  if (opt.seed) spec.seed = *opt.seed;
  spec.validate();
  if (opt.replicates == 0) throw InvalidParameter("at least one replicate is needed");
  DetectOptions probe;
  probe.beta = opt.beta;
  probe.penalty_scale = opt.penalty_scale;
  probe.variant = opt.variant;
  probe.lags = opt.lags;
  check_options(probe);

  const std::optional<ModelParams> truth = true_params(spec);
  std::vector<std::string> modes;
  if (truth) modes.emplace_back("true");
  modes.emplace_back("estimated");

  std::vector<std::vector<Json>> per_replicate(opt.replicates);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < opt.replicates; r = next++) {
      sim::ScenarioSpec rep = spec;
      rep.seed = sim::derive_seed(spec.seed, r);
      const sim::SimulatedSeries series = sim::generate(rep);
      for (const auto& mode : modes) {
        Json rec = {{"replicate", r}, {"seed", rep.seed}, {"mode", mode},
                    {"true_changepoints", series.changepoints_true}};
        const ModelParams* fixed = mode == "true" ? &*truth : nullptr;
        const Json result = run_replicate(series, fixed, opt);
        for (const auto& [key, value] : result.items()) rec[key] = value;
        per_replicate[r].push_back(std::move(rec));
      }
    }
  };
  unsigned threads = opt.threads != 0 ? opt.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, opt.replicates));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<Json> records;
  for (auto& rs : per_replicate) {
    for (auto& r : rs) records.push_back(std::move(r));
  }
  Json agg = Json::object();
  for (const auto& mode : modes) agg[mode] = aggregate(records, mode);

  Json doc = {{"schema_version", kSchemaVersion},
              {"scenario", to_json(spec)},
              {"replicates", opt.replicates},
              {"tolerance", opt.tolerance},
              {"beta", opt.beta ? Json(*opt.beta)
                                : Json(default_beta(spec.n, opt.penalty_scale.value_or(1.0)))},
              {"modes", modes}};
  if (!truth) doc["skipped_modes"] = {{"true", "scenario lies outside the model family"}};
  doc["aggregate"] = agg;
  doc["records"] = records;
  return doc;
}

std::string benchmark_csv(const Json& report) {
  std::ostringstream out;
  out << "replicate,mode,seed,changepoints,true_positives,false_positives,false_negatives,"
         "precision,recall,f1\n";
  for (const auto& r : report.at("records")) {
    out << r.at("replicate").get<std::size_t>() << ',' << r.at("mode").get<std::string>() << ','
        << r.at("seed").get<std::uint64_t>() << ',';
    if (r.contains("error")) {
      out << ",,,,,,\n";
      continue;
    }
    const Json& e = r.at("evaluation");
    out << r.at("changepoints").size() << ',' << e.at("true_positives").get<std::size_t>() << ','
        << e.at("false_positives").get<std::size_t>() << ','
        << e.at("false_negatives").get<std::size_t>() << ',' << Json(e.at("precision")).dump()
        << ',' << Json(e.at("recall")).dump() << ',' << Json(e.at("f1")).dump() << '\n';
  }
  return out.str();
}

Outcome run_benchmark(const BenchmarkRequest& request) {
  return guarded([&] {
    std::ifstream in(request.spec_path, std::ios::binary);
    std::error_code ec;
    if (!in || std::filesystem::is_directory(request.spec_path, ec)) {
      throw io::UnreadableInput("cannot open '" + request.spec_path + "'");
    }
    Json spec_doc;
    try {
      spec_doc = Json::parse(in);
    } catch (const Json::exception& e) {
      throw InvalidParameter(std::string("scenario spec is not valid JSON: ") + e.what());
    }
    Outcome out{kSuccess, benchmark(scenario_from_json(spec_doc), request.options), {}};
    if (!request.output.empty()) {
      write_text(request.output, render(out.document));
      write_text(csv_path_for(request.output), benchmark_csv(out.document));
    }
    return out;
  });
}

}  // namespace decafs::cli
