#include <catch_amalgamated.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "decafs/cli.hpp"
#include "decafs/error.hpp"
#include "decafs/estimation.hpp"

using namespace decafs;
using namespace decafs::cli;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / "decafs_cli_test") {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return (path_ / name).string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string series_text(const std::vector<double>& y) {
  std::ostringstream s;
  s.precision(17);
  for (double v : y) s << v << '\n';
  return s.str();
}

AnalysisRequest request_for(const std::string& path) {
  AnalysisRequest r;
  r.input = path;
  return r;
}

sim::ScenarioSpec small_spec() {
  sim::ScenarioSpec s;
  s.kind = sim::ScenarioKind::kUpDown;
  s.n = 400;
  s.change_size = 5.0;
  s.noise = sim::Ar1Noise{0.5, 1.0};
  s.drift = sim::RandomWalkDrift{0.05};
  s.seed = 1;
  return s;
}

}  // namespace

TEST_CASE("default penalty") {
  CHECK(default_beta(100) == Approx(2 * std::log(100.0)));
  CHECK(default_beta(1) == Approx(2 * std::log(2.0)));
  CHECK(default_beta(100, 1.5) == Approx(3 * std::log(100.0)));
}

TEST_CASE("variant_of") {
  CHECK(variant_of(ModelParams::make(0, 1, 0)) == ModelVariant::kIid);
  CHECK(variant_of(ModelParams::make(0, 1, 0.5)) == ModelVariant::kArOnly);
  CHECK(variant_of(ModelParams::make(1, 1, 0)) == ModelVariant::kRwOnly);
  CHECK(variant_of(ModelParams::make(1, 1, 0.5)) == ModelVariant::kRwAr);
}

TEST_CASE("detect matches a direct solve") {
  const sim::SimulatedSeries s = sim::generate(small_spec());
  const EstimatedParams est = estimate(s.y);
  const Detection d = detect(s.y, DetectOptions{});
  CHECK(d.estimated);
  CHECK(d.params.phi() == est.params.phi());
  CHECK(d.params.sigma_nu_sq() == est.params.sigma_nu_sq());
  CHECK(d.beta == Approx(2 * std::log(400.0)));
  SolverConfig c;
  c.beta = d.beta;
  c.variant = d.variant;
  const Segmentation direct = solve(s.y, d.params, c);
  CHECK(d.segmentation.changepoints == direct.changepoints);
  CHECK(d.segmentation.cost == direct.cost);

  TempDir dir;
  AnalysisRequest r = request_for(dir.write("y.txt", series_text(s.y)));
  r.emit_signal = true;
  const Outcome out = run_detect(r);
  REQUIRE(out.exit_code == kSuccess);
  CHECK(out.document["changepoints"].get<std::vector<std::size_t>>() == direct.changepoints);
  CHECK(out.document["signal"].size() == 400);
  CHECK(out.document["params"]["estimated"] == true);
  CHECK(out.document["schema_version"] == 1);
}

TEST_CASE("overrides and penalty options") {
  const std::vector<double> y{0, 0, 0, 10, 10, 10};
  DetectOptions o;
  o.overrides = {0.0, 1.0, 0.0};
  o.beta = 4.0;
  const Detection d = detect(y, o);
  CHECK_FALSE(d.estimated);
  CHECK(d.variant == ModelVariant::kIid);
  CHECK(d.segmentation.changepoints == std::vector<std::size_t>{3});
  CHECK(d.segmentation.cost == Approx(4.0));

  o.beta.reset();
  o.penalty_scale = 2.0;
  CHECK(detect(y, o).beta == Approx(4 * std::log(6.0)));
  o.beta = 1.0;
  CHECK_THROWS_AS(detect(y, o), InvalidParameter);

  DetectOptions bad;
  bad.overrides.phi = 1.0;
  CHECK_THROWS_AS(detect(y, bad), InvalidParameter);
  bad.overrides.phi = 0.5;
  bad.overrides.sigma_eta_sq = 1.0;
  bad.variant = ModelVariant::kArOnly;
  CHECK_THROWS_AS(detect(y, bad), InvalidParameter);

  // Short series fall back to default parameters.
  const Detection one = detect(std::vector<double>{3.0}, DetectOptions{});
  CHECK(one.segmentation.changepoints.empty());
  CHECK(one.params.sigma_nu_sq() == 1.0);
  CHECK_THROWS_AS(detect(std::vector<double>(8, 5.0), DetectOptions{}), DegenerateData);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(run_detect(request_for(dir.file("missing.csv"))).exit_code == kUnreadableInput);
  CHECK(run_detect(request_for(dir.write("bad.csv", "1\n2\nx\n"))).exit_code == kBadRow);
  CHECK(run_detect(request_for(dir.write("empty.csv", ""))).exit_code == kBadRow);
  CHECK(run_detect(request_for(dir.write("flat.csv", "5\n5\n5\n5\n5\n"))).exit_code ==
        kDegenerate);
  AnalysisRequest r = request_for(dir.write("ok.csv", "0\n0\n0\n10\n10\n10\n"));
  r.options.overrides.sigma_nu_sq = -1.0;
  CHECK(run_detect(r).exit_code == kInvalidArgument);
  r.options.overrides.sigma_nu_sq.reset();
  r.output = dir.file("no_such_dir/out.json");
  CHECK(run_detect(r).exit_code == kUnreadableInput);
  r.output = dir.file("out.json");
  const Outcome ok = run_detect(r);
  CHECK(ok.exit_code == kSuccess);
  CHECK(slurp(r.output) == render(ok.document));
}

TEST_CASE("estimate and oracle commands") {
  TempDir dir;
  const sim::SimulatedSeries s = sim::generate(small_spec());
  const std::string path = dir.write("y.txt", series_text(s.y));
  const Outcome est = run_estimate(request_for(path));
  REQUIRE(est.exit_code == kSuccess);
  CHECK(est.document["params"]["phi"].get<double>() == estimate(s.y).params.phi());
  CHECK(est.document["lags"] == 15);

  AnalysisRequest o = request_for(dir.write("tiny.txt", "0\n0\n0\n10\n10\n10\n"));
  CHECK(run_oracle(o).exit_code == kInvalidArgument);
  o.options.overrides = {0.0, 1.0, 0.0};
  o.options.beta = 4.0;
  const Outcome oracle = run_oracle(o);
  REQUIRE(oracle.exit_code == kSuccess);
  CHECK(oracle.document["changepoints"] == Json::array({3}));
  CHECK(oracle.document["cost"].get<double>() == Approx(4.0));
}

TEST_CASE("documents round-trip through text") {
  const std::vector<double> y{0.25, -1.5, 3.0, 3.5, 2.75, 0.1, 9.0, 9.5};
  DetectOptions o;
  o.overrides = {0.3, 1.1, 0.4};
  const Json doc = detection_document(detect(y, o), y.size(), true);
  const std::string text = render(doc);
  CHECK(render(Json::parse(text)) == text);
  const Json back = Json::parse(text);
  for (std::size_t t = 0; t < y.size(); ++t) {
    CHECK(back["signal"][t].get<double>() == doc["signal"][t].get<double>());
  }

  const sim::ScenarioSpec spec = small_spec();
  const Json sj = to_json(spec);
  CHECK(to_json(scenario_from_json(Json::parse(sj.dump()))) == sj);
  CHECK_THROWS_AS(scenario_from_json(Json::parse(R"({"kind":"updown","n":"many"})")),
                  InvalidParameter);
  CHECK_THROWS_AS(scenario_from_json(Json::parse(R"({"kind":"up","n":10,"colour":1})")),
                  InvalidParameter);
  CHECK_THROWS_AS(scenario_from_json(Json::parse(R"({"n":10})")), InvalidParameter);
  CHECK(scenario_from_json(Json::parse(R"({"kind":"up","n":10})")).n == 10);
}

TEST_CASE("benchmark is deterministic and thread-count independent") {
  BenchmarkOptions a;
  a.replicates = 6;
  a.threads = 1;
  BenchmarkOptions b = a;
  b.threads = 3;
  const Json ra = benchmark(small_spec(), a);
  const Json rb = benchmark(small_spec(), b);
  CHECK(render(ra) == render(rb));
  CHECK(benchmark_csv(ra) == benchmark_csv(rb));
  CHECK(ra["records"].size() == 12);
  CHECK(ra["modes"] == Json::array({"true", "estimated"}));
  CHECK(ra["records"][0]["replicate"] == 0);
  CHECK(ra["records"][0]["mode"] == "true");
  CHECK(ra["aggregate"]["true"]["completed"] == 6);

  BenchmarkOptions c = a;
  c.seed = 99;
  CHECK(render(benchmark(small_spec(), c)) != render(ra));

  sim::ScenarioSpec ar2 = small_spec();
  ar2.noise = sim::Ar2Noise{0.3, 0.3, 1.0};
  const Json r2 = benchmark(ar2, a);
  CHECK(r2["modes"] == Json::array({"estimated"}));
  CHECK(r2.contains("skipped_modes"));
  CHECK_FALSE(true_params(ar2).has_value());
  CHECK(true_params(small_spec())->sigma_eta_sq() == Approx(0.0025));

  BenchmarkOptions none = a;
  none.replicates = 0;
  CHECK_THROWS_AS(benchmark(small_spec(), none), InvalidParameter);
}

TEST_CASE("benchmark files") {
  TempDir dir;
  BenchmarkRequest r;
  r.spec_path = dir.write("spec.json", to_json(small_spec()).dump());
  r.options.replicates = 3;
  r.output = dir.file("report.json");
  const Outcome out = run_benchmark(r);
  REQUIRE(out.exit_code == kSuccess);
  CHECK(slurp(dir.file("report.json")) == render(out.document));
  CHECK(slurp(dir.file("report.csv")) == benchmark_csv(out.document));

  r.spec_path = dir.write("bad.json", "{not json");
  CHECK(run_benchmark(r).exit_code == kInvalidArgument);
  r.spec_path = dir.file("absent.json");
  CHECK(run_benchmark(r).exit_code == kUnreadableInput);
}
