#include "decafs/serialize.hpp"

#include <cmath>
#include <initializer_list>
#include <string>
#include <string_view>

#include "decafs/error.hpp"

namespace decafs {
namespace {

void require_object(const Json& j, std::string_view what) {
  if (!j.is_object()) throw InvalidParameter(std::string(what) + " must be a JSON object");
}

void reject_unknown_keys(const Json& j, std::string_view what,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw InvalidParameter("unknown key '" + key + "' in " + std::string(what));
  }
}

double number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) throw InvalidParameter(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::string text(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidParameter(std::string("missing '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_string()) throw InvalidParameter(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t unsigned_integer(const Json& j, const char* key) {
  const Json& v = j.at(key);
  if (!v.is_number_unsigned()) {
    throw InvalidParameter(std::string("'") + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

sim::NoiseSpec noise_from_json(const Json& j) {
  require_object(j, "noise");
  const std::string type = text(j, "type");
  if (type == "ar1") {
    reject_unknown_keys(j, "noise", {"type", "phi", "sigma_nu"});
    return sim::Ar1Noise{number(j, "phi", 0.0), number(j, "sigma_nu", 1.0)};
  }
  if (type == "ar2") {
    reject_unknown_keys(j, "noise", {"type", "phi1", "phi2", "sigma_nu"});
    return sim::Ar2Noise{number(j, "phi1", 0.0), number(j, "phi2", 0.0),
                         number(j, "sigma_nu", 1.0)};
  }
  if (type == "iid") {
    reject_unknown_keys(j, "noise", {"type", "sigma"});
    return sim::IidNoise{number(j, "sigma", 1.0)};
  }
  throw InvalidParameter("unknown noise type '" + type + "' (expected ar1, ar2 or iid)");
}

sim::DriftSpec drift_from_json(const Json& j) {
  require_object(j, "drift");
  const std::string type = text(j, "type");
  if (type == "none") {
    reject_unknown_keys(j, "drift", {"type"});
    return sim::NoDrift{};
  }
  if (type == "random_walk") {
    reject_unknown_keys(j, "drift", {"type", "sigma_eta"});
    return sim::RandomWalkDrift{number(j, "sigma_eta", 0.0)};
  }
  if (type == "sinusoidal") {
    reject_unknown_keys(j, "drift", {"type", "amplitude", "frequency"});
    return sim::SinusoidalDrift{number(j, "amplitude", 0.0), number(j, "frequency", 0.0)};
  }
  throw InvalidParameter("unknown drift type '" + type +
                         "' (expected none, random_walk or sinusoidal)");
}

Json noise_to_json(const sim::NoiseSpec& noise) {
  if (const auto* a = std::get_if<sim::Ar1Noise>(&noise)) {
    return {{"type", "ar1"}, {"phi", a->phi}, {"sigma_nu", a->sigma_nu}};
  }
  if (const auto* a = std::get_if<sim::Ar2Noise>(&noise)) {
    return {{"type", "ar2"}, {"phi1", a->phi1}, {"phi2", a->phi2}, {"sigma_nu", a->sigma_nu}};
  }
  return {{"type", "iid"}, {"sigma", std::get<sim::IidNoise>(noise).sigma}};
}

Json drift_to_json(const sim::DriftSpec& drift) {
  if (const auto* d = std::get_if<sim::RandomWalkDrift>(&drift)) {
    return {{"type", "random_walk"}, {"sigma_eta", d->sigma_eta}};
  }
  if (const auto* d = std::get_if<sim::SinusoidalDrift>(&drift)) {
    return {{"type", "sinusoidal"}, {"amplitude", d->amplitude}, {"frequency", d->frequency}};
  }
  return {{"type", "none"}};
}

}  // namespace

Json to_json(const ModelParams& params) {
  return {{"sigma_eta_sq", params.sigma_eta_sq()},
          {"sigma_nu_sq", params.sigma_nu_sq()},
          {"phi", params.phi()}};
}

Json to_json(const EvalReport& r) {
  return {{"true_positives", r.true_positives},
          {"false_positives", r.false_positives},
          {"false_negatives", r.false_negatives},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"tolerance", r.tolerance}};
}

Json to_json(const Segmentation& seg, bool with_signal) {
  Json j = {{"changepoints", seg.changepoints}, {"cost", seg.cost}};
  if (with_signal) j["signal"] = seg.signal;
  return j;
}

Json to_json(const sim::ScenarioSpec& spec) {
  return {{"kind", sim::to_string(spec.kind)},
          {"n", spec.n},
          {"change_size", spec.change_size},
          {"noise", noise_to_json(spec.noise)},
          {"drift", drift_to_json(spec.drift)},
          {"seed", spec.seed}};
}

sim::ScenarioSpec scenario_from_json(const Json& doc) {
  require_object(doc, "scenario spec");
  reject_unknown_keys(doc, "scenario spec", {"kind", "n", "change_size", "noise", "drift", "seed"});
  sim::ScenarioSpec spec;
  spec.kind = sim::parse_scenario_kind(text(doc, "kind"));
  if (!doc.contains("n")) throw InvalidParameter("missing 'n'");
  spec.n = static_cast<std::size_t>(unsigned_integer(doc, "n"));
  spec.change_size = number(doc, "change_size", spec.change_size);
  if (doc.contains("noise")) spec.noise = noise_from_json(doc.at("noise"));
  if (doc.contains("drift")) spec.drift = drift_from_json(doc.at("drift"));
  if (doc.contains("seed")) spec.seed = unsigned_integer(doc, "seed");
  spec.validate();
  return spec;
}

}  // namespace decafs
