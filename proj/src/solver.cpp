#include "decafs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "decafs/error.hpp"

namespace decafs {

using pwq::PiecewiseQuadratic;
using pwq::Quadratic;

namespace {

// Curvature may dip below zero by rounding after the AR shift; anything
// beyond this (relative) amount is a logic error.
constexpr double kShiftSlack = 1e-9;

// Q_{t-1}(u) - gamma phi (1-phi) (u - z/(1-phi))^2.
PiecewiseQuadratic shift_for_autocorrelation(const PiecewiseQuadratic& previous, double z,
                                             const ModelParams& params) {
  const double phi = params.phi();
  if (phi == 0.0) return previous;
  const Quadratic shift =
      Quadratic::centered(params.gamma() * phi * (1.0 - phi), z / (1.0 - phi));
  std::vector<pwq::Piece> pieces(previous.pieces().begin(), previous.pieces().end());
  for (auto& p : pieces) {
    const double a = p.q.a;
    p.q = p.q - shift;
    if (p.q.a < 0.0) {
      if (p.q.a < -kShiftSlack * std::max(1.0, a)) {
        throw StructuralError("negative curvature after autocorrelation shift");
      }
      p.q.a = 0.0;
    }
  }
  return PiecewiseQuadratic::from_pieces(std::move(pieces));
}

void validate(std::span<const double> y, const ModelParams& params, const SolverConfig& config) {
  if (y.empty()) throw EmptyInput("cannot segment an empty series");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) {
      throw InvalidData("non-finite observation at index " + std::to_string(i));
    }
  }
  if (std::isnan(config.beta) || config.beta <= 0.0) {
    throw InvalidParameter("penalty beta must be > 0");
  }
  if (!params.consistent_with(config.variant)) {
    throw InvalidParameter("parameters are inconsistent with model variant " +
                           std::string(to_string(config.variant)));
  }
  if (config.search_box_radius &&
      !(std::isfinite(*config.search_box_radius) && *config.search_box_radius > 0.0)) {
    throw InvalidParameter("search box radius must be finite and > 0");
  }
}

pwq::SearchBox search_box(std::span<const double> y, const SolverConfig& config) {
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double radius = config.search_box_radius.value_or(3.0 * (*hi - *lo + 1.0));
  return {*lo - radius, *hi + radius};
}

}  // namespace

PiecewiseQuadratic initial_cost(double y1, const ModelParams& params) {
  const double phi = params.phi();
  return PiecewiseQuadratic(Quadratic::centered((1.0 - phi * phi) * params.gamma(), y1));
}

PiecewiseQuadratic update_step(const PiecewiseQuadratic& previous, double y_t, double y_prev,
                               const ModelParams& params, double beta) {
  const double phi = params.phi();
  const double gamma = params.gamma();
  const double z = y_t - phi * y_prev;
  // gamma/(1-phi) (z - (1-phi) mu)^2
  const Quadratic fit = Quadratic::centered(gamma * (1.0 - phi), z / (1.0 - phi));

  const PiecewiseQuadratic shifted = shift_for_autocorrelation(previous, z, params);

  PiecewiseQuadratic no_change;
  if (params.has_random_walk()) {
    no_change = pwq::add_quadratic(pwq::infimal_convolution(shifted, gamma * phi + params.lambda()),
                                   fit);
  } else {
    // u = mu: the AR residual written directly in mu.
    no_change = pwq::add_quadratic(
        previous, Quadratic::centered(gamma * (1.0 - phi) * (1.0 - phi), z / (1.0 - phi)));
  }
  if (std::isinf(beta)) return no_change;

  const PiecewiseQuadratic change = pwq::add_quadratic(
      pwq::infimal_convolution(shifted, gamma * phi), fit + Quadratic{0.0, 0.0, beta});
  return pwq::min_of_two(no_change, change);
}

Segmentation solve(std::span<const double> y, const ModelParams& params,
                   const SolverConfig& config) {
  validate(y, params, config);
  const std::size_t n = y.size();
  const double beta = config.beta;
  const double lambda = params.lambda();
  const double gamma = params.gamma();
  const double phi = params.phi();

  std::vector<PiecewiseQuadratic> costs;
  costs.reserve(n);
  costs.push_back(initial_cost(y[0], params));
  std::size_t max_pieces = 1;
  for (std::size_t t = 1; t < n; ++t) {
    costs.push_back(update_step(costs.back(), y[t], y[t - 1], params, beta));
    max_pieces = std::max(max_pieces, costs.back().size());
  }

  const pwq::SearchBox box = search_box(y, config);
  Segmentation seg;
  seg.max_pieces = max_pieces;
  seg.signal.assign(n, 0.0);
  const pwq::Minimum last = pwq::global_argmin(costs.back(), box);
  seg.signal[n - 1] = last.argmin;
  seg.cost = last.value;

  for (std::size_t t = n - 1; t-- > 0;) {
    const double next = seg.signal[t + 1];
    // gamma ((y_{t+1} - mu_{t+1}) - phi (y_t - mu))^2 as a quadratic in mu.
    const double k = (y[t + 1] - next) - phi * y[t];
    const Quadratic residual{gamma * phi * phi, 2.0 * gamma * phi * k, gamma * k * k};
    const PiecewiseQuadratic base = pwq::add_quadratic(costs[t], residual);

    double stay_at = next;
    double stay_value = 0.0;
    if (std::isinf(lambda)) {
      stay_value = base(next);
    } else {
      const pwq::Minimum stay =
          pwq::global_argmin(pwq::add_quadratic(base, Quadratic::centered(lambda, next)), box);
      stay_at = stay.argmin;
      stay_value = stay.value;
    }
    seg.signal[t] = stay_at;
    if (std::isfinite(beta)) {
      const pwq::Minimum jump = pwq::global_argmin(base, box);
      if (jump.value + beta < stay_value) seg.signal[t] = jump.argmin;
    }
  }

  seg.changepoints = extract_changepoints(seg.signal, params, beta);
  return seg;
}

std::vector<std::size_t> extract_changepoints(std::span<const double> signal,
                                              const ModelParams& params, double beta) {
  std::vector<std::size_t> out;
  const double lambda = params.lambda();
  for (std::size_t t = 0; t + 1 < signal.size(); ++t) {
    const double diff = signal[t + 1] - signal[t];
    const bool change = std::isinf(lambda) ? diff != 0.0 : lambda * diff * diff > beta;
    if (change) out.push_back(t + 1);
  }
  return out;
}

double penalised_cost(std::span<const double> y, std::span<const double> signal,
                      const ModelParams& params, double beta) {
  if (y.size() != signal.size()) throw InvalidParameter("signal and data lengths differ");
  if (y.empty()) return 0.0;
  const double lambda = params.lambda();
  const double gamma = params.gamma();
  const double phi = params.phi();
  double total = (1.0 - phi * phi) * gamma * (y[0] - signal[0]) * (y[0] - signal[0]);
  for (std::size_t t = 1; t < y.size(); ++t) {
    const double diff = signal[t] - signal[t - 1];
    if (std::isinf(lambda)) {
      if (diff != 0.0) total += beta;
    } else {
      total += std::min(lambda * diff * diff, beta);
    }
    const double r = (y[t] - signal[t]) - phi * (y[t - 1] - signal[t - 1]);
    total += gamma * r * r;
  }
  return total;
}

}  // namespace decafs
