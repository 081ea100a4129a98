#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "decafs/params.hpp"
#include "decafs/pwq.hpp"

namespace decafs {

struct SolverConfig {
  /// Cost of each changepoint; must be > 0 (may be +inf).
  double beta = 1.0;
  ModelVariant variant = ModelVariant::kRwAr;
  /// Half-width R of the search box [min y - R, max y + R] used to place
  /// minimisers of flat cost stretches. Defaults to 3 (range(y) + 1).
  std::optional<double> search_box_radius;
};

struct Segmentation {
  /// Last index (1-based) of each segment but the final one, increasing.
  std::vector<std::size_t> changepoints;
  std::vector<double> signal;
  /// Minimum of the penalised cost.
  double cost = 0.0;
  /// Largest number of pieces held by any Q_t; a pruning diagnostic.
  std::size_t max_pieces = 0;

  std::size_t m() const { return changepoints.size(); }
};

/// Q_1(mu) = (1 - phi^2) gamma (y_1 - mu)^2.
pwq::PiecewiseQuadratic initial_cost(double y1, const ModelParams& params);

/// One step of the functional recursion: Q_{t-1} -> Q_t given y_t, y_{t-1}.
pwq::PiecewiseQuadratic update_step(const pwq::PiecewiseQuadratic& previous, double y_t,
                                    double y_prev, const ModelParams& params, double beta);

/// Exact minimiser of the penalised cost
///
///   (1-phi^2) gamma (y_1-mu_1)^2
///     + sum_t [ lambda (mu_t - mu_{t-1} - delta_t)^2
///               + gamma ((y_t-mu_t) - phi (y_{t-1}-mu_{t-1}))^2 + beta 1{delta_t != 0} ].
///
/// Throws EmptyInput for an empty series, InvalidData for non-finite values
/// and InvalidParameter for beta <= 0 or parameters that contradict the
/// configured variant.
Segmentation solve(std::span<const double> y, const ModelParams& params,
                   const SolverConfig& config);

/// Indices t with lambda (mu_{t+1} - mu_t)^2 > beta (any difference when
/// lambda is infinite).
std::vector<std::size_t> extract_changepoints(std::span<const double> signal,
                                              const ModelParams& params, double beta);

/// The penalised cost of a given signal, with the changes implied by the
/// extraction rule.
double penalised_cost(std::span<const double> y, std::span<const double> signal,
                      const ModelParams& params, double beta);

}  // namespace decafs
