#pragma once

#include <cstddef>
#include <span>

namespace decafs {

struct EvalReport {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  std::size_t tolerance = 2;
};

/// One-to-one matching of predicted to true changepoints. Predictions are
/// taken left to right; each claims the nearest unmatched true change within
/// +-tol (ties go to the earlier true change). Both lists must be strictly
/// increasing, otherwise InvalidParameter is thrown.
EvalReport match_changepoints(std::span<const std::size_t> predicted,
                              std::span<const std::size_t> truth, std::size_t tol = 2);

}  // namespace decafs
