#include "decafs/evaluate.hpp"

#include <vector>

#include "decafs/error.hpp"

namespace decafs {
namespace {

void require_strictly_increasing(std::span<const std::size_t> v, const char* name) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1]) {
      throw InvalidParameter(std::string(name) + " changepoints must be sorted and unique");
    }
  }
}

std::size_t distance(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

EvalReport match_changepoints(std::span<const std::size_t> predicted,
                              std::span<const std::size_t> truth, std::size_t tol) {
  require_strictly_increasing(predicted, "predicted");
  require_strictly_increasing(truth, "true");

  std::vector<bool> used(truth.size(), false);
  std::size_t tp = 0;
  std::size_t first = 0;  // true changes before this index are out of reach
  for (std::size_t p : predicted) {
    while (first < truth.size() && truth[first] + tol < p) ++first;
    std::size_t best = truth.size();
    for (std::size_t j = first; j < truth.size() && truth[j] <= p + tol; ++j) {
      if (used[j]) continue;
      if (best == truth.size() || distance(truth[j], p) < distance(truth[best], p)) best = j;
    }
    if (best != truth.size()) {
      used[best] = true;
      ++tp;
    }
  }

  EvalReport r;
  r.tolerance = tol;
  r.true_positives = tp;
  r.false_positives = predicted.size() - tp;
  r.false_negatives = truth.size() - tp;
  r.precision = predicted.empty() ? 1.0 : static_cast<double>(tp) / predicted.size();
  r.recall = truth.empty() ? 1.0 : static_cast<double>(tp) / truth.size();
  const double s = r.precision + r.recall;
  r.f1 = s == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / s;
  return r;
}

}  // namespace decafs
