#pragma once

#include <string>

#include "stirsap/errors.hpp"

namespace stirsap {

struct BisectionResult {
  double value = 0.0;  // smallest probed point where the predicate held
  double bracket_width = 0.0;
  int iterations = 0;
};

// Smallest x in [lo, hi] (to `resolution`) with pred(x) true, assuming pred
// switches from false to true once. Returns lo when pred(lo) already holds;
// throws SearchError when pred(hi) fails.
template <typename Pred>
BisectionResult bisect_threshold(Pred&& pred, double lo, double hi, double resolution) {
  if (!(lo < hi) || !(resolution > 0.0)) throw SearchError("invalid bisection bracket");
  if (pred(lo)) return {lo, 0.0, 0};
  if (!pred(hi)) {
    throw SearchError("target not reached at the upper bracket edge " + std::to_string(hi));
  }
  BisectionResult result;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
    ++result.iterations;
  }
  result.value = hi;
  result.bracket_width = hi - lo;
  return result;
}

}  // namespace stirsap
