#pragma once

#include "lillab/types.hpp"

namespace lillab::regularity {

struct LpResult {
  enum class Status { optimal, unbounded } status = Status::optimal;
  double value = 0.0;
  Vec x;
};

// max c^T x  s.t.  A x <= b, x >= 0, with b >= 0 (the origin is feasible).
// Dense tableau simplex with Bland's rule.
LpResult solve_lp(const Mat& a, const Vec& b, const Vec& c);

}  // namespace lillab::regularity
