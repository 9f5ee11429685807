#pragma once

#include "tgk/linalg.hpp"

namespace tgk {

// Maximize c.x subject to A x <= b with x free. Small dense problems only
// (polytope boundedness probes and Chebyshev centers).
struct lp_result {
  enum class status_t { optimal, unbounded, infeasible };
  status_t status;
  double value = 0.0;
  Vec x;
};

lp_result solve_lp_max(const Mat& A, const Vec& b, const Vec& c);

}  // namespace tgk
