#pragma once

#include <cstdint>

namespace pnl {

/// Search settings shared by the heuristic estimators.
///
/// Stream layout: random sampling draws from stream_base, restart r of the
/// local search draws from stream_base + 1 + r.
struct EstimatorConfig {
  int samples = 1000;
  int restarts = 4;
  int max_iters = 200;
  double step_tol = 1e-9;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_base = 0;

  void validate() const;
};

}  // namespace pnl
