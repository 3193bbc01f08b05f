#pragma once

#include "crossnorm/gamma.hpp"
#include "crossnorm/linalg.hpp"

#include <vector>

namespace crossnorm {

/// Relative gap to the lower bound at which the search stops: the witness
/// is then as good as the bracket can show.
inline constexpr double kClosedGap = 1e-7;

/// A bipartite sum of terms x_j (x) y_j refined without changing the sum.
struct TermPairs {
  std::vector<CMatrix> x;
  std::vector<CMatrix> y;

  double cost() const;
};

struct LocalSearchResult {
  TermPairs terms;
  double cost = 0.0;
  int restarts = 0;
  int iterations = 0;
};

/// Seeded basin hopping over invertible mixings of the terms. Every move
/// replaces (x_j, x_l) by G (x_j, x_l) and (y_j, y_l) by G^{-T} (y_j, y_l),
/// which keeps sum_j x_j (x) y_j fixed; pair moves are minimized with
/// Nelder-Mead. cfg.max_iter caps the pair moves of all restarts together.
/// Stops early once the cost is within kClosedGap of `floor`, or after four
/// consecutive restarts without improvement.
LocalSearchResult refine_terms(TermPairs start, const OptimizerConfig& cfg, double floor);

}  // namespace crossnorm
