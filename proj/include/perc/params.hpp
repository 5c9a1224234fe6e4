#pragma once

#include "perc/error.hpp"

namespace perc {

// Edge dynamics parameters.  An edge flips closed -> open at rate p and
// open -> closed at rate q = 1 - p, so Bernoulli(p) is the stationary
// marginal of every edge at every time.
struct PercolationParams {
  double p;
  double q;

  explicit PercolationParams(double open_prob)
      : p(open_prob), q(1.0 - open_prob) {
    if (!(p > 0.0 && p < 1.0))
      throw Error(Errc::ConfigInvalid, "open probability must lie in (0,1)");
  }
};

}  // namespace perc
