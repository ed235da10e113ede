#pragma once

#include <cmath>
#include <cstdint>

namespace mfbg {

// gamma_n = 1/(n+1)^alpha. With alpha in (1/2, 1] the partial sums diverge
// while the squared sums stay bounded, which is what the state update needs.
struct StepsizeSchedule {
  double alpha = 1.0;

  double at(std::int64_t n) const {
    return std::pow(static_cast<double>(n + 1), -alpha);
  }
};

}  // namespace mfbg
