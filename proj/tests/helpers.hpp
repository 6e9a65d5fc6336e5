#pragma once

#include <cmath>
#include <vector>

#include "evodyn/forms.hpp"
#include "evodyn/game_tree.hpp"

namespace evodyn::testing {

// The mixed profile used throughout: agent 1 realizes the reduced-plan
// mixture (1/3, 0, 1/3, 0, 1/3), agent 2 plays her first action purely.
inline SequenceStrategy example_x1() {
  return {0, {1.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0, 2.0 / 3.0}};
}
inline SequenceStrategy example_x2() { return {1, {1.0, 1.0, 0.0}}; }

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = a.size() == b.size() ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace evodyn::testing
