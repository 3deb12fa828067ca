#include "maca/diagnostics.hpp"

#include <string>

namespace maca {

SpacetimeRun spacetime_run(const RuleVector& rules, const CAState& start, int steps,
                           Boundary boundary) {
  if (steps < 2) throw ParameterError("spacetime run needs at least 2 rows");
  if (start.width() != rules.size()) {
    throw DimensionError("start state width " + std::to_string(start.width()) +
                         " does not match rule vector width " + std::to_string(rules.size()));
  }
  const HybridCA ca(rules, boundary);
  const int n = rules.size();
  SpacetimeRun run{BitMatrix(steps, n), rules, start};
  std::uint64_t x = start.word();
  for (int t = 0; t < steps; ++t) {
    for (int i = 0; i < n; ++i) run.states(t, i) = static_cast<std::uint8_t>((x >> (n - 1 - i)) & 1U);
    x = ca.step_word(x);
  }
  return run;
}

}  // namespace maca
