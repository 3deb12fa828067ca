#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "maca/ca_core.hpp"

namespace maca {

// A training pattern. Labels are dense class indices; class names live with the dataset.
struct LabeledPattern {
  CAState bits;
  int label = 0;

  friend bool operator==(const LabeledPattern&, const LabeledPattern&) = default;
};

inline constexpr std::uint64_t kDefaultStepBudget = 4096;

struct BasinGroup {
  CAState attractor;                 // smallest state of the attractor cycle
  std::vector<std::size_t> members;  // indices into the input, in input order
};

struct Distribution {
  std::vector<BasinGroup> groups;       // ascending by attractor
  std::vector<std::size_t> unresolved;  // patterns whose walk exceeded the step budget
};

// Routes every pattern to the attractor its trajectory settles on.
Distribution distribute(const HybridCA& ca, std::span<const LabeledPattern> patterns,
                        std::uint64_t max_steps = kDefaultStepBudget);
Distribution distribute(const RuleVector& rules, std::span<const LabeledPattern> patterns,
                        Boundary boundary = Boundary::null,
                        std::uint64_t max_steps = kDefaultStepBudget);

// Most frequent label among the given members; ties go to the label seen first.
int majority_label(std::span<const LabeledPattern> patterns, std::span<const std::size_t> members);
int majority_label(std::span<const LabeledPattern> patterns);

// Number of members whose label equals the group's majority label.
std::size_t majority_agreement(std::span<const LabeledPattern> patterns,
                               std::span<const std::size_t> members);

}  // namespace maca
