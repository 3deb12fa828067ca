#pragma once

// Recursive MACA tree. Every internal node is a hybrid CA; a pattern is routed
// by the attractor its trajectory settles on. Pure basins become leaves,
// impure basins are partitioned again by a child CA evolved on their members.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maca/ca_core.hpp"
#include "maca/distribution.hpp"
#include "maca/ga_engine.hpp"

namespace maca {

inline constexpr int kUnlimitedDepth = std::numeric_limits<int>::max();

struct Route {
  CAState attractor;
  bool leaf = true;
  int target = 0;  // class index for a leaf, node index otherwise

  friend bool operator==(const Route&, const Route&) = default;
};

struct MacaNode {
  RuleVector rules;
  std::vector<Route> routes;  // ascending by attractor
  int default_label = 0;      // answer for attractors never reached in training

  friend bool operator==(const MacaNode&, const MacaNode&) = default;
};

struct MacaTree {
  int width = 0;
  std::vector<std::string> classes;
  Boundary boundary = Boundary::null;
  std::uint64_t step_budget = kDefaultStepBudget;
  int max_depth = kUnlimitedDepth;
  int default_label = 0;          // global majority class
  std::optional<int> root_label;  // set when the whole tree is a single leaf
  std::vector<MacaNode> nodes;    // nodes[0] is the root unless root_label is set
  GAParams build_params;

  int depth() const;
  friend bool operator==(const MacaTree&, const MacaTree&) = default;
};

struct NodeTrace {
  int node = 0;
  std::vector<GenerationTrace> generations;
};

struct TrainingRun {
  MacaTree tree;
  std::vector<NodeTrace> traces;  // one per evolved node, in construction order
};

// Class names default to "0", "1", ... when none are given.
TrainingRun train_tree_traced(std::span<const LabeledPattern> patterns, const GAParams& ga,
                              int max_depth = kUnlimitedDepth,
                              std::vector<std::string> class_names = {});
MacaTree train_tree(std::span<const LabeledPattern> patterns, const GAParams& ga,
                    int max_depth = kUnlimitedDepth, std::vector<std::string> class_names = {});

// Total over {0,1}^n: unseen or unresolved attractors fall back to the node default.
int classify(const MacaTree& tree, const CAState& bits);

double training_accuracy(const MacaTree& tree, std::span<const LabeledPattern> patterns);

}  // namespace maca
