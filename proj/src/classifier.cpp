#include "maca/classifier.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "maca/errors.hpp"

namespace maca {

namespace {

bool is_pure(std::span<const LabeledPattern> patterns, std::span<const std::size_t> members) {
  return std::all_of(members.begin(), members.end(), [&](std::size_t m) {
    return patterns[m].label == patterns[members.front()].label;
  });
}

class TreeBuilder {
 public:
  TreeBuilder(std::span<const LabeledPattern> patterns, const GAParams& ga, int max_depth,
              MacaTree& tree, std::vector<NodeTrace>& traces)
      : patterns_(patterns), ga_(ga), max_depth_(max_depth), tree_(tree), traces_(traces) {}

  // Returns the index of a new CA node splitting `subset`, or nullopt when no
  // evolved rule vector separates it.
  std::optional<int> build(const std::vector<std::size_t>& subset, int depth) {
    std::vector<LabeledPattern> local;
    local.reserve(subset.size());
    for (std::size_t i : subset) local.push_back(patterns_[i]);

    GAParams params = ga_;
    params.rng_seed = mix_seed(ga_.rng_seed, ordinal_++);
    EvolveResult evolved = evolve(local, params);

    const Distribution* chosen = nullptr;
    const RuleVector* chosen_rules = nullptr;
    Distribution candidates[2];
    const RuleVector* candidate_rules[2] = {&evolved.best_split.rules, &evolved.best.rules};
    for (int c = 0; c < 2 && !chosen; ++c) {
      candidates[c] = distribute(*candidate_rules[c], local, ga_.boundary, ga_.max_steps);
      if (candidates[c].unresolved.empty() && candidates[c].groups.size() >= 2) {
        chosen = &candidates[c];
        chosen_rules = candidate_rules[c];
      }
    }
    if (!chosen) return std::nullopt;

    const int index = static_cast<int>(tree_.nodes.size());
    traces_.push_back({index, std::move(evolved.trace)});
    tree_.nodes.push_back({*chosen_rules, {}, tree_.default_label});

    std::vector<Route> routes;
    routes.reserve(chosen->groups.size());
    for (const auto& group : chosen->groups) {
      Route route{group.attractor, true, 0};
      if (is_pure(local, group.members)) {
        route.target = local[group.members.front()].label;
      } else {
        std::optional<int> child;
        if (depth < max_depth_) {
          std::vector<std::size_t> members;
          members.reserve(group.members.size());
          for (std::size_t m : group.members) members.push_back(subset[m]);
          child = build(members, depth + 1);
        }
        if (child) {
          route.leaf = false;
          route.target = *child;
        } else {
          route.target = majority_label(local, group.members);
        }
      }
      routes.push_back(route);
    }
    tree_.nodes[static_cast<std::size_t>(index)].routes = std::move(routes);
    return index;
  }

 private:
  std::span<const LabeledPattern> patterns_;
  const GAParams& ga_;
  int max_depth_;
  MacaTree& tree_;
  std::vector<NodeTrace>& traces_;
  std::uint64_t ordinal_ = 0;
};

int depth_of(const MacaTree& tree, int node) {
  int deepest = 0;
  for (const auto& route : tree.nodes[static_cast<std::size_t>(node)].routes) {
    if (!route.leaf) deepest = std::max(deepest, depth_of(tree, route.target));
  }
  return deepest + 1;
}

}  // namespace

int MacaTree::depth() const {
  if (root_label || nodes.empty()) return 0;
  return depth_of(*this, 0);
}

TrainingRun train_tree_traced(std::span<const LabeledPattern> patterns, const GAParams& ga,
                              int max_depth, std::vector<std::string> class_names) {
  if (patterns.empty()) throw InputError("training set is empty");
  if (max_depth < 1) throw ParameterError("max depth must be >= 1");
  ga.validate();
  const int width = patterns.front().bits.width();
  int max_label = 0;
  for (const auto& p : patterns) {
    if (p.bits.width() != width) throw DimensionError("training patterns have mixed widths");
    if (p.label < 0) throw InputError("negative class label");
    max_label = std::max(max_label, p.label);
  }
  if (class_names.empty()) {
    for (int c = 0; c <= max_label; ++c) class_names.push_back(std::to_string(c));
  } else if (static_cast<int>(class_names.size()) <= max_label) {
    throw InputError("class label outside the class name table");
  }

  TrainingRun run;
  MacaTree& tree = run.tree;
  tree.width = width;
  tree.classes = std::move(class_names);
  tree.boundary = ga.boundary;
  tree.step_budget = ga.max_steps;
  tree.max_depth = max_depth;
  tree.build_params = ga;
  tree.default_label = majority_label(patterns);

  std::vector<std::size_t> all(patterns.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (is_pure(patterns, all)) {
    tree.root_label = patterns.front().label;
    return run;
  }
  TreeBuilder builder(patterns, ga, max_depth, tree, run.traces);
  if (!builder.build(all, 1)) tree.root_label = tree.default_label;
  return run;
}

MacaTree train_tree(std::span<const LabeledPattern> patterns, const GAParams& ga, int max_depth,
                    std::vector<std::string> class_names) {
  return train_tree_traced(patterns, ga, max_depth, std::move(class_names)).tree;
}

int classify(const MacaTree& tree, const CAState& bits) {
  if (bits.width() != tree.width) {
    throw DimensionError("pattern width " + std::to_string(bits.width()) +
                         " does not match classifier width " + std::to_string(tree.width));
  }
  if (tree.root_label) return *tree.root_label;
  std::size_t node = 0;
  while (true) {
    const MacaNode& current = tree.nodes[node];
    const HybridCA ca(current.rules, tree.boundary);
    const auto key = ca.attractor_of(bits.word(), tree.step_budget);
    if (!key) return current.default_label;
    auto it = std::lower_bound(
        current.routes.begin(), current.routes.end(), key->representative,
        [](const Route& r, const CAState& a) { return r.attractor < a; });
    if (it == current.routes.end() || it->attractor != key->representative) {
      return current.default_label;
    }
    if (it->leaf) return it->target;
    node = static_cast<std::size_t>(it->target);
  }
}

double training_accuracy(const MacaTree& tree, std::span<const LabeledPattern> patterns) {
  if (patterns.empty()) throw InputError("accuracy of an empty pattern set");
  std::size_t correct = 0;
  for (const auto& p : patterns) correct += classify(tree, p.bits) == p.label;
  return static_cast<double>(correct) / static_cast<double>(patterns.size());
}

}  // namespace maca
