#include "maca/distribution.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "maca/errors.hpp"

namespace maca {

Distribution distribute(const HybridCA& ca, std::span<const LabeledPattern> patterns,
                        std::uint64_t max_steps) {
  std::map<std::uint64_t, std::vector<std::size_t>> by_attractor;
  Distribution out;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (patterns[i].bits.width() != ca.width()) {
      throw DimensionError("pattern " + std::to_string(i) + " has width " +
                           std::to_string(patterns[i].bits.width()) + ", automaton has " +
                           std::to_string(ca.width()));
    }
    auto key = ca.attractor_of(patterns[i].bits.word(), max_steps);
    if (!key) {
      out.unresolved.push_back(i);
      continue;
    }
    by_attractor[key->representative.word()].push_back(i);
  }
  out.groups.reserve(by_attractor.size());
  for (auto& [word, members] : by_attractor) {
    out.groups.push_back({CAState(word, ca.width()), std::move(members)});
  }
  return out;
}

Distribution distribute(const RuleVector& rules, std::span<const LabeledPattern> patterns,
                        Boundary boundary, std::uint64_t max_steps) {
  return distribute(HybridCA(rules, boundary), patterns, max_steps);
}

namespace {

// (label, count) pairs in first-seen order.
std::vector<std::pair<int, std::size_t>> label_counts(std::span<const LabeledPattern> patterns,
                                                      std::span<const std::size_t> members) {
  std::vector<std::pair<int, std::size_t>> counts;
  for (std::size_t m : members) {
    const int label = patterns[m].label;
    auto it = std::find_if(counts.begin(), counts.end(),
                           [label](const auto& c) { return c.first == label; });
    if (it == counts.end()) {
      counts.emplace_back(label, 1);
    } else {
      ++it->second;
    }
  }
  return counts;
}

std::pair<int, std::size_t> top_label(std::span<const LabeledPattern> patterns,
                                      std::span<const std::size_t> members) {
  if (members.empty()) throw InputError("majority of an empty pattern set");
  const auto counts = label_counts(patterns, members);
  auto best = counts.front();
  for (const auto& c : counts) {
    if (c.second > best.second) best = c;
  }
  return best;
}

}  // namespace

int majority_label(std::span<const LabeledPattern> patterns, std::span<const std::size_t> members) {
  return top_label(patterns, members).first;
}

int majority_label(std::span<const LabeledPattern> patterns) {
  std::vector<std::size_t> all(patterns.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return majority_label(patterns, all);
}

std::size_t majority_agreement(std::span<const LabeledPattern> patterns,
                               std::span<const std::size_t> members) {
  return top_label(patterns, members).second;
}

}  // namespace maca
