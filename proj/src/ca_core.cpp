#include "maca/ca_core.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

#include "maca/errors.hpp"

namespace maca {

std::string_view to_string(Boundary boundary) {
  return boundary == Boundary::null ? "null" : "periodic";
}

Boundary parse_boundary(std::string_view text) {
  if (text == "null") return Boundary::null;
  if (text == "periodic") return Boundary::periodic;
  throw ParameterError("unknown boundary mode '" + std::string(text) + "'");
}

RuleNumber::RuleNumber(int value) {
  if (value < 0 || value > 255) {
    throw ParameterError("rule number " + std::to_string(value) + " outside [0, 255]");
  }
  value_ = static_cast<std::uint8_t>(value);
}

bool apply_rule(RuleNumber rule, bool left, bool center, bool right) {
  return rule.output((unsigned{left} << 2) | (unsigned{center} << 1) | unsigned{right});
}

RuleVector::RuleVector(std::vector<std::uint8_t> codes) : codes_(std::move(codes)) {
  if (codes_.empty()) throw ParameterError("rule vector must have at least one cell");
  if (codes_.size() > kMaxWidth) {
    throw CapacityError("rule vector of " + std::to_string(codes_.size()) +
                        " cells exceeds the 64-cell limit");
  }
}

RuleVector RuleVector::uniform(RuleNumber rule, int width) {
  if (width < 1) throw ParameterError("width must be >= 1");
  if (width > kMaxWidth) throw CapacityError("width " + std::to_string(width) + " exceeds 64");
  return RuleVector(std::vector<std::uint8_t>(static_cast<std::size_t>(width), rule.value()));
}

RuleVector RuleVector::from_ints(std::span<const int> values) {
  std::vector<std::uint8_t> codes;
  codes.reserve(values.size());
  for (int v : values) codes.push_back(RuleNumber(v).value());
  return RuleVector(std::move(codes));
}

RuleVector RuleVector::parse(std::string_view text, std::optional<int> width) {
  std::vector<int> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    int value = 0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || end != token.data() + token.size()) {
      throw ParameterError("malformed rule list '" + std::string(text) + "'");
    }
    values.push_back(value);
    pos = comma + 1;
  }
  if (values.size() == 1 && width) {
    return uniform(RuleNumber(values.front()), *width);
  }
  if (width && static_cast<int>(values.size()) != *width) {
    throw DimensionError("rule list has " + std::to_string(values.size()) +
                         " entries but width is " + std::to_string(*width));
  }
  return from_ints(values);
}

std::string RuleVector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(codes_[i]);
  }
  return out;
}

CAState::CAState(std::uint64_t word, int width) : word_(word), width_(width) {
  if (width < 1 || width > kMaxWidth) {
    throw CapacityError("state width " + std::to_string(width) + " outside [1, 64]");
  }
  if (word & ~width_mask(width)) throw ParameterError("state word has bits beyond its width");
}

CAState CAState::from_string(std::string_view bits) {
  if (bits.empty()) throw ParameterError("empty state string");
  if (bits.size() > kMaxWidth) throw CapacityError("state string longer than 64 cells");
  std::uint64_t word = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ParameterError("state string must contain only 0/1");
    word = (word << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return CAState(word, static_cast<int>(bits.size()));
}

CAState CAState::with_cell(int i, bool value) const {
  const std::uint64_t bit = std::uint64_t{1} << (width_ - 1 - i);
  return CAState(value ? (word_ | bit) : (word_ & ~bit), width_);
}

std::string CAState::to_string() const {
  std::string out(static_cast<std::size_t>(width_), '0');
  for (int i = 0; i < width_; ++i) out[i] = cell(i) ? '1' : '0';
  return out;
}

std::vector<CAState> canonical_cycle(std::span<const CAState> cycle) {
  std::vector<CAState> out(cycle.begin(), cycle.end());
  auto smallest = std::min_element(out.begin(), out.end());
  std::rotate(out.begin(), smallest, out.end());
  return out;
}

HybridCA::HybridCA(RuleVector rules, Boundary boundary)
    : rules_(std::move(rules)), boundary_(boundary), width_(rules_.size()) {
  if (width_ < 1) throw ParameterError("rule vector must have at least one cell");
  mask_ = width_mask(width_);
  for (int i = 0; i < width_; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << (width_ - 1 - i);
    for (unsigned j = 0; j < 8; ++j) {
      if (rules_[i].output(j)) outputs_[j] |= bit;
    }
  }
}

std::uint64_t HybridCA::step_word(std::uint64_t x) const noexcept {
  // left[i] = x[i-1] sits one bit lower; right[i] = x[i+1] one bit higher.
  std::uint64_t left = x >> 1;
  std::uint64_t right = (x << 1) & mask_;
  if (boundary_ == Boundary::periodic) {
    left |= (x & 1U) << (width_ - 1);
    right |= (x >> (width_ - 1)) & 1U;
  }
  const std::uint64_t nl = ~left, nc = ~x, nr = ~right;
  std::uint64_t next = 0;
  next |= outputs_[0] & nl & nc & nr;
  next |= outputs_[1] & nl & nc & right;
  next |= outputs_[2] & nl & x & nr;
  next |= outputs_[3] & nl & x & right;
  next |= outputs_[4] & left & nc & nr;
  next |= outputs_[5] & left & nc & right;
  next |= outputs_[6] & left & x & nr;
  next |= outputs_[7] & left & x & right;
  return next & mask_;
}

CAState HybridCA::step(const CAState& state) const {
  if (state.width() != width_) {
    throw DimensionError("state width " + std::to_string(state.width()) +
                         " does not match rule vector width " + std::to_string(width_));
  }
  return CAState(step_word(state.word()), width_);
}

Trajectory HybridCA::find_attractor(const CAState& state, std::uint64_t max_steps) const {
  if (max_steps < 1) throw ParameterError("max_steps must be >= 1");
  if (state.width() != width_) {
    throw DimensionError("state width " + std::to_string(state.width()) +
                         " does not match rule vector width " + std::to_string(width_));
  }
  std::vector<std::uint64_t> path{state.word()};
  std::unordered_map<std::uint64_t, std::size_t> seen{{state.word(), 0}};
  std::uint64_t x = state.word();
  for (std::uint64_t steps = 1; steps <= max_steps; ++steps) {
    x = step_word(x);
    auto [it, inserted] = seen.emplace(x, path.size());
    if (!inserted) {
      Trajectory out;
      const std::size_t entry = it->second;
      for (std::size_t k = 0; k < path.size(); ++k) {
        (k < entry ? out.transient : out.cycle).emplace_back(path[k], width_);
      }
      return out;
    }
    path.push_back(x);
  }
  throw BudgetExhaustedError("no state repeated within " + std::to_string(max_steps) + " steps");
}

std::optional<AttractorKey> HybridCA::attractor_of(std::uint64_t word,
                                                   std::uint64_t max_steps) const {
  std::uint64_t power = 1, length = 1, used = 1;
  std::uint64_t tortoise = word;
  std::uint64_t hare = step_word(word);
  while (tortoise != hare) {
    if (power == length) {
      tortoise = hare;
      power <<= 1;
      length = 0;
    }
    hare = step_word(hare);
    ++length;
    if (++used > max_steps) return std::nullopt;
  }
  // hare is on the cycle; walk it once for the smallest member.
  std::uint64_t smallest = hare;
  std::uint64_t x = hare;
  for (std::uint64_t k = 1; k < length; ++k) {
    x = step_word(x);
    smallest = std::min(smallest, x);
  }
  return AttractorKey{CAState(smallest, width_), length};
}

CAState step(const CAState& state, const RuleVector& rules, Boundary boundary) {
  if (state.width() != rules.size()) {
    throw DimensionError("state width " + std::to_string(state.width()) +
                         " does not match rule vector width " + std::to_string(rules.size()));
  }
  return HybridCA(rules, boundary).step(state);
}

Trajectory find_attractor(const CAState& state, const RuleVector& rules, Boundary boundary,
                          std::uint64_t max_steps) {
  return HybridCA(rules, boundary).find_attractor(state, max_steps);
}

std::vector<AttractorBasin> enumerate_basins(const RuleVector& rules, Boundary boundary) {
  const int n = rules.size();
  if (n > kMaxEnumerableWidth) {
    throw CapacityError("exhaustive basin enumeration supports at most 20 cells, got " +
                        std::to_string(n));
  }
  const HybridCA ca(rules, boundary);
  const std::uint64_t count = std::uint64_t{1} << n;

  // Functional-graph decomposition: label[s] is the basin id once resolved.
  constexpr std::int32_t kUnvisited = -1;
  constexpr std::int32_t kOnPath = -2;
  std::vector<std::int32_t> label(count, kUnvisited);
  std::vector<std::vector<std::uint64_t>> cycles;
  std::vector<std::uint64_t> path;

  for (std::uint64_t start = 0; start < count; ++start) {
    if (label[start] != kUnvisited) continue;
    path.clear();
    std::uint64_t x = start;
    while (label[x] == kUnvisited) {
      label[x] = kOnPath;
      path.push_back(x);
      x = ca.step_word(x);
    }
    std::int32_t id;
    if (label[x] == kOnPath) {
      id = static_cast<std::int32_t>(cycles.size());
      auto entry = std::find(path.begin(), path.end(), x);
      cycles.emplace_back(entry, path.end());
    } else {
      id = label[x];
    }
    for (std::uint64_t s : path) label[s] = id;
  }

  std::vector<AttractorBasin> basins(cycles.size());
  for (std::size_t b = 0; b < cycles.size(); ++b) {
    std::vector<CAState> cycle;
    cycle.reserve(cycles[b].size());
    for (std::uint64_t w : cycles[b]) cycle.emplace_back(w, n);
    basins[b].attractor = canonical_cycle(cycle);
  }
  for (std::uint64_t s = 0; s < count; ++s) {
    auto& basin = basins[static_cast<std::size_t>(label[s])];
    basin.states.emplace_back(s, n);
    ++basin.size;
  }
  std::sort(basins.begin(), basins.end(), [](const AttractorBasin& a, const AttractorBasin& b) {
    return a.attractor.front() < b.attractor.front();
  });
  return basins;
}

}  // namespace maca
