#pragma once

// Two-state, three-neighborhood hybrid cellular automata.
//
// A state of width n is packed into a 64-bit word with cell 0 in the most
// significant used bit, so integer order on words equals lexicographic order
// on the "0101..." string form. Cell i reads cells i-1 (left) and i+1 (right);
// the rule output for neighborhood (l, c, r) is bit 4l + 2c + r of the rule
// number (Wolfram numbering).

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace maca {

inline constexpr int kMaxWidth = 64;
inline constexpr int kMaxEnumerableWidth = 20;

enum class Boundary {
  null,      // missing neighbors read 0
  periodic,  // ring
};

std::string_view to_string(Boundary boundary);
Boundary parse_boundary(std::string_view text);

class RuleNumber {
 public:
  constexpr RuleNumber() = default;
  explicit RuleNumber(int value);

  constexpr std::uint8_t value() const { return value_; }
  constexpr bool output(unsigned neighborhood) const { return (value_ >> neighborhood) & 1U; }

  friend constexpr auto operator<=>(RuleNumber, RuleNumber) = default;

 private:
  std::uint8_t value_ = 0;
};

bool apply_rule(RuleNumber rule, bool left, bool center, bool right);

// Per-cell rule numbers of a hybrid CA.
class RuleVector {
 public:
  RuleVector() = default;
  explicit RuleVector(std::vector<std::uint8_t> codes);

  static RuleVector uniform(RuleNumber rule, int width);
  static RuleVector from_ints(std::span<const int> values);
  // Comma separated list; a single number is accepted only together with a width.
  static RuleVector parse(std::string_view text, std::optional<int> width = std::nullopt);

  int size() const { return static_cast<int>(codes_.size()); }
  RuleNumber operator[](int cell) const { return RuleNumber(codes_[cell]); }
  std::span<const std::uint8_t> codes() const { return codes_; }
  void set(int cell, RuleNumber rule) { codes_[cell] = rule.value(); }

  std::string to_string() const;

  friend auto operator<=>(const RuleVector&, const RuleVector&) = default;

 private:
  std::vector<std::uint8_t> codes_;
};

class CAState {
 public:
  CAState() = default;
  CAState(std::uint64_t word, int width);

  static CAState from_string(std::string_view bits);
  static CAState zeros(int width) { return CAState(0, width); }

  int width() const { return width_; }
  std::uint64_t word() const { return word_; }
  bool cell(int i) const { return (word_ >> (width_ - 1 - i)) & 1U; }
  CAState with_cell(int i, bool value) const;

  std::string to_string() const;

  friend constexpr auto operator<=>(const CAState&, const CAState&) = default;

 private:
  std::uint64_t word_ = 0;
  int width_ = 0;
};

inline std::uint64_t width_mask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

struct Trajectory {
  std::vector<CAState> transient;
  std::vector<CAState> cycle;  // in visiting order, starting at the first repeated state
};

struct AttractorBasin {
  std::vector<CAState> attractor;  // cycle rotated so its smallest state is first
  std::vector<CAState> states;     // every state draining to the attractor, ascending
  std::uint64_t size = 0;
};

// Rotates a cycle so the lexicographically smallest state comes first.
std::vector<CAState> canonical_cycle(std::span<const CAState> cycle);

// Identifies an attractor by its smallest cycle state and the cycle length.
struct AttractorKey {
  CAState representative;
  std::uint64_t cycle_length = 0;

  friend constexpr auto operator<=>(const AttractorKey&, const AttractorKey&) = default;
};

// A rule vector compiled into per-neighborhood bit masks; one step of all
// cells costs a few dozen word operations.
class HybridCA {
 public:
  explicit HybridCA(RuleVector rules, Boundary boundary = Boundary::null);

  int width() const { return width_; }
  const RuleVector& rules() const { return rules_; }
  Boundary boundary() const { return boundary_; }

  CAState step(const CAState& state) const;
  std::uint64_t step_word(std::uint64_t word) const noexcept;

  // Full transient and cycle listing; throws BudgetExhaustedError if no state
  // repeats within max_steps applications of step().
  Trajectory find_attractor(const CAState& state, std::uint64_t max_steps) const;

  // Constant-memory attractor lookup (Brent). Returns nullopt when the walk
  // needs more than max_steps steps.
  std::optional<AttractorKey> attractor_of(std::uint64_t word, std::uint64_t max_steps) const;

 private:
  RuleVector rules_;
  Boundary boundary_;
  int width_ = 0;
  std::uint64_t mask_ = 0;
  std::array<std::uint64_t, 8> outputs_{};  // outputs_[j]: cells whose rule maps neighborhood j to 1
};

CAState step(const CAState& state, const RuleVector& rules, Boundary boundary = Boundary::null);

Trajectory find_attractor(const CAState& state, const RuleVector& rules, Boundary boundary,
                          std::uint64_t max_steps);

// Exhaustive sweep of all 2^n states, n <= 20. Basins are sorted by attractor.
std::vector<AttractorBasin> enumerate_basins(const RuleVector& rules,
                                             Boundary boundary = Boundary::null);

}  // namespace maca
