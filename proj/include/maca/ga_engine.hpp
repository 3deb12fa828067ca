#pragma once

// Genetic search over hybrid CA rule vectors. The genome of an n-cell rule
// vector is 8n bits, cell 0 first, each rule number most significant bit first.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maca/ca_core.hpp"
#include "maca/distribution.hpp"
#include "maca/rng.hpp"

namespace maca {

struct Chromosome {
  RuleVector rules;
  std::optional<double> fitness;  // cached; cleared by every variation operator

  int genome_bits() const { return 8 * rules.size(); }
  bool genome_bit(int index) const;
  std::string genome_string() const;
  static Chromosome from_genome_string(std::string_view bits);
};

struct GAParams {
  int population_size = 50;
  double elite_fraction = 0.1;
  double mutation_bit_rate = 0.02;
  double mutant_share = 0.10;
  int max_generations = 100;
  double target_fitness = 1.0;
  std::uint64_t rng_seed = 1;
  std::vector<RuleVector> seed_candidates;  // replace random members of the initial population

  // Selection pressure toward coarse partitions: the search objective is
  // fitness - basin_penalty * (occupied_basins - 1) / patterns. Zero makes the
  // objective equal to fitness.
  double basin_penalty = 0.5;

  Boundary boundary = Boundary::null;
  std::uint64_t max_steps = kDefaultStepBudget;  // per-pattern attractor walk budget
  int trace_steps = 256;                         // spacetime rows for the per-generation diagnostics

  void validate() const;
  friend bool operator==(const GAParams&, const GAParams&) = default;
};

struct GenerationTrace {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double entropy = 0.0;
  double mutual_information = 0.0;

  friend bool operator==(const GenerationTrace&, const GenerationTrace&) = default;
};

struct EvolveResult {
  Chromosome best;        // highest fitness seen in any generation
  Chromosome best_split;  // highest search objective seen; equals best when basin_penalty == 0
  std::vector<GenerationTrace> trace;
};

std::vector<Chromosome> init_population(const GAParams& params, int width);

// Fraction of patterns agreeing with their basin's majority label. Patterns
// whose attractor walk exceeds max_steps count as disagreeing.
double fitness(const RuleVector& rules, std::span<const LabeledPattern> patterns,
               Boundary boundary = Boundary::null, std::uint64_t max_steps = kDefaultStepBudget);
double fitness(const Distribution& distribution, std::span<const LabeledPattern> patterns);

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, int locus);
Chromosome mutate(const Chromosome& c, double rate, Rng& rng);

// Called once per generation with the evaluated population (fitness set on every member).
using GenerationObserver = std::function<void(int generation, std::span<const Chromosome> population)>;

EvolveResult evolve(std::span<const LabeledPattern> patterns, const GAParams& params,
                    const GenerationObserver& observer = {});

}  // namespace maca
