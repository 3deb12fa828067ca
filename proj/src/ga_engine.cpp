#include "maca/ga_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "maca/diagnostics.hpp"
#include "maca/errors.hpp"

namespace maca {

namespace {

constexpr double kSelectionFloor = 1e-6;

struct Scored {
  double fitness = 0.0;
  double objective = 0.0;
};

Scored score(const RuleVector& rules, std::span<const LabeledPattern> patterns,
             const GAParams& params) {
  const Distribution d = distribute(rules, patterns, params.boundary, params.max_steps);
  const double f = fitness(d, patterns);
  const double occupied = static_cast<double>(d.groups.size() + d.unresolved.size());
  const double penalty =
      params.basin_penalty * (occupied - 1.0) / static_cast<double>(patterns.size());
  return {f, f - penalty};
}

// Index of the roulette pick with weights objective + floor (negatives clamp to the floor).
std::size_t roulette(std::span<const double> weights, double total, Rng& rng) {
  double target = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    target -= weights[i];
    if (target < 0.0) return i;
  }
  return weights.size() - 1;
}

}  // namespace

bool Chromosome::genome_bit(int index) const {
  if (index < 0 || index >= genome_bits()) throw ParameterError("genome bit index out of range");
  return (rules.codes()[index / 8] >> (7 - index % 8)) & 1U;
}

std::string Chromosome::genome_string() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(genome_bits()));
  for (int i = 0; i < genome_bits(); ++i) out += genome_bit(i) ? '1' : '0';
  return out;
}

Chromosome Chromosome::from_genome_string(std::string_view bits) {
  if (bits.empty() || bits.size() % 8 != 0) {
    throw ParameterError("genome length must be a positive multiple of 8");
  }
  std::vector<std::uint8_t> codes(bits.size() / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw ParameterError("genome must contain only 0/1");
    if (bits[i] == '1') codes[i / 8] |= static_cast<std::uint8_t>(1U << (7 - i % 8));
  }
  return Chromosome{RuleVector(std::move(codes)), std::nullopt};
}

void GAParams::validate() const {
  if (population_size < 2) throw ParameterError("population size must be >= 2");
  if (!(elite_fraction > 0.0 && elite_fraction <= 1.0)) {
    throw ParameterError("elite fraction must be in (0, 1]");
  }
  if (!(mutant_share >= 0.0 && mutant_share <= 1.0)) {
    throw ParameterError("mutant share must be in [0, 1]");
  }
  if (mutant_share + elite_fraction > 1.0 + 1e-12) {
    throw ParameterError("mutant share + elite fraction must not exceed 1");
  }
  if (!(mutation_bit_rate >= 0.0 && mutation_bit_rate <= 1.0)) {
    throw ParameterError("mutation bit rate must be in [0, 1]");
  }
  if (max_generations < 1) throw ParameterError("max generations must be >= 1");
  if (!(basin_penalty >= 0.0)) throw ParameterError("basin penalty must be >= 0");
  if (max_steps < 1) throw ParameterError("step budget must be >= 1");
  if (trace_steps < 2) throw ParameterError("trace steps must be >= 2");
  if (static_cast<int>(seed_candidates.size()) > population_size) {
    throw ParameterError("more seed candidates than population slots");
  }
}

std::vector<Chromosome> init_population(const GAParams& params, int width) {
  params.validate();
  if (width < 1) throw ParameterError("width must be >= 1");
  if (width > kMaxWidth) throw CapacityError("width " + std::to_string(width) + " exceeds 64");
  Rng rng(params.rng_seed);
  std::vector<Chromosome> population;
  population.reserve(static_cast<std::size_t>(params.population_size));
  for (int p = 0; p < params.population_size; ++p) {
    std::vector<std::uint8_t> codes(static_cast<std::size_t>(width));
    for (auto& code : codes) code = static_cast<std::uint8_t>(rng.below(256));
    population.push_back({RuleVector(std::move(codes)), std::nullopt});
  }
  for (std::size_t k = 0; k < params.seed_candidates.size(); ++k) {
    if (params.seed_candidates[k].size() != width) {
      throw DimensionError("seed candidate " + std::to_string(k) + " has width " +
                           std::to_string(params.seed_candidates[k].size()) + ", expected " +
                           std::to_string(width));
    }
    population[k] = {params.seed_candidates[k], std::nullopt};
  }
  return population;
}

double fitness(const Distribution& distribution, std::span<const LabeledPattern> patterns) {
  if (patterns.empty()) throw ParameterError("fitness of an empty pattern set");
  std::size_t agree = 0;
  for (const auto& group : distribution.groups) agree += majority_agreement(patterns, group.members);
  return static_cast<double>(agree) / static_cast<double>(patterns.size());
}

double fitness(const RuleVector& rules, std::span<const LabeledPattern> patterns,
               Boundary boundary, std::uint64_t max_steps) {
  if (patterns.empty()) throw ParameterError("fitness of an empty pattern set");
  return fitness(distribute(rules, patterns, boundary, max_steps), patterns);
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, int locus) {
  if (a.rules.size() != b.rules.size()) throw DimensionError("crossover of unequal genomes");
  if (locus < 0 || locus > a.genome_bits()) {
    throw ParameterError("crossover locus " + std::to_string(locus) + " outside [0, " +
                         std::to_string(a.genome_bits()) + "]");
  }
  const auto ca = a.rules.codes();
  const auto cb = b.rules.codes();
  std::vector<std::uint8_t> first(ca.begin(), ca.end());
  std::vector<std::uint8_t> second(cb.begin(), cb.end());
  const int cell = locus / 8;
  const int within = locus % 8;
  for (int k = cell; k < a.rules.size(); ++k) {
    if (k == cell && within != 0) {
      const auto head = static_cast<std::uint8_t>(0xFFU << (8 - within));
      first[k] = static_cast<std::uint8_t>((ca[k] & head) | (cb[k] & ~head));
      second[k] = static_cast<std::uint8_t>((cb[k] & head) | (ca[k] & ~head));
    } else {
      first[k] = cb[k];
      second[k] = ca[k];
    }
  }
  return {Chromosome{RuleVector(std::move(first)), std::nullopt},
          Chromosome{RuleVector(std::move(second)), std::nullopt}};
}

Chromosome mutate(const Chromosome& c, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ParameterError("mutation rate must be in [0, 1]");
  const auto src = c.rules.codes();
  std::vector<std::uint8_t> codes(src.begin(), src.end());
  for (auto& code : codes) {
    for (int bit = 7; bit >= 0; --bit) {
      if (rng.bernoulli(rate)) code = static_cast<std::uint8_t>(code ^ (1U << bit));
    }
  }
  return Chromosome{RuleVector(std::move(codes)), std::nullopt};
}

EvolveResult evolve(std::span<const LabeledPattern> patterns, const GAParams& params,
                    const GenerationObserver& observer) {
  params.validate();
  if (patterns.empty()) throw ParameterError("cannot evolve on an empty pattern set");
  const int width = patterns.front().bits.width();
  for (const auto& p : patterns) {
    if (p.bits.width() != width) throw DimensionError("patterns have mixed widths");
  }

  const auto np = static_cast<std::size_t>(params.population_size);
  const std::size_t elite_count = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(params.elite_fraction * static_cast<double>(np))), 1, np);
  const std::size_t mutant_count = std::min(
      static_cast<std::size_t>(std::llround(params.mutant_share * static_cast<double>(np))),
      np - elite_count);

  Rng rng(mix_seed(params.rng_seed, 1));
  Rng start_rng(mix_seed(params.rng_seed, 2));
  const CAState trace_start(start_rng.next() & width_mask(width), width);

  std::vector<Chromosome> population = init_population(params, width);
  std::vector<Scored> scores(np);

  EvolveResult result;
  Scored best_score{-1.0, 0.0};
  double best_split_objective = -1e300;

  for (int generation = 0;; ++generation) {
    for (std::size_t i = 0; i < np; ++i) {
      if (!population[i].fitness) {
        scores[i] = score(population[i].rules, patterns, params);
        population[i].fitness = scores[i].fitness;
      }
    }

    // Ranking by objective, stable on index; the fittest member is tracked separately.
    std::vector<std::size_t> order(np);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return scores[a].objective > scores[b].objective;
    });
    std::size_t fittest = order.front();
    for (std::size_t i : order) {
      if (scores[i].fitness > scores[fittest].fitness) fittest = i;
    }

    if (scores[fittest].fitness > best_score.fitness) {
      best_score = scores[fittest];
      result.best = population[fittest];
    }
    if (scores[order.front()].objective > best_split_objective) {
      best_split_objective = scores[order.front()].objective;
      result.best_split = population[order.front()];
    }

    GenerationTrace row;
    row.generation = generation;
    row.best_fitness = scores[fittest].fitness;
    double sum = 0.0;
    for (const auto& s : scores) sum += s.fitness;
    row.mean_fitness = sum / static_cast<double>(np);
    const SpacetimeRun run =
        spacetime_run(population[fittest].rules, trace_start, params.trace_steps, params.boundary);
    row.entropy = entropy(run);
    row.mutual_information = width >= 2 ? mutual_information(run) : 0.0;
    result.trace.push_back(row);
    if (observer) observer(generation, population);

    if (scores[order.front()].objective >= params.target_fitness ||
        generation + 1 >= params.max_generations) {
      break;
    }

    std::vector<Chromosome> next;
    std::vector<Scored> next_scores;
    next.reserve(np);
    next_scores.reserve(np);
    std::vector<std::size_t> elites(order.begin(), order.begin() + static_cast<long>(elite_count));
    if (std::find(elites.begin(), elites.end(), fittest) == elites.end()) elites.back() = fittest;
    for (std::size_t e : elites) {
      next.push_back(population[e]);
      next_scores.push_back(scores[e]);
    }
    for (std::size_t k = 0; k < mutant_count; ++k) {
      next.push_back(mutate(population[elites[k % elites.size()]], params.mutation_bit_rate, rng));
      next_scores.emplace_back();
    }

    std::vector<double> weights(np);
    double total = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
      weights[i] = std::max(scores[i].objective, 0.0) + kSelectionFloor;
      total += weights[i];
    }
    while (next.size() < np) {
      const auto& mother = population[roulette(weights, total, rng)];
      const auto& father = population[roulette(weights, total, rng)];
      const int locus = static_cast<int>(rng.below(static_cast<std::uint64_t>(mother.genome_bits()) + 1));
      auto [first, second] = crossover(mother, father, locus);
      next.push_back(std::move(first));
      next_scores.emplace_back();
      if (next.size() < np) {
        next.push_back(std::move(second));
        next_scores.emplace_back();
      }
    }
    population = std::move(next);
    scores = std::move(next_scores);
  }
  return result;
}

}  // namespace maca
