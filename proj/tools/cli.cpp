#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maca/ca_core.hpp"
#include "maca/classifier.hpp"
#include "maca/data_io.hpp"
#include "maca/diagnostics.hpp"
#include "maca/errors.hpp"
#include "maca/ga_engine.hpp"
#include "maca/rng.hpp"
#include "maca/seq_pipeline.hpp"

namespace maca::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitCapacity = 4;

struct GaFlags {
  std::uint64_t seed = 1;
  int pop_size = 50;
  int generations = 100;
  double mutation_rate = 0.02;
  double elite_fraction = 0.1;
  double mutant_share = 0.10;
  double basin_penalty = 0.5;
  std::uint64_t max_steps = kDefaultStepBudget;
  std::string boundary = "null";

  GAParams params() const {
    GAParams p;
    p.rng_seed = seed;
    p.population_size = pop_size;
    p.max_generations = generations;
    p.mutation_bit_rate = mutation_rate;
    p.elite_fraction = elite_fraction;
    p.mutant_share = mutant_share;
    p.basin_penalty = basin_penalty;
    p.max_steps = max_steps;
    p.boundary = parse_boundary(boundary);
    return p;
  }

  void add_to(CLI::App& app) {
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--pop-size", pop_size, "GA population size");
    app.add_option("--generations", generations, "maximum GA generations");
    app.add_option("--mutation-rate", mutation_rate, "per-bit mutation probability");
    app.add_option("--elite-fraction", elite_fraction, "share of the population kept unchanged");
    app.add_option("--mutant-share", mutant_share, "share of the population produced by mutating elites");
    app.add_option("--basin-penalty", basin_penalty, "search penalty per occupied basin");
    app.add_option("--max-steps", max_steps, "attractor walk budget per pattern");
    app.add_option("--boundary", boundary, "boundary condition")->check(CLI::IsMember({"null", "periodic"}));
  }
};

struct DataFlags {
  std::string manifest;
  int window = 0;  // 0 keeps the manifest value
  int stride = 0;

  DatasetManifest load() const {
    DatasetManifest m = read_manifest(manifest);
    if (window > 0) m.window = window;
    if (stride > 0) m.stride = stride;
    m.validate();
    return m;
  }
};

std::string csv_number(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

std::string trace_csv(const std::vector<NodeTrace>& traces) {
  std::string out = "node,generation,best_fitness,mean_fitness,entropy,mutual_information\n";
  for (const auto& t : traces) {
    for (const auto& g : t.generations) {
      out += std::to_string(t.node) + ',' + std::to_string(g.generation) + ',' +
             csv_number(g.best_fitness) + ',' + csv_number(g.mean_fitness) + ',' +
             csv_number(g.entropy) + ',' + csv_number(g.mutual_information) + '\n';
    }
  }
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw LoadError("cannot create output directory " + dir.string());
}

void write_run_config(const fs::path& dir, const std::string& command, json config) {
  config["command"] = command;
  atomic_write(dir / "run_config.json", config.dump(2) + "\n");
}

json ga_json(const GaFlags& g) {
  return {{"seed", g.seed},
          {"pop_size", g.pop_size},
          {"generations", g.generations},
          {"mutation_rate", g.mutation_rate},
          {"elite_fraction", g.elite_fraction},
          {"mutant_share", g.mutant_share},
          {"basin_penalty", g.basin_penalty},
          {"max_steps", g.max_steps},
          {"boundary", g.boundary}};
}

std::vector<std::string> names_of(const Dataset& ds, std::span<const LabeledPattern> patterns) {
  std::vector<std::string> out;
  out.reserve(patterns.size());
  for (const auto& p : patterns) out.push_back(ds.classes[static_cast<std::size_t>(p.label)]);
  return out;
}

std::vector<std::string> predict_names(const MacaTree& tree, std::span<const LabeledPattern> patterns) {
  std::vector<std::string> out;
  out.reserve(patterns.size());
  for (const auto& p : patterns) out.push_back(tree.classes[static_cast<std::size_t>(classify(tree, p.bits))]);
  return out;
}

void check_width(const MacaTree& tree, const Dataset& ds) {
  if (ds.width != tree.width) {
    throw DimensionError("model expects " + std::to_string(tree.width) + "-cell patterns but the dataset encodes " +
                         std::to_string(ds.width));
  }
}

// Two noisy prototype classes of width n; the pattern set the diagnostics GA learns.
std::vector<LabeledPattern> prototype_patterns(int n, std::uint64_t seed, int per_class = 50,
                                               double noise = 0.1) {
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(n)));
  const std::uint64_t mask = width_mask(n);
  const std::uint64_t proto[2] = {rng.next() & mask, rng.next() & mask};
  std::vector<LabeledPattern> out;
  for (int k = 0; k < 2 * per_class; ++k) {
    const int label = k % 2;
    std::uint64_t word = proto[label];
    for (int b = 0; b < n; ++b) {
      if (rng.bernoulli(noise)) word ^= std::uint64_t{1} << b;
    }
    out.push_back({CAState(word, n), label});
  }
  return out;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Multiple attractor cellular automata classifier"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", "maca 1.0");

  // ---- train
  DataFlags train_data;
  GaFlags train_ga;
  std::string train_out;
  int train_depth = 0;
  double train_test_fraction = 0.0;
  bool no_identity_seed = false;
  auto* train = app.add_subcommand("train", "evolve a MACA tree on a labeled dataset");
  train->add_option("--manifest", train_data.manifest, "dataset manifest (JSON)")->required();
  train->add_option("--out-dir", train_out, "output directory")->required();
  train->add_option("--window", train_data.window, "window override (0 = manifest value)");
  train->add_option("--stride", train_data.stride, "stride override (0 = manifest value)");
  train->add_option("--max-depth", train_depth, "tree depth cap (0 = unlimited)");
  train->add_option("--test-fraction", train_test_fraction,
                    "hold out this share for evaluation (0 = train on everything)");
  train->add_flag("--no-identity-seed", no_identity_seed,
                  "do not seed each node's GA with the all-204 identity rule vector");
  train_ga.add_to(*train);

  // ---- predict
  DataFlags predict_data;
  std::string predict_model, predict_out;
  auto* predict = app.add_subcommand("predict", "classify every window of a dataset");
  predict->add_option("--model", predict_model, "model file")->required();
  predict->add_option("--manifest", predict_data.manifest, "dataset manifest (JSON)")->required();
  predict->add_option("--window", predict_data.window, "window override (0 = manifest value)");
  predict->add_option("--stride", predict_data.stride, "stride override (0 = manifest value)");
  predict->add_option("--out-dir", predict_out, "output directory (default: stdout)");

  // ---- evaluate
  DataFlags eval_data;
  std::string eval_model, eval_out;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "accuracy report of a model on a labeled dataset");
  evaluate_cmd->add_option("--model", eval_model, "model file")->required();
  evaluate_cmd->add_option("--manifest", eval_data.manifest, "dataset manifest (JSON)")->required();
  evaluate_cmd->add_option("--window", eval_data.window, "window override (0 = manifest value)");
  evaluate_cmd->add_option("--stride", eval_data.stride, "stride override (0 = manifest value)");
  evaluate_cmd->add_option("--out-dir", eval_out, "output directory (default: stdout)");

  // ---- basins
  std::string basin_rules, basin_boundary = "null", basin_out;
  int basin_n = 0;
  auto* basins = app.add_subcommand("basins", "enumerate the attractor basins of a rule vector");
  basins->add_option("--rules", basin_rules, "rule list, or a single rule applied to every cell")->required();
  basins->add_option("--n", basin_n, "cell count (required for a single rule)");
  basins->add_option("--boundary", basin_boundary, "boundary condition")
      ->check(CLI::IsMember({"null", "periodic"}));
  basins->add_option("--out-dir", basin_out, "output directory (default: stdout)");

  // ---- diagnose
  std::vector<int> diag_sizes{10, 15, 20, 30};
  GaFlags diag_ga;
  std::string diag_out;
  int diag_steps = 256;
  auto* diagnose = app.add_subcommand("diagnose", "entropy / mutual information traces over GA generations");
  diagnose->add_option("--n", diag_sizes, "CA sizes")->delimiter(',');
  diagnose->add_option("--trace-steps", diag_steps, "spacetime rows per diagnostic run");
  diagnose->add_option("--out-dir", diag_out, "output directory")->required();
  diag_ga.add_to(*diagnose);

  // ---- predict-structure
  std::string ps_base, ps_base_ss, ps_target, ps_out, ps_table = "200-600-800";
  int ps_filter = 5;
  bool ps_dump = false;
  auto* predict_ss = app.add_subcommand("predict-structure", "H/E/C prediction by filter deconvolution");
  predict_ss->add_option("--base-fasta", ps_base, "base protein FASTA (first record used)")->required();
  predict_ss->add_option("--base-structure", ps_base_ss, "H/E/C FASTA for the base protein")->required();
  predict_ss->add_option("--target-fasta", ps_target, "target proteins FASTA")->required();
  predict_ss->add_option("--filter-length", ps_filter, "filter taps");
  predict_ss->add_option("--code-table", ps_table, "structure code table")
      ->check(CLI::IsMember({"200-600-800", "300-700-900"}));
  predict_ss->add_option("--out-dir", ps_out, "output directory (default: stdout)");
  predict_ss->add_flag("--dump-signal", ps_dump, "also write the numeric output signal (needs --out-dir)");

  // ---- encode
  std::string enc_fasta, enc_task = "promoter", enc_out;
  int enc_window = 12, enc_stride = 1, enc_bits = 2;
  auto* encode = app.add_subcommand("encode", "print the bit patterns a FASTA file encodes to");
  encode->add_option("--fasta", enc_fasta, "input FASTA")->required();
  encode->add_option("--task", enc_task, "encoding")->check(CLI::IsMember({"promoter", "coding_region", "structure"}));
  encode->add_option("--window", enc_window, "window length");
  encode->add_option("--stride", enc_stride, "window stride");
  encode->add_option("--bits-per-value", enc_bits, "structure task quantizer bits");
  encode->add_option("--out-dir", enc_out, "output directory (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*train) {
      const DatasetManifest manifest = train_data.load();
      const Dataset ds = load_dataset(manifest);
      if (ds.patterns.empty()) throw InputError("dataset produced no patterns");
      GAParams ga = train_ga.params();
      if (!no_identity_seed) ga.seed_candidates = {RuleVector::uniform(RuleNumber(204), ds.width)};
      ga.validate();
      const int depth = train_depth > 0 ? train_depth : kUnlimitedDepth;

      std::vector<LabeledPattern> fit_set = ds.patterns, held_out;
      if (train_test_fraction > 0.0) std::tie(fit_set, held_out) = split(ds.patterns, train_test_fraction, train_ga.seed);

      const TrainingRun run = train_tree_traced(fit_set, ga, depth, ds.classes);
      const double train_acc = training_accuracy(run.tree, fit_set);

      const fs::path out(train_out);
      ensure_dir(out);
      save_model(run.tree, out / "model.json");
      atomic_write(out / "train_trace.csv", trace_csv(run.traces));
      json config = {{"manifest", manifest_to_json(manifest)},
                     {"ga", ga_json(train_ga)},
                     {"max_depth", train_depth},
                     {"test_fraction", train_test_fraction},
                     {"identity_seed", !no_identity_seed}};
      write_run_config(out, "train", config);

      std::cout << std::fixed << std::setprecision(6);
      std::cout << "patterns: " << fit_set.size() << " width: " << ds.width << " nodes: " << run.tree.nodes.size()
                << " depth: " << run.tree.depth() << "\n";
      std::cout << "training accuracy: " << train_acc << "\n";
      if (!held_out.empty()) {
        std::cout << "held-out accuracy: " << training_accuracy(run.tree, held_out) << " (" << held_out.size()
                  << " patterns)\n";
      }
      return 0;
    }

    if (*predict) {
      const MacaTree tree = load_model(predict_model);
      const Dataset ds = load_dataset(predict_data.load());
      check_width(tree, ds);
      std::string csv = "record_id,offset,predicted,truth\n";
      for (std::size_t i = 0; i < ds.patterns.size(); ++i) {
        csv += ds.origins[i].record_id + ',' + std::to_string(ds.origins[i].offset) + ',' +
               tree.classes[static_cast<std::size_t>(classify(tree, ds.patterns[i].bits))] + ',' +
               ds.classes[static_cast<std::size_t>(ds.patterns[i].label)] + '\n';
      }
      if (predict_out.empty()) {
        std::cout << csv;
      } else {
        ensure_dir(predict_out);
        atomic_write(fs::path(predict_out) / "predictions.csv", csv);
        write_run_config(predict_out, "predict", {{"model", predict_model}, {"manifest", predict_data.manifest}});
      }
      return 0;
    }

    if (*evaluate_cmd) {
      const MacaTree tree = load_model(eval_model);
      const Dataset ds = load_dataset(eval_data.load());
      check_width(tree, ds);
      const auto truth = names_of(ds, ds.patterns);
      const auto predicted = predict_names(tree, ds.patterns);
      const std::string report = report_to_json(evaluate(predicted, truth)).dump(2) + "\n";
      if (eval_out.empty()) {
        std::cout << report;
      } else {
        ensure_dir(eval_out);
        atomic_write(fs::path(eval_out) / "evaluation.json", report);
        write_run_config(eval_out, "evaluate", {{"model", eval_model}, {"manifest", eval_data.manifest}});
        std::cout << report;
      }
      return 0;
    }

    if (*basins) {
      const RuleVector rules =
          RuleVector::parse(basin_rules, basin_n > 0 ? std::optional<int>(basin_n) : std::nullopt);
      const auto table = enumerate_basins(rules, parse_boundary(basin_boundary));
      std::string csv = "attractor,basin_size,cycle_length\n";
      for (const auto& b : table) {
        csv += b.attractor.front().to_string() + ',' + std::to_string(b.size) + ',' +
               std::to_string(b.attractor.size()) + '\n';
      }
      if (basin_out.empty()) {
        std::cout << csv;
      } else {
        ensure_dir(basin_out);
        atomic_write(fs::path(basin_out) / "basins.csv", csv);
        write_run_config(basin_out, "basins",
                         {{"rules", rules.to_string()}, {"n", rules.size()}, {"boundary", basin_boundary}});
      }
      return 0;
    }

    if (*diagnose) {
      GAParams ga = diag_ga.params();
      ga.trace_steps = diag_steps;
      ga.validate();
      ensure_dir(diag_out);
      for (int n : diag_sizes) {
        if (n < 2 || n > kMaxWidth) throw CapacityError("diagnostic size " + std::to_string(n) + " outside [2, 64]");
        const auto patterns = prototype_patterns(n, diag_ga.seed);
        const EvolveResult result = evolve(patterns, ga);
        std::string csv = "generation,best_fitness,mean_fitness,entropy,mutual_information,critical_entropy\n";
        for (const auto& g : result.trace) {
          csv += std::to_string(g.generation) + ',' + csv_number(g.best_fitness) + ',' + csv_number(g.mean_fitness) +
                 ',' + csv_number(g.entropy) + ',' + csv_number(g.mutual_information) + ',' +
                 csv_number(kCriticalEntropy) + '\n';
        }
        atomic_write(fs::path(diag_out) / ("diagnose_n" + std::to_string(n) + ".csv"), csv);
        std::cout << "n=" << n << " generations=" << result.trace.size()
                  << " best_fitness=" << result.trace.back().best_fitness << "\n";
      }
      json config = {{"sizes", diag_sizes}, {"trace_steps", diag_steps}, {"ga", ga_json(diag_ga)}};
      write_run_config(diag_out, "diagnose", config);
      return 0;
    }

    if (*predict_ss) {
      const StructureCodeTable table = StructureCodeTable::parse(ps_table);
      const auto base = read_fasta_file(ps_base);
      const auto base_ss = read_fasta_file(ps_base_ss);
      const auto targets = read_fasta_file(ps_target);
      if (base.empty() || base_ss.empty()) throw InputError("base FASTA files must contain a record");
      std::vector<FastaRecord> predicted;
      std::string signal_csv = "record_id,position,value\n";
      for (const auto& t : targets) {
        const auto p = predict_structure(base.front().sequence, base_ss.front().sequence, t.sequence, ps_filter, table);
        predicted.push_back({t.id, "predicted", p.labels});
        for (Eigen::Index i = 0; i < p.output.size(); ++i) {
          signal_csv += t.id + ',' + std::to_string(i + 1) + ',' + csv_number(p.output(i)) + '\n';
        }
      }
      const std::string fasta = write_fasta(predicted);
      if (ps_out.empty()) {
        if (ps_dump) throw ParameterError("--dump-signal needs --out-dir");
        std::cout << fasta;
      } else {
        ensure_dir(ps_out);
        atomic_write(fs::path(ps_out) / "predicted_structure.fa", fasta);
        if (ps_dump) atomic_write(fs::path(ps_out) / "output_signal.csv", signal_csv);
        write_run_config(ps_out, "predict-structure",
                         {{"base_fasta", ps_base},
                          {"base_structure", ps_base_ss},
                          {"target_fasta", ps_target},
                          {"filter_length", ps_filter},
                          {"code_table", ps_table}});
      }
      return 0;
    }

    if (*encode) {
      const auto records = read_fasta_file(enc_fasta);
      std::string csv = "record_id,offset,bits\n";
      for (const auto& r : records) {
        std::vector<CAState> windows;
        if (enc_task == "structure") {
          const auto codes = signal_quantize(hydrophobicity_encode(r.sequence), enc_bits, -4.5, 4.5);
          if (enc_window < 1 || enc_stride < 1) throw ParameterError("window and stride must be >= 1");
          if (codes.size() < static_cast<std::size_t>(enc_window)) {
            throw InputError("record '" + r.id + "' is shorter than the window");
          }
          for (std::size_t k = 0; k < window_count(codes.size(), enc_window, enc_stride); ++k) {
            windows.push_back(pack_codes(std::span(codes).subspan(k * static_cast<std::size_t>(enc_stride),
                                                                   static_cast<std::size_t>(enc_window)),
                                         enc_bits));
          }
        } else {
          windows = dna_encode(r.sequence, enc_window, enc_stride);
        }
        for (std::size_t k = 0; k < windows.size(); ++k) {
          csv += r.id + ',' + std::to_string(k * static_cast<std::size_t>(enc_stride)) + ',' + windows[k].to_string() + '\n';
        }
      }
      if (enc_out.empty()) {
        std::cout << csv;
      } else {
        ensure_dir(enc_out);
        atomic_write(fs::path(enc_out) / "encoded.csv", csv);
        write_run_config(enc_out, "encode",
                         {{"fasta", enc_fasta},
                          {"task", enc_task},
                          {"window", enc_window},
                          {"stride", enc_stride},
                          {"bits_per_value", enc_bits}});
      }
      return 0;
    }
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace maca::cli
