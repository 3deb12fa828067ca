#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "maca/data_io.hpp"
#include "maca/errors.hpp"
#include "maca/rng.hpp"
#include "maca/seq_pipeline.hpp"

namespace maca {

namespace {

constexpr std::array<std::string_view, 6> kDatasetNames{"ENCODE", "BG570",  "HMR195",
                                                        "FickettTong", "ASP67", "custom"};

// Kyte-Doolittle scale bounds.
constexpr double kHydropathyLo = -4.5;
constexpr double kHydropathyHi = 4.5;

// Most frequent label over [begin, end); ties go to the label appearing first.
const std::string& window_majority(const std::vector<const std::string*>& labels, std::size_t begin,
                                   std::size_t end) {
  std::vector<std::pair<const std::string*, std::size_t>> counts;
  for (std::size_t i = begin; i < end; ++i) {
    auto it = std::find_if(counts.begin(), counts.end(),
                           [&](const auto& c) { return *c.first == *labels[i]; });
    if (it == counts.end()) {
      counts.emplace_back(labels[i], 1);
    } else {
      ++it->second;
    }
  }
  auto best = counts.front();
  for (const auto& c : counts) {
    if (c.second > best.second) best = c;
  }
  return *best.first;
}

}  // namespace

std::string_view to_string(Task task) {
  switch (task) {
    case Task::coding_region: return "coding_region";
    case Task::promoter: return "promoter";
    case Task::structure: return "structure";
  }
  return "promoter";
}

Task parse_task(std::string_view text) {
  if (text == "coding_region") return Task::coding_region;
  if (text == "promoter") return Task::promoter;
  if (text == "structure") return Task::structure;
  throw FormatError("unknown task '" + std::string(text) + "'");
}

void DatasetManifest::validate() const {
  if (std::find(kDatasetNames.begin(), kDatasetNames.end(), name) == kDatasetNames.end()) {
    throw FormatError("unknown dataset name '" + name + "'");
  }
  if (label_format != "interval-tsv") {
    throw FormatError("unsupported label format '" + label_format + "'");
  }
  if (window < 1) throw ParameterError("window must be >= 1");
  if (stride < 1) throw ParameterError("stride must be >= 1");
  if (task == Task::structure) {
    if (bits_per_value < 1 || bits_per_value > 16) {
      throw ParameterError("bits per value must be in [1, 16]");
    }
    if (window * bits_per_value > kMaxWidth) {
      throw CapacityError("structure window of " + std::to_string(window) + " residues at " +
                          std::to_string(bits_per_value) + " bits exceeds 64 cells");
    }
  } else if (2 * window > kMaxWidth) {
    throw CapacityError("window of " + std::to_string(window) + " bases exceeds 32");
  }
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open manifest " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  DatasetManifest m;
  const auto base = path.parent_path();
  try {
    m.name = doc.value("name", m.name);
    m.task = parse_task(doc.at("task").get<std::string>());
    m.fasta = base / doc.at("fasta").get<std::string>();
    m.annotations = base / doc.at("annotations").get<std::string>();
    m.label_format = doc.value("label_format", m.label_format);
    m.window = doc.value("window", m.window);
    m.stride = doc.value("stride", m.stride);
    m.bits_per_value = doc.value("bits_per_value", m.bits_per_value);
    m.background_label = doc.value("background_label", m.background_label);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest " + path.string() + ": " + e.what());
  }
  m.validate();
  return m;
}

nlohmann::json manifest_to_json(const DatasetManifest& m) {
  return {{"name", m.name},
          {"task", std::string(to_string(m.task))},
          {"fasta", m.fasta.string()},
          {"annotations", m.annotations.string()},
          {"label_format", m.label_format},
          {"window", m.window},
          {"stride", m.stride},
          {"bits_per_value", m.bits_per_value},
          {"background_label", m.background_label}};
}

Dataset load_dataset(const DatasetManifest& manifest) {
  manifest.validate();
  for (const auto* p : {&manifest.fasta, &manifest.annotations}) {
    if (!std::filesystem::exists(*p)) throw LoadError("missing dataset file " + p->string());
  }
  const auto records = read_fasta_file(manifest.fasta);
  std::ifstream ann_in(manifest.annotations);
  if (!ann_in) throw LoadError("cannot open annotation file " + manifest.annotations.string());
  const auto annotations = parse_annotations(ann_in);

  std::map<std::string, std::size_t> by_id;
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (!by_id.emplace(records[r].id, r).second) {
      throw FormatError("duplicate FASTA id '" + records[r].id + "'");
    }
  }
  std::vector<std::vector<const std::string*>> position_labels(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    position_labels[r].assign(records[r].sequence.size(), &manifest.background_label);
  }
  for (const auto& a : annotations) {
    auto it = by_id.find(a.record_id);
    if (it == by_id.end()) throw FormatError("annotation for unknown record '" + a.record_id + "'");
    auto& labels = position_labels[it->second];
    if (a.end > labels.size()) {
      throw FormatError("annotation " + a.record_id + ":" + std::to_string(a.start) + "-" +
                        std::to_string(a.end) + " exceeds the record length " +
                        std::to_string(labels.size()));
    }
    if (manifest.task == Task::structure && a.label != "H" && a.label != "E" && a.label != "C") {
      throw FormatError("structure annotations must be H, E or C, got '" + a.label + "'");
    }
    for (std::size_t p = a.start - 1; p < a.end; ++p) labels[p] = &a.label;
  }

  Dataset out;
  auto class_index = [&](const std::string& label) {
    auto it = std::find(out.classes.begin(), out.classes.end(), label);
    if (it != out.classes.end()) return static_cast<int>(it - out.classes.begin());
    out.classes.push_back(label);
    return static_cast<int>(out.classes.size() - 1);
  };

  const auto w = static_cast<std::size_t>(manifest.window);
  const auto stride = static_cast<std::size_t>(manifest.stride);
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& seq = records[r].sequence;
    if (seq.size() < w) {
      throw InputError("record '" + records[r].id + "' is shorter than the window");
    }
    std::vector<CAState> windows;
    if (manifest.task == Task::structure) {
      Signal profile;
      try {
        profile = hydrophobicity_encode(seq);
      } catch (const InputError& e) {
        throw InputError("record '" + records[r].id + "': " + e.what());
      }
      const auto codes =
          signal_quantize(profile, manifest.bits_per_value, kHydropathyLo, kHydropathyHi);
      for (std::size_t k = 0; k < window_count(seq.size(), manifest.window, manifest.stride); ++k) {
        windows.push_back(pack_codes(std::span(codes).subspan(k * stride, w), manifest.bits_per_value));
      }
    } else {
      try {
        windows = dna_encode(seq, manifest.window, manifest.stride);
      } catch (const InputError& e) {
        throw InputError("record '" + records[r].id + "': " + e.what());
      }
    }
    for (std::size_t k = 0; k < windows.size(); ++k) {
      const std::size_t begin = k * stride;
      const int label = class_index(window_majority(position_labels[r], begin, begin + w));
      out.patterns.push_back({windows[k], label});
      out.origins.push_back({records[r].id, begin});
    }
  }
  out.width = out.patterns.empty() ? 0 : out.patterns.front().bits.width();
  return out;
}

std::pair<std::vector<LabeledPattern>, std::vector<LabeledPattern>> split(
    std::span<const LabeledPattern> patterns, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ParameterError("test fraction must be in (0, 1)");
  }
  Rng rng(seed);
  std::vector<std::size_t> order(patterns.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  const auto total_test =
      static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(patterns.size())));

  // Class buckets in first-seen (shuffled) order.
  std::vector<int> labels;
  std::vector<std::vector<std::size_t>> buckets;
  for (std::size_t i : order) {
    auto it = std::find(labels.begin(), labels.end(), patterns[i].label);
    if (it == labels.end()) {
      labels.push_back(patterns[i].label);
      buckets.push_back({i});
    } else {
      buckets[static_cast<std::size_t>(it - labels.begin())].push_back(i);
    }
  }
  const bool stratify = std::all_of(buckets.begin(), buckets.end(),
                                    [](const auto& b) { return b.size() >= 2; });

  std::vector<bool> in_test(patterns.size(), false);
  if (stratify) {
    // Largest-remainder allocation of the test quota across classes.
    std::vector<std::size_t> quota(buckets.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < buckets.size(); ++c) {
      const double exact = test_fraction * static_cast<double>(buckets[c].size());
      quota[c] = static_cast<std::size_t>(std::floor(exact));
      assigned += quota[c];
      remainders.emplace_back(exact - std::floor(exact), c);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < total_test && k < remainders.size(); ++k, ++assigned) {
      ++quota[remainders[k].second];
    }
    for (std::size_t c = 0; c < buckets.size(); ++c) {
      for (std::size_t k = 0; k < quota[c]; ++k) in_test[buckets[c][k]] = true;
    }
  } else {
    for (std::size_t k = 0; k < total_test; ++k) in_test[order[k]] = true;
  }

  std::pair<std::vector<LabeledPattern>, std::vector<LabeledPattern>> out;
  for (std::size_t i : order) (in_test[i] ? out.second : out.first).push_back(patterns[i]);
  return out;
}

EvaluationReport evaluate(std::span<const std::string> predicted, std::span<const std::string> truth) {
  if (predicted.size() != truth.size()) {
    throw DimensionError("prediction count " + std::to_string(predicted.size()) +
                         " differs from truth count " + std::to_string(truth.size()));
  }
  if (truth.empty()) throw InputError("cannot evaluate an empty label set");
  EvaluationReport r;
  auto index_of = [&](const std::string& label) {
    auto it = std::find(r.classes.begin(), r.classes.end(), label);
    if (it != r.classes.end()) return static_cast<std::size_t>(it - r.classes.begin());
    r.classes.push_back(label);
    return r.classes.size() - 1;
  };
  for (const auto& t : truth) index_of(t);
  for (const auto& p : predicted) index_of(p);
  const std::size_t k = r.classes.size();
  r.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) ++r.confusion[index_of(truth[i])][index_of(predicted[i])];

  std::size_t correct = 0;
  r.precision.assign(k, 0.0);
  r.recall.assign(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    correct += r.confusion[c][c];
    std::size_t row = 0, col = 0;
    for (std::size_t o = 0; o < k; ++o) {
      row += r.confusion[c][o];
      col += r.confusion[o][c];
    }
    if (col) r.precision[c] = static_cast<double>(r.confusion[c][c]) / static_cast<double>(col);
    if (row) r.recall[c] = static_cast<double>(r.confusion[c][c]) / static_cast<double>(row);
  }
  r.total = truth.size();
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.total);
  return r;
}

nlohmann::json report_to_json(const EvaluationReport& r) {
  nlohmann::json per_class = nlohmann::json::array();
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    std::size_t support = 0;
    for (std::size_t v : r.confusion[c]) support += v;
    per_class.push_back({{"class", r.classes[c]},
                         {"precision", r.precision[c]},
                         {"recall", r.recall[c]},
                         {"support", support}});
  }
  return {{"accuracy", r.accuracy},
          {"total", r.total},
          {"classes", r.classes},
          {"confusion_matrix", r.confusion},
          {"per_class", per_class}};
}

}  // namespace maca
