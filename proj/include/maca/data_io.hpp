#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "maca/classifier.hpp"
#include "maca/distribution.hpp"

namespace maca {

// ---------------------------------------------------------------- FASTA

struct FastaRecord {
  std::string id;
  std::string description;
  std::string sequence;

  friend bool operator==(const FastaRecord&, const FastaRecord&) = default;
};

// Sequence lines are concatenated, stripped of whitespace and uppercased.
std::vector<FastaRecord> parse_fasta(std::istream& in);
std::vector<FastaRecord> parse_fasta(std::string_view text);
std::vector<FastaRecord> read_fasta_file(const std::filesystem::path& path);

inline constexpr std::size_t kFastaLineWidth = 60;
std::string write_fasta(std::span<const FastaRecord> records);

// ------------------------------------------------------- annotations

// One line of the sidecar: record_id <TAB> start <TAB> end <TAB> label,
// 1-based inclusive coordinates. Blank lines and '#' comments are skipped.
struct Annotation {
  std::string record_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

std::vector<Annotation> parse_annotations(std::istream& in);
std::string write_annotations(std::span<const Annotation> annotations);

// ----------------------------------------------------------- datasets

enum class Task { coding_region, promoter, structure };

std::string_view to_string(Task task);
Task parse_task(std::string_view text);

struct DatasetManifest {
  std::string name = "custom";  // ENCODE, BG570, HMR195, FickettTong, ASP67 or custom
  Task task = Task::promoter;
  std::filesystem::path fasta;
  std::filesystem::path annotations;
  std::string label_format = "interval-tsv";
  int window = 12;
  int stride = 1;
  int bits_per_value = 2;  // structure task: quantizer resolution per residue
  std::string background_label = "other";

  void validate() const;
};

// Manifest is a JSON object; relative paths resolve against the manifest's directory.
DatasetManifest read_manifest(const std::filesystem::path& path);
nlohmann::json manifest_to_json(const DatasetManifest& manifest);

struct PatternOrigin {
  std::string record_id;
  std::size_t offset = 0;  // 0-based start of the window
};

struct Dataset {
  int width = 0;
  std::vector<std::string> classes;  // first-seen order
  std::vector<LabeledPattern> patterns;
  std::vector<PatternOrigin> origins;
};

Dataset load_dataset(const DatasetManifest& manifest);

// Seeded shuffle then split; stratified when every class has at least two members.
std::pair<std::vector<LabeledPattern>, std::vector<LabeledPattern>> split(
    std::span<const LabeledPattern> patterns, double test_fraction, std::uint64_t seed);

// --------------------------------------------------------- evaluation

struct EvaluationReport {
  std::vector<std::string> classes;  // truth first-seen order, then predicted-only labels
  std::vector<std::vector<std::size_t>> confusion;  // [truth][predicted]
  std::vector<double> precision;
  std::vector<double> recall;
  double accuracy = 0.0;
  std::size_t total = 0;
};

EvaluationReport evaluate(std::span<const std::string> predicted, std::span<const std::string> truth);
nlohmann::json report_to_json(const EvaluationReport& report);

// ------------------------------------------------------------- models

inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const MacaTree& tree);
MacaTree parse_model(std::string_view text);
void save_model(const MacaTree& tree, const std::filesystem::path& path);
MacaTree load_model(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames over the destination.
void atomic_write(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace maca
