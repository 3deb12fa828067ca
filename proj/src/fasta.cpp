#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "maca/data_io.hpp"
#include "maca/errors.hpp"

namespace maca {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<FastaRecord> parse_fasta(std::istream& in) {
  std::vector<FastaRecord> records;
  std::string line;
  std::size_t line_no = 0;
  std::size_t header_line = 0;
  auto close_record = [&] {
    if (!records.empty() && records.back().sequence.empty()) {
      throw FormatError("FASTA record '" + records.back().id + "' (line " +
                        std::to_string(header_line) + ") has no sequence");
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.front() == '>') {
      close_record();
      std::string_view header = trim(std::string_view(line).substr(1));
      const auto space = header.find_first_of(" \t");
      FastaRecord record;
      record.id = std::string(header.substr(0, space));
      if (space != std::string_view::npos) record.description = std::string(trim(header.substr(space)));
      if (record.id.empty()) {
        throw FormatError("FASTA header without an id at line " + std::to_string(line_no));
      }
      records.push_back(std::move(record));
      header_line = line_no;
      continue;
    }
    std::string residues;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        residues += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      }
    }
    if (residues.empty()) continue;
    if (records.empty()) {
      throw FormatError("sequence data before the first FASTA header at line " +
                        std::to_string(line_no));
    }
    records.back().sequence += residues;
  }
  close_record();
  return records;
}

std::vector<FastaRecord> parse_fasta(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_fasta(in);
}

std::vector<FastaRecord> read_fasta_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open FASTA file " + path.string());
  return parse_fasta(in);
}

std::string write_fasta(std::span<const FastaRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += '>';
    out += r.id;
    if (!r.description.empty()) {
      out += ' ';
      out += r.description;
    }
    out += '\n';
    for (std::size_t pos = 0; pos < r.sequence.size(); pos += kFastaLineWidth) {
      out += r.sequence.substr(pos, kFastaLineWidth);
      out += '\n';
    }
  }
  return out;
}

std::vector<Annotation> parse_annotations(std::istream& in) {
  std::vector<Annotation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const auto tab = view.find('\t', pos);
      fields.emplace_back(trim(view.substr(pos, tab == std::string_view::npos ? view.npos : tab - pos)));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    const std::string where = "annotation line " + std::to_string(line_no);
    if (fields.size() != 4) throw FormatError(where + ": expected 4 tab-separated fields");
    Annotation a;
    a.record_id = fields[0];
    try {
      std::size_t used = 0;
      const long long start = std::stoll(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument("start");
      const long long end = std::stoll(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("end");
      if (start < 1 || end < start) throw std::out_of_range("interval");
      a.start = static_cast<std::size_t>(start);
      a.end = static_cast<std::size_t>(end);
    } catch (const std::exception&) {
      throw FormatError(where + ": start/end must be integers with 1 <= start <= end");
    }
    a.label = fields[3];
    if (a.record_id.empty() || a.label.empty()) throw FormatError(where + ": empty id or label");
    out.push_back(std::move(a));
  }
  return out;
}

std::string write_annotations(std::span<const Annotation> annotations) {
  std::string out;
  for (const auto& a : annotations) {
    out += a.record_id + '\t' + std::to_string(a.start) + '\t' + std::to_string(a.end) + '\t' +
           a.label + '\n';
  }
  return out;
}

}  // namespace maca
