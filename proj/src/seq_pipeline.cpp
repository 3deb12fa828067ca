#include "maca/seq_pipeline.hpp"

#include <array>
#include <span>

namespace maca {

namespace {

// Kyte & Doolittle (1982) hydropathy index.
constexpr std::array<std::pair<char, double>, 20> kKyteDoolittle{{
    {'A', 1.8},  {'R', -4.5}, {'N', -3.5}, {'D', -3.5}, {'C', 2.5},
    {'Q', -3.5}, {'E', -3.5}, {'G', -0.4}, {'H', -3.2}, {'I', 4.5},
    {'L', 3.8},  {'K', -3.9}, {'M', 1.9},  {'F', 2.8},  {'P', -1.6},
    {'S', -0.8}, {'T', -0.7}, {'W', -0.9}, {'Y', -1.3}, {'V', 4.2},
}};

const double* lookup(char residue) {
  for (const auto& [code, value] : kKyteDoolittle) {
    if (code == residue) return &value;
  }
  return nullptr;
}

std::string describe(char c) {
  if (c >= 0x20 && c < 0x7f) return std::string("'") + c + "'";
  return "byte " + std::to_string(static_cast<unsigned char>(c));
}

}  // namespace

StructureCodeTable StructureCodeTable::standard() { return {200, 600, 800, 0, 200, 600, 800}; }
StructureCodeTable StructureCodeTable::alternate() { return {300, 700, 900, 100, 300, 700, 900}; }

StructureCodeTable StructureCodeTable::parse(std::string_view name) {
  if (name == "200-600-800") return standard();
  if (name == "300-700-900") return alternate();
  throw ParameterError("unknown code table '" + std::string(name) + "'");
}

std::string StructureCodeTable::name() const {
  return std::to_string(static_cast<int>(helix)) + "-" + std::to_string(static_cast<int>(strand)) +
         "-" + std::to_string(static_cast<int>(coil));
}

bool is_amino_acid(char residue) { return lookup(residue) != nullptr; }

double kyte_doolittle(char residue) {
  const double* value = lookup(residue);
  if (!value) throw InputError("invalid amino acid " + describe(residue));
  return *value;
}

Signal hydrophobicity_encode(std::string_view protein) {
  Signal out(static_cast<Eigen::Index>(protein.size()));
  for (std::size_t i = 0; i < protein.size(); ++i) {
    const double* value = lookup(protein[i]);
    if (!value) {
      throw InputError("invalid amino acid " + describe(protein[i]) + " at position " +
                       std::to_string(i + 1));
    }
    out(static_cast<Eigen::Index>(i)) = *value;
  }
  return out;
}

Signal structure_encode(std::string_view structure, const StructureCodeTable& table) {
  Signal out(static_cast<Eigen::Index>(structure.size()));
  for (std::size_t i = 0; i < structure.size(); ++i) {
    double value;
    switch (structure[i]) {
      case 'H': value = table.helix; break;
      case 'E': value = table.strand; break;
      case 'C': value = table.coil; break;
      default:
        throw InputError("invalid structure label " + describe(structure[i]) + " at position " +
                         std::to_string(i + 1));
    }
    out(static_cast<Eigen::Index>(i)) = value;
  }
  return out;
}

std::string threshold_decode(const Signal& signal, const StructureCodeTable& table) {
  std::string out(static_cast<std::size_t>(signal.size()), 'C');
  for (Eigen::Index i = 0; i < signal.size(); ++i) {
    const double v = signal(i);
    const auto near = [&](double code) { return std::abs(v - code) <= kCodeSnapTolerance * std::abs(code); };
    if (near(table.coil)) continue;
    if (near(table.helix)) {
      out[static_cast<std::size_t>(i)] = 'H';
    } else if (near(table.strand)) {
      out[static_cast<std::size_t>(i)] = 'E';
    } else if (v >= table.helix_lo && v <= table.helix_hi) {
      out[static_cast<std::size_t>(i)] = 'H';
    } else if (v >= table.strand_lo && v < table.strand_hi) {
      out[static_cast<std::size_t>(i)] = 'E';
    }
  }
  return out;
}

StructurePrediction predict_structure(std::string_view base_protein, std::string_view base_structure,
                                      std::string_view target_protein, int filter_length,
                                      const StructureCodeTable& table) {
  if (base_protein.size() != base_structure.size()) {
    throw InputError("base protein has " + std::to_string(base_protein.size()) +
                     " residues but its structure has " + std::to_string(base_structure.size()) +
                     " labels");
  }
  if (base_protein.empty()) throw InputError("base protein is empty");
  if (target_protein.empty()) throw InputError("target protein is empty");
  if (filter_length < 1) throw ParameterError("filter length must be >= 1");

  const Signal ib = hydrophobicity_encode(base_protein);
  const Signal ob = structure_encode(base_structure, table);
  StructurePrediction out;
  out.filter = deconvolve(ob, ib, filter_length);
  const Signal it = hydrophobicity_encode(target_protein);
  out.output = convolve(it, out.filter).head(it.size());
  out.labels = threshold_decode(out.output, table);
  return out;
}

CAState encode_bases(std::string_view bases) {
  if (bases.empty()) throw InputError("empty nucleotide window");
  if (bases.size() > kMaxWidth / 2) {
    throw CapacityError("window of " + std::to_string(bases.size()) +
                        " bases exceeds the 32-base (64-cell) limit");
  }
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    std::uint64_t code;
    switch (bases[i]) {
      case 'A': code = 0; break;
      case 'C': code = 1; break;
      case 'G': code = 2; break;
      case 'T': code = 3; break;
      default:
        throw InputError("invalid nucleotide " + describe(bases[i]) + " at position " +
                         std::to_string(i + 1));
    }
    word = (word << 2) | code;
  }
  return CAState(word, static_cast<int>(2 * bases.size()));
}

std::vector<CAState> dna_encode(std::string_view bases, int window, int stride) {
  if (window < 1) throw ParameterError("window must be >= 1");
  if (stride < 1) throw ParameterError("stride must be >= 1");
  if (bases.size() < static_cast<std::size_t>(window)) {
    throw InputError("sequence of length " + std::to_string(bases.size()) +
                     " is shorter than the window " + std::to_string(window));
  }
  std::vector<CAState> out;
  const std::size_t count = window_count(bases.size(), window, stride);
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(encode_bases(bases.substr(k * static_cast<std::size_t>(stride),
                                            static_cast<std::size_t>(window))));
  }
  return out;
}

std::vector<std::uint32_t> signal_quantize(const Signal& signal, int bits_per_value, double lo,
                                           double hi) {
  if (bits_per_value < 1 || bits_per_value > 16) {
    throw ParameterError("bits per value must be in [1, 16]");
  }
  if (!(lo < hi)) throw ParameterError("quantizer needs lo < hi");
  const double levels = std::ldexp(1.0, bits_per_value);
  const auto top = static_cast<std::uint32_t>(levels) - 1;
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(signal.size()));
  for (Eigen::Index i = 0; i < signal.size(); ++i) {
    const double v = std::clamp(signal(i), lo, hi);
    const double level = std::floor((v - lo) / (hi - lo) * levels);
    out.push_back(std::min(static_cast<std::uint32_t>(level), top));
  }
  return out;
}

CAState pack_codes(std::span<const std::uint32_t> codes, int bits_per_value) {
  const std::size_t width = codes.size() * static_cast<std::size_t>(bits_per_value);
  if (width == 0) throw ParameterError("cannot pack an empty code list");
  if (width > kMaxWidth) throw CapacityError("packed pattern exceeds 64 cells");
  std::uint64_t word = 0;
  for (std::uint32_t code : codes) {
    word = (word << bits_per_value) | (code & ((1U << bits_per_value) - 1));
  }
  return CAState(word, static_cast<int>(width));
}

}  // namespace maca
