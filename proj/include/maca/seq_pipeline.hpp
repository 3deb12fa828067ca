#pragma once

// Sequence <-> signal <-> bit-pattern transforms and the convolution based
// structure predictor: the filter F fitted on a base protein by least squares
// is convolved with a target's hydrophobicity profile and decoded by bands.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maca/ca_core.hpp"
#include "maca/errors.hpp"

namespace maca {

template <typename Scalar>
using SignalT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Signal = SignalT<double>;

// Numeric codes for helix / strand / coil and the decoding bands around them.
// Helix band is closed; strand band is half-open on top so the coil code
// decodes back to coil.
struct StructureCodeTable {
  double helix;
  double strand;
  double coil;
  double helix_lo, helix_hi;    // [helix_lo, helix_hi]
  double strand_lo, strand_hi;  // [strand_lo, strand_hi)

  static StructureCodeTable standard();   // 200 / 600 / 800
  static StructureCodeTable alternate();  // 300 / 700 / 900
  static StructureCodeTable parse(std::string_view name);
  std::string name() const;
};

// before the bands are consulted.
// before the bands are consulted, so rounding never pushes a code across a band edge.
inline constexpr double kCodeSnapTolerance = 1e-6;

double kyte_doolittle(char residue);
bool is_amino_acid(char residue);

Signal hydrophobicity_encode(std::string_view protein);
Signal structure_encode(std::string_view structure,
                        const StructureCodeTable& table = StructureCodeTable::standard());
std::string threshold_decode(const Signal& signal,
                             const StructureCodeTable& table = StructureCodeTable::standard());

// Full linear convolution, length input + taps - 1.
template <typename Scalar>
SignalT<Scalar> convolve(const SignalT<Scalar>& input, const SignalT<Scalar>& taps) {
  if (input.size() == 0 || taps.size() == 0) throw ParameterError("convolution of an empty operand");
  SignalT<Scalar> out = SignalT<Scalar>::Zero(input.size() + taps.size() - 1);
  for (Eigen::Index j = 0; j < taps.size(); ++j) {
    out.segment(j, input.size()) += taps(j) * input;
  }
  return out;
}

// Toeplitz matrix A with (A * taps) == convolve(input, taps) for `filter_length` taps.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> convolution_matrix(
    const SignalT<Scalar>& input, Eigen::Index filter_length) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(input.size() + filter_length - 1,
                                                                  filter_length);
  for (Eigen::Index j = 0; j < filter_length; ++j) a.col(j).segment(j, input.size()) = input;
  return a;
}

inline constexpr double kDeconvolutionRidge = 1e-9;

// Least-squares filter F minimizing |convolve(input, F) - output|. The output
// is zero-padded or truncated to input + filter_length - 1 samples.
template <typename Scalar>
SignalT<Scalar> deconvolve(const SignalT<Scalar>& output, const SignalT<Scalar>& input,
                           Eigen::Index filter_length) {
  if (input.size() < 1) throw ParameterError("deconvolution needs a non-empty input signal");
  if (filter_length < 1) throw ParameterError("filter length must be >= 1");
  if ((input.array() == Scalar(0)).all()) {
    throw DegenerateSystemError("input signal is identically zero");
  }
  const Eigen::Index rows = input.size() + filter_length - 1;
  SignalT<Scalar> target = SignalT<Scalar>::Zero(rows);
  const Eigen::Index keep = std::min(rows, output.size());
  target.head(keep) = output.head(keep);

  const auto a = convolution_matrix(input, filter_length);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> normal = a.transpose() * a;
  normal.diagonal().array() += Scalar(kDeconvolutionRidge);
  return normal.ldlt().solve(a.transpose() * target);
}

// Predicts H/E/C labels for `target` from a base protein with known structure.
struct StructurePrediction {
  std::string labels;
  Signal output;  // O_t before decoding, truncated to the target length
  Signal filter;
};

StructurePrediction predict_structure(std::string_view base_protein, std::string_view base_structure,
                                      std::string_view target_protein, int filter_length = 5,
                                      const StructureCodeTable& table = StructureCodeTable::standard());

// 2-bit base code A=00 C=01 G=10 T=11 over sliding windows; width 2w.
CAState encode_bases(std::string_view bases);
std::vector<CAState> dna_encode(std::string_view bases, int window, int stride);
inline std::size_t window_count(std::size_t length, int window, int stride) {
  return length < static_cast<std::size_t>(window)
             ? 0
             : (length - static_cast<std::size_t>(window)) / static_cast<std::size_t>(stride) + 1;
}

// Uniform quantizer: clamp to [lo, hi], level floor((v - lo) / (hi - lo) * 2^b)
// capped at 2^b - 1.
std::vector<std::uint32_t> signal_quantize(const Signal& signal, int bits_per_value, double lo,
                                           double hi);

// Concatenates b-bit codes into one pattern, first code in the leading cells.
CAState pack_codes(std::span<const std::uint32_t> codes, int bits_per_value);

}  // namespace maca
