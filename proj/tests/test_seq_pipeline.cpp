#include <gtest/gtest.h>

#include "maca/errors.hpp"
#include "maca/rng.hpp"
#include "maca/seq_pipeline.hpp"
#include "oracles.hpp"

using namespace maca;

namespace {

Signal sig(std::initializer_list<double> v) {
  Signal s(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) s(i++) = x;
  return s;
}

Signal random_signal(Rng& rng, Eigen::Index n) {
  Signal s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = 2.0 * rng.uniform() - 1.0;
  return s;
}

std::vector<double> to_vec(const Signal& s) { return {s.data(), s.data() + s.size()}; }

std::string random_structure(Rng& rng, std::size_t length) {
  std::string s;
  for (std::size_t i = 0; i < length; ++i) s += "HEC"[rng.below(3)];
  return s;
}

}  // namespace

TEST(Hydrophobicity, Examples) {
  EXPECT_EQ(hydrophobicity_encode("").size(), 0);
  EXPECT_EQ(hydrophobicity_encode("I"), sig({4.5}));
  EXPECT_EQ(hydrophobicity_encode("GG"), sig({-0.4, -0.4}));
  EXPECT_EQ(hydrophobicity_encode("RK"), sig({-4.5, -3.9}));
}

TEST(Hydrophobicity, InvalidResidueNamesPosition) {
  try {
    hydrophobicity_encode("ACXD");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("position 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(hydrophobicity_encode("AC D"), InputError);
}

TEST(StructureCodec, Examples) {
  EXPECT_EQ(structure_encode("H"), sig({200}));
  EXPECT_EQ(structure_encode("E"), sig({600}));
  EXPECT_EQ(structure_encode("C"), sig({800}));
  EXPECT_EQ(structure_encode("").size(), 0);
  EXPECT_THROW(structure_encode("HXC"), InputError);
  EXPECT_EQ(threshold_decode(sig({100})), "H");
  EXPECT_EQ(threshold_decode(sig({700})), "E");
  EXPECT_EQ(threshold_decode(sig({400, -5, 900})), "CCC");
}

TEST(StructureCodec, BandEdges) {
  EXPECT_EQ(threshold_decode(sig({0, 200, 200.001, 599.999, 600, 799.999, 800})), "HHCCEEC");
  const auto alt = StructureCodeTable::alternate();
  EXPECT_EQ(threshold_decode(sig({99, 100, 300, 700, 899, 900}), alt), "CHHEEC");
}

TEST(StructureCodec, RoundTripBothTables) {
  Rng rng(42);
  for (const auto& table : {StructureCodeTable::standard(), StructureCodeTable::alternate()}) {
    for (int t = 0; t < 1000; ++t) {
      const auto s = random_structure(rng, rng.below(80));
      EXPECT_EQ(threshold_decode(structure_encode(s, table), table), s);
    }
  }
}

TEST(StructureCodec, TableParsing) {
  EXPECT_EQ(StructureCodeTable::parse("200-600-800").helix, 200);
  EXPECT_EQ(StructureCodeTable::parse("300-700-900").coil, 900);
  EXPECT_EQ(StructureCodeTable::alternate().name(), "300-700-900");
  EXPECT_THROW(StructureCodeTable::parse("1-2-3"), ParameterError);
}

TEST(Convolve, Examples) {
  EXPECT_EQ(convolve(sig({1, 2}), sig({1, 1})), sig({1, 3, 2}));
  const Signal x = sig({0.5, -2, 3, 7});
  EXPECT_EQ(convolve(x, sig({1})), x);
  EXPECT_TRUE(convolve(Signal(Signal::Zero(5)), sig({1, 2, 3})).isZero(0));
  EXPECT_EQ(convolve(x, sig({1, 2, 3})).size(), 6);
  EXPECT_THROW(convolve(Signal(), sig({1})), ParameterError);
  EXPECT_THROW(convolve(sig({1}), Signal()), ParameterError);
}

TEST(Convolve, Linearity) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto n = 1 + static_cast<Eigen::Index>(rng.below(20));
    const Signal x = random_signal(rng, n), y = random_signal(rng, n);
    const Signal f = random_signal(rng, 1 + static_cast<Eigen::Index>(rng.below(8)));
    const double a = 4.0 * rng.uniform() - 2.0;
    const Signal lhs = convolve(Signal(a * x + y), f);
    const Signal rhs = a * convolve(x, f) + convolve(y, f);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Convolve, MatchesToeplitzProduct) {
  Rng rng(4);
  const Signal x = random_signal(rng, 9), f = random_signal(rng, 4);
  EXPECT_LE((convolution_matrix(x, 4) * f - convolve(x, f)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Convolve, FloatScalar) {
  using SignalF = SignalT<float>;
  SignalF a(2), b(2);
  a << 1.f, 2.f;
  b << 1.f, 1.f;
  const SignalF c = convolve(a, b);
  EXPECT_FLOAT_EQ(c(1), 3.f);
}

TEST(Deconvolve, ImpulseInputRecoversOutput) {
  const Signal ob = sig({3, -1, 4, 1, 5});
  Signal ib = Signal::Zero(3);
  ib(0) = 1;
  const Signal f = deconvolve(ob, ib, ob.size());
  EXPECT_LE((f - ob).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Deconvolve, RoundTripWellConditioned) {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    Signal ib = random_signal(rng, 5 + static_cast<Eigen::Index>(rng.below(40)));
    ib(0) = (rng.bernoulli(0.5) ? 1.0 : -1.0) * (1.0 + rng.uniform());
    const auto m = 1 + static_cast<Eigen::Index>(rng.below(8));
    const Signal f0 = random_signal(rng, m);
    const Signal f = deconvolve(convolve(ib, f0), ib, m);
    EXPECT_LE((f - f0).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Deconvolve, InconsistentSystemMatchesQrOracle) {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const auto n = 4 + static_cast<Eigen::Index>(rng.below(30));
    Signal ib = random_signal(rng, n);
    ib(0) = 1.0 + rng.uniform();
    const auto m = 1 + static_cast<Eigen::Index>(rng.below(8));
    const Signal ob = random_signal(rng, n + m - 1);
    const Signal f = deconvolve(ob, ib, m);

    const auto a = oracle::toeplitz(to_vec(ib), static_cast<std::size_t>(m));
    const auto want = oracle::least_squares(a, to_vec(ob));
    const auto r_lib = oracle::residual(a, to_vec(f), to_vec(ob));
    const auto r_ref = oracle::residual(a, want, to_vec(ob));
    for (std::size_t i = 0; i < r_lib.size(); ++i) EXPECT_NEAR(r_lib[i], r_ref[i], 1e-8);
  }
}

TEST(Deconvolve, PadsOrTruncatesOutput) {
  const Signal ib = sig({2, 1});
  const Signal f0 = sig({1, -1, 0.5});
  const Signal full = convolve(ib, f0);
  EXPECT_LE((deconvolve(Signal(full.head(2)), ib, 3) - deconvolve(sig({full(0), full(1), 0, 0}), ib, 3))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
  Signal longer(full.size() + 3);
  longer << full, 9, 9, 9;
  EXPECT_LE((deconvolve(longer, ib, 3) - f0).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Deconvolve, ErrorPaths) {
  EXPECT_THROW(deconvolve(sig({1, 2}), Signal(Signal::Zero(3)), 2), DegenerateSystemError);
  EXPECT_THROW(deconvolve(sig({1, 2}), Signal(), 2), ParameterError);
  EXPECT_THROW(deconvolve(sig({1, 2}), sig({1}), 0), ParameterError);
}

TEST(PredictStructure, LengthContracts) {
  const auto p = predict_structure("MKTAYIAKQR", "CHHHHEECCC", "W");
  EXPECT_EQ(p.labels.size(), 1u);
  EXPECT_EQ(p.filter.size(), 5);
  const auto q = predict_structure("MKTAYIAKQR", "CHHHHEECCC", "ACDEFGHIKLMNPQRSTVWY", 3);
  EXPECT_EQ(q.labels.size(), 20u);
  EXPECT_EQ(q.output.size(), 20);
  EXPECT_EQ(q.filter.size(), 3);
}

TEST(PredictStructure, SelfPredictionDecodesFittedOutput) {
  const std::string bp = "MKTAYIAKQRQISFVKSHFSRQ";
  const std::string bs = "CCHHHHHHHHCCEEEEECCCCC";
  const auto p = predict_structure(bp, bs, bp, 5);
  const Signal fitted = convolve(hydrophobicity_encode(bp), p.filter).head(static_cast<Eigen::Index>(bp.size()));
  EXPECT_EQ(p.labels, threshold_decode(fitted));
}

TEST(PredictStructure, ImpulseInputReproducesBase) {
  // With a unit-impulse input and a full-length filter, the fit is exact and
  // decoding returns the base labels.
  Rng rng(15);
  for (int t = 0; t < 20; ++t) {
    const auto bs = random_structure(rng, 1 + rng.below(40));
    const Signal ob = structure_encode(bs);
    Signal ib = Signal::Zero(ob.size());
    ib(0) = 1.0;
    const Signal f = deconvolve(ob, ib, ob.size());
    EXPECT_EQ(threshold_decode(Signal(convolve(ib, f).head(ob.size()))), bs);
  }
}

TEST(PredictStructure, ErrorPaths) {
  EXPECT_THROW(predict_structure("MKT", "CH", "MKT"), InputError);
  EXPECT_THROW(predict_structure("", "", "MKT"), InputError);
  EXPECT_THROW(predict_structure("MKT", "CHC", ""), InputError);
  EXPECT_THROW(predict_structure("MKT", "CHC", "MKT", 0), ParameterError);
  EXPECT_THROW(predict_structure("MBT", "CHC", "MKT"), InputError);
  EXPECT_THROW(predict_structure("MKT", "CHX", "MKT"), InputError);
}

TEST(DnaEncode, Examples) {
  auto w = dna_encode("ACGT", 4, 1);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].to_string(), "00011011");
  w = dna_encode("AAAA", 2, 2);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].to_string(), "0000");
  EXPECT_EQ(w[1].to_string(), "0000");
  w = dna_encode("ACGTAC", 4, 1);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0], encode_bases("ACGT"));
  EXPECT_EQ(w[2].to_string(), "10110001");
}

TEST(DnaEncode, WindowCountFormula) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const std::size_t len = 1 + rng.below(60);
    const int w = 1 + static_cast<int>(rng.below(std::min<std::size_t>(len, 32)));
    const int stride = 1 + static_cast<int>(rng.below(7));
    std::string bases;
    for (std::size_t i = 0; i < len; ++i) bases += "ACGT"[rng.below(4)];
    EXPECT_EQ(dna_encode(bases, w, stride).size(), (len - static_cast<std::size_t>(w)) / static_cast<std::size_t>(stride) + 1);
  }
}

TEST(DnaEncode, ErrorPaths) {
  EXPECT_THROW(dna_encode("ACG", 4, 1), InputError);
  EXPECT_THROW(dna_encode("ACGN", 4, 1), InputError);
  EXPECT_THROW(dna_encode("ACGT", 0, 1), ParameterError);
  EXPECT_THROW(dna_encode("ACGT", 2, 0), ParameterError);
  EXPECT_THROW(dna_encode(std::string(40, 'A'), 33, 1), CapacityError);
}

TEST(SignalQuantize, Examples) {
  EXPECT_EQ(signal_quantize(sig({0.75}), 1, 0, 1), (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(signal_quantize(sig({-3}), 2, 0, 1), (std::vector<std::uint32_t>{0}));
  EXPECT_EQ(signal_quantize(sig({2.0}), 2, 0, 4), (std::vector<std::uint32_t>{2}));
  EXPECT_EQ(signal_quantize(sig({4.0, 9.0, 0.999, 1.0}), 2, 0, 4), (std::vector<std::uint32_t>{3, 3, 0, 1}));
  EXPECT_THROW(signal_quantize(sig({1}), 0, 0, 1), ParameterError);
  EXPECT_THROW(signal_quantize(sig({1}), 2, 1, 1), ParameterError);
}

TEST(PackCodes, LeadingCodeFirst) {
  const std::vector<std::uint32_t> codes{2, 0, 3};
  EXPECT_EQ(pack_codes(codes, 2).to_string(), "100011");
  EXPECT_THROW(pack_codes(std::vector<std::uint32_t>(33, 0), 2), CapacityError);
  EXPECT_THROW(pack_codes({}, 2), ParameterError);
}
