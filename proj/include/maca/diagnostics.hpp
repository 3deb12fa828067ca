#pragma once

// Edge-of-chaos measures over a spacetime diagram (rows = time, columns = cells):
// mean temporal entropy per cell and mean mutual information of adjacent cells,
// both plug-in estimates in bits, so both lie in [0, 1].

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>

#include "maca/ca_core.hpp"
#include "maca/errors.hpp"

namespace maca {

// Reference line drawn next to entropy traces; never a pass/fail threshold.
inline constexpr double kCriticalEntropy = 0.84;

using BitMatrix = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

struct SpacetimeRun {
  BitMatrix states;
  RuleVector rules;
  CAState start;
};

// Rows 0..steps-1: the start state followed by its successors.
SpacetimeRun spacetime_run(const RuleVector& rules, const CAState& start, int steps,
                           Boundary boundary = Boundary::null);

template <typename Scalar>
Scalar binary_entropy(Scalar p) {
  if (p <= Scalar(0) || p >= Scalar(1)) return Scalar(0);
  return -(p * std::log2(p) + (Scalar(1) - p) * std::log2(Scalar(1) - p));
}

template <typename Derived>
double entropy(const Eigen::ArrayBase<Derived>& states) {
  if (states.rows() < 1 || states.cols() < 1) throw ParameterError("empty spacetime matrix");
  const Eigen::ArrayXd ones = states.template cast<double>().colwise().mean().transpose();
  return ones.unaryExpr([](double p) { return binary_entropy(p); }).mean();
}

// Mutual information (bits) between two 0/1 columns of equal length.
template <typename DerivedA, typename DerivedB>
double pair_mutual_information(const Eigen::ArrayBase<DerivedA>& a,
                               const Eigen::ArrayBase<DerivedB>& b) {
  const Eigen::ArrayXd x = a.template cast<double>();
  const Eigen::ArrayXd y = b.template cast<double>();
  const double t = static_cast<double>(x.size());
  const double n11 = (x * y).sum();
  const double n1x = x.sum();
  const double nx1 = y.sum();
  const double joint[2][2] = {{t - n1x - nx1 + n11, nx1 - n11}, {n1x - n11, n11}};
  const double px[2] = {(t - n1x) / t, n1x / t};
  const double py[2] = {(t - nx1) / t, nx1 / t};
  double mi = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double pij = joint[i][j] / t;
      if (pij > 0.0) mi += pij * std::log2(pij / (px[i] * py[j]));
    }
  }
  return std::clamp(mi, 0.0, 1.0);
}

template <typename Derived>
double mutual_information(const Eigen::ArrayBase<Derived>& states) {
  if (states.cols() < 2) throw ParameterError("mutual information needs at least two cells");
  if (states.rows() < 1) throw ParameterError("empty spacetime matrix");
  double total = 0.0;
  for (Eigen::Index i = 0; i + 1 < states.cols(); ++i) {
    total += pair_mutual_information(states.col(i), states.col(i + 1));
  }
  return total / static_cast<double>(states.cols() - 1);
}

inline double entropy(const SpacetimeRun& run) { return entropy(run.states); }
inline double mutual_information(const SpacetimeRun& run) { return mutual_information(run.states); }

}  // namespace maca
