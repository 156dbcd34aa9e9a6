#pragma once

#include <vector>

namespace hylent {

enum class Parity { Even, Odd };

struct SeriesPoint {
  int omega = 0;
  double value = 0.0;
};

/// Values at omegas of one parity, spaced by 2.
struct Series {
  std::vector<SeriesPoint> points;

  /// Throws InvalidArgument unless omegas increase by exactly 2 and share a parity.
  void validate() const;
  Parity parity() const;
  /// Even- or odd-omega subsequence of an arbitrary list.
  static Series select(const std::vector<SeriesPoint>& all, Parity parity);
};

struct Extrapolation {
  double limit = 0.0;
  double ratio = 0.0;
  /// True when the last increment is exactly zero.
  bool converged = false;
};

/// Geometric limit from the last three points:
///   v(w) + d(w)^2 / (d(w-2) - d(w)),  d(w) = v(w) - v(w-2).
/// Throws DivergentSeries when |d(w)| >= |d(w-2)| and DegenerateSeries on a
/// zero denominator.
Extrapolation geometric_extrapolate(const Series& series);

struct FinalEstimate {
  double value = 0.0;
  double uncertainty = 0.0;
  double spread = 0.0;  ///< raw |even - odd|
};

/// Mean of the two limits with uncertainty max(5 |even - odd|, floor). The
/// value is rounded at the second significant digit of the uncertainty.
FinalEstimate final_estimate(double even_limit, double odd_limit, double floor = 1e-6);

}  // namespace hylent
