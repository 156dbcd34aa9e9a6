#include "hylent/extrapolate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "hylent/errors.hpp"

namespace hylent {

void Series::validate() const {
  if (points.empty()) throw InvalidArgument("series is empty");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].omega != points[i - 1].omega + 2)
      throw InvalidArgument(fmt::format("series omegas {} and {} are not spaced by 2", points[i - 1].omega,
                                        points[i].omega));
  for (const auto& p : points)
    if (!std::isfinite(p.value)) throw InvalidArgument(fmt::format("series value at omega {} is not finite", p.omega));
}

Parity Series::parity() const {
  validate();
  return points.front().omega % 2 == 0 ? Parity::Even : Parity::Odd;
}

Series Series::select(const std::vector<SeriesPoint>& all, Parity parity) {
  Series out;
  for (const auto& p : all)
    if ((p.omega % 2 == 0) == (parity == Parity::Even)) out.points.push_back(p);
  return out;
}

Extrapolation geometric_extrapolate(const Series& series) {
  series.validate();
  const auto& pts = series.points;
  if (pts.size() < 3) throw InvalidArgument("geometric extrapolation needs at least 3 points");
  const double v0 = pts[pts.size() - 3].value;
  const double v1 = pts[pts.size() - 2].value;
  const double v2 = pts[pts.size() - 1].value;
  const double d1 = v1 - v0;
  const double d2 = v2 - v1;
  if (d2 == 0.0) return {v2, 0.0, true};
  if (d1 == d2) throw DegenerateSeries("geometric extrapolation: equal increments");
  if (std::abs(d2) >= std::abs(d1))
    throw DivergentSeries(fmt::format("increments do not shrink ({:.3g} then {:.3g})", d1, d2));
  return {v2 + d2 * d2 / (d1 - d2), d2 / d1, false};
}

FinalEstimate final_estimate(double even_limit, double odd_limit, double floor) {
  if (!std::isfinite(even_limit) || !std::isfinite(odd_limit)) throw InvalidArgument("final_estimate: non-finite limit");
  if (!(floor > 0)) throw InvalidArgument("final_estimate: floor must be positive");
  FinalEstimate out;
  out.spread = std::abs(even_limit - odd_limit);
  const double raw = std::max(5.0 * out.spread, floor);
  // Round through decimal text so the reported numbers are the short decimals
  // a reader expects rather than binary neighbours of them.
  const int decimals = std::max(0, 1 - static_cast<int>(std::floor(std::log10(raw))));
  const double step = std::pow(10.0, -decimals);
  out.uncertainty = std::stod(fmt::format("{:.{}f}", std::ceil(raw / step - 1e-9) * step, decimals));
  out.value = std::stod(fmt::format("{:.{}f}", 0.5 * (even_limit + odd_limit), decimals));
  return out;
}

}  // namespace hylent
