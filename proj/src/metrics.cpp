#include "adtrack/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace adtrack {

double iou(const Box& a, const Box& b) {
  const double iw = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double ih = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = iw * ih;
  const double uni = std::max(0.0, a.w) * std::max(0.0, a.h) + std::max(0.0, b.w) * std::max(0.0, b.h) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double center_error(const Box& a, const Box& b) { return std::hypot(a.cx() - b.cx(), a.cy() - b.cy()); }

std::vector<double> success_thresholds() {
  std::vector<double> t(21);
  for (int i = 0; i <= 20; ++i) t[i] = i / 20.0;
  return t;
}

std::vector<double> precision_thresholds() {
  std::vector<double> t(51);
  for (int i = 0; i <= 50; ++i) t[i] = i;
  return t;
}

bool counts_as_success(double overlap, double threshold) { return overlap > threshold; }
bool counts_as_precise(double error, double threshold) { return error < threshold; }

SuccessCurve success_curve_from_overlaps(std::span<const double> overlaps) {
  SuccessCurve c;
  c.thresholds = success_thresholds();
  c.rates.assign(c.thresholds.size(), 0.0);
  if (overlaps.empty()) return c;
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
    const auto n = std::count_if(overlaps.begin(), overlaps.end(),
                                 [&](double o) { return counts_as_success(o, c.thresholds[i]); });
    c.rates[i] = static_cast<double>(n) / static_cast<double>(overlaps.size());
  }
  double sum = 0.0;
  for (double r : c.rates) sum += r;
  c.auc = sum / static_cast<double>(c.rates.size());
  c.at_half = c.rates[10];
  return c;
}

PrecisionCurve precision_curve_from_errors(std::span<const double> errors) {
  PrecisionCurve c;
  c.thresholds = precision_thresholds();
  c.rates.assign(c.thresholds.size(), 0.0);
  if (errors.empty()) return c;
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
    const auto n = std::count_if(errors.begin(), errors.end(),
                                 [&](double e) { return counts_as_precise(e, c.thresholds[i]); });
    c.rates[i] = static_cast<double>(n) / static_cast<double>(errors.size());
  }
  c.at_20 = c.rates[20];
  return c;
}

SuccessCurve success_curve(std::span<const Box> est, std::span<const Box> gt) {
  const std::size_t n = std::min(est.size(), gt.size());
  std::vector<double> o(n);
  for (std::size_t i = 0; i < n; ++i) o[i] = iou(est[i], gt[i]);
  return success_curve_from_overlaps(o);
}

PrecisionCurve precision_curve(std::span<const Box> est, std::span<const Box> gt) {
  const std::size_t n = std::min(est.size(), gt.size());
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = center_error(est[i], gt[i]);
  return precision_curve_from_errors(e);
}

}  // namespace adtrack
