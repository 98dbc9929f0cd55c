#pragma once

#include <span>
#include <vector>

#include "adtrack/image.hpp"

namespace adtrack {

/// Intersection over union of two boxes with non-negative sizes; 0 when the union is empty.
double iou(const Box& a, const Box& b);
/// Euclidean distance between box centres in pixels.
double center_error(const Box& a, const Box& b);

/// Overlap thresholds 0, 0.05, ..., 1 (21 points).
std::vector<double> success_thresholds();
/// Centre-error thresholds 0, 1, ..., 50 pixels (51 points).
std::vector<double> precision_thresholds();

struct SuccessCurve {
  std::vector<double> thresholds;
  std::vector<double> rates;  // fraction of frames with iou > t
  double auc = 0.0;           // mean of rates over the threshold grid
  double at_half = 0.0;       // rate at t = 0.5
};

struct PrecisionCurve {
  std::vector<double> thresholds;
  std::vector<double> rates;  // fraction of frames with centre error < t
  double at_20 = 0.0;
};

// Comparisons are strict: success counts iou > t and precision counts error < t.
bool counts_as_success(double overlap, double threshold);
bool counts_as_precise(double error, double threshold);

/// Frames are compared up to the shorter list. An empty comparison yields all-zero curves.
SuccessCurve success_curve(std::span<const Box> est, std::span<const Box> gt);
PrecisionCurve precision_curve(std::span<const Box> est, std::span<const Box> gt);

/// Curves from per-frame values already computed (also used to pool frames across sequences).
SuccessCurve success_curve_from_overlaps(std::span<const double> overlaps);
PrecisionCurve precision_curve_from_errors(std::span<const double> errors);

}  // namespace adtrack
