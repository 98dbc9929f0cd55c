#pragma once

#include <filesystem>

#include "adtrack/array2d.hpp"

namespace adtrack {

/// Grayscale image, intensities in [0, 1].
using Image = RealMap;

/// Axis-aligned box in pixels. Pixel i covers [i, i+1), so the centre is x + w/2.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }
  double area() const { return w * h; }
  static Box from_center(double cx, double cy, double w, double h) { return {cx - 0.5 * w, cy - 0.5 * h, w, h}; }

  bool operator==(const Box&) const = default;
};

/// Bilinear sample of `img` at continuous pixel coordinates; borders are replicated.
double sample_bilinear(const Image& img, double y, double x);

/// Resamples the window of size (height, width) centred at (cy, cx) onto `out` cells.
Image extract_patch(const Image& img, double cy, double cx, double height, double width, GridSize out);

/// Clamps the box centre into the frame and keeps its size.
Box clamp_center(const Box& b, int frame_rows, int frame_cols);

/// Loads an image file as grayscale in [0, 1]. Throws std::runtime_error on failure.
Image load_grayscale(const std::filesystem::path& file);

}  // namespace adtrack
