#include "adtrack/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <opencv2/imgcodecs.hpp>

namespace adtrack {

double sample_bilinear(const Image& img, double y, double x) {
  // pixel centres sit at i + 0.5
  const double u = std::clamp(y - 0.5, 0.0, static_cast<double>(img.rows() - 1));
  const double v = std::clamp(x - 0.5, 0.0, static_cast<double>(img.cols() - 1));
  const int r0 = static_cast<int>(std::floor(u));
  const int c0 = static_cast<int>(std::floor(v));
  const int r1 = std::min(r0 + 1, img.rows() - 1);
  const int c1 = std::min(c0 + 1, img.cols() - 1);
  const double fr = u - r0, fc = v - c0;
  return (1 - fr) * ((1 - fc) * img(r0, c0) + fc * img(r0, c1)) + fr * ((1 - fc) * img(r1, c0) + fc * img(r1, c1));
}

Image extract_patch(const Image& img, double cy, double cx, double height, double width, GridSize out) {
  if (img.empty()) throw std::invalid_argument("extract_patch: empty image");
  if (out.rows <= 0 || out.cols <= 0) throw std::invalid_argument("extract_patch: empty output");
  Image patch(out);
  const double sy = height / out.rows, sx = width / out.cols;
  for (int r = 0; r < out.rows; ++r) {
    const double y = cy + (r + 0.5 - 0.5 * out.rows) * sy;
    for (int c = 0; c < out.cols; ++c) patch(r, c) = sample_bilinear(img, y, cx + (c + 0.5 - 0.5 * out.cols) * sx);
  }
  return patch;
}

Box clamp_center(const Box& b, int frame_rows, int frame_cols) {
  const double cx = std::clamp(b.cx(), 0.0, static_cast<double>(frame_cols));
  const double cy = std::clamp(b.cy(), 0.0, static_cast<double>(frame_rows));
  return Box::from_center(cx, cy, b.w, b.h);
}

Image load_grayscale(const std::filesystem::path& file) {
  const cv::Mat m = cv::imread(file.string(), cv::IMREAD_GRAYSCALE);
  if (m.empty()) throw std::runtime_error("cannot read image " + file.string());
  Image img(m.rows, m.cols);
  for (int r = 0; r < m.rows; ++r) {
    const auto* row = m.ptr<unsigned char>(r);
    for (int c = 0; c < m.cols; ++c) img(r, c) = row[c] / 255.0;
  }
  return img;
}

}  // namespace adtrack
