#include "adtrack/sources.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace adtrack {

ImageDirFrameSource::ImageDirFrameSource(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("image directory not found: " + dir.string());
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".jpg" || ext == ".jpeg" || ext == ".png") files_.push_back(e.path());
  }
  std::sort(files_.begin(), files_.end());
  if (files_.empty()) throw std::runtime_error("no images in " + dir.string());
}

Image ImageDirFrameSource::frame(std::size_t i) const { return load_grayscale(files_.at(i)); }

BuiltinFeatureSource::BuiltinFeatureSource(int n_orientations, int cell) : n_orientations_(n_orientations), cell_(cell) {
  if (n_orientations < 1) throw std::invalid_argument("builtin features: n_orientations must be >= 1");
  if (cell < 1) throw std::invalid_argument("builtin features: cell must be >= 1");
}

FeatureStack BuiltinFeatureSource::extract(std::size_t, const Image& frame, double cy, double cx, double height,
                                           double width, GridSize grid) {
  // shift so that cell (rows/2, cols/2) is centred on (cy, cx), matching the label peak
  const double oy = (grid.rows / 2 + 0.5 - 0.5 * grid.rows) * height / grid.rows;
  const double ox = (grid.cols / 2 + 0.5 - 0.5 * grid.cols) * width / grid.cols;
  const Image patch = extract_patch(frame, cy + oy, cx + ox, height, width, {grid.rows * cell_, grid.cols * cell_});
  return builtin_extract(patch, n_orientations_, cell_);
}

AfdtFeatureSource::AfdtFeatureSource(std::vector<FeatureFrame> frames, LayerConfig config, int cell)
    : config_(std::move(config)), cell_(cell) {
  for (auto& f : frames) {
    const auto idx = f.index;
    if (!frames_.emplace(idx, std::move(f)).second)
      throw std::runtime_error("feature file holds frame index " + std::to_string(idx) + " twice");
  }
}

AfdtFeatureSource::AfdtFeatureSource(const std::filesystem::path& file, LayerConfig config, int cell)
    : AfdtFeatureSource(read_feature_file(file), std::move(config), cell) {}

const FeatureStack& AfdtFeatureSource::frame_stack(std::size_t index) {
  if (index == cached_index_) return cached_;
  const auto it = frames_.find(static_cast<std::uint32_t>(index));
  if (it == frames_.end()) throw std::runtime_error("feature source exhausted: no record for frame " + std::to_string(index));
  cached_ = stack_from_frame(it->second, config_);
  cached_index_ = index;
  return cached_;
}

FeatureStack AfdtFeatureSource::extract(std::size_t index, const Image& frame, double cy, double cx, double height,
                                        double width, GridSize grid) {
  const FeatureStack& full = frame_stack(index);
  const GridSize fg = full.grid();
  // feature cell i covers image rows [i, i+1) * frame.rows / fg.rows; output cell (rows/2, cols/2) sits on (cy, cx)
  const double ry = static_cast<double>(fg.rows) / frame.rows();
  const double rx = static_cast<double>(fg.cols) / frame.cols();
  FeatureStack out;
  out.labels = full.labels;
  out.channels.assign(full.size(), RealMap(grid));
  const double sy = height / grid.rows, sx = width / grid.cols;
  const auto K = static_cast<std::ptrdiff_t>(full.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < K; ++k)
    for (int r = 0; r < grid.rows; ++r) {
      const double y = (cy + (r - grid.rows / 2) * sy) * ry;
      for (int c = 0; c < grid.cols; ++c)
        out.channels[k](r, c) = sample_bilinear(full.channels[k], y, (cx + (c - grid.cols / 2) * sx) * rx);
    }
  return out;
}

}  // namespace adtrack
