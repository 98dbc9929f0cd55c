#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "adtrack/afdt.hpp"
#include "adtrack/features.hpp"
#include "adtrack/image.hpp"

namespace adtrack {

class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::size_t size() const = 0;
  virtual Image frame(std::size_t i) const = 0;
};

/// Frames held in memory (synthetic sequences, tests).
class MemoryFrameSource : public FrameSource {
 public:
  explicit MemoryFrameSource(std::vector<Image> frames) : frames_(std::move(frames)) {}
  std::size_t size() const override { return frames_.size(); }
  Image frame(std::size_t i) const override { return frames_.at(i); }

 private:
  std::vector<Image> frames_;
};

/// Sorted *.jpg / *.jpeg / *.png files of a directory, decoded on demand.
class ImageDirFrameSource : public FrameSource {
 public:
  explicit ImageDirFrameSource(const std::filesystem::path& dir);
  std::size_t size() const override { return files_.size(); }
  Image frame(std::size_t i) const override;
  const std::vector<std::filesystem::path>& files() const { return files_; }

 private:
  std::vector<std::filesystem::path> files_;
};

/// Produces a feature stack on a fixed cell grid for an image window.
class FeatureSource {
 public:
  virtual ~FeatureSource() = default;
  /// Window of (height, width) pixels centred at (cy, cx) in frame `index`, sampled onto `grid`.
  virtual FeatureStack extract(std::size_t index, const Image& frame, double cy, double cx, double height,
                               double width, GridSize grid) = 0;
  virtual std::size_t channels() const = 0;
  /// Nominal pixels per cell at unit template scale.
  virtual int cell_size() const = 0;
};

class BuiltinFeatureSource : public FeatureSource {
 public:
  explicit BuiltinFeatureSource(int n_orientations = 8, int cell = 4);
  FeatureStack extract(std::size_t index, const Image& frame, double cy, double cx, double height, double width,
                       GridSize grid) override;
  std::size_t channels() const override { return 1 + static_cast<std::size_t>(n_orientations_); }
  int cell_size() const override { return cell_; }

 private:
  int n_orientations_;
  int cell_;
};

/// Full-frame feature maps from an AFDT file. Frame i uses the record whose index is i. The
/// selected layers are brought to their common grid, then bilinearly sampled over the window.
class AfdtFeatureSource : public FeatureSource {
 public:
  AfdtFeatureSource(std::vector<FeatureFrame> frames, LayerConfig config, int cell = 4);
  AfdtFeatureSource(const std::filesystem::path& file, LayerConfig config, int cell = 4);

  FeatureStack extract(std::size_t index, const Image& frame, double cy, double cx, double height, double width,
                       GridSize grid) override;
  std::size_t channels() const override { return static_cast<std::size_t>(channel_count(config_)); }
  int cell_size() const override { return cell_; }
  std::size_t frame_count() const { return frames_.size(); }

 private:
  const FeatureStack& frame_stack(std::size_t index);

  std::map<std::uint32_t, FeatureFrame> frames_;
  LayerConfig config_;
  int cell_;
  std::size_t cached_index_ = static_cast<std::size_t>(-1);
  FeatureStack cached_;
};

}  // namespace adtrack
