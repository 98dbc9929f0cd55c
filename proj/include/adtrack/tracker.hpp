#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "adtrack/bacf_solver.hpp"
#include "adtrack/dcf.hpp"
#include "adtrack/dictionary.hpp"
#include "adtrack/eco_solver.hpp"
#include "adtrack/sample_memory.hpp"
#include "adtrack/sources.hpp"

namespace adtrack {

struct TrackerConfig {
  SolverKind solver = SolverKind::Eco;
  double padding = 2.0;         // search window side / target side (4x area)
  int max_grid = 48;            // cells per side before the template is downsampled
  double sigma_factor = 1.0 / 12.0;
  std::optional<double> learning_rate;  // defaults to eco_learning_rate / bacf_learning_rate
  double eco_learning_rate = 0.009;
  double bacf_learning_rate = 0.013;
  int n_scales = 5;
  double scale_step = 1.02;
  double min_scale = 0.2;       // bounds on the accumulated scale factor
  double max_scale = 5.0;
  int train_interval = 5;       // N_train
  std::size_t memory_capacity = 30;
  double reg_min = 0.1;
  double reg_slope = 20.0;
  CgOptions cg;
  BacfConfig bacf;
  int n_orientations = 8;
  int cell = 4;

  double effective_learning_rate() const;
  /// Throws std::invalid_argument naming the offending key.
  void validate() const;
};

struct TrackerState {
  Box box;
  double scale = 1.0;
  FilterModel model;
  SampleMemory memory;
  LayerConfig config;
  std::size_t frame = 0;
  int last_scale_index = 0;
  double last_peak = 0.0;
};

class Tracker {
 public:
  Tracker(TrackerConfig cfg, std::shared_ptr<FeatureSource> features);

  /// Trains the first filter on frame 0. `config` is recorded; the filter has features->channels() channels.
  void init(const Image& frame0, const Box& box, const LayerConfig& config);
  Box step(const Image& frame);

  const TrackerState& state() const { return state_; }
  const TrackerConfig& config() const { return cfg_; }
  GridSize grid() const { return grid_; }

 private:
  std::vector<SpectrumMap> sample(const Image& frame, std::size_t index, double cy, double cx, double scale);
  void train();

  TrackerConfig cfg_;
  std::shared_ptr<FeatureSource> features_;
  TrackerState state_;
  GridSize grid_;
  GridSize frame_size_;
  double base_h_ = 0.0, base_w_ = 0.0;    // target size at scale 1
  double window_h_ = 0.0, window_w_ = 0.0;  // search window at scale 1
  RealMap window_;
  GaussianLabel label_;
  SpatialRegularizer reg_;
};

enum class FeatureKind { Builtin, File };

struct SequenceSpec {
  std::shared_ptr<FrameSource> frames;
  Box initial;
  AttributeVector attributes;
  ModelId model = ModelId::ResNet50;
  FeatureKind features = FeatureKind::Builtin;
  std::filesystem::path feature_file;  // for FeatureKind::File
  TrackerConfig tracker;
  /// Runs this config instead of the dictionary selection (used by analysis over all configs).
  std::optional<LayerConfig> config_override;
};

/// Tracker after layer selection and first-frame training.
Tracker init_tracker(const SequenceSpec& spec, const DictionaryCatalog& catalog, const Image& frame0);

/// One box per frame; box 0 is the initial box verbatim.
std::vector<Box> run_sequence(const SequenceSpec& spec, const DictionaryCatalog& catalog);

}  // namespace adtrack
