#include "adtrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "adtrack/fft.hpp"

namespace adtrack {

double TrackerConfig::effective_learning_rate() const {
  if (learning_rate) return *learning_rate;
  return solver == SolverKind::Eco ? eco_learning_rate : bacf_learning_rate;
}

void TrackerConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& rule) {
    throw std::invalid_argument("tracker config: " + key + " " + rule);
  };
  if (!(padding >= 1.0)) fail("padding", "must be >= 1");
  if (max_grid < 4) fail("max_grid", "must be >= 4");
  if (!(sigma_factor > 0.0)) fail("sigma_factor", "must be positive");
  const double eta = effective_learning_rate();
  if (!(eta > 0.0 && eta <= 1.0)) fail("learning_rate", "must lie in (0, 1]");
  if (n_scales < 1) fail("n_scales", "must be >= 1");
  if (!(scale_step >= 1.0)) fail("scale_step", "must be >= 1");
  if (!(min_scale > 0.0 && min_scale <= 1.0 && max_scale >= 1.0)) fail("min_scale/max_scale", "must bracket 1");
  if (train_interval < 1) fail("train_interval", "must be >= 1");
  if (memory_capacity < 1) fail("memory_capacity", "must be >= 1");
  if (!(reg_min > 0.0)) fail("reg_min", "must be positive");
  if (!(reg_slope >= 0.0)) fail("reg_slope", "must be non-negative");
  if (cg.max_iters < 1) fail("cg_iters", "must be >= 1");
  if (!(cg.tol > 0.0)) fail("cg_tol", "must be positive");
  if (bacf.iterations < 1) fail("admm_iters", "must be >= 1");
  if (!(bacf.lambda >= 0.0)) fail("bacf_lambda", "must be non-negative");
  if (!(bacf.crop_ratio > 0.0 && bacf.crop_ratio < 1.0)) fail("crop_ratio", "must lie in (0, 1)");
  if (!(bacf.mu > 0.0 && bacf.mu_scale >= 1.0 && bacf.mu_max >= bacf.mu)) fail("admm_mu", "schedule is invalid");
  if (n_orientations < 1) fail("n_orientations", "must be >= 1");
  if (cell < 1) fail("cell", "must be >= 1");
}

Tracker::Tracker(TrackerConfig cfg, std::shared_ptr<FeatureSource> features)
    : cfg_(std::move(cfg)), features_(std::move(features)) {
  cfg_.validate();
  if (!features_) throw std::invalid_argument("Tracker: no feature source");
}

std::vector<SpectrumMap> Tracker::sample(const Image& frame, std::size_t index, double cy, double cx, double scale) {
  FeatureStack stack = features_->extract(index, frame, cy, cx, window_h_ * scale, window_w_ * scale, grid_);
  if (stack.size() != features_->channels() || !stack.uniform() || stack.grid() != grid_)
    throw std::runtime_error("feature source returned an inconsistent stack");
  multiply_window(stack, window_);
  std::vector<SpectrumMap> out(stack.size());
  const auto K = static_cast<std::ptrdiff_t>(stack.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < K; ++k) out[k] = fft2(stack.channels[k]);
  return out;
}

void Tracker::train() {
  if (cfg_.solver == SolverKind::Eco) {
    const auto samples = state_.memory.weighted();
    const auto* warm = state_.model.filters.empty() ? nullptr : &state_.model.filters;
    EcoResult r = train_eco(samples, reg_, label_, warm, cfg_.cg);
    state_.model.filters = std::move(r.filters);
  } else {
    const auto mean = state_.memory.weighted_mean();
    BacfResult r = train_bacf(mean, label_, cfg_.bacf);
    state_.model.filters = std::move(r.filters);
  }
}

void Tracker::init(const Image& frame0, const Box& box, const LayerConfig& config) {
  if (frame0.empty()) throw std::invalid_argument("Tracker: empty first frame");
  if (!(box.w > 0.0 && box.h > 0.0)) throw std::invalid_argument("Tracker: initial box has no area");
  if (box.cx() < 0.0 || box.cy() < 0.0 || box.cx() > frame0.cols() || box.cy() > frame0.rows())
    throw std::invalid_argument("Tracker: initial box centre lies outside frame 0");

  frame_size_ = frame0.size();
  base_h_ = box.h;
  base_w_ = box.w;
  window_h_ = cfg_.padding * box.h;
  window_w_ = cfg_.padding * box.w;
  const double cell = features_->cell_size();
  const double template_scale = std::max(1.0, std::max(window_h_, window_w_) / (cell * cfg_.max_grid));
  const double px_per_cell = cell * template_scale;
  grid_ = {std::max(4, static_cast<int>(std::lround(window_h_ / px_per_cell))),
           std::max(4, static_cast<int>(std::lround(window_w_ / px_per_cell)))};
  const double target_rows = std::min<double>(grid_.rows, box.h / px_per_cell);
  const double target_cols = std::min<double>(grid_.cols, box.w / px_per_cell);

  label_ = make_gaussian_label(grid_, std::sqrt(target_rows * target_cols) * cfg_.sigma_factor);
  reg_ = make_spatial_regularizer(grid_, target_rows, target_cols, cfg_.reg_min, cfg_.reg_slope);
  window_ = hann_window(grid_);

  state_ = TrackerState{.box = box,
                        .scale = 1.0,
                        .model = FilterModel{.filters = {}, .grid = grid_, .solver = cfg_.solver, .config = config},
                        .memory = SampleMemory(cfg_.memory_capacity),
                        .config = config,
                        .frame = 0,
                        .last_scale_index = cfg_.n_scales / 2,
                        .last_peak = 0.0};
  state_.memory.update(sample(frame0, 0, box.cy(), box.cx(), 1.0), cfg_.effective_learning_rate());
  train();
}

Box Tracker::step(const Image& frame) {
  if (state_.model.filters.empty()) throw std::logic_error("Tracker: step before init");
  if (frame.size() != frame_size_) throw std::invalid_argument("Tracker: frame size changed within the sequence");
  const std::size_t index = ++state_.frame;
  const double cy = state_.box.cy(), cx = state_.box.cx();

  int best = -1;
  ResponseMap best_resp;
  double best_factor = 1.0;
  for (int i = 0; i < cfg_.n_scales; ++i) {
    const double factor = std::pow(cfg_.scale_step, i - 0.5 * (cfg_.n_scales - 1));
    const auto x = sample(frame, index, cy, cx, state_.scale * factor);
    ResponseMap resp = detect(state_.model, x);
    if (best < 0 || resp.peak_value > best_resp.peak_value) {
      best = i;
      best_resp = std::move(resp);
      best_factor = factor;
    }
  }

  auto displacement = [](double peak, int center, int n) {
    double d = peak - center;
    if (d >= 0.5 * n) d -= n;
    if (d < -0.5 * n) d += n;
    return d;
  };
  const double search_scale = state_.scale * best_factor;
  const double dy = displacement(best_resp.peak_row, label_.center_row(), grid_.rows) * window_h_ * search_scale / grid_.rows;
  const double dx = displacement(best_resp.peak_col, label_.center_col(), grid_.cols) * window_w_ * search_scale / grid_.cols;

  state_.scale = std::clamp(search_scale, cfg_.min_scale, cfg_.max_scale);
  state_.box = clamp_center(Box::from_center(cx + dx, cy + dy, base_w_ * state_.scale, base_h_ * state_.scale),
                            frame_size_.rows, frame_size_.cols);
  state_.last_scale_index = best;
  state_.last_peak = best_resp.peak_value;

  state_.memory.update(sample(frame, index, state_.box.cy(), state_.box.cx(), state_.scale),
                       cfg_.effective_learning_rate());
  if (index % static_cast<std::size_t>(cfg_.train_interval) == 0) train();
  return state_.box;
}

Tracker init_tracker(const SequenceSpec& spec, const DictionaryCatalog& catalog, const Image& frame0) {
  const LayerConfig config = spec.config_override ? *spec.config_override
                                                  : select_config(spec.model, spec.attributes, catalog);
  std::shared_ptr<FeatureSource> source;
  if (spec.features == FeatureKind::Builtin) {
    source = std::make_shared<BuiltinFeatureSource>(spec.tracker.n_orientations, spec.tracker.cell);
  } else {
    source = std::make_shared<AfdtFeatureSource>(spec.feature_file, config, spec.tracker.cell);
  }
  Tracker tracker(spec.tracker, source);
  tracker.init(frame0, spec.initial, config);
  if (spec.features == FeatureKind::File && tracker.state().model.channels() != static_cast<std::size_t>(channel_count(config)))
    throw std::logic_error("filter channel count differs from channel_count(config)");
  return tracker;
}

std::vector<Box> run_sequence(const SequenceSpec& spec, const DictionaryCatalog& catalog) {
  if (!spec.frames || spec.frames->size() == 0) throw std::invalid_argument("run_sequence: sequence has no frames");
  const Image first = spec.frames->frame(0);
  Tracker tracker = init_tracker(spec, catalog, first);
  std::vector<Box> boxes{spec.initial};
  boxes.reserve(spec.frames->size());
  for (std::size_t i = 1; i < spec.frames->size(); ++i) boxes.push_back(tracker.step(spec.frames->frame(i)));
  return boxes;
}

}  // namespace adtrack
