#pragma once

#include <string>
#include <vector>

#include "adtrack/afdt.hpp"
#include "adtrack/array2d.hpp"
#include "adtrack/dictionary.hpp"
#include "adtrack/image.hpp"

namespace adtrack {

/// Multi-channel feature maps for one image region. After resampling all channels share one grid.
struct FeatureStack {
  std::vector<RealMap> channels;
  std::vector<std::string> labels;  // source layer of each channel

  std::size_t size() const { return channels.size(); }
  GridSize grid() const { return channels.empty() ? GridSize{} : channels.front().size(); }
  bool uniform() const;
};

/// Mean-subtracted intensity followed by `n_orientations` unsigned gradient-orientation energy
/// maps, each averaged over `cell` x `cell` pixel cells. Output grid is floor(patch / cell).
/// Throws std::invalid_argument when the patch has no complete cell or n_orientations < 1.
FeatureStack builtin_extract(const Image& patch, int n_orientations = 8, int cell = 4);

/// Periodic band-limited interpolation by zero-padding the spectrum. The channel mean is
/// preserved. For even source sizes the Nyquist coefficient is split over both target bins.
RealMap resample_fourier(const RealMap& x, GridSize target);
FeatureStack resample_to_common_grid(const FeatureStack& stack, GridSize target);

/// Grid of the largest selected layer: element-wise max over channel sizes.
GridSize common_grid(const FeatureStack& stack);

/// Gathers the config's layers (in config order) from one AFDT frame into a stack, one channel
/// per tensor depth slice, resampled to the common grid. Throws if a layer is missing or the
/// channel count disagrees with channel_count(config).
FeatureStack stack_from_frame(const FeatureFrame& frame, const LayerConfig& config);

/// Separable raised-cosine window peaking at cell (rows/2, cols/2) and symmetric about it.
/// Strictly positive at every cell.
RealMap hann_window(GridSize g);

void multiply_window(FeatureStack& stack, const RealMap& window);

}  // namespace adtrack
