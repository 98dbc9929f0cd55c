#pragma once

#include <cstdint>
#include <vector>

#include "adtrack/image.hpp"

namespace adtrack {

struct SyntheticParams {
  int rows = 240;
  int cols = 320;
  int frames = 100;
  double target_size = 64.0;  // side of the square at frame 0
  double start_x = 40.0;      // top-left corner at frame 0
  double start_y = 40.0;
  double vx = 1.6;            // pixels per frame; (1.6, 1.2) moves 2 px per frame
  double vy = 1.2;
  double zoom = 1.0;          // side length multiplier per frame, about the square's centre
  double noise_sigma = 5.0 / 255.0;
  std::uint64_t seed = 1;
};

struct SyntheticSequence {
  std::vector<Image> frames;
  std::vector<Box> truth;
};

/// Textured square over a textured background with additive Gaussian noise. Deterministic in `seed`.
SyntheticSequence make_synthetic_sequence(const SyntheticParams& p);

}  // namespace adtrack
