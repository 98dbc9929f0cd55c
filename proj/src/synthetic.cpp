#include "adtrack/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace adtrack {

namespace {

// Box-Muller on mt19937_64 so the stream is identical across standard libraries.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Coarse random lattice, bilinearly upsampled: smooth clutter.
Image smooth_texture(int rows, int cols, int period, double lo, double hi, Gaussian& rng) {
  const int gr = rows / period + 2, gc = cols / period + 2;
  Image lattice(gr, gc);
  for (auto& v : lattice) v = lo + (hi - lo) * rng.uniform();
  Image out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      out(r, c) = sample_bilinear(lattice, (r + 0.5) / period + 0.5, (c + 0.5) / period + 0.5);
  return out;
}

}  // namespace

SyntheticSequence make_synthetic_sequence(const SyntheticParams& p) {
  if (p.rows < 8 || p.cols < 8 || p.frames < 1) throw std::invalid_argument("synthetic: degenerate size");
  if (!(p.target_size >= 4.0) || !(p.zoom > 0.0) || !(p.noise_sigma >= 0.0))
    throw std::invalid_argument("synthetic: invalid target parameters");
  Gaussian rng(p.seed);
  const Image background = smooth_texture(p.rows, p.cols, 16, 0.25, 0.55, rng);
  // 8x8 block pattern with strong edges, sampled in the square's own coordinates
  Image pattern(8, 8);
  for (auto& v : pattern) v = rng.uniform() < 0.5 ? 0.15 + 0.2 * rng.uniform() : 0.65 + 0.3 * rng.uniform();

  SyntheticSequence seq;
  const double cx0 = p.start_x + 0.5 * p.target_size, cy0 = p.start_y + 0.5 * p.target_size;
  for (int f = 0; f < p.frames; ++f) {
    const double side = p.target_size * std::pow(p.zoom, f);
    const Box box = Box::from_center(cx0 + p.vx * f, cy0 + p.vy * f, side, side);
    Image img = background;
    const int r0 = std::max(0, static_cast<int>(std::floor(box.y)));
    const int r1 = std::min(p.rows, static_cast<int>(std::ceil(box.y + box.h)));
    const int c0 = std::max(0, static_cast<int>(std::floor(box.x)));
    const int c1 = std::min(p.cols, static_cast<int>(std::ceil(box.x + box.w)));
    for (int r = r0; r < r1; ++r)
      for (int c = c0; c < c1; ++c) {
        // area coverage of the pixel by the square gives sub-pixel edges
        const double cov_y = std::clamp(std::min(r + 1.0, box.y + box.h) - std::max<double>(r, box.y), 0.0, 1.0);
        const double cov_x = std::clamp(std::min(c + 1.0, box.x + box.w) - std::max<double>(c, box.x), 0.0, 1.0);
        const double cov = cov_y * cov_x;
        if (cov <= 0.0) continue;
        const int pr = std::clamp(static_cast<int>((r + 0.5 - box.y) / box.h * 8), 0, 7);
        const int pc = std::clamp(static_cast<int>((c + 0.5 - box.x) / box.w * 8), 0, 7);
        img(r, c) = (1.0 - cov) * img(r, c) + cov * pattern(pr, pc);
      }
    for (auto& v : img) v = v + p.noise_sigma * rng.next();
    seq.frames.push_back(std::move(img));
    seq.truth.push_back(box);
  }
  return seq;
}

}  // namespace adtrack
