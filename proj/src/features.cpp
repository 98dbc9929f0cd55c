#include "adtrack/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "adtrack/fft.hpp"

namespace adtrack {

bool FeatureStack::uniform() const {
  for (const auto& c : channels)
    if (c.size() != grid()) return false;
  return true;
}

FeatureStack builtin_extract(const Image& patch, int n_orientations, int cell) {
  if (n_orientations < 1) throw std::invalid_argument("builtin_extract: n_orientations must be >= 1");
  if (cell < 1) throw std::invalid_argument("builtin_extract: cell must be >= 1");
  const int R = patch.rows(), C = patch.cols();
  const GridSize g{R / cell, C / cell};
  if (g.rows == 0 || g.cols == 0)
    throw std::invalid_argument("builtin_extract: patch " + std::to_string(R) + "x" + std::to_string(C) +
                                " holds no complete cell");

  FeatureStack out;
  out.channels.assign(1 + n_orientations, RealMap(g));
  out.labels.push_back("intensity");
  for (int o = 0; o < n_orientations; ++o) out.labels.push_back("orient" + std::to_string(o));

  const double bin_width = std::numbers::pi / n_orientations;
  const double norm = 1.0 / (cell * cell);
  auto at = [&](int r, int c) { return patch(std::clamp(r, 0, R - 1), std::clamp(c, 0, C - 1)); };

  for (int r = 0; r < g.rows * cell; ++r) {
    for (int c = 0; c < g.cols * cell; ++c) {
      const int cr = r / cell, cc = c / cell;
      out.channels[0](cr, cc) += norm * patch(r, c);
      const double gx = 0.5 * (at(r, c + 1) - at(r, c - 1));
      const double gy = 0.5 * (at(r + 1, c) - at(r - 1, c));
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      double theta = std::atan2(gy, gx);
      if (theta < 0) theta += std::numbers::pi;
      if (theta >= std::numbers::pi) theta -= std::numbers::pi;
      const double pos = theta / bin_width;
      const int lo = static_cast<int>(std::floor(pos)) % n_orientations;
      const int hi = (lo + 1) % n_orientations;
      const double frac = pos - std::floor(pos);
      out.channels[1 + lo](cr, cc) += norm * (1.0 - frac) * mag;
      out.channels[1 + hi](cr, cc) += norm * frac * mag;
    }
  }

  double mean = 0.0;
  for (double v : out.channels[0]) mean += v;
  mean /= static_cast<double>(g.area());
  for (double& v : out.channels[0]) v -= mean;
  return out;
}

namespace {

// Destination bins (and weights) of each source frequency index when padding n -> N.
std::vector<std::vector<std::pair<int, double>>> pad_map(int n, int N) {
  std::vector<std::vector<std::pair<int, double>>> map(n);
  for (int i = 0; i < n; ++i) {
    if (N > n && n % 2 == 0 && i == n / 2) {
      map[i] = {{n / 2, 0.5}, {N - n / 2, 0.5}};
    } else {
      const int f = wrap_offset(i, n);
      map[i] = {{(f + N) % N, 1.0}};
    }
  }
  return map;
}

}  // namespace

RealMap resample_fourier(const RealMap& x, GridSize target) {
  if (x.empty()) throw std::invalid_argument("resample_fourier: empty channel");
  if (target.rows < x.rows() || target.cols < x.cols())
    throw std::invalid_argument("resample_fourier: target " + std::to_string(target.rows) + "x" +
                                std::to_string(target.cols) + " smaller than source " + std::to_string(x.rows()) +
                                "x" + std::to_string(x.cols()));
  if (target == x.size()) return x;
  const SpectrumMap X = fft2(x);
  SpectrumMap Y(target);
  const auto rmap = pad_map(x.rows(), target.rows);
  const auto cmap = pad_map(x.cols(), target.cols);
  const double scale = static_cast<double>(target.area()) / static_cast<double>(x.numel());
  for (int r = 0; r < x.rows(); ++r)
    for (int c = 0; c < x.cols(); ++c)
      for (const auto& [dr, wr] : rmap[r])
        for (const auto& [dc, wc] : cmap[c]) Y(dr, dc) += scale * wr * wc * X(r, c);
  return ifft2_real(Y);
}

FeatureStack resample_to_common_grid(const FeatureStack& stack, GridSize target) {
  FeatureStack out;
  out.labels = stack.labels;
  out.channels.resize(stack.channels.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(stack.channels.size()); ++k)
    out.channels[k] = resample_fourier(stack.channels[k], target);
  return out;
}

GridSize common_grid(const FeatureStack& stack) {
  GridSize g{0, 0};
  for (const auto& c : stack.channels) {
    g.rows = std::max(g.rows, c.rows());
    g.cols = std::max(g.cols, c.cols());
  }
  return g;
}

FeatureStack stack_from_frame(const FeatureFrame& frame, const LayerConfig& config) {
  FeatureStack raw;
  for (int d : config.layers) {
    const std::string label = "D" + std::to_string(d);
    const FeatureLayer* layer = frame.find(label);
    if (layer == nullptr)
      throw std::runtime_error("frame " + std::to_string(frame.index) + " has no layer " + label);
    for (std::uint32_t c = 0; c < layer->channels; ++c) {
      RealMap m(static_cast<int>(layer->rows), static_cast<int>(layer->cols));
      for (std::uint32_t h = 0; h < layer->rows; ++h)
        for (std::uint32_t w = 0; w < layer->cols; ++w) m(h, w) = layer->at(h, w, c);
      raw.channels.push_back(std::move(m));
      raw.labels.push_back(label);
    }
  }
  const int K = channel_count(config);
  if (static_cast<int>(raw.size()) != K)
    throw std::runtime_error("frame " + std::to_string(frame.index) + ": " + std::to_string(raw.size()) +
                             " channels for config " + config.label() + ", expected K = " + std::to_string(K));
  return resample_to_common_grid(raw, common_grid(raw));
}

RealMap hann_window(GridSize g) {
  // centred on cell n/2 like the label; the (n + 1) period keeps every weight positive
  auto w1 = [](int n) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = 0.5 + 0.5 * std::cos(2.0 * std::numbers::pi * (i - n / 2) / (n + 1));
    return w;
  };
  const auto wr = w1(g.rows), wc = w1(g.cols);
  RealMap out(g);
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c) out(r, c) = wr[r] * wc[c];
  return out;
}

void multiply_window(FeatureStack& stack, const RealMap& window) {
  for (auto& ch : stack.channels) {
    if (ch.size() != window.size()) throw std::invalid_argument("multiply_window: grid mismatch");
    for (std::size_t t = 0; t < ch.numel(); ++t) ch[t] *= window[t];
  }
}

}  // namespace adtrack
