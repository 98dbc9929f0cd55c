#include "adtrack/dcf.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "adtrack/fft.hpp"

namespace adtrack {

GaussianLabel make_gaussian_label(GridSize grid, double sigma) {
  if (grid.rows < 1 || grid.cols < 1) throw std::invalid_argument("make_gaussian_label: empty grid");
  if (!(sigma > 0.0)) throw std::invalid_argument("make_gaussian_label: sigma must be positive");
  GaussianLabel y;
  y.grid = grid;
  y.sigma = sigma;
  y.values = RealMap(grid);
  const int cr = y.center_row(), cc = y.center_col();
  for (int r = 0; r < grid.rows; ++r)
    for (int c = 0; c < grid.cols; ++c) {
      const double d2 = double(r - cr) * (r - cr) + double(c - cc) * (c - cc);
      y.values(r, c) = std::exp(-d2 / (2.0 * sigma * sigma));
    }
  y.spectrum = fft2(y.values);
  return y;
}

namespace {

SpatialRegularizer finish_regularizer(RealMap w, double min_w) {
  SpatialRegularizer reg;
  reg.min_w = min_w;
  reg.filter_weights = ifftshift(w);
  reg.weights = std::move(w);
  reg.filter_weights_sq = RealMap(reg.weights.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < reg.filter_weights.numel(); ++t) {
    reg.filter_weights_sq[t] = reg.filter_weights[t] * reg.filter_weights[t];
    acc += reg.filter_weights_sq[t];
  }
  reg.mean_sq = acc / static_cast<double>(reg.weights.numel());
  return reg;
}

}  // namespace

SpatialRegularizer make_spatial_regularizer(GridSize grid, double target_rows, double target_cols, double min_w,
                                            double slope) {
  if (grid.rows < 1 || grid.cols < 1) throw std::invalid_argument("make_spatial_regularizer: empty grid");
  if (!(min_w > 0.0)) throw std::invalid_argument("make_spatial_regularizer: min_w must be positive");
  if (!(slope >= 0.0)) throw std::invalid_argument("make_spatial_regularizer: slope must be non-negative");
  if (!(target_rows > 0.0) || !(target_cols > 0.0))
    throw std::invalid_argument("make_spatial_regularizer: target extent must be positive");
  if (target_rows > grid.rows || target_cols > grid.cols)
    throw std::invalid_argument("make_spatial_regularizer: target extent larger than grid");
  RealMap w(grid);
  const int cr = grid.rows / 2, cc = grid.cols / 2;
  for (int r = 0; r < grid.rows; ++r)
    for (int c = 0; c < grid.cols; ++c) {
      const double ey = std::max(0.0, std::abs(r - cr) - 0.5 * target_rows) / target_rows;
      const double ex = std::max(0.0, std::abs(c - cc) - 0.5 * target_cols) / target_cols;
      w(r, c) = min_w + slope * (ey * ey + ex * ex);
    }
  return finish_regularizer(std::move(w), min_w);
}

SpatialRegularizer make_constant_regularizer(GridSize grid, double value) {
  if (!(value > 0.0)) throw std::invalid_argument("make_constant_regularizer: value must be positive");
  return finish_regularizer(RealMap(grid, value), value);
}

std::string_view solver_key(SolverKind s) { return s == SolverKind::Eco ? "eco" : "bacf"; }

SolverKind parse_solver(std::string_view key) {
  if (key == "eco") return SolverKind::Eco;
  if (key == "bacf") return SolverKind::Bacf;
  throw std::invalid_argument("unknown solver '" + std::string(key) + "' (expected eco or bacf)");
}

InterpolantDerivatives evaluate_interpolant(const SpectrumMap& spectrum, double py, double px) {
  const int H = spectrum.rows(), W = spectrum.cols();
  const double two_pi = 2.0 * std::numbers::pi;
  InterpolantDerivatives d;
  for (int r = 0; r < H; ++r) {
    const double wy = two_pi * wrap_offset(r, H) / H;
    for (int c = 0; c < W; ++c) {
      const double wx = two_pi * wrap_offset(c, W) / W;
      const double phase = wy * py + wx * px;
      const Complex e = spectrum(r, c) * Complex(std::cos(phase), std::sin(phase));
      // d/dp e^{i w p} = i w e^{i w p}
      d.value += e.real();
      d.gy += -wy * e.imag();
      d.gx += -wx * e.imag();
      d.hyy += -wy * wy * e.real();
      d.hxx += -wx * wx * e.real();
      d.hxy += -wy * wx * e.real();
    }
  }
  const double n = static_cast<double>(spectrum.numel());
  d.value /= n;
  d.gy /= n;
  d.gx /= n;
  d.hyy /= n;
  d.hxx /= n;
  d.hxy /= n;
  return d;
}

ResponseMap detect(std::span<const SpectrumMap> filters, std::span<const SpectrumMap> x, kernels::Backend backend) {
  SpectrumMap spectrum;
  kernels::accumulate_response(filters, x, spectrum, backend);
  ResponseMap out;
  out.values = ifft2_real(spectrum);

  std::size_t best = 0;
  for (std::size_t t = 1; t < out.values.numel(); ++t)
    if (out.values[t] > out.values[best]) best = t;
  const int W = out.values.cols();
  const int br = static_cast<int>(best) / W, bc = static_cast<int>(best) % W;
  out.peak_row = br;
  out.peak_col = bc;
  out.peak_value = out.values[best];

  double py = br, px = bc;
  for (int step = 0; step < 5; ++step) {
    const auto d = evaluate_interpolant(spectrum, py, px);
    const double det = d.hyy * d.hxx - d.hxy * d.hxy;
    if (!(d.hyy < 0.0 && det > 0.0)) break;
    const double sy = (d.hxx * d.gy - d.hxy * d.gx) / det;
    const double sx = (d.hyy * d.gx - d.hxy * d.gy) / det;
    const double ny = py - sy, nx = px - sx;
    if (std::abs(ny - br) > 1.0 || std::abs(nx - bc) > 1.0) break;
    py = ny;
    px = nx;
    out.newton_steps = step + 1;
    if (std::abs(sy) < 1e-12 && std::abs(sx) < 1e-12) break;
  }
  if (out.newton_steps > 0) {
    const double v = evaluate_interpolant(spectrum, py, px).value;
    if (v >= out.peak_value) {
      out.refined = true;
      out.peak_row = py;
      out.peak_col = px;
      out.peak_value = v;
    }
  }
  return out;
}

ResponseMap detect(const FilterModel& model, std::span<const SpectrumMap> x, kernels::Backend backend) {
  if (x.size() != model.channels())
    throw std::invalid_argument("detect: " + std::to_string(x.size()) + " feature channels, model has " +
                                std::to_string(model.channels()));
  for (const auto& c : x)
    if (c.size() != model.grid) throw std::invalid_argument("detect: feature grid does not match the model");
  return detect(std::span<const SpectrumMap>(model.filters), x, backend);
}

}  // namespace adtrack
