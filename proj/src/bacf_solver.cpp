#include "adtrack/bacf_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adtrack/fft.hpp"

namespace adtrack {

namespace {

double squared_norm(const SpectrumMap& a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return s;
}

// Half-width m of the window |offset| <= m; 2m + 1 >= n covers the whole axis.
int crop_half_width(int n, double ratio) { return std::max(0, static_cast<int>(std::lround(0.5 * ratio * n))); }

}  // namespace

GridSize bacf_crop_size(GridSize grid, double crop_ratio) {
  return {std::min(grid.rows, 2 * crop_half_width(grid.rows, crop_ratio) + 1),
          std::min(grid.cols, 2 * crop_half_width(grid.cols, crop_ratio) + 1)};
}

RealMap bacf_crop_mask(GridSize grid, double crop_ratio) {
  const int mr = crop_half_width(grid.rows, crop_ratio), mc = crop_half_width(grid.cols, crop_ratio);
  RealMap mask(grid);
  for (int r = 0; r < grid.rows; ++r)
    for (int c = 0; c < grid.cols; ++c) {
      const int dr = std::abs(wrap_offset(r, grid.rows)), dc = std::abs(wrap_offset(c, grid.cols));
      if (dr <= mr && dc <= mc) mask(r, c) = 1.0;
    }
  return mask;
}

double bacf_objective(std::span<const SpectrumMap> x, const SpectrumMap& y, std::span<const RealMap> h,
                      double lambda) {
  if (x.size() != h.size()) throw std::invalid_argument("bacf_objective: channel count mismatch");
  const double T = static_cast<double>(y.numel());
  SpectrumMap residual = y;
  double ridge = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const SpectrumMap hk = fft2(h[k]);
    for (std::size_t t = 0; t < y.numel(); ++t) residual[t] -= x[k][t] * hk[t];
    for (double v : h[k]) ridge += v * v;
  }
  return squared_norm(residual) / (2.0 * T) + 0.5 * lambda * ridge;
}

BacfResult train_bacf(std::span<const SpectrumMap> x, const GaussianLabel& y, const BacfConfig& cfg,
                      kernels::Backend backend) {
  if (!(cfg.crop_ratio > 0.0 && cfg.crop_ratio < 1.0)) throw std::invalid_argument("train_bacf: crop ratio must lie in (0, 1)");
  if (cfg.iterations < 1) throw std::invalid_argument("train_bacf: iterations must be >= 1");
  if (!(cfg.lambda >= 0.0)) throw std::invalid_argument("train_bacf: lambda must be non-negative");
  if (!(cfg.mu > 0.0) || !(cfg.mu_scale >= 1.0) || !(cfg.mu_max >= cfg.mu))
    throw std::invalid_argument("train_bacf: invalid penalty schedule");
  if (x.empty()) throw std::invalid_argument("train_bacf: no channels");
  const GridSize g = y.grid;
  for (const auto& c : x)
    if (c.size() != g) throw std::invalid_argument("train_bacf: sample is not on the label grid");

  const std::size_t K = x.size();
  const double T = static_cast<double>(g.area());
  const RealMap mask = bacf_crop_mask(g, cfg.crop_ratio);

  BacfResult res;
  res.support.assign(K, RealMap(g));
  res.filters.assign(K, SpectrumMap(g));  // FFT(P^T h)
  std::vector<SpectrumMap> gf(K, SpectrumMap(g)), dual(K, SpectrumMap(g));
  double mu = cfg.mu;

  for (int it = 1; it <= cfg.iterations; ++it) {
    kernels::admm_filter_step(x, y.spectrum, dual, res.filters, mu, gf, backend);

    const auto Kp = static_cast<std::ptrdiff_t>(K);
#pragma omp parallel for schedule(static) if (backend == kernels::Backend::OpenMP)
    for (std::ptrdiff_t k = 0; k < Kp; ++k) {
      const RealMap gs = ifft2_real(gf[k]);
      const RealMap zs = ifft2_real(dual[k]);
      for (std::size_t t = 0; t < g.area(); ++t)
        res.support[k][t] = mask[t] * (mu * gs[t] + zs[t]) / (cfg.lambda + mu);
      res.filters[k] = fft2(res.support[k]);
    }

    AdmmIterate rec;
    rec.mu = mu;
    SpectrumMap data = y.spectrum;
    double gap = 0.0, coupling = 0.0, ridge = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t t = 0; t < g.area(); ++t) {
        const Complex diff = gf[k][t] - res.filters[k][t];
        data[t] -= x[k][t] * gf[k][t];
        gap += std::norm(diff);
        coupling += (std::conj(dual[k][t]) * diff).real();
      }
      for (double v : res.support[k]) ridge += v * v;
    }
    rec.residual = std::sqrt(gap / T);
    rec.lagrangian = squared_norm(data) / (2.0 * T) + 0.5 * cfg.lambda * ridge + coupling / T + 0.5 * mu * gap / T;
    rec.objective = bacf_objective(x, y.spectrum, res.support, cfg.lambda);
    if (!std::isfinite(rec.residual) || !std::isfinite(rec.lagrangian) || !std::isfinite(rec.objective))
      throw AdmmError("train_bacf: non-finite value at iteration " + std::to_string(it), it);
    res.trace.push_back(rec);

    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t t = 0; t < g.area(); ++t) dual[k][t] += mu * (gf[k][t] - res.filters[k][t]);
    mu = std::min(cfg.mu_scale * mu, cfg.mu_max);
  }
  return res;
}

}  // namespace adtrack
