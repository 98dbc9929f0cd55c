#pragma once

#include <stdexcept>
#include <vector>

#include "adtrack/dcf.hpp"
#include "adtrack/kernels.hpp"

namespace adtrack {

struct BacfConfig {
  double lambda = 0.01;
  double crop_ratio = 0.5;  // filter support relative to the sample grid, per dimension
  int iterations = 15;
  double mu = 1.0;
  double mu_scale = 10.0;
  double mu_max = 1000.0;
};

struct AdmmIterate {
  double lagrangian = 0.0;
  double residual = 0.0;   // ||g - P^T h|| in the spatial domain
  double objective = 0.0;  // data + ridge energy of the feasible filter P^T h
  double mu = 0.0;
};

struct BacfResult {
  std::vector<SpectrumMap> filters;  // FFT(P^T h): the constrained filter used for detection
  std::vector<RealMap> support;      // h on the full grid, zero outside the crop
  std::vector<AdmmIterate> trace;
};

class AdmmError : public std::runtime_error {
 public:
  AdmmError(const std::string& what, int iteration) : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// Rows and columns of the crop window: offsets |d| <= round(ratio * n / 2) around (0, 0), wrapped,
/// so the window is symmetric and covers the whole axis once 2m + 1 >= n.
GridSize bacf_crop_size(GridSize grid, double crop_ratio);
/// 1 inside the crop window (filter layout), 0 outside.
RealMap bacf_crop_mask(GridSize grid, double crop_ratio);

/// Energy 1/(2T) ||y - sum_k x_k g_k||^2 + lambda/2 sum_k ||h_k||^2 with g = FFT(P^T h), T = cells.
/// Equals the spatial sum 1/2 ||y - sum_k h_k * x_k||^2 + lambda/2 ||h||^2 by Parseval.
double bacf_objective(std::span<const SpectrumMap> x, const SpectrumMap& y, std::span<const RealMap> h,
                      double lambda);

/// ADMM on the background-aware objective for one (weight-averaged) sample `x`. Starts at h = 0.
BacfResult train_bacf(std::span<const SpectrumMap> x, const GaussianLabel& y, const BacfConfig& cfg,
                      kernels::Backend backend = kernels::default_backend());

}  // namespace adtrack
