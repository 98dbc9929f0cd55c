#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "adtrack/array2d.hpp"
#include "adtrack/dictionary.hpp"
#include "adtrack/kernels.hpp"

namespace adtrack {

// Conventions shared by the solvers and the detector:
//  * a filter is K spectra h^k on the feature-cell grid (unnormalized DFT);
//  * the response to features x is r = IFFT(sum_k h^k .* x^k), the circular convolution
//    of h with x, so shifting x by d shifts r by d;
//  * the label peaks at cell (rows/2, cols/2); the filter's spatial support is centred on
//    offset (0, 0) with wrap-around.

struct GaussianLabel {
  GridSize grid;
  double sigma = 0.0;
  RealMap values;
  SpectrumMap spectrum;

  int center_row() const { return grid.rows / 2; }
  int center_col() const { return grid.cols / 2; }
};

/// y(p) = exp(-|p - c|^2 / (2 sigma^2)) with c = (rows/2, cols/2). Throws for sigma <= 0 or an empty grid.
GaussianLabel make_gaussian_label(GridSize grid, double sigma);

struct SpatialRegularizer {
  RealMap weights;         // centred layout: the target sits at (rows/2, cols/2)
  RealMap filter_weights;  // same map with the target moved to offset (0, 0)
  RealMap filter_weights_sq;
  double min_w = 0.0;
  double mean_sq = 0.0;    // mean of w^2, used by the preconditioner
};

/// w = min_w + slope * (ey^2 + ex^2), where ey = max(0, |dy| - h/2) / h is the distance outside the
/// target extent (h, w) in units of the target size. Constant min_w inside the target.
SpatialRegularizer make_spatial_regularizer(GridSize grid, double target_rows, double target_cols, double min_w,
                                            double slope);
/// Constant map, i.e. the plain ridge penalty sqrt(lambda) everywhere.
SpatialRegularizer make_constant_regularizer(GridSize grid, double value);

enum class SolverKind { Eco, Bacf };
std::string_view solver_key(SolverKind s);
SolverKind parse_solver(std::string_view key);

struct FilterModel {
  std::vector<SpectrumMap> filters;
  GridSize grid;
  SolverKind solver = SolverKind::Eco;
  std::optional<LayerConfig> config;

  std::size_t channels() const { return filters.size(); }
};

struct ResponseMap {
  RealMap values;
  double peak_row = 0.0;  // sub-cell location, within one cell of the discrete arg-max
  double peak_col = 0.0;
  double peak_value = 0.0;
  int newton_steps = 0;
  bool refined = false;   // false when the discrete arg-max was kept
};

/// Response of `filters` to the feature spectra `x`, with Newton refinement of the peak on the
/// trigonometric interpolant (at most 5 steps; falls back to the discrete arg-max when the Hessian
/// is not negative definite or a step leaves the arg-max cell neighbourhood).
ResponseMap detect(std::span<const SpectrumMap> filters, std::span<const SpectrumMap> x,
                   kernels::Backend backend = kernels::default_backend());
ResponseMap detect(const FilterModel& model, std::span<const SpectrumMap> x,
                   kernels::Backend backend = kernels::default_backend());

/// Value, gradient and Hessian of the band-limited interpolant of a response spectrum at (py, px).
struct InterpolantDerivatives {
  double value = 0.0;
  double gy = 0.0, gx = 0.0;
  double hyy = 0.0, hxx = 0.0, hxy = 0.0;
};
InterpolantDerivatives evaluate_interpolant(const SpectrumMap& spectrum, double py, double px);

}  // namespace adtrack
