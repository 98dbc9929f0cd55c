#pragma once

#include <stdexcept>
#include <vector>

#include "adtrack/dcf.hpp"
#include "adtrack/kernels.hpp"

namespace adtrack {

struct CgOptions {
  int max_iters = 100;
  double tol = 1e-6;  // on ||r|| / ||b||
};

struct EcoResult {
  std::vector<SpectrumMap> filters;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  std::vector<double> trace;   // relative residual ||r|| / ||b|| before the first and after every iteration
  std::vector<double> energy;  // x^H A x / 2 - Re(b^H x) at the same points
};

/// Raised when the residual, measured in the A^-1 norm, grows for 5 consecutive iterations, or when
/// the operator turns out not to be positive definite.
class CgDivergence : public std::runtime_error {
 public:
  CgDivergence(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

/// Solves the spatially regularized normal equations, per channel k:
///   sum_j phi_j conj(x_jk) sum_l x_jl h_l + FFT(w^2 . IFFT(h_k)) = sum_j phi_j conj(x_jk) y
/// by Jacobi-preconditioned conjugate gradient. `warm_start` seeds the iteration.
EcoResult train_eco(std::span<const kernels::WeightedSample> samples, const SpatialRegularizer& reg,
                    const GaussianLabel& y, const std::vector<SpectrumMap>* warm_start = nullptr,
                    const CgOptions& cg = {}, kernels::Backend backend = kernels::default_backend());

/// Left-hand operator of the normal equations; exposed for tests.
void apply_eco_operator(std::span<const kernels::WeightedSample> samples, const SpatialRegularizer& reg,
                        std::span<const SpectrumMap> h, std::span<SpectrumMap> out,
                        kernels::Backend backend = kernels::default_backend());

}  // namespace adtrack
