#pragma once

// Per-frequency inner loops of the filter solvers and detector.
//
// Every kernel exists twice: a plain serial reference (channel-major, written for
// readability) and an OpenMP version (frequency-major, parallel over frequency rows).
// Both perform the same floating-point operations in the same order for each output
// element, so results are bitwise identical regardless of backend or thread count.

#include <span>

#include "adtrack/array2d.hpp"

namespace adtrack::kernels {

enum class Backend { Serial, OpenMP };

/// Backend used by the library when the caller does not choose one.
Backend default_backend();
void set_default_backend(Backend b);

struct WeightedSample {
  std::span<const SpectrumMap> channels;
  double weight = 0.0;
};

/// out = sum_k filters[k] .* features[k]
void accumulate_response(std::span<const SpectrumMap> filters, std::span<const SpectrumMap> features,
                         SpectrumMap& out, Backend backend = default_backend());

/// out[k] = sum_j weight_j conj(x_jk) .* (sum_l x_jl .* h[l])
void apply_data_term(std::span<const WeightedSample> samples, std::span<const SpectrumMap> h,
                     std::span<SpectrumMap> out, Backend backend = default_backend());

/// out[k] = sum_j weight_j conj(x_jk) .* y
void data_rhs(std::span<const WeightedSample> samples, const SpectrumMap& y, std::span<SpectrumMap> out,
              Backend backend = default_backend());

/// out[k] = sum_j weight_j |x_jk|^2  (diagonal of the data term)
void data_diagonal(std::span<const WeightedSample> samples, std::span<SpectrumMap> out,
                   Backend backend = default_backend());

/// ADMM auxiliary-filter step, solved per frequency with Sherman-Morrison:
///   (v v^H + mu I) g = v y - dual + mu anchor,   v = conj(x)
void admm_filter_step(std::span<const SpectrumMap> x, const SpectrumMap& y, std::span<const SpectrumMap> dual,
                      std::span<const SpectrumMap> anchor, double mu, std::span<SpectrumMap> g,
                      Backend backend = default_backend());

namespace serial {
void accumulate_response(std::span<const SpectrumMap> filters, std::span<const SpectrumMap> features,
                         SpectrumMap& out);
void apply_data_term(std::span<const WeightedSample> samples, std::span<const SpectrumMap> h,
                     std::span<SpectrumMap> out);
void data_rhs(std::span<const WeightedSample> samples, const SpectrumMap& y, std::span<SpectrumMap> out);
void data_diagonal(std::span<const WeightedSample> samples, std::span<SpectrumMap> out);
void admm_filter_step(std::span<const SpectrumMap> x, const SpectrumMap& y, std::span<const SpectrumMap> dual,
                      std::span<const SpectrumMap> anchor, double mu, std::span<SpectrumMap> g);
}  // namespace serial

namespace omp {
void accumulate_response(std::span<const SpectrumMap> filters, std::span<const SpectrumMap> features,
                         SpectrumMap& out);
void apply_data_term(std::span<const WeightedSample> samples, std::span<const SpectrumMap> h,
                     std::span<SpectrumMap> out);
void data_rhs(std::span<const WeightedSample> samples, const SpectrumMap& y, std::span<SpectrumMap> out);
void data_diagonal(std::span<const WeightedSample> samples, std::span<SpectrumMap> out);
void admm_filter_step(std::span<const SpectrumMap> x, const SpectrumMap& y, std::span<const SpectrumMap> dual,
                      std::span<const SpectrumMap> anchor, double mu, std::span<SpectrumMap> g);
}  // namespace omp

}  // namespace adtrack::kernels
