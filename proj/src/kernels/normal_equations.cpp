#include <stdexcept>

#include "adtrack/kernels.hpp"

namespace adtrack::kernels {

namespace {

GridSize check_samples(std::span<const WeightedSample> samples, std::size_t channels) {
  if (samples.empty()) throw std::invalid_argument("no training samples");
  if (samples[0].channels.empty()) throw std::invalid_argument("sample has no channels");
  const auto g = samples[0].channels[0].size();
  for (const auto& s : samples) {
    if (s.channels.size() != channels) throw std::invalid_argument("sample channel count mismatch");
    for (const auto& c : s.channels)
      if (c.size() != g) throw std::invalid_argument("sample grid mismatch");
  }
  return g;
}

void prepare_out(std::span<SpectrumMap> out, GridSize g) {
  for (auto& o : out)
    if (o.size() != g) o = SpectrumMap(g);
}

}  // namespace

// ---- serial reference -----------------------------------------------------

void serial::apply_data_term(std::span<const WeightedSample> samples, std::span<const SpectrumMap> h,
                             std::span<SpectrumMap> out) {
  const std::size_t K = h.size();
  if (out.size() != K) throw std::invalid_argument("apply_data_term: output channel count mismatch");
  const auto g = check_samples(samples, K);
  prepare_out(out, g);
  for (auto& o : out) o.fill(Complex{});
  SpectrumMap r(g);
  for (const auto& s : samples) {
    r.fill(Complex{});
    for (std::size_t l = 0; l < K; ++l)
      for (std::size_t t = 0; t < r.numel(); ++t) r[t] += s.channels[l][t] * h[l][t];
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t t = 0; t < r.numel(); ++t) out[k][t] += s.weight * (std::conj(s.channels[k][t]) * r[t]);
  }
}

void serial::data_rhs(std::span<const WeightedSample> samples, const SpectrumMap& y, std::span<SpectrumMap> out) {
  const std::size_t K = out.size();
  const auto g = check_samples(samples, K);
  if (y.size() != g) throw std::invalid_argument("data_rhs: label grid mismatch");
  prepare_out(out, g);
  for (auto& o : out) o.fill(Complex{});
  for (const auto& s : samples)
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t t = 0; t < y.numel(); ++t) out[k][t] += s.weight * (std::conj(s.channels[k][t]) * y[t]);
}

void serial::data_diagonal(std::span<const WeightedSample> samples, std::span<SpectrumMap> out) {
  const std::size_t K = out.size();
  const auto g = check_samples(samples, K);
  prepare_out(out, g);
  for (auto& o : out) o.fill(Complex{});
  for (const auto& s : samples)
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t t = 0; t < g.area(); ++t) out[k][t] += s.weight * std::norm(s.channels[k][t]);
}

// ---- OpenMP ---------------------------------------------------------------

void omp::apply_data_term(std::span<const WeightedSample> samples, std::span<const SpectrumMap> h,
                          std::span<SpectrumMap> out) {
  const std::size_t K = h.size();
  if (out.size() != K) throw std::invalid_argument("apply_data_term: output channel count mismatch");
  const auto g = check_samples(samples, K);
  prepare_out(out, g);
  const auto n = static_cast<std::ptrdiff_t>(g.area());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; k < K; ++k) out[k][t] = Complex{};
    for (const auto& s : samples) {
      Complex r{};
      for (std::size_t l = 0; l < K; ++l) r += s.channels[l][t] * h[l][t];
      for (std::size_t k = 0; k < K; ++k) out[k][t] += s.weight * (std::conj(s.channels[k][t]) * r);
    }
  }
}

void omp::data_rhs(std::span<const WeightedSample> samples, const SpectrumMap& y, std::span<SpectrumMap> out) {
  const std::size_t K = out.size();
  const auto g = check_samples(samples, K);
  if (y.size() != g) throw std::invalid_argument("data_rhs: label grid mismatch");
  prepare_out(out, g);
  const auto n = static_cast<std::ptrdiff_t>(g.area());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; k < K; ++k) out[k][t] = Complex{};
    for (const auto& s : samples)
      for (std::size_t k = 0; k < K; ++k) out[k][t] += s.weight * (std::conj(s.channels[k][t]) * y[t]);
  }
}

void omp::data_diagonal(std::span<const WeightedSample> samples, std::span<SpectrumMap> out) {
  const std::size_t K = out.size();
  const auto g = check_samples(samples, K);
  prepare_out(out, g);
  const auto n = static_cast<std::ptrdiff_t>(g.area());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; k < K; ++k) out[k][t] = Complex{};
    for (const auto& s : samples)
      for (std::size_t k = 0; k < K; ++k) out[k][t] += s.weight * std::norm(s.channels[k][t]);
  }
}

// ---- dispatch -------------------------------------------------------------

void apply_data_term(std::span<const WeightedSample> samples, std::span<const SpectrumMap> h,
                     std::span<SpectrumMap> out, Backend backend) {
  if (backend == Backend::Serial)
    serial::apply_data_term(samples, h, out);
  else
    omp::apply_data_term(samples, h, out);
}

void data_rhs(std::span<const WeightedSample> samples, const SpectrumMap& y, std::span<SpectrumMap> out,
              Backend backend) {
  if (backend == Backend::Serial)
    serial::data_rhs(samples, y, out);
  else
    omp::data_rhs(samples, y, out);
}

void data_diagonal(std::span<const WeightedSample> samples, std::span<SpectrumMap> out, Backend backend) {
  if (backend == Backend::Serial)
    serial::data_diagonal(samples, out);
  else
    omp::data_diagonal(samples, out);
}

}  // namespace adtrack::kernels
