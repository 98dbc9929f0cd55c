#include <atomic>
#include <stdexcept>

#include "adtrack/kernels.hpp"

namespace adtrack::kernels {

namespace {
std::atomic<Backend> g_backend{Backend::OpenMP};
}

Backend default_backend() { return g_backend.load(); }
void set_default_backend(Backend b) { g_backend.store(b); }

namespace {

void check_response_args(std::span<const SpectrumMap> filters, std::span<const SpectrumMap> features,
                         SpectrumMap& out) {
  if (filters.size() != features.size())
    throw std::invalid_argument("accumulate_response: filter/feature channel count mismatch");
  if (filters.empty()) throw std::invalid_argument("accumulate_response: no channels");
  const auto g = filters[0].size();
  for (std::size_t k = 0; k < filters.size(); ++k)
    if (filters[k].size() != g || features[k].size() != g)
      throw std::invalid_argument("accumulate_response: grid mismatch");
  if (out.size() != g) out = SpectrumMap(g);
}

}  // namespace

void serial::accumulate_response(std::span<const SpectrumMap> filters, std::span<const SpectrumMap> features,
                                 SpectrumMap& out) {
  check_response_args(filters, features, out);
  out.fill(Complex{});
  for (std::size_t k = 0; k < filters.size(); ++k)
    for (std::size_t t = 0; t < out.numel(); ++t) out[t] += filters[k][t] * features[k][t];
}

void omp::accumulate_response(std::span<const SpectrumMap> filters, std::span<const SpectrumMap> features,
                              SpectrumMap& out) {
  check_response_args(filters, features, out);
  const auto n = static_cast<std::ptrdiff_t>(out.numel());
  const std::size_t K = filters.size();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    Complex acc{};
    for (std::size_t k = 0; k < K; ++k) acc += filters[k][t] * features[k][t];
    out[t] = acc;
  }
}

void accumulate_response(std::span<const SpectrumMap> filters, std::span<const SpectrumMap> features,
                         SpectrumMap& out, Backend backend) {
  if (backend == Backend::Serial)
    serial::accumulate_response(filters, features, out);
  else
    omp::accumulate_response(filters, features, out);
}

}  // namespace adtrack::kernels
