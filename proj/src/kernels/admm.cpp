#include <stdexcept>
#include <vector>

#include "adtrack/kernels.hpp"

namespace adtrack::kernels {

namespace {

void check_admm_args(std::span<const SpectrumMap> x, const SpectrumMap& y, std::span<const SpectrumMap> dual,
                     std::span<const SpectrumMap> anchor, double mu, std::span<SpectrumMap> g) {
  const std::size_t K = x.size();
  if (K == 0) throw std::invalid_argument("admm_filter_step: no channels");
  if (dual.size() != K || anchor.size() != K || g.size() != K)
    throw std::invalid_argument("admm_filter_step: channel count mismatch");
  if (!(mu > 0.0)) throw std::invalid_argument("admm_filter_step: penalty must be positive");
  const auto sz = y.size();
  for (std::size_t k = 0; k < K; ++k) {
    if (x[k].size() != sz || dual[k].size() != sz || anchor[k].size() != sz)
      throw std::invalid_argument("admm_filter_step: grid mismatch");
    if (g[k].size() != sz) g[k] = SpectrumMap(sz);
  }
}

}  // namespace

void serial::admm_filter_step(std::span<const SpectrumMap> x, const SpectrumMap& y,
                              std::span<const SpectrumMap> dual, std::span<const SpectrumMap> anchor, double mu,
                              std::span<SpectrumMap> g) {
  check_admm_args(x, y, dual, anchor, mu, g);
  const std::size_t K = x.size();
  const std::size_t n = y.numel();
  std::vector<SpectrumMap> b(K, SpectrumMap(y.size()));
  SpectrumMap vhb(y.size()), vhv(y.size());
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t t = 0; t < n; ++t) b[k][t] = std::conj(x[k][t]) * y[t] - dual[k][t] + mu * anchor[k][t];
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t t = 0; t < n; ++t) {
      vhb[t] += x[k][t] * b[k][t];
      vhv[t] += std::norm(x[k][t]);
    }
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t t = 0; t < n; ++t)
      g[k][t] = (b[k][t] - std::conj(x[k][t]) * (vhb[t] / (mu + vhv[t].real()))) / mu;
}

void omp::admm_filter_step(std::span<const SpectrumMap> x, const SpectrumMap& y, std::span<const SpectrumMap> dual,
                           std::span<const SpectrumMap> anchor, double mu, std::span<SpectrumMap> g) {
  check_admm_args(x, y, dual, anchor, mu, g);
  const std::size_t K = x.size();
  const auto n = static_cast<std::ptrdiff_t>(y.numel());
#pragma omp parallel
  {
    std::vector<Complex> b(K);
#pragma omp for schedule(static)
    for (std::ptrdiff_t t = 0; t < n; ++t) {
      Complex vhb{}, vhv{};
      for (std::size_t k = 0; k < K; ++k) b[k] = std::conj(x[k][t]) * y[t] - dual[k][t] + mu * anchor[k][t];
      for (std::size_t k = 0; k < K; ++k) {
        vhb += x[k][t] * b[k];
        vhv += std::norm(x[k][t]);
      }
      for (std::size_t k = 0; k < K; ++k) g[k][t] = (b[k] - std::conj(x[k][t]) * (vhb / (mu + vhv.real()))) / mu;
    }
  }
}

void admm_filter_step(std::span<const SpectrumMap> x, const SpectrumMap& y, std::span<const SpectrumMap> dual,
                      std::span<const SpectrumMap> anchor, double mu, std::span<SpectrumMap> g, Backend backend) {
  if (backend == Backend::Serial)
    serial::admm_filter_step(x, y, dual, anchor, mu, g);
  else
    omp::admm_filter_step(x, y, dual, anchor, mu, g);
}

}  // namespace adtrack::kernels
