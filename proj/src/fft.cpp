#include "adtrack/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace adtrack {

namespace {

// fftw_plan_* is not thread safe; fftw_execute_dft on an existing plan is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int rows, int cols, int sign) {
    std::lock_guard lock(mu_);
    const auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<Complex> in(static_cast<std::size_t>(rows) * cols), out(in.size());
    fftw_plan p = fftw_plan_dft_2d(rows, cols, reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

void execute(const SpectrumMap& in, SpectrumMap& out, int sign) {
  if (in.empty()) return;
  fftw_plan p = plans().get(in.rows(), in.cols(), sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

RealMap circshift(const RealMap& x, int dr, int dc) {
  RealMap out(x.size());
  const int R = x.rows(), C = x.cols();
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c) out((r + dr) % R, (c + dc) % C) = x(r, c);
  return out;
}

}  // namespace

SpectrumMap fft2(const RealMap& x) {
  SpectrumMap in(x.size());
  for (std::size_t i = 0; i < x.numel(); ++i) in[i] = x[i];
  SpectrumMap out(x.size());
  execute(in, out, FFTW_FORWARD);
  return out;
}

SpectrumMap fft2(const SpectrumMap& x) {
  SpectrumMap out(x.size());
  execute(x, out, FFTW_FORWARD);
  return out;
}

SpectrumMap ifft2(const SpectrumMap& X) {
  SpectrumMap out(X.size());
  execute(X, out, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(X.numel());
  for (auto& v : out) v *= scale;
  return out;
}

RealMap ifft2_real(const SpectrumMap& X) {
  const auto z = ifft2(X);
  RealMap out(X.size());
  for (std::size_t i = 0; i < z.numel(); ++i) out[i] = z[i].real();
  return out;
}

std::vector<SpectrumMap> fft2_all(std::span<const RealMap> channels) {
  std::vector<SpectrumMap> out(channels.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(channels.size()); ++k) out[k] = fft2(channels[k]);
  return out;
}

RealMap fftshift(const RealMap& x) { return circshift(x, x.rows() / 2, x.cols() / 2); }

RealMap ifftshift(const RealMap& x) {
  return circshift(x, x.rows() - x.rows() / 2, x.cols() - x.cols() / 2);
}

}  // namespace adtrack
