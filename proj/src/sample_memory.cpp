#include "adtrack/sample_memory.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace adtrack {

SampleMemory::SampleMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("SampleMemory: capacity must be positive");
}

double SampleMemory::distance(const Sample& a, const Sample& b) {
  if (a.size() != b.size()) throw std::invalid_argument("SampleMemory: channel count mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].size() != b[k].size()) throw std::invalid_argument("SampleMemory: grid mismatch");
    for (std::size_t t = 0; t < a[k].numel(); ++t) d += std::norm(a[k][t] - b[k][t]);
  }
  return d;
}

void SampleMemory::update(Sample sample, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("SampleMemory: learning rate must lie in (0, 1]");
  if (!samples_.empty()) distance(samples_.front(), sample);  // shape check before mutating

  for (auto& w : weights_) w *= (1.0 - eta);
  // drop samples whose weight vanished (eta = 1 replaces the memory)
  for (std::size_t i = samples_.size(); i-- > 0;) {
    if (weights_[i] > 0.0) continue;
    samples_.erase(samples_.begin() + i);
    weights_.erase(weights_.begin() + i);
    dist_.erase(dist_.begin() + i);
    for (auto& row : dist_) row.erase(row.begin() + i);
  }

  std::vector<double> row(samples_.size() + 1, 0.0);
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    row[i] = distance(samples_[i], sample);
    dist_[i].push_back(row[i]);
  }
  dist_.push_back(std::move(row));
  samples_.push_back(std::move(sample));
  weights_.push_back(eta);

  while (samples_.size() > capacity_) merge_closest();

  double total = 0.0;
  for (double w : weights_) total += w;
  for (auto& w : weights_) w /= total;
}

void SampleMemory::merge_closest() {
  std::size_t bi = 0, bj = 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples_.size(); ++i)
    for (std::size_t j = i + 1; j < samples_.size(); ++j)
      if (dist_[i][j] < best) {
        best = dist_[i][j];
        bi = i;
        bj = j;
      }

  const double wi = weights_[bi], wj = weights_[bj], w = wi + wj;
  Sample& a = samples_[bi];
  const Sample& b = samples_[bj];
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t t = 0; t < a[k].numel(); ++t) a[k][t] = (wi * a[k][t] + wj * b[k][t]) / w;
  weights_[bi] = w;

  samples_.erase(samples_.begin() + bj);
  weights_.erase(weights_.begin() + bj);
  dist_.erase(dist_.begin() + bj);
  for (auto& row : dist_) row.erase(row.begin() + bj);
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (i == bi) continue;
    dist_[i][bi] = dist_[bi][i] = distance(samples_[i], samples_[bi]);
  }
}

std::vector<kernels::WeightedSample> SampleMemory::weighted() const {
  std::vector<kernels::WeightedSample> out;
  out.reserve(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) out.push_back({samples_[i], weights_[i]});
  return out;
}

SampleMemory::Sample SampleMemory::weighted_mean() const {
  if (samples_.empty()) throw std::logic_error("SampleMemory: empty");
  Sample mean(samples_.front().size());
  for (std::size_t k = 0; k < mean.size(); ++k) mean[k] = SpectrumMap(samples_.front()[k].size());
  for (std::size_t i = 0; i < samples_.size(); ++i)
    for (std::size_t k = 0; k < mean.size(); ++k)
      for (std::size_t t = 0; t < mean[k].numel(); ++t) mean[k][t] += weights_[i] * samples_[i][k][t];
  return mean;
}

}  // namespace adtrack
