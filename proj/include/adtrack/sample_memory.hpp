#pragma once

#include <vector>

#include "adtrack/array2d.hpp"
#include "adtrack/kernels.hpp"

namespace adtrack {

/// Frequency-domain training samples with weights that sum to one.
class SampleMemory {
 public:
  using Sample = std::vector<SpectrumMap>;

  explicit SampleMemory(std::size_t capacity = 30);

  /// Scales existing weights by (1 - eta) and adds `sample` with weight eta. When the capacity
  /// is exceeded the two closest samples (squared L2 distance) are merged: weights add and the
  /// features become their weighted average. Zero-weight samples are dropped and weights renormalized.
  void update(Sample sample, double eta);

  std::size_t size() const { return samples_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return samples_.empty(); }
  const Sample& sample(std::size_t i) const { return samples_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

  /// Views suitable for the normal-equation kernels.
  std::vector<kernels::WeightedSample> weighted() const;
  /// sum_j weight_j x_j
  Sample weighted_mean() const;

  /// Squared L2 distance between two samples.
  static double distance(const Sample& a, const Sample& b);

 private:
  void merge_closest();

  std::size_t capacity_;
  std::vector<Sample> samples_;
  std::vector<double> weights_;
  std::vector<std::vector<double>> dist_;  // symmetric pairwise distances
};

}  // namespace adtrack
