#include <doctest.h>

#include <omp.h>

#include <cstring>
#include <random>

#include "adtrack/bacf_solver.hpp"
#include "adtrack/dcf.hpp"
#include "adtrack/eco_solver.hpp"
#include "adtrack/kernels.hpp"
#include "adtrack/sample_memory.hpp"
#include "test_util.hpp"

using namespace adtrack;

namespace {

SampleMemory::Sample constant_sample(GridSize g, int K, double v) {
  return SampleMemory::Sample(K, SpectrumMap(g, Complex(v, 0.0)));
}

bool bitwise_equal(const SpectrumMap& a, const SpectrumMap& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.numel() * sizeof(Complex)) == 0;
}

bool bitwise_equal(const std::vector<SpectrumMap>& a, const std::vector<SpectrumMap>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!bitwise_equal(a[k], b[k])) return false;
  return true;
}

double weight_sum(const SampleMemory& m) {
  double s = 0.0;
  for (double w : m.weights()) s += w;
  return s;
}

}  // namespace

TEST_CASE("learning rate 1 replaces the memory") {
  SampleMemory m(5);
  m.update(constant_sample({2, 2}, 1, 1.0), 0.3);
  m.update(constant_sample({2, 2}, 1, 2.0), 0.3);
  m.update(constant_sample({2, 2}, 1, 3.0), 1.0);
  REQUIRE(m.size() == 1);
  CHECK(m.weight(0) == 1.0);
  CHECK(m.sample(0)[0](0, 0) == Complex(3.0, 0.0));
}

TEST_CASE("existing weights decay by one minus the learning rate") {
  SampleMemory m(5);
  m.update(constant_sample({2, 2}, 1, 1.0), 1.0);
  m.update(constant_sample({2, 2}, 1, 2.0), 0.5);
  REQUIRE(m.size() == 2);
  m.update(constant_sample({2, 2}, 1, 3.0), 0.02);
  REQUIRE(m.size() == 3);
  CHECK(m.weight(0) == doctest::Approx(0.49).epsilon(1e-15));
  CHECK(m.weight(1) == doctest::Approx(0.49).epsilon(1e-15));
  CHECK(m.weight(2) == doctest::Approx(0.02).epsilon(1e-15));
}

TEST_CASE("merging the closest pair conserves weight and averages features") {
  SampleMemory m(2);
  m.update(constant_sample({2, 2}, 2, 0.0), 1.0);
  m.update(constant_sample({2, 2}, 2, 10.0), 0.5);
  const double w0 = m.weight(0) * 0.7, w1 = m.weight(1) * 0.7;
  m.update(constant_sample({2, 2}, 2, 9.0), 0.3);  // closest to the 10.0 sample
  REQUIRE(m.size() == 2);
  CHECK(weight_sum(m) == doctest::Approx(1.0).epsilon(1e-15));
  // the merged entry carries w1 + 0.3 and the weighted mean of 10 and 9
  std::size_t merged = m.weight(0) > m.weight(1) ? 0 : 1;
  CHECK(m.weight(merged) == doctest::Approx(w1 + 0.3));
  CHECK(m.weight(1 - merged) == doctest::Approx(w0));
  CHECK(m.sample(merged)[1](1, 1).real() == doctest::Approx((10.0 * w1 + 9.0 * 0.3) / (w1 + 0.3)));
}

TEST_CASE("weights sum to one after every update") {
  std::mt19937_64 rng(31);
  SampleMemory m(4);
  std::uniform_real_distribution<double> u(0.01, 0.9);
  for (int i = 0; i < 40; ++i) {
    m.update(testutil::spectra(testutil::random_maps(rng, {3, 3}, 2)), i == 0 ? 1.0 : u(rng));
    CHECK(m.size() <= 4);
    CHECK(weight_sum(m) == doctest::Approx(1.0).epsilon(1e-12));
    for (double w : m.weights()) CHECK(w > 0.0);
  }
  const auto mean = m.weighted_mean();
  Complex expect = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) expect += m.weight(j) * m.sample(j)[1](2, 0);
  CHECK(std::abs(mean[1](2, 0) - expect) < 1e-12);
}

TEST_CASE("serial and OpenMP kernels agree bit for bit") {
  std::mt19937_64 rng(32);
  const GridSize g{13, 17};
  const int K = 5;
  const auto h = testutil::spectra(testutil::random_maps(rng, g, K));
  const auto x1 = testutil::spectra(testutil::random_maps(rng, g, K));
  const auto x2 = testutil::spectra(testutil::random_maps(rng, g, K));
  const auto dual = testutil::spectra(testutil::random_maps(rng, g, K));
  const auto y = fft2(testutil::random_map(rng, g));
  const std::vector<kernels::WeightedSample> samples = {{x1, 0.6}, {x2, 0.4}};

  for (int threads : {1, 2, 3, 7}) {
    omp_set_num_threads(threads);
    SpectrumMap ra, rb;
    kernels::serial::accumulate_response(h, x1, ra);
    kernels::omp::accumulate_response(h, x1, rb);
    CHECK(bitwise_equal(ra, rb));

    std::vector<SpectrumMap> a(K, SpectrumMap(g)), b(K, SpectrumMap(g));
    kernels::serial::apply_data_term(samples, h, a);
    kernels::omp::apply_data_term(samples, h, b);
    CHECK(bitwise_equal(a, b));

    kernels::serial::data_rhs(samples, y, a);
    kernels::omp::data_rhs(samples, y, b);
    CHECK(bitwise_equal(a, b));

    kernels::serial::data_diagonal(samples, a);
    kernels::omp::data_diagonal(samples, b);
    CHECK(bitwise_equal(a, b));

    kernels::serial::admm_filter_step(x1, y, dual, h, 2.5, a);
    kernels::omp::admm_filter_step(x1, y, dual, h, 2.5, b);
    CHECK(bitwise_equal(a, b));
  }
  omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("solvers give identical filters on either backend") {
  std::mt19937_64 rng(33);
  const GridSize g{12, 10};
  const auto x = testutil::spectra(testutil::random_maps(rng, g, 3));
  const std::vector<kernels::WeightedSample> samples = {{x, 1.0}};
  const auto reg = make_spatial_regularizer(g, 4, 4, 0.1, 20.0);
  const auto y = make_gaussian_label(g, 1.0);
  omp_set_num_threads(3);
  const auto es = train_eco(samples, reg, y, nullptr, {}, kernels::Backend::Serial);
  const auto eo = train_eco(samples, reg, y, nullptr, {}, kernels::Backend::OpenMP);
  CHECK(bitwise_equal(es.filters, eo.filters));
  CHECK(es.iterations == eo.iterations);
  const auto bs = train_bacf(x, y, {}, kernels::Backend::Serial);
  const auto bo = train_bacf(x, y, {}, kernels::Backend::OpenMP);
  CHECK(bitwise_equal(bs.filters, bo.filters));
  const auto ds = detect(es.filters, x, kernels::Backend::Serial);
  const auto dd = detect(es.filters, x, kernels::Backend::OpenMP);
  CHECK(ds.values == dd.values);
  CHECK(ds.peak_row == dd.peak_row);
  omp_set_num_threads(omp_get_num_procs());
}
