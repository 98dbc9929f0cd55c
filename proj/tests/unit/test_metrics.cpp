#include <doctest.h>

#include <random>

#include "adtrack/metrics.hpp"
#include "adtrack/ope.hpp"

using namespace adtrack;

namespace {

const Box kGt{0, 0, 10, 10};

std::vector<Box> random_boxes(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> pos(0.0, 60.0), size(1.0, 40.0);
  std::vector<Box> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({pos(rng), pos(rng), size(rng), size(rng)});
  return out;
}

}  // namespace

TEST_CASE("iou of identical, disjoint and half-shifted boxes") {
  CHECK(iou(kGt, kGt) == 1.0);
  CHECK(iou(kGt, {20, 20, 5, 5}) == 0.0);
  CHECK(iou(kGt, {10, 0, 10, 10}) == 0.0);  // touching edges
  CHECK(iou({0, 0, 10, 10}, {5, 0, 10, 10}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(iou({0, 0, 0, 0}, {0, 0, 0, 0}) == 0.0);
}

TEST_CASE("centre error is euclidean and symmetric") {
  CHECK(center_error(kGt, kGt) == 0.0);
  CHECK(center_error({0, 0, 10, 10}, {3, 4, 10, 10}) == 5.0);
  CHECK(center_error({1, 2, 3, 4}, {7, 1, 5, 2}) == center_error({7, 1, 5, 2}, {1, 2, 3, 4}));
}

TEST_CASE("five-frame fixtures") {
  // boxes inside the ground truth with IoU = height / 10: {1, 0.6, 0.4, 0.2, 0}
  const std::vector<Box> gt(5, kGt);
  const std::vector<Box> est_iou = {{0, 0, 10, 10}, {0, 0, 10, 6}, {0, 0, 10, 4}, {0, 0, 10, 2}, {50, 50, 10, 10}};
  const std::vector<double> want = {1.0, 0.6, 0.4, 0.2, 0.0};
  for (int i = 0; i < 5; ++i) CHECK(iou(est_iou[i], kGt) == doctest::Approx(want[i]).epsilon(1e-15));
  CHECK(success_curve(est_iou, gt).at_half == 0.4);

  const std::vector<Box> est_err = {{0, 0, 10, 10}, {10, 0, 10, 10}, {19, 0, 10, 10}, {21, 0, 10, 10}, {100, 0, 10, 10}};
  CHECK(precision_curve(est_err, gt).at_20 == 0.6);
  // an error of exactly 20 does not count at 20
  CHECK_FALSE(counts_as_precise(20.0, 20.0));
  CHECK_FALSE(counts_as_success(0.5, 0.5));
}

TEST_CASE("perfect and failed tracking") {
  std::mt19937_64 rng(41);
  const auto gt = random_boxes(rng, 30);
  const auto s = success_curve(gt, gt);
  for (std::size_t i = 0; i + 1 < s.rates.size(); ++i) CHECK(s.rates[i] == 1.0);
  CHECK(s.auc >= 1.0 - 1.0 / 20.0);
  const auto p = precision_curve(gt, gt);
  for (std::size_t i = 1; i < p.rates.size(); ++i) CHECK(p.rates[i] == 1.0);

  std::vector<Box> far;
  for (const auto& b : gt) far.push_back({b.x + 1000, b.y, b.w, b.h});
  for (double r : success_curve(far, gt).rates) CHECK(r == 0.0);
}

TEST_CASE("curves agree with a per-frame brute-force count and are monotone") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    const auto est = random_boxes(rng, n), gt = random_boxes(rng, n);
    const auto s = success_curve(est, gt);
    const auto p = precision_curve(est, gt);
    for (std::size_t i = 0; i < s.rates.size(); ++i) {
      int c = 0;
      for (std::size_t f = 0; f < n; ++f) c += iou(est[f], gt[f]) > i / 20.0 ? 1 : 0;
      CHECK(s.rates[i] == static_cast<double>(c) / n);
      if (i > 0) CHECK(s.rates[i] <= s.rates[i - 1]);
    }
    for (std::size_t i = 0; i < p.rates.size(); ++i) {
      int c = 0;
      for (std::size_t f = 0; f < n; ++f) c += center_error(est[f], gt[f]) < static_cast<double>(i) ? 1 : 0;
      CHECK(p.rates[i] == static_cast<double>(c) / n);
      if (i > 0) CHECK(p.rates[i] >= p.rates[i - 1]);
    }
  }
}

TEST_CASE("doubling the errors doubles the thresholds") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 25.0);
  std::vector<double> e, e2;
  for (int i = 0; i < 100; ++i) {
    e.push_back(u(rng));
    e2.push_back(2.0 * e.back());
  }
  const auto a = precision_curve_from_errors(e), b = precision_curve_from_errors(e2);
  for (int t = 0; t <= 25; ++t) CHECK(b.rates[2 * t] == a.rates[t]);
}

TEST_CASE("mismatched lengths use the common prefix") {
  const std::vector<Box> est = {kGt, kGt, kGt};
  const std::vector<Box> gt = {kGt, {100, 100, 5, 5}};
  CHECK(success_curve(est, gt).at_half == 0.5);
  const auto r = evaluate_boxes("s", AttributeVector{}, est, gt);
  CHECK(r.count_mismatch);
  CHECK(r.evaluated_frames == 2);
  CHECK(success_curve(std::vector<Box>{}, gt).auc == 0.0);
}

TEST_CASE("aggregate of one sequence equals the sequence itself") {
  std::mt19937_64 rng(44);
  const auto est = random_boxes(rng, 25), gt = random_boxes(rng, 25);
  const auto r = evaluate_boxes("only", AttributeVector::parse("OCC"), est, gt);
  const auto agg = aggregate("OCC", {&r});
  CHECK(agg.sequences == 1);
  CHECK(agg.success.rates == r.success.rates);
  CHECK(agg.success.auc == r.success.auc);
  CHECK(agg.precision.rates == r.precision.rates);
  CHECK(agg.precision.at_20 == r.precision.at_20);
}

TEST_CASE("aggregate averages the member curves") {
  const std::vector<Box> gt(4, kGt);
  const auto a = evaluate_boxes("a", {}, std::vector<Box>(4, kGt), gt);
  const auto b = evaluate_boxes("b", {}, std::vector<Box>(4, Box{50, 50, 10, 10}), gt);
  const auto agg = aggregate("overall", {&a, &b});
  CHECK(agg.success.at_half == 0.5);
  CHECK(agg.precision.at_20 == 0.5);
  CHECK(agg.success.auc == doctest::Approx(0.5 * a.success.auc));
}
