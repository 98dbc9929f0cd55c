#include <doctest.h>

#include <cmath>
#include <random>

#include "adtrack/features.hpp"
#include "test_util.hpp"

using namespace adtrack;
using testutil::dense_dft;

namespace {

// Zero-padding interpolation written out over signed frequencies.
RealMap oracle_upsample(const RealMap& x, GridSize target) {
  const int h = x.rows(), w = x.cols(), H = target.rows, W = target.cols;
  const SpectrumMap X = dense_dft(testutil::to_complex(x));
  SpectrumMap Y(target);
  auto targets = [](int f, int n, int N) {
    std::vector<std::pair<int, double>> t;
    if (n % 2 == 0 && f == -n / 2 && N > n) {
      t.push_back({testutil::wrap(-n / 2, N), 0.5});
      t.push_back({testutil::wrap(n / 2, N), 0.5});
    } else {
      t.push_back({testutil::wrap(f, N), 1.0});
    }
    return t;
  };
  for (int fu = -h / 2; fu < h - h / 2; ++fu)
    for (int fv = -w / 2; fv < w - w / 2; ++fv)
      for (auto [u, a] : targets(fu, h, H))
        for (auto [v, b] : targets(fv, w, W))
          Y(u, v) += a * b * X(testutil::wrap(fu, h), testutil::wrap(fv, w)) * (static_cast<double>(H * W) / (h * w));
  const SpectrumMap y = dense_dft(Y, true);
  RealMap out(target);
  for (std::size_t i = 0; i < out.numel(); ++i) {
    CHECK(std::abs(y[i].imag()) < 1e-12);
    out[i] = y[i].real();
  }
  return out;
}

Image rotate90(const Image& p) {
  const int n = p.rows();
  Image r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = p(j, n - 1 - i);
  return r;
}

}  // namespace

TEST_CASE("constant patch gives all-zero features") {
  const Image patch(16, 16, 0.37);
  const auto s = builtin_extract(patch, 8, 4);
  REQUIRE(s.size() == 9);
  CHECK(s.grid() == GridSize{4, 4});
  for (const auto& c : s.channels) CHECK(testutil::max_abs(c) == 0.0);
}

TEST_CASE("vertical step edge puts all energy in the horizontal-gradient bin along the edge") {
  Image patch(16, 16, 0.0);
  for (int r = 0; r < 16; ++r)
    for (int c = 8; c < 16; ++c) patch(r, c) = 1.0;
  const auto s = builtin_extract(patch, 8, 4);
  // central differences with replicated borders, |gx| summed per cell and averaged
  RealMap expect(4, 4);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) {
      const double gx = 0.5 * (patch(r, std::min(c + 1, 15)) - patch(r, std::max(c - 1, 0)));
      expect(r / 4, c / 4) += std::abs(gx) / 16.0;
    }
  CHECK(testutil::max_abs_diff(s.channels[1], expect) < 1e-15);
  CHECK(expect(0, 1) == doctest::Approx(0.125));
  CHECK(expect(0, 2) == doctest::Approx(0.125));
  CHECK(expect(0, 0) == 0.0);
  for (int b = 2; b <= 8; ++b) CHECK(testutil::max_abs(s.channels[b]) == 0.0);
  // intensity: mean-subtracted cell means
  CHECK(s.channels[0](0, 0) == doctest::Approx(-0.5));
  CHECK(s.channels[0](3, 3) == doctest::Approx(0.5));
}

TEST_CASE("rotating a patch by 90 degrees shifts orientation bins by half the bin count") {
  std::mt19937_64 rng(3);
  const Image patch = testutil::random_map(rng, {16, 16}, 0.0, 1.0);
  const auto a = builtin_extract(patch, 8, 4);
  const auto b = builtin_extract(rotate90(patch), 8, 4);
  const int G = 4;
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      CHECK(b.channels[0](i, j) == doctest::Approx(a.channels[0](j, G - 1 - i)).epsilon(1e-12));
      for (int o = 0; o < 8; ++o)
        CHECK(b.channels[1 + o](i, j) == doctest::Approx(a.channels[1 + (o + 4) % 8](j, G - 1 - i)).epsilon(1e-9));
    }
}

TEST_CASE("extractor rejects patches without a complete cell") {
  CHECK_THROWS_AS(builtin_extract(Image(3, 16), 8, 4), std::invalid_argument);
  CHECK_THROWS_AS(builtin_extract(Image(16, 16), 0, 4), std::invalid_argument);
  CHECK(builtin_extract(Image(10, 9), 8, 4).grid() == GridSize{2, 2});
}

TEST_CASE("resampling to the same size is the identity") {
  std::mt19937_64 rng(5);
  const RealMap x = testutil::random_map(rng, {5, 6});
  CHECK(resample_fourier(x, {5, 6}) == x);
}

TEST_CASE("resampling preserves a constant channel") {
  const RealMap x(4, 6, 2.5);
  for (GridSize t : {GridSize{4, 6}, GridSize{7, 9}, GridSize{8, 12}, GridSize{13, 6}}) {
    const RealMap y = resample_fourier(x, t);
    for (double v : y) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
  }
}

TEST_CASE("4x4 impulse upsampled to 8x8 matches the dense DFT oracle") {
  RealMap x(4, 4);
  x(1, 2) = 1.0;
  const RealMap y = resample_fourier(x, {8, 8});
  CHECK(testutil::max_abs_diff(y, oracle_upsample(x, {8, 8})) < 1e-10);
  // band-limited interpolation reproduces the samples on the coarse lattice
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) CHECK(y(2 * r, 2 * c) == doctest::Approx(x(r, c)).epsilon(1e-12));
}

TEST_CASE("resampling matches the oracle on odd, even and mixed sizes") {
  std::mt19937_64 rng(6);
  for (auto [src, dst] : {std::pair{GridSize{3, 5}, GridSize{7, 8}}, std::pair{GridSize{6, 4}, GridSize{9, 10}},
                          std::pair{GridSize{2, 2}, GridSize{5, 3}}}) {
    const RealMap x = testutil::random_map(rng, src);
    CHECK(testutil::max_abs_diff(resample_fourier(x, dst), oracle_upsample(x, dst)) < 1e-10);
  }
}

TEST_CASE("resampling is linear and preserves the spatial mean") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const GridSize src{2 + static_cast<int>(rng() % 6), 2 + static_cast<int>(rng() % 6)};
    const GridSize dst{src.rows + static_cast<int>(rng() % 7), src.cols + static_cast<int>(rng() % 7)};
    const RealMap a = testutil::random_map(rng, src), b = testutil::random_map(rng, src);
    RealMap mix(src);
    for (std::size_t i = 0; i < mix.numel(); ++i) mix[i] = 1.5 * a[i] - 0.25 * b[i];
    const RealMap ra = resample_fourier(a, dst), rb = resample_fourier(b, dst), rm = resample_fourier(mix, dst);
    double err = 0.0, sa = 0.0, sra = 0.0;
    for (std::size_t i = 0; i < rm.numel(); ++i) err = std::max(err, std::abs(rm[i] - (1.5 * ra[i] - 0.25 * rb[i])));
    CHECK(err < 1e-10);
    for (double v : a) sa += v;
    for (double v : ra) sra += v;
    CHECK(sra / dst.area() == doctest::Approx(sa / src.area()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(resample_fourier(RealMap(4, 4), {3, 8}), std::invalid_argument);
}

TEST_CASE("frame layers are stacked in config order on the largest layer grid") {
  std::mt19937_64 rng(8);
  auto layer = [&](std::string label, std::uint32_t n, std::uint32_t c) {
    FeatureLayer l{std::move(label), n, n, c, {}};
    std::uniform_real_distribution<float> u(-1, 1);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n) * n * c; ++i) l.data.push_back(u(rng));
    return l;
  };
  const FeatureFrame f{3, {layer("D3", 4, 512), layer("D1", 8, 96), layer("D2", 6, 256)}};
  const auto cfg = LayerConfig::parse(ModelId::VggM, "D1, D3");
  const auto s = stack_from_frame(f, cfg);
  CHECK(static_cast<int>(s.size()) == channel_count(cfg));
  CHECK(s.uniform());
  CHECK(s.grid() == GridSize{8, 8});
  CHECK(s.labels.front() == "D1");
  CHECK(s.labels.back() == "D3");
  // D1 is already on the common grid and passes through unchanged
  CHECK(s.channels[5](2, 3) == static_cast<double>(f.layers[1].at(2, 3, 5)));

  CHECK_THROWS(stack_from_frame(f, LayerConfig::parse(ModelId::Vgg16, "D1")));  // 96 channels, catalog says 64
  const FeatureFrame missing{4, {layer("D1", 8, 96)}};
  CHECK_THROWS(stack_from_frame(missing, cfg));
}

TEST_CASE("window peaks at the label cell and is symmetric about it") {
  for (GridSize g : {GridSize{8, 8}, GridSize{9, 12}, GridSize{1, 5}}) {
    const RealMap w = hann_window(g);
    for (double v : w) CHECK(v > 0.0);
    const int cr = g.rows / 2, cc = g.cols / 2;
    for (double v : w) CHECK(v <= w(cr, cc));
    for (int d = 1; cr - d >= 0 && cr + d < g.rows; ++d) CHECK(w(cr - d, cc) == doctest::Approx(w(cr + d, cc)));
    for (int d = 1; cc - d >= 0 && cc + d < g.cols; ++d) CHECK(w(cr, cc - d) == doctest::Approx(w(cr, cc + d)));
  }
}
