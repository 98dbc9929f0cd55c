#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "adtrack/afdt.hpp"

using namespace adtrack;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("adtrack_afdt_" + name);
}

FeatureLayer make_layer(std::string label, std::uint32_t h, std::uint32_t w, std::uint32_t c, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> u(-10.0f, 10.0f);
  FeatureLayer l{std::move(label), h, w, c, {}};
  l.data.resize(static_cast<std::size_t>(h) * w * c);
  for (auto& v : l.data) v = u(rng);
  return l;
}

std::size_t error_offset(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_feature_frames(bytes);
  } catch (const AfdtError& e) {
    return e.offset();
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace

TEST_CASE("single 2x2x1 layer encodes to the hand-written byte layout") {
  const std::vector<FeatureFrame> frames = {{7, {{"D1", 2, 2, 1, {1.0f, 2.0f, 3.0f, 4.0f}}}}};
  std::vector<std::uint8_t> expect = {'A', 'F', 'D', 'T', 1, 0, 0, 0, 1, 0, 0, 0,  // magic, version, count
                                      7, 0, 0, 0, 1,                                // frame index, layer count
                                      2, 'D', '1',                                  // label
                                      2, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0};          // H, W, C
  // IEEE-754 single, little endian: 1 = 3F800000, 2 = 40000000, 3 = 40400000, 4 = 40800000
  const std::uint8_t floats[] = {0x00, 0x00, 0x80, 0x3F, 0x00, 0x00, 0x00, 0x40,
                                 0x00, 0x00, 0x40, 0x40, 0x00, 0x00, 0x80, 0x40};
  expect.insert(expect.end(), std::begin(floats), std::end(floats));
  CHECK(encode_feature_frames(frames) == expect);
  CHECK(decode_feature_frames(expect) == frames);

  const auto path = temp_path("hand.afdt");
  write_feature_file(frames, path);
  std::ifstream in(path, std::ios::binary);
  std::vector<std::uint8_t> on_disk((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(on_disk == expect);
  CHECK(read_feature_file(path) == frames);
  std::filesystem::remove(path);
}

TEST_CASE("empty frame list is a valid 12-byte file") {
  const auto bytes = encode_feature_frames({});
  CHECK(bytes == std::vector<std::uint8_t>{'A', 'F', 'D', 'T', 1, 0, 0, 0, 0, 0, 0, 0});
  CHECK(decode_feature_frames(bytes).empty());
  const auto path = temp_path("empty.afdt");
  write_feature_file({}, path);
  CHECK(read_feature_file(path).empty());
  std::filesystem::remove(path);
}

TEST_CASE("round trip is bit exact on random frames") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> dim(1, 6), nl(0, 4);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<FeatureFrame> frames;
    const int nf = dim(rng) - 1;
    for (int f = 0; f < nf; ++f) {
      FeatureFrame fr{static_cast<std::uint32_t>(rng() % 100000), {}};
      const int layers = nl(rng);
      for (int l = 0; l < layers; ++l)
        fr.layers.push_back(make_layer("D" + std::to_string(l + 1), dim(rng), dim(rng), dim(rng), rng));
      frames.push_back(std::move(fr));
    }
    // special values survive unchanged
    if (!frames.empty() && !frames[0].layers.empty()) {
      frames[0].layers[0].data[0] = -0.0f;
      frames[0].layers[0].data.back() = std::numeric_limits<float>::infinity();
    }
    const auto bytes = encode_feature_frames(frames);
    const auto back = decode_feature_frames(bytes);
    REQUIRE(back.size() == frames.size());
    for (std::size_t f = 0; f < frames.size(); ++f) {
      CHECK(back[f].index == frames[f].index);
      REQUIRE(back[f].layers.size() == frames[f].layers.size());
      for (std::size_t l = 0; l < frames[f].layers.size(); ++l) {
        const auto& a = back[f].layers[l];
        const auto& b = frames[f].layers[l];
        CHECK(a.label == b.label);
        CHECK(a.rows == b.rows);
        CHECK(a.cols == b.cols);
        CHECK(a.channels == b.channels);
        REQUIRE(a.data.size() == b.data.size());
        CHECK(std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(float)) == 0);
      }
    }
  }
}

TEST_CASE("layer accessor is row-major and channel-minor") {
  FeatureLayer l{"D2", 2, 3, 2, {}};
  for (int i = 0; i < 12; ++i) l.data.push_back(static_cast<float>(i));
  CHECK(l.at(0, 0, 1) == 1.0f);
  CHECK(l.at(0, 2, 0) == 4.0f);
  CHECK(l.at(1, 0, 0) == 6.0f);
  CHECK(l.at(1, 2, 1) == 11.0f);
}

TEST_CASE("malformed files report the failing byte offset") {
  const std::vector<FeatureFrame> frames = {{0, {{"D1", 2, 2, 1, {1, 2, 3, 4}}}}};
  const auto good = encode_feature_frames(frames);
  REQUIRE(good.size() == 48);

  auto bad = good;
  bad[0] = 'X';
  CHECK(error_offset(bad) == 0);

  bad = good;
  bad[4] = 2;
  CHECK(error_offset(bad) == 4);

  // cut inside the payload: the last float needs bytes 44..47
  bad.assign(good.begin(), good.begin() + 46);
  CHECK(error_offset(bad) == 32);
  // cut inside the header
  bad.assign(good.begin(), good.begin() + 10);
  CHECK(error_offset(bad) == 8);
  // cut inside the label
  bad.assign(good.begin(), good.begin() + 19);
  CHECK(error_offset(bad) == 18);

  bad = good;
  bad.push_back(0);
  CHECK(error_offset(bad) == 48);

  bad = good;
  bad[20] = 0;  // H = 0
  CHECK(error_offset(bad) == 20);

  bad = good;
  bad[8] = 2;  // claims two frames
  CHECK(error_offset(bad) == 48);

  try {
    bad = good;
    bad[0] = 'X';
    decode_feature_frames(bad);
  } catch (const AfdtError& e) {
    CHECK(std::string(e.what()).find("at byte 0") != std::string::npos);
  }
  CHECK_THROWS(read_feature_file(temp_path("does_not_exist.afdt")));
}

TEST_CASE("writer rejects inconsistent layers and leaves no partial file") {
  const auto path = temp_path("reject.afdt");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(write_feature_file({{0, {{"D1", 2, 2, 1, {1, 2, 3}}}}}, path), std::invalid_argument);
  CHECK_THROWS_AS(write_feature_file({{0, {{"D1", 0, 2, 1, {}}}}}, path), std::invalid_argument);
  CHECK_FALSE(std::filesystem::exists(path));
  for (const auto& e : std::filesystem::directory_iterator(std::filesystem::temp_directory_path()))
    CHECK(e.path().filename().string().find("adtrack_afdt_reject.afdt.") == std::string::npos);
}

TEST_CASE("catalog validation flags unknown labels and wrong depths") {
  std::mt19937_64 rng(1);
  std::vector<FeatureFrame> frames = {{0, {make_layer("D1", 3, 3, 64, rng), make_layer("D5", 1, 1, 2048, rng)}}};
  CHECK(validate_against_catalog(frames, ModelId::ResNet50).empty());
  CHECK(validate_against_catalog(frames, ModelId::ResNet50, true).size() == 2);  // not 224x224 input sizes
  CHECK(validate_against_catalog(frames, ModelId::Vgg16).size() == 1);          // D5 has 512 channels there
  CHECK(validate_against_catalog(frames, ModelId::VggM).size() == 2);           // 96 channels, no D5
  frames[0].layers.push_back(make_layer("conv3", 1, 1, 1, rng));
  CHECK(validate_against_catalog(frames, ModelId::ResNet50).size() == 1);

  const std::vector<FeatureFrame> native = {{0, {make_layer("D5", 7, 7, 2048, rng)}}};
  CHECK(validate_against_catalog(native, ModelId::ResNet50, true).empty());
}
