#pragma once

// AFDT: little-endian binary container for per-frame multi-layer feature tensors.
//
//   "AFDT" | u32 version (=1) | u32 frame count
//   frame: u32 index | u8 layer count | layer*
//   layer: u8 label length | label bytes | u32 H | u32 W | u32 C | H*W*C f32, index ((h*W)+w)*C + c

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "adtrack/dictionary.hpp"

namespace adtrack {

inline constexpr std::uint32_t kAfdtVersion = 1;

struct FeatureLayer {
  std::string label;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::uint32_t channels = 0;
  std::vector<float> data;

  float at(std::uint32_t h, std::uint32_t w, std::uint32_t c) const {
    return data[(static_cast<std::size_t>(h) * cols + w) * channels + c];
  }
  bool operator==(const FeatureLayer&) const = default;
};

struct FeatureFrame {
  std::uint32_t index = 0;
  std::vector<FeatureLayer> layers;

  const FeatureLayer* find(const std::string& label) const;
  bool operator==(const FeatureFrame&) const = default;
};

/// Raised for malformed files. `offset` is the byte position where decoding failed.
class AfdtError : public std::runtime_error {
 public:
  AfdtError(const std::string& what, std::uint64_t offset);
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

std::vector<std::uint8_t> encode_feature_frames(const std::vector<FeatureFrame>& frames);
std::vector<FeatureFrame> decode_feature_frames(const std::vector<std::uint8_t>& bytes);

/// Writes atomically (temp file + rename). Throws std::invalid_argument for invalid frames.
void write_feature_file(const std::vector<FeatureFrame>& frames, const std::filesystem::path& path);
std::vector<FeatureFrame> read_feature_file(const std::filesystem::path& path);

/// Checks labels and depths against the model catalog. When `reference_input` is set the
/// spatial sizes must also match the native 224x224 resolution. Returns one message per problem.
std::vector<std::string> validate_against_catalog(const std::vector<FeatureFrame>& frames, ModelId model,
                                                  bool reference_input = false);

}  // namespace adtrack
