#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "adtrack/attributes.hpp"
#include "adtrack/image.hpp"

namespace adtrack {

// OTB-style layout:
//   <seq>/img/*.jpg|png         frames, in file-name order
//   <seq>/groundtruth_rect.txt  x,y,w,h per line (comma, tab or space separated, 1-based origin)
//   <seq>/attrs.txt             one attribute tag per line (optional)

struct SequenceInfo {
  std::string name;
  std::filesystem::path dir;
  std::vector<std::filesystem::path> images;
  std::vector<Box> truth;  // 0-based pixel origin
  AttributeVector attributes;
  std::vector<std::string> warnings;

  bool count_mismatch() const { return images.size() != truth.size(); }
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses ground truth text; converts the 1-based origin to 0-based. Throws DatasetError with the line number.
std::vector<Box> parse_groundtruth(const std::string& text);
AttributeVector parse_attribute_lines(const std::string& text);

SequenceInfo load_sequence(const std::filesystem::path& dir);

struct SkippedSequence {
  std::string name;
  std::string reason;
};

struct DatasetListing {
  std::vector<SequenceInfo> sequences;  // sorted by name
  std::vector<SkippedSequence> skipped;
};

/// Loads every sub-directory of `root`; malformed sequences are reported in `skipped`.
DatasetListing scan_dataset(const std::filesystem::path& root);

}  // namespace adtrack
