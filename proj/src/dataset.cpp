#include "adtrack/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace adtrack {

namespace {

std::string read_text(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DatasetError("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<Box> parse_groundtruth(const std::string& text) {
  std::vector<Box> boxes;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<double> v;
    std::size_t i = 0;
    while (i < t.size()) {
      while (i < t.size() && (t[i] == ',' || t[i] == '\t' || t[i] == ' ')) ++i;
      if (i >= t.size()) break;
      double x = 0.0;
      const auto [ptr, ec] = std::from_chars(t.data() + i, t.data() + t.size(), x);
      if (ec != std::errc() || ptr == t.data() + i)
        throw DatasetError("groundtruth line " + std::to_string(line_no) + ": cannot parse '" + t + "'");
      v.push_back(x);
      i = static_cast<std::size_t>(ptr - t.data());
    }
    if (v.size() != 4)
      throw DatasetError("groundtruth line " + std::to_string(line_no) + ": expected 4 values, got " +
                         std::to_string(v.size()));
    if (v[2] < 0.0 || v[3] < 0.0)
      throw DatasetError("groundtruth line " + std::to_string(line_no) + ": negative box size");
    boxes.push_back({v[0] - 1.0, v[1] - 1.0, v[2], v[3]});
  }
  return boxes;
}

AttributeVector parse_attribute_lines(const std::string& text) {
  AttributeVector z;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string tag = trim(line);
    if (tag.empty()) continue;
    const auto a = parse_attribute(tag);
    if (!a) throw DatasetError("attrs line " + std::to_string(line_no) + ": unknown attribute '" + tag + "'");
    z.set(*a);
  }
  return z;
}

SequenceInfo load_sequence(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  SequenceInfo s;
  s.name = dir.filename().string();
  s.dir = dir;
  const fs::path img = dir / "img";
  if (!fs::is_directory(img)) throw DatasetError(s.name + ": missing img/ directory");
  for (const auto& e : fs::directory_iterator(img)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".jpg" || ext == ".jpeg" || ext == ".png") s.images.push_back(e.path());
  }
  std::sort(s.images.begin(), s.images.end());
  if (s.images.empty()) throw DatasetError(s.name + ": no frames in img/");

  const fs::path gt = dir / "groundtruth_rect.txt";
  if (!fs::is_regular_file(gt)) throw DatasetError(s.name + ": missing groundtruth_rect.txt");
  try {
    s.truth = parse_groundtruth(read_text(gt));
  } catch (const DatasetError& e) {
    throw DatasetError(s.name + ": " + e.what());
  }
  if (s.truth.empty()) throw DatasetError(s.name + ": empty groundtruth_rect.txt");
  if (!(s.truth[0].w > 0.0 && s.truth[0].h > 0.0)) throw DatasetError(s.name + ": first ground-truth box has no area");

  const fs::path attrs = dir / "attrs.txt";
  if (fs::is_regular_file(attrs)) {
    try {
      s.attributes = parse_attribute_lines(read_text(attrs));
    } catch (const DatasetError& e) {
      throw DatasetError(s.name + ": " + e.what());
    }
  } else {
    s.warnings.push_back("no attrs.txt; using the all-zero attribute vector");
  }
  if (s.count_mismatch())
    s.warnings.push_back(std::to_string(s.images.size()) + " frames but " + std::to_string(s.truth.size()) +
                         " ground-truth boxes; evaluating the common prefix");
  return s;
}

DatasetListing scan_dataset(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw DatasetError("dataset root not found: " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  DatasetListing out;
  for (const auto& d : dirs) {
    try {
      out.sequences.push_back(load_sequence(d));
    } catch (const std::exception& e) {
      out.skipped.push_back({d.filename().string(), e.what()});
    }
  }
  return out;
}

}  // namespace adtrack
