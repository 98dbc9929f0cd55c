#include "adtrack/afdt.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "adtrack/atomic_file.hpp"

namespace adtrack {

namespace {

constexpr char kMagic[4] = {'A', 'F', 'D', 'T'};

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint64_t pos() const { return pos_; }

  void need(std::uint64_t n, const char* what) const {
    if (bytes_.size() - pos_ < n)
      throw AfdtError(std::string("truncated file: expected ") + what + " (" + std::to_string(n) + " bytes, " +
                          std::to_string(bytes_.size() - pos_) + " available)",
                      pos_);
  }

  std::uint8_t u8(const char* what) {
    need(1, what);
    return bytes_[pos_++];
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  std::string text(std::size_t n, const char* what) {
    need(n, what);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::uint64_t pos_ = 0;
};

void check_frame(const FeatureFrame& f) {
  if (f.layers.size() > std::numeric_limits<std::uint8_t>::max())
    throw std::invalid_argument("frame " + std::to_string(f.index) + ": more than 255 layers");
  for (const auto& l : f.layers) {
    if (l.label.size() > std::numeric_limits<std::uint8_t>::max())
      throw std::invalid_argument("frame " + std::to_string(f.index) + ": layer label longer than 255 bytes");
    if (l.rows == 0 || l.cols == 0 || l.channels == 0)
      throw std::invalid_argument("frame " + std::to_string(f.index) + " layer " + l.label + ": zero dimension");
    const std::size_t n = static_cast<std::size_t>(l.rows) * l.cols * l.channels;
    if (l.data.size() != n)
      throw std::invalid_argument("frame " + std::to_string(f.index) + " layer " + l.label + ": data length " +
                                  std::to_string(l.data.size()) + " != H*W*C = " + std::to_string(n));
  }
}

std::string encode_to_string(const std::vector<FeatureFrame>& frames) {
  if (frames.size() > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("too many frames for AFDT");
  for (const auto& f : frames) check_frame(f);
  std::string out(kMagic, 4);
  put_u32(out, kAfdtVersion);
  put_u32(out, static_cast<std::uint32_t>(frames.size()));
  for (const auto& f : frames) {
    put_u32(out, f.index);
    put_u8(out, static_cast<std::uint8_t>(f.layers.size()));
    for (const auto& l : f.layers) {
      put_u8(out, static_cast<std::uint8_t>(l.label.size()));
      out += l.label;
      put_u32(out, l.rows);
      put_u32(out, l.cols);
      put_u32(out, l.channels);
      for (float v : l.data) put_u32(out, std::bit_cast<std::uint32_t>(v));
    }
  }
  return out;
}

}  // namespace

AfdtError::AfdtError(const std::string& what, std::uint64_t offset)
    : std::runtime_error("AFDT: " + what + " at byte " + std::to_string(offset)), offset_(offset) {}

const FeatureLayer* FeatureFrame::find(const std::string& label) const {
  for (const auto& l : layers)
    if (l.label == label) return &l;
  return nullptr;
}

std::vector<std::uint8_t> encode_feature_frames(const std::vector<FeatureFrame>& frames) {
  const std::string s = encode_to_string(frames);
  return {s.begin(), s.end()};
}

std::vector<FeatureFrame> decode_feature_frames(const std::vector<std::uint8_t>& bytes) {
  Reader in(bytes);
  in.need(4, "magic");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw AfdtError("bad magic (expected \"AFDT\")", 0);
  in.text(4, "magic");
  const auto version_pos = in.pos();
  const std::uint32_t version = in.u32("version");
  if (version != kAfdtVersion)
    throw AfdtError("unsupported version " + std::to_string(version), version_pos);
  const std::uint32_t count = in.u32("frame count");

  std::vector<FeatureFrame> frames;
  // each frame needs at least 5 bytes, so a bogus count cannot force a huge allocation
  frames.reserve(std::min<std::uint64_t>(count, (bytes.size() - in.pos()) / 5));
  for (std::uint32_t i = 0; i < count; ++i) {
    FeatureFrame f;
    f.index = in.u32("frame index");
    const std::uint8_t n_layers = in.u8("layer count");
    for (std::uint8_t j = 0; j < n_layers; ++j) {
      FeatureLayer l;
      const std::uint8_t len = in.u8("label length");
      l.label = in.text(len, "label");
      const auto dims_pos = in.pos();
      l.rows = in.u32("H");
      l.cols = in.u32("W");
      l.channels = in.u32("C");
      if (l.rows == 0 || l.cols == 0 || l.channels == 0)
        throw AfdtError("layer " + l.label + " has a zero dimension", dims_pos);
      const std::uint64_t n = static_cast<std::uint64_t>(l.rows) * l.cols * l.channels;
      if (n > (std::numeric_limits<std::uint64_t>::max() / 4)) throw AfdtError("layer too large", dims_pos);
      in.need(n * 4, "layer payload");
      l.data.resize(n);
      for (std::uint64_t t = 0; t < n; ++t) l.data[t] = std::bit_cast<float>(in.u32("float"));
      f.layers.push_back(std::move(l));
    }
    frames.push_back(std::move(f));
  }
  if (in.pos() != bytes.size()) throw AfdtError("trailing bytes after last frame", in.pos());
  return frames;
}

void write_feature_file(const std::vector<FeatureFrame>& frames, const std::filesystem::path& path) {
  write_file_atomic(path, encode_to_string(frames));
}

std::vector<FeatureFrame> read_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open feature file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_feature_frames(bytes);
}

std::vector<std::string> validate_against_catalog(const std::vector<FeatureFrame>& frames, ModelId model,
                                                  bool reference_input) {
  std::vector<std::string> issues;
  for (const auto& f : frames) {
    for (const auto& l : f.layers) {
      std::ostringstream where;
      where << "frame " << f.index << " layer '" << l.label << "': ";
      if (l.label.size() != 2 || l.label[0] != 'D' || l.label[1] < '1' || l.label[1] > '9') {
        issues.push_back(where.str() + "label is not a test output D1..D5");
        continue;
      }
      const LayerSpec* entry = nullptr;
      for (const auto& s : model_layers(model))
        if (s.index == l.label[1] - '0') entry = &s;
      if (entry == nullptr) {
        issues.push_back(where.str() + "not a test output of " + std::string(model_name(model)));
        continue;
      }
      if (static_cast<int>(l.channels) != entry->depth)
        issues.push_back(where.str() + "depth " + std::to_string(l.channels) + " != catalog " +
                         std::to_string(entry->depth));
      if (reference_input && (static_cast<int>(l.rows) != entry->native_rows ||
                              static_cast<int>(l.cols) != entry->native_cols))
        issues.push_back(where.str() + "size " + std::to_string(l.rows) + "x" + std::to_string(l.cols) +
                         " != catalog " + std::to_string(entry->native_rows) + "x" +
                         std::to_string(entry->native_cols));
    }
  }
  return issues;
}

}  // namespace adtrack
