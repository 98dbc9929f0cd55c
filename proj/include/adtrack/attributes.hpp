#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace adtrack {

// Challenge attributes in the column order of the dictionary tables.
enum class Attribute : std::size_t { SV, DEF, OPR, IPR, FM, MB, LR, OV, BC, OCC, IV };

inline constexpr std::size_t kAttributeCount = 11;

inline constexpr std::array<std::string_view, kAttributeCount> kAttributeTags = {
    "SV", "DEF", "OPR", "IPR", "FM", "MB", "LR", "OV", "BC", "OCC", "IV"};

std::string_view attribute_tag(Attribute a);
std::optional<Attribute> parse_attribute(std::string_view tag);

/// Binary attribute vector z. Eleven flags, canonical order.
class AttributeVector {
 public:
  AttributeVector() = default;
  explicit AttributeVector(const std::array<bool, kAttributeCount>& flags) : flags_(flags) {}

  static AttributeVector all_one();
  static AttributeVector one_hot(Attribute a);
  /// Builds a vector from its 11-bit pattern; bit i is the i-th canonical attribute.
  static AttributeVector from_bits(unsigned bits);

  /// Comma-separated canonical tags ("OCC,LR"); the empty string is the all-zero vector.
  /// Throws std::invalid_argument on an unknown tag.
  static AttributeVector parse(std::string_view list);

  bool operator[](Attribute a) const { return flags_[static_cast<std::size_t>(a)]; }
  bool operator[](std::size_t i) const { return flags_.at(i); }
  void set(Attribute a, bool on = true) { flags_[static_cast<std::size_t>(a)] = on; }

  bool all_zero() const;
  std::size_t count() const;
  unsigned bits() const;
  std::string to_string() const;

  const std::array<bool, kAttributeCount>& flags() const { return flags_; }

  bool operator==(const AttributeVector&) const = default;

 private:
  std::array<bool, kAttributeCount> flags_{};
};

}  // namespace adtrack
