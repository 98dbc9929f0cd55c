#include "adtrack/attributes.hpp"

#include <stdexcept>

namespace adtrack {

std::string_view attribute_tag(Attribute a) { return kAttributeTags[static_cast<std::size_t>(a)]; }

std::optional<Attribute> parse_attribute(std::string_view tag) {
  for (std::size_t i = 0; i < kAttributeCount; ++i)
    if (kAttributeTags[i] == tag) return static_cast<Attribute>(i);
  return std::nullopt;
}

AttributeVector AttributeVector::all_one() {
  std::array<bool, kAttributeCount> f;
  f.fill(true);
  return AttributeVector(f);
}

AttributeVector AttributeVector::one_hot(Attribute a) {
  AttributeVector z;
  z.set(a);
  return z;
}

AttributeVector AttributeVector::from_bits(unsigned bits) {
  AttributeVector z;
  for (std::size_t i = 0; i < kAttributeCount; ++i) z.flags_[i] = (bits >> i) & 1U;
  return z;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

AttributeVector AttributeVector::parse(std::string_view list) {
  AttributeVector z;
  list = trim(list);
  if (list.empty()) return z;
  while (true) {
    const auto comma = list.find(',');
    const auto tag = trim(list.substr(0, comma));
    const auto a = parse_attribute(tag);
    if (!a) throw std::invalid_argument("unknown attribute tag '" + std::string(tag) + "'");
    z.set(*a);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return z;
}

bool AttributeVector::all_zero() const { return count() == 0; }

std::size_t AttributeVector::count() const {
  std::size_t n = 0;
  for (bool f : flags_) n += f ? 1 : 0;
  return n;
}

unsigned AttributeVector::bits() const {
  unsigned b = 0;
  for (std::size_t i = 0; i < kAttributeCount; ++i)
    if (flags_[i]) b |= 1U << i;
  return b;
}

std::string AttributeVector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < kAttributeCount; ++i) {
    if (!flags_[i]) continue;
    if (!out.empty()) out += ',';
    out += kAttributeTags[i];
  }
  return out;
}

}  // namespace adtrack
