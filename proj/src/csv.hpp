#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace adtrack::detail {

// Splits one CSV record. Double-quoted fields may contain commas; "" is an escaped quote.
// Throws std::invalid_argument on an unterminated quote.
std::vector<std::string> split_csv_line(std::string_view line);

std::string quote_csv(std::string_view field);

}  // namespace adtrack::detail
