#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mwpx::csv {

/// Reads one RFC 4180 record (quoted fields may span lines). Returns nullopt
/// at end of input. `line` is advanced by the number of physical lines read.
std::optional<std::vector<std::string>> read_record(std::istream& in, std::size_t& line);

std::string escape(std::string_view field);

}  // namespace mwpx::csv
