#include "csv.hpp"

namespace mwpx::csv {

std::optional<std::vector<std::string>> read_record(std::istream& in, std::size_t& line) {
  std::string physical;
  if (!std::getline(in, physical)) return std::nullopt;
  ++line;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (;;) {
    for (std::size_t i = 0; i < physical.size(); ++i) {
      char c = physical[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < physical.size() && physical[i + 1] == '"') {
            field += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else if (c != '\r') {
        field += c;
      }
    }
    if (!quoted) break;
    field += '\n';
    if (!std::getline(in, physical)) break;
    ++line;
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace mwpx::csv
