#include "habit/trace.hpp"

#include <algorithm>

#include "habit/vocab.hpp"

namespace habit {

std::vector<std::vector<std::string>> parse_trace(std::string_view text) {
  std::vector<std::vector<std::string>> sequences;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      if (pos == text.size()) break;
      end = text.size();
    }
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) continue;
    if (line.substr(0, 2) == "//") continue;
    if (std::all_of(line.begin(), line.end(), [](char c) { return c == ' '; })) continue;

    std::vector<std::string> tokens;
    std::size_t field_start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i < line.size() && line[i] != ' ') continue;
      std::string_view field = line.substr(field_start, i - field_start);
      field_start = i + 1;
      if (field.empty())
        throw ParseError(line_no, "empty token (repeated, leading, or trailing space)");
      if (!valid_token_name(field))
        throw ParseError(line_no, "token contains whitespace: '" + std::string(field) + "'");
      tokens.emplace_back(field);
    }
    sequences.push_back(std::move(tokens));
  }
  return sequences;
}

}  // namespace habit
